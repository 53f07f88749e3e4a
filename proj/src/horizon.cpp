#include "fuzzysched/horizon.hpp"

#include <set>

namespace fsched {

std::vector<std::string> select(const Arrangement& arrangement, const HorizonWindow& window,
                                const Schedule& schedule, const Instance& instance) {
  const Config& cfg = instance.config();
  const std::vector<std::string> order = relative_order(arrangement, cfg.comparison_epsilon);
  std::vector<std::string> picked;
  for (const std::string& id : order) {
    if (schedule.is_allocated(id)) continue;
    if (defuzz(arrangement.at(id).latest_start, cfg.defuzzification) < window.end()) picked.push_back(id);
  }
  return extend_by_jobs(picked, schedule, instance, order);
}

std::vector<std::string> extend_by_jobs(const std::vector<std::string>& selected, const Schedule& schedule,
                                        const Instance& instance, const std::vector<std::string>& order) {
  std::set<std::string> jobs;
  for (const std::string& id : selected) {
    if (const Activity* a = instance.find_activity(id)) jobs.insert(a->job_id);
  }
  for (const Job& job : instance.jobs()) {
    bool any_allocated = false;
    bool any_open = false;
    for (const std::string& id : job.activity_ids) {
      (schedule.is_allocated(id) ? any_allocated : any_open) = true;
    }
    if (any_allocated && any_open) jobs.insert(job.id);
  }

  const std::set<std::string> chosen(selected.begin(), selected.end());
  std::vector<std::string> out;
  std::set<std::string> emitted;
  for (const std::string& id : order) {
    if (schedule.is_allocated(id)) continue;
    const Activity* a = instance.find_activity(id);
    if (!a) continue;
    if ((chosen.count(id) || jobs.count(a->job_id)) && emitted.insert(id).second) out.push_back(id);
  }
  return out;
}

std::vector<std::string> extend_by_jobs(const std::vector<std::string>& selected, const Schedule& schedule,
                                        const Instance& instance) {
  const Arrangement arrangement = backward_pass(instance);
  return extend_by_jobs(selected, schedule, instance,
                        relative_order(arrangement, instance.config().comparison_epsilon));
}

}  // namespace fsched
