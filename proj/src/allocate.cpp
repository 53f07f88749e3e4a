#include "fuzzysched/allocate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "fuzzysched/errors.hpp"
#include "fuzzysched/horizon.hpp"

namespace fsched {

TriFuzzy resource_available(const Schedule& schedule, const Resource& resource) {
  TriFuzzy free = resource.available_from;
  for (const Allocation& a : schedule.allocations()) {
    if (a.resource_id == resource.id) free = a.fuzzy_finish;
  }
  return free;
}

CommitResult commit(const RecommendationSet& recs, Schedule& schedule, const Instance& instance, int iteration,
                    const Arrangement* arrangement) {
  const Defuzzification method = instance.config().defuzzification;
  CommitResult out;
  for (const ResourceList& list : recs.lists) {
    const Resource* resource = instance.find_resource(list.resource_id);
    if (!resource) continue;
    TriFuzzy free = resource_available(schedule, *resource);
    for (const ListEntry& e : list.entries) {
      if (!e.allocatable || schedule.is_allocated(e.activity_id)) continue;
      const Activity* a = instance.find_activity(e.activity_id);
      if (!a) continue;
      TriFuzzy ready_at{};
      if (const Activity* pred = instance.predecessor(*a)) {
        const Allocation* p = schedule.find(pred->id);
        if (!p) {
          out.deferred.push_back(a->id);
          continue;
        }
        ready_at = p->fuzzy_finish;
      }
      Allocation al;
      al.activity_id = a->id;
      al.resource_id = resource->id;
      al.fuzzy_start = fuzzy_max(free, ready_at);
      al.fuzzy_finish = add(al.fuzzy_start, a->duration_on(resource->id));
      al.crisp_start = defuzz(al.fuzzy_start, method);
      al.crisp_finish = defuzz(al.fuzzy_finish, method);
      al.iteration = iteration;
      if (arrangement && arrangement->contains(a->id)) {
        const double latest = defuzz(arrangement->at(a->id).latest_start, method);
        if (al.crisp_start > latest + 1e-9) {
          std::ostringstream os;
          os << "activity '" << a->id << "' starts at " << al.crisp_start << ", after its latest start "
             << latest;
          out.warnings.push_back(os.str());
        }
      }
      free = al.fuzzy_finish;
      out.allocated.push_back(a->id);
      schedule.append(std::move(al));
    }
  }
  return out;
}

Schedule run(const Instance& instance, const RatingModel& model, const RunOptions& options) {
  const Config& cfg = instance.config();
  Schedule schedule;
  if (instance.activities().empty()) return schedule;

  // The arrangement depends on the instance alone, so one pass serves every
  // iteration; allocated activities are filtered out by the selection.
  const Arrangement arrangement = backward_pass(instance, options.exec);
  double max_latest = -INFINITY;
  for (const LatestTimes& e : arrangement.entries()) {
    max_latest = std::max(max_latest, defuzz(e.latest_start, cfg.defuzzification));
  }
  const double step = cfg.effective_step();
  const double stall_after = max_latest + cfg.horizon;

  HorizonWindow window{0.0, cfg.horizon};
  int iteration = 0;
  std::size_t remaining = instance.activities().size();
  while (remaining > 0) {
    std::vector<std::string> selected = select(arrangement, window, schedule, instance);
    if (selected.empty()) {
      if (window.start > stall_after) {
        throw StallError("no selectable activity left although " + std::to_string(remaining) +
                         " remain unallocated");
      }
      window.advance(step);
      continue;
    }

    ++iteration;
    const double now = window.start;
    IterationRecord rec;
    rec.iteration = iteration;
    rec.window_start = window.start;
    rec.selected = selected;
    for (const std::string& id : selected) schedule.mark_selected(id, now);

    const std::vector<Prioritized> prioritized =
        prioritize_jobs(selected, instance, arrangement, schedule, model.job, now, options.exec, &rec.warnings);
    for (const Prioritized& p : prioritized) rec.priorities.push_back({p.activity_id, p.score});

    const std::vector<ResourceList> lists =
        resource_specific(prioritized, schedule, instance, model, arrangement, now, options.exec, &rec.warnings);
    const RecommendationSet recs = resource_comprehensive(lists, instance);
    rec.fixpoint_iterations = recs.iteration_count;
    rec.converged = recs.converged;
    for (const ResourceList& l : recs.lists) {
      auto& ids = rec.recommendations[l.resource_id];
      for (const ListEntry& e : l.entries) {
        if (e.allocatable) ids.push_back(e.activity_id);
      }
    }

    CommitResult done = commit(recs, schedule, instance, iteration, &arrangement);
    rec.allocated = std::move(done.allocated);
    rec.deferred = std::move(done.deferred);
    rec.deferred.insert(rec.deferred.end(), recs.truncated.begin(), recs.truncated.end());
    rec.warnings.insert(rec.warnings.end(), done.warnings.begin(), done.warnings.end());
    if (iteration == 1) {
      // Jobs that cannot meet their due date even without contention.
      for (const LatestTimes& e : arrangement.entries()) {
        if (defuzz(e.latest_start, cfg.defuzzification) < 0.0) {
          rec.warnings.push_back("activity '" + e.activity_id + "' has a negative latest start");
        }
      }
    }
    const std::size_t progress = rec.allocated.size();
    remaining -= progress;
    schedule.record(std::move(rec));

    if (progress == 0 && window.start > stall_after) {
      throw StallError("iteration " + std::to_string(iteration) + " allocated nothing after the window passed " +
                       "every latest start; " + std::to_string(remaining) + " activities remain");
    }
    window.advance(step);
  }
  return schedule;
}

}  // namespace fsched
