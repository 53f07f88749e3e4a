#include "fuzzysched/retrograde.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace fsched {

Arrangement::Arrangement(std::vector<LatestTimes> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i].activity_id, i);
}

const LatestTimes& Arrangement::at(std::string_view activity_id) const {
  auto it = index_.find(std::string(activity_id));
  if (it == index_.end()) throw std::out_of_range("no arrangement entry for '" + std::string(activity_id) + "'");
  return entries_[it->second];
}

bool Arrangement::contains(std::string_view activity_id) const {
  return index_.count(std::string(activity_id)) != 0;
}

const TriFuzzy& optimistic_duration(const Activity& activity) {
  const TriFuzzy* best = nullptr;
  double best_c = 0.0;
  for (const std::string& r : activity.capable_resources) {
    const TriFuzzy& d = activity.duration_on(r);
    const double c = defuzz_centroid(d);
    if (!best || c < best_c) {
      best = &d;
      best_c = c;
    }
  }
  return best ? *best : activity.duration;
}

Arrangement backward_pass(const Instance& instance, Exec exec) {
  const auto& jobs = instance.jobs();
  const auto& activities = instance.activities();
  std::vector<std::optional<LatestTimes>> slots(activities.size());

  const long n = static_cast<long>(jobs.size());
  // Jobs touch disjoint slots, so the loop is race-free and order-independent.
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel && n > 64)
  for (long j = 0; j < n; ++j) {
    const Job& job = jobs[static_cast<std::size_t>(j)];
    TriFuzzy finish = job.due_date;
    for (auto it = job.activity_ids.rbegin(); it != job.activity_ids.rend(); ++it) {
      const auto idx = instance.activity_index(*it);
      if (!idx) continue;
      const Activity& a = activities[*idx];
      if (a.job_id != job.id) continue;
      const TriFuzzy start = sub(finish, optimistic_duration(a));
      slots[*idx] = LatestTimes{a.id, a.job_id, a.index_in_job, finish, start};
      finish = start;
    }
  }

  std::vector<LatestTimes> entries;
  entries.reserve(activities.size());
  for (std::size_t i = 0; i < activities.size(); ++i) {
    if (slots[i]) {
      entries.push_back(std::move(*slots[i]));
      continue;
    }
    // Not reachable from its job's chain (only in invalid instances).
    const Activity& a = activities[i];
    const Job* job = instance.find_job(a.job_id);
    const TriFuzzy finish = job ? job->due_date : TriFuzzy{};
    entries.push_back({a.id, a.job_id, a.index_in_job, finish, sub(finish, optimistic_duration(a))});
  }
  return Arrangement(std::move(entries));
}

std::vector<std::string> relative_order(const Arrangement& arrangement, double comparison_epsilon) {
  std::vector<const LatestTimes*> order;
  order.reserve(arrangement.size());
  for (const LatestTimes& e : arrangement.entries()) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [&](const LatestTimes* x, const LatestTimes* y) {
    const auto c = compare(x->latest_start, y->latest_start, comparison_epsilon);
    if (c != 0) return c < 0;
    if (x->job_id != y->job_id) return x->job_id < y->job_id;
    return x->index_in_job < y->index_in_job;
  });
  std::vector<std::string> out;
  out.reserve(order.size());
  for (const LatestTimes* e : order) out.push_back(e->activity_id);
  return out;
}

json arrangement_to_json(const Arrangement& arrangement) {
  json out = json::array();
  for (const LatestTimes& e : arrangement.entries()) {
    out.push_back({{"activity_id", e.activity_id},
                   {"latest_start", fuzzy_to_json(e.latest_start)},
                   {"latest_finish", fuzzy_to_json(e.latest_finish)}});
  }
  return out;
}

}  // namespace fsched
