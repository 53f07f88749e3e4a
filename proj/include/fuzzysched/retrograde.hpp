#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fuzzysched/exec.hpp"
#include "fuzzysched/fuzzy.hpp"
#include "fuzzysched/model.hpp"

namespace fsched {

struct LatestTimes {
  std::string activity_id;
  std::string job_id;
  int index_in_job = 0;
  TriFuzzy latest_finish;
  TriFuzzy latest_start;
};

/// Fuzzy latest-start / latest-finish window of every activity, in instance order.
class Arrangement {
 public:
  explicit Arrangement(std::vector<LatestTimes> entries);
  Arrangement() = default;

  const std::vector<LatestTimes>& entries() const { return entries_; }
  const LatestTimes& at(std::string_view activity_id) const;
  bool contains(std::string_view activity_id) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<LatestTimes> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Duration used by the backward pass: the capable-resource duration with the
/// smallest centroid (first one on ties), or the base duration.
const TriFuzzy& optimistic_duration(const Activity& activity);

/// Backward pass from each job's due date. Resource capacity is ignored and
/// negative latest starts are kept as they are.
Arrangement backward_pass(const Instance& instance, Exec exec = Exec::parallel);

/// Activity ids ascending by latest start (fuzzy compare), then job id, then
/// position in the job.
std::vector<std::string> relative_order(const Arrangement& arrangement, double comparison_epsilon = 1e-9);

json arrangement_to_json(const Arrangement& arrangement);

}  // namespace fsched
