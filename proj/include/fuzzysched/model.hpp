#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fuzzysched/fuzzy.hpp"
#include "fuzzysched/json_io.hpp"

namespace fsched {

/// Tuning knobs of the rolling scheduler. Every field has a documented default
/// (see README, "Configuration").
struct Config {
  double horizon = 20.0;
  std::optional<double> step;      // default horizon / 2
  std::optional<double> overlap;   // trailing context window, default horizon / 2
  double significance_epsilon = 1e-3;
  int max_fixpoint_iters = 25;
  double comparison_epsilon = 1e-9;
  double load_balance_lambda = 0.1;
  Defuzzification defuzzification = Defuzzification::centroid;
  std::uint64_t seed = 0;

  double effective_step() const { return step.value_or(horizon / 2.0); }
  double effective_overlap() const { return overlap.value_or(horizon / 2.0); }
};

struct Activity {
  std::string id;
  std::string job_id;
  int index_in_job = 0;
  TriFuzzy duration;
  std::vector<std::string> capable_resources;
  std::map<std::string, TriFuzzy> duration_overrides;

  /// Processing time on `resource`, honouring the per-resource override table.
  const TriFuzzy& duration_on(std::string_view resource) const;
  bool capable_on(std::string_view resource) const;
};

struct Job {
  std::string id;
  std::vector<std::string> activity_ids;
  TriFuzzy due_date;
  double importance = 0.5;
};

struct Resource {
  std::string id;
  TriFuzzy available_from;
  double strategic_weight = 0.5;
};

/// Immutable problem instance with id lookup. Cross references are not
/// required to resolve; `validate` reports the ones that do not.
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<Job> jobs, std::vector<Activity> activities, std::vector<Resource> resources,
           Config config = {});

  const std::vector<Job>& jobs() const { return jobs_; }
  const std::vector<Activity>& activities() const { return activities_; }
  const std::vector<Resource>& resources() const { return resources_; }
  const Config& config() const { return config_; }

  const Activity* find_activity(std::string_view id) const;
  const Job* find_job(std::string_view id) const;
  const Resource* find_resource(std::string_view id) const;
  std::optional<std::size_t> activity_index(std::string_view id) const;
  std::optional<std::size_t> resource_index(std::string_view id) const;

  /// Predecessor of `activity` in its job chain, or nullptr for the first one.
  const Activity* predecessor(const Activity& activity) const;

  Instance with_config(Config config) const;

 private:
  std::vector<Job> jobs_;
  std::vector<Activity> activities_;
  std::vector<Resource> resources_;
  Config config_;
  std::unordered_map<std::string, std::size_t> job_index_;
  std::unordered_map<std::string, std::size_t> activity_index_;
  std::unordered_map<std::string, std::size_t> resource_index_;
};

struct Violation {
  std::string entity;  // e.g. "activity J1.2"
  std::string rule;    // e.g. "dangling-resource"
  std::string message;
};

/// Empty iff every model invariant holds.
std::vector<Violation> validate(const Instance& instance);

struct Allocation {
  std::string activity_id;
  std::string resource_id;
  TriFuzzy fuzzy_start;
  TriFuzzy fuzzy_finish;
  double crisp_start = 0.0;
  double crisp_finish = 0.0;
  int iteration = 0;
};

struct ScoredActivity {
  std::string activity_id;
  TriFuzzy score;
};

/// One pass of the rolling loop, as recorded in the schedule output.
struct IterationRecord {
  int iteration = 0;
  double window_start = 0.0;
  std::vector<std::string> selected;
  std::vector<ScoredActivity> priorities;
  std::map<std::string, std::vector<std::string>> recommendations;
  int fixpoint_iterations = 0;
  bool converged = true;
  std::vector<std::string> allocated;
  std::vector<std::string> deferred;
  std::vector<std::string> warnings;
};

class Schedule {
 public:
  const std::vector<Allocation>& allocations() const { return allocations_; }
  const std::vector<IterationRecord>& iteration_log() const { return log_; }

  bool is_allocated(std::string_view activity_id) const;
  const Allocation* find(std::string_view activity_id) const;

  /// Throws std::logic_error if the activity already has an allocation.
  void append(Allocation allocation);
  void record(IterationRecord record) { log_.push_back(std::move(record)); }

  /// Time at which an activity first entered a selection; used for waiting time.
  std::optional<double> first_selected(std::string_view activity_id) const;
  void mark_selected(const std::string& activity_id, double now);

  double makespan() const;

 private:
  std::vector<Allocation> allocations_;
  std::vector<IterationRecord> log_;
  std::unordered_map<std::string, std::size_t> by_activity_;
  std::map<std::string, double> first_selected_;
};

std::set<std::string> unscheduled_activities(const Instance& instance, const Schedule& schedule);

// JSON documents ------------------------------------------------------------

Instance load_instance(const std::string& file, std::string_view text);
Instance read_instance_file(const std::string& path);
json instance_to_json(const Instance& instance);

json allocation_to_json(const Allocation& allocation);
json iteration_to_json(const IterationRecord& record);
json schedule_to_json(const Schedule& schedule);

}  // namespace fsched
