#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "fuzzysched/exec.hpp"
#include "fuzzysched/model.hpp"

namespace fsched {

/// True when every time-valued field of the instance is a crisp (v, v, v).
bool is_crisp(const Instance& instance);

/// Classical backward pass over each job chain from its due date, using the
/// shortest capable duration. Throws std::domain_error on fuzzy input.
std::map<std::string, double> cpm_backward(const Instance& instance);

struct OracleSlot {
  std::string activity_id;
  std::string resource_id;
  double start = 0.0;
  double finish = 0.0;
};

struct OracleSchedule {
  double makespan = 0.0;
  std::vector<OracleSlot> slots;  // instance activity order
  std::size_t evaluated = 0;      // complete schedules inspected
};

inline constexpr std::size_t kBruteForceLimit = 8;

/// Exhaustive search over resource assignments and precedence-feasible
/// dispatch orders with semi-active timetabling. Among optimal schedules the
/// lexicographically smallest (resource indices, then start times, both in
/// activity order) is returned. Branches are pruned only when a valid lower
/// bound strictly exceeds the incumbent, so the result does not depend on the
/// thread schedule. Throws LimitError above `limit` activities and
/// std::domain_error on fuzzy input.
OracleSchedule brute_force(const Instance& instance, std::size_t limit = kBruteForceLimit,
                           Exec exec = Exec::parallel);

/// Serial cross-check of `brute_force`: every assignment times every
/// permutation of the activities, skipping orders that break a job chain.
OracleSchedule brute_force_reference(const Instance& instance, std::size_t limit = kBruteForceLimit);

struct EddResult {
  std::vector<std::string> job_order;
  std::vector<std::string> activity_order;
  std::vector<double> finish;  // per position in the order
  double max_lateness = 0.0;
};

/// Earliest-due-date sequence on a single resource with one activity per job
/// (stable on equal due dates). Throws std::domain_error on any other shape.
EddResult edd_single_machine(const Instance& instance);

json oracle_to_json(const OracleSchedule& schedule);

}  // namespace fsched
