#pragma once

#include <string>
#include <vector>

#include "fuzzysched/exec.hpp"
#include "fuzzysched/model.hpp"
#include "fuzzysched/rating.hpp"
#include "fuzzysched/recommend.hpp"
#include "fuzzysched/retrograde.hpp"

namespace fsched {

struct CommitResult {
  std::vector<std::string> allocated;
  std::vector<std::string> deferred;  // predecessor not yet allocated
  std::vector<std::string> warnings;
};

/// Fuzzy time at which `resource` becomes free: the finish of its latest
/// allocation, or its own availability.
TriFuzzy resource_available(const Schedule& schedule, const Resource& resource);

/// Turns the recommendations into allocations, resource by resource in list
/// order. An activity whose job predecessor is unallocated is skipped. When
/// `arrangement` is given, starts past the latest start are reported as
/// warnings.
CommitResult commit(const RecommendationSet& recs, Schedule& schedule, const Instance& instance,
                    int iteration = 0, const Arrangement* arrangement = nullptr);

struct RunOptions {
  Exec exec = Exec::parallel;
};

/// The rolling loop: backward pass, window selection, job-level rating,
/// resource-specific and resource-comprehensive recommendation, commit,
/// window advance; repeated until every activity is allocated.
///
/// Throws StallError when the window has passed every latest start by a full
/// horizon and an iteration still allocates nothing.
Schedule run(const Instance& instance, const RatingModel& model, const RunOptions& options = {});

}  // namespace fsched
