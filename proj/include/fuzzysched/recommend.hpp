#pragma once

#include <string>
#include <vector>

#include "fuzzysched/exec.hpp"
#include "fuzzysched/model.hpp"
#include "fuzzysched/rating.hpp"
#include "fuzzysched/retrograde.hpp"

namespace fsched {

struct ListEntry {
  std::string activity_id;
  TriFuzzy job_score;       // from prioritize_jobs
  int job_tier = 0;
  TriFuzzy score;           // resource-specific score
  double duration = 0.0;    // defuzzified duration on this resource
  bool allocatable = true;  // false for recently allocated context entries
  bool ready = true;        // job predecessor already allocated (or none)
};

struct ResourceList {
  std::string resource_id;
  std::vector<ListEntry> entries;

  double context_load() const;
};

struct RecommendationSet {
  std::vector<ResourceList> lists;
  int iteration_count = 0;
  bool converged = true;
  /// Assigned activities cut off by the per-resource window capacity.
  std::vector<std::string> truncated;

  const ResourceList* find(std::string_view resource_id) const;
};

/// One list per instance resource holding every prioritized activity capable
/// on it, rescored with the resource-level rule base (or carrying the job
/// score when the model has none), ordered by job tier and then by the
/// resource score. Recently allocated activities whose crisp finish lies in
/// the trailing overlap window are appended as non-allocatable context.
std::vector<ResourceList> resource_specific(const std::vector<Prioritized>& prioritized, const Schedule& schedule,
                                            const Instance& instance, const RatingModel& model,
                                            const Arrangement& arrangement, double now,
                                            Exec exec = Exec::parallel,
                                            std::vector<std::string>* warnings = nullptr);

/// Removes redundancy across the resource lists by an iterated, load-balanced
/// rating until the assignment or the scores settle, then truncates every
/// list to the window capacity. Never touches the schedule.
RecommendationSet resource_comprehensive(const std::vector<ResourceList>& lists, const Instance& instance);

/// Score after the load-balance shift for an activity placed on a resource
/// whose projected load is `load`.
double balanced_score(double score, double load, double mean_load, double lambda);

json recommendations_to_json(const RecommendationSet& recs);

}  // namespace fsched
