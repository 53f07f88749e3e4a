#pragma once

#include <cstdint>

#include "fuzzysched/model.hpp"

namespace fsched {

struct GenOptions {
  int jobs = 3;
  int activities_per_job = 2;
  bool vary_activities = false;  // draw 1..activities_per_job per job instead
  int resources = 2;
  int max_capable = 3;           // capability set size is drawn from 1..max_capable
  double spread = 0.0;           // relative half-width of fuzzy quantities; 0 gives a crisp instance
  double fuzzy_fraction = 0.5;   // share of quantities made fuzzy when spread > 0
  double override_probability = 0.3;
  int min_duration = 1;
  int max_duration = 10;
  std::uint64_t seed = 0;
  Config config;
};

/// Deterministic random instance; identical options give identical instances
/// on every platform.
Instance generate_instance(const GenOptions& options);

}  // namespace fsched
