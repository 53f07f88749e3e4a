#pragma once

#include <string>

#include "fuzzysched/model.hpp"

namespace fsched {

/// Makespan, per-job lateness against the defuzzified due date, resource
/// utilisation, and the per-iteration fixpoint counts and convergence flags.
json metrics_to_json(const Instance& instance, const Schedule& schedule);

/// One row per resource; bars at the crisp times with whiskers spanning the
/// fuzzy start and finish supports.
std::string gantt_svg(const Instance& instance, const Schedule& schedule);

/// Plain-text Gantt chart, one line per resource.
std::string gantt_text(const Instance& instance, const Schedule& schedule, int width = 72);

}  // namespace fsched
