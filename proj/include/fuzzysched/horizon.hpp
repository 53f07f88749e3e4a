#pragma once

#include <string>
#include <vector>

#include "fuzzysched/model.hpp"
#include "fuzzysched/retrograde.hpp"

namespace fsched {

/// Forward-shifted selection window [start, start + length).
struct HorizonWindow {
  double start = 0.0;
  double length = 1.0;

  double end() const { return start + length; }
  void advance(double step) { start += step; }
};

/// Unscheduled activities whose defuzzified latest start lies before the end
/// of the window, closed under `extend_by_jobs`, in relative order.
std::vector<std::string> select(const Arrangement& arrangement, const HorizonWindow& window,
                                const Schedule& schedule, const Instance& instance);

/// Adds every unscheduled activity of a job that is either touched by
/// `selected` or already partially allocated. The result follows `order`.
std::vector<std::string> extend_by_jobs(const std::vector<std::string>& selected, const Schedule& schedule,
                                        const Instance& instance, const std::vector<std::string>& order);

/// As above, ordering by the instance's own backward pass.
std::vector<std::string> extend_by_jobs(const std::vector<std::string>& selected, const Schedule& schedule,
                                        const Instance& instance);

}  // namespace fsched
