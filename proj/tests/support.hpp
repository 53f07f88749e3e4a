#pragma once

// Test-only builders and independent oracles. Nothing here calls into the
// code path it is used to check.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzysched/model.hpp"
#include "fuzzysched/rating.hpp"

namespace fsched::test {

struct Interval {
  double lo, hi;
};

inline Interval cut(const TriFuzzy& x, double alpha) {
  // Direct from the membership definition: {t : mu(t) >= alpha}.
  return {x.a + alpha * (x.m - x.a), x.b - alpha * (x.b - x.m)};
}
inline Interval iadd(Interval x, Interval y) { return {x.lo + y.lo, x.hi + y.hi}; }
inline Interval isub(Interval x, Interval y) { return {x.lo - y.hi, x.hi - y.lo}; }
inline Interval imax(Interval x, Interval y) { return {std::max(x.lo, y.lo), std::max(x.hi, y.hi)}; }

/// Centroid by composite Simpson quadrature of t*mu(t) / mu(t) on the support.
inline double integrated_centroid(const TriFuzzy& x, int panels = 2000) {
  if (x.a == x.b) return x.m;
  auto mu = [&](double t) {
    if (t <= x.a || t >= x.b) return t == x.m ? 1.0 : 0.0;
    return t <= x.m ? (t - x.a) / (x.m - x.a) : (x.b - t) / (x.b - x.m);
  };
  // Integrate each linear piece separately so the kink at m is a node.
  double area = 0.0, moment = 0.0;
  auto simpson = [&](double lo, double hi) {
    if (!(hi > lo)) return;
    const double h = (hi - lo) / panels;
    for (int i = 0; i < panels; i += 2) {
      const double t0 = lo + i * h, t1 = t0 + h, t2 = t0 + 2 * h;
      const double f0 = mu(t0), f1 = mu(t1), f2 = mu(t2);
      area += h / 3 * (f0 + 4 * f1 + f2);
      moment += h / 3 * (t0 * f0 + 4 * t1 * f1 + t2 * f2);
    }
  };
  simpson(x.a, x.m);
  simpson(x.m, x.b);
  return moment / area;
}

inline double tri_membership(const TriFuzzy& t, double x) {
  if (x < t.a || x > t.b) return 0.0;
  if (x == t.m) return 1.0;
  if (x < t.m) return (x - t.a) / (t.m - t.a);
  return (t.b - x) / (t.b - t.m);
}

/// Discretised Mamdani evaluation on a uniform grid over the output domain.
/// Returns the centroid of the aggregated output set.
inline double grid_mamdani_centroid(const RuleBase& rb, const Inputs& inputs, double step = 1e-3) {
  std::map<std::string, double> height;
  for (const Rule& r : rb.rules()) {
    double s = 1.0;
    for (const auto& [var, term] : r.antecedents) {
      const LinguisticVariable* v = nullptr;
      for (const auto& cand : rb.inputs()) {
        if (cand.name == var) v = &cand;
      }
      const double x = std::clamp(inputs.at(var), v->lo, v->hi);
      s = std::min(s, tri_membership(*v->term(term), x));
    }
    s *= r.weight;
    height[r.consequent.second] = std::max(height[r.consequent.second], s);
  }
  const auto& out = rb.output();
  const int n = static_cast<int>(std::lround((out.hi - out.lo) / step));
  double area = 0.0, moment = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = out.lo + i * step;
    double mu = 0.0;
    for (const auto& [name, t] : out.terms) mu = std::max(mu, std::min(height[name], tri_membership(t, x)));
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    area += w * mu;
    moment += w * mu * x;
  }
  if (area > 0.0) return moment / area;
  double num = 0.0, den = 0.0;
  for (const auto& [name, t] : out.terms) {
    num += height[name] * t.m;
    den += height[name];
  }
  return den > 0.0 ? num / den : 0.0;
}

/// Textbook backward pass on crisp chains: LS(k) = LF(k) - d(k), LF(k) = LS(k+1).
inline std::map<std::string, double> chain_backward(const std::vector<std::string>& ids,
                                                    const std::vector<double>& durations, double due) {
  std::map<std::string, double> out;
  double finish = due;
  for (std::size_t k = ids.size(); k-- > 0;) {
    out[ids[k]] = finish - durations[k];
    finish = out[ids[k]];
  }
  return out;
}

/// Every feasibility property a produced schedule must satisfy; empty when all hold.
inline std::vector<std::string> check_schedule(const Instance& instance, const Schedule& schedule) {
  std::vector<std::string> problems;
  auto say = [&](const std::string& s) { problems.push_back(s); };

  std::map<std::string, int> seen;
  for (const Allocation& a : schedule.allocations()) ++seen[a.activity_id];
  for (const Activity& act : instance.activities()) {
    if (seen[act.id] != 1) say(act.id + " allocated " + std::to_string(seen[act.id]) + " times");
  }
  for (const Allocation& a : schedule.allocations()) {
    const Activity* act = instance.find_activity(a.activity_id);
    if (!act) {
      say("unknown activity " + a.activity_id);
      continue;
    }
    if (!act->capable_on(a.resource_id)) say(a.activity_id + " on incapable " + a.resource_id);
    if (a.crisp_finish < a.crisp_start) say(a.activity_id + " finishes before it starts");
  }
  for (std::size_t i = 0; i < schedule.allocations().size(); ++i) {
    for (std::size_t j = i + 1; j < schedule.allocations().size(); ++j) {
      const Allocation& x = schedule.allocations()[i];
      const Allocation& y = schedule.allocations()[j];
      if (x.resource_id != y.resource_id) continue;
      if (x.crisp_start < y.crisp_finish && y.crisp_start < x.crisp_finish) {
        say("overlap of " + x.activity_id + " and " + y.activity_id + " on " + x.resource_id);
      }
    }
  }
  for (const Job& job : instance.jobs()) {
    for (std::size_t k = 1; k < job.activity_ids.size(); ++k) {
      const Allocation* p = schedule.find(job.activity_ids[k - 1]);
      const Allocation* s = schedule.find(job.activity_ids[k]);
      if (p && s && s->crisp_start < p->crisp_finish - 1e-9) {
        say("precedence " + p->activity_id + " -> " + s->activity_id);
      }
    }
  }
  return problems;
}

inline std::string join(const std::vector<std::string>& v) {
  std::ostringstream os;
  for (const auto& s : v) os << s << "; ";
  return os.str();
}

/// Single-job-per-activity builder for compact hand-written instances.
struct Builder {
  std::vector<Job> jobs;
  std::vector<Activity> activities;
  std::vector<Resource> resources;
  Config config;

  Builder& resource(std::string id, TriFuzzy available = {}, double weight = 0.5) {
    resources.push_back({std::move(id), available, weight});
    return *this;
  }

  /// A job whose activities are (duration, capable resources) in chain order.
  Builder& job(std::string id, TriFuzzy due, std::vector<std::pair<TriFuzzy, std::vector<std::string>>> chain,
               double importance = 0.5) {
    Job j{id, {}, due, importance};
    for (std::size_t k = 0; k < chain.size(); ++k) {
      Activity a;
      a.id = id + "." + std::to_string(k + 1);
      a.job_id = id;
      a.index_in_job = static_cast<int>(k);
      a.duration = chain[k].first;
      a.capable_resources = chain[k].second;
      j.activity_ids.push_back(a.id);
      activities.push_back(std::move(a));
    }
    jobs.push_back(std::move(j));
    return *this;
  }

  Instance build() const { return Instance(jobs, activities, resources, config); }
};

inline TriFuzzy C(double v) { return TriFuzzy::crisp(v); }

inline TriFuzzy sorted_tri(double x, double y, double z) {
  double v[3] = {x, y, z};
  std::sort(v, v + 3);
  return {v[0], v[1], v[2]};
}

/// Random but structurally valid rule base: 1..3 inputs, a covering output
/// partition of [0, 1] with random peaks, 1..8 weighted rules.
template <class Rng>
RuleBase random_rule_base(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 1 << 20);
  const int n_inputs = 1 + pick(rng) % 3;
  std::vector<LinguisticVariable> inputs;
  for (int i = 0; i < n_inputs; ++i) {
    LinguisticVariable v;
    v.name = "x" + std::to_string(i);
    v.lo = -10.0 + 20.0 * u(rng);
    v.hi = v.lo + 1.0 + 30.0 * u(rng);
    const int n_terms = 2 + pick(rng) % 3;
    for (int t = 0; t < n_terms; ++t) {
      auto at = [&] { return v.lo + (v.hi - v.lo) * u(rng); };
      TriFuzzy shape = sorted_tri(at(), at(), at());
      if (pick(rng) % 5 == 0) shape.a = shape.m = v.lo;  // left shoulder
      if (pick(rng) % 5 == 0) shape.m = shape.b = v.hi;  // right shoulder
      v.terms.emplace_back("t" + std::to_string(t), shape);
    }
    inputs.push_back(std::move(v));
  }

  LinguisticVariable out;
  out.name = "priority";
  out.lo = 0.0;
  out.hi = 1.0;
  const int n_out = 2 + pick(rng) % 4;
  // Breakpoints 0 = c0 < c1 < ... < c(n-1) = 1; term k spans [c(k-1), c(k+1)]
  // with a random peak, so the supports chain over the whole domain.
  std::vector<double> cuts{0.0};
  for (int k = 1; k + 1 < n_out; ++k) cuts.push_back(u(rng));
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  for (int k = 0; k < n_out; ++k) {
    const double lo = cuts[static_cast<std::size_t>(std::max(0, k - 1))];
    const double hi = cuts[static_cast<std::size_t>(std::min(n_out - 1, k + 1))];
    const double peak = k == 0 ? 0.0 : (k == n_out - 1 ? 1.0 : lo + (hi - lo) * u(rng));
    out.terms.emplace_back("p" + std::to_string(k), TriFuzzy{lo, peak, hi});
  }

  std::vector<Rule> rules;
  const int n_rules = 1 + pick(rng) % 8;
  for (int r = 0; r < n_rules; ++r) {
    Rule rule;
    const int n_ante = 1 + pick(rng) % n_inputs;
    for (int k = 0; k < n_ante; ++k) {
      const auto& v = inputs[static_cast<std::size_t>(pick(rng) % n_inputs)];
      rule.antecedents.emplace_back(v.name, v.terms[static_cast<std::size_t>(pick(rng)) % v.terms.size()].first);
    }
    rule.consequent = {out.name, out.terms[static_cast<std::size_t>(pick(rng) % n_out)].first};
    rule.weight = pick(rng) % 3 == 0 ? 1.0 : 0.05 + 0.95 * u(rng);
    rules.push_back(std::move(rule));
  }
  return RuleBase(std::move(inputs), std::move(out), std::move(rules));
}

/// Inputs mostly inside each variable's domain, occasionally outside.
template <class Rng>
Inputs random_inputs(Rng& rng, const RuleBase& rb) {
  std::uniform_real_distribution<double> u(-0.1, 1.1);
  Inputs in;
  for (const auto& v : rb.inputs()) in[v.name] = v.lo + (v.hi - v.lo) * u(rng);
  return in;
}

}  // namespace fsched::test
