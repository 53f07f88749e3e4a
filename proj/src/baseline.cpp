#include "fuzzysched/baseline.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "fuzzysched/errors.hpp"
#include "fuzzysched/retrograde.hpp"

namespace fsched {

bool is_crisp(const Instance& instance) {
  for (const Job& j : instance.jobs()) {
    if (!j.due_date.is_crisp()) return false;
  }
  for (const Resource& r : instance.resources()) {
    if (!r.available_from.is_crisp()) return false;
  }
  for (const Activity& a : instance.activities()) {
    if (!a.duration.is_crisp()) return false;
    for (const auto& [_, d] : a.duration_overrides) {
      if (!d.is_crisp()) return false;
    }
  }
  return true;
}

namespace {

void require_crisp(const Instance& instance, const char* who) {
  if (!is_crisp(instance)) throw std::domain_error(std::string(who) + " requires a crisp instance");
}

double shortest_duration(const Activity& a) {
  double best = std::numeric_limits<double>::infinity();
  for (const std::string& r : a.capable_resources) best = std::min(best, a.duration_on(r).m);
  return a.capable_resources.empty() ? a.duration.m : best;
}

}  // namespace

std::map<std::string, double> cpm_backward(const Instance& instance) {
  require_crisp(instance, "cpm_backward");
  std::map<std::string, double> out;
  for (const Job& job : instance.jobs()) {
    double finish = job.due_date.m;
    for (auto it = job.activity_ids.rbegin(); it != job.activity_ids.rend(); ++it) {
      const Activity* a = instance.find_activity(*it);
      if (!a) continue;
      const double start = finish - shortest_duration(*a);
      out[a->id] = start;
      finish = start;
    }
  }
  return out;
}

// Exhaustive oracle -------------------------------------------------------------

namespace {

struct Problem {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> chains;  // activity indices per job
  std::vector<std::size_t> job_of;               // job index per activity
  std::vector<std::size_t> pos_of;               // position in chain
  std::vector<std::vector<std::pair<std::size_t, double>>> options;  // (resource, duration)
  std::vector<double> min_tail;                  // shortest remaining work from an activity on
  std::vector<double> release;                   // per resource
};

Problem build_problem(const Instance& instance, std::size_t limit) {
  require_crisp(instance, "brute_force");
  Problem p;
  p.n = instance.activities().size();
  if (p.n > limit) {
    throw LimitError("exhaustive oracle refuses " + std::to_string(p.n) + " activities (limit " +
                     std::to_string(limit) + ")");
  }
  for (const Resource& r : instance.resources()) p.release.push_back(r.available_from.m);
  p.job_of.assign(p.n, 0);
  p.pos_of.assign(p.n, 0);
  p.options.resize(p.n);
  p.min_tail.assign(p.n, 0.0);
  for (std::size_t j = 0; j < instance.jobs().size(); ++j) {
    std::vector<std::size_t> chain;
    for (const std::string& id : instance.jobs()[j].activity_ids) {
      const auto idx = instance.activity_index(id);
      if (!idx) throw std::invalid_argument("job '" + instance.jobs()[j].id + "' lists unknown activity");
      p.job_of[*idx] = j;
      p.pos_of[*idx] = chain.size();
      chain.push_back(*idx);
    }
    p.chains.push_back(std::move(chain));
  }
  for (std::size_t i = 0; i < p.n; ++i) {
    const Activity& a = instance.activities()[i];
    for (const std::string& r : a.capable_resources) {
      const auto ri = instance.resource_index(r);
      if (ri) p.options[i].emplace_back(*ri, a.duration_on(r).m);
    }
    if (p.options[i].empty()) throw std::invalid_argument("activity '" + a.id + "' has no usable resource");
  }
  for (const auto& chain : p.chains) {
    double tail = 0.0;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      double shortest = std::numeric_limits<double>::infinity();
      for (const auto& [_, d] : p.options[*it]) shortest = std::min(shortest, d);
      tail += shortest;
      p.min_tail[*it] = tail;
    }
  }
  return p;
}

struct Candidate {
  double makespan = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> resource;
  std::vector<double> start;
  std::size_t evaluated = 0;

  bool better_than(const Candidate& o) const {
    return std::tie(makespan, resource, start) < std::tie(o.makespan, o.resource, o.start);
  }
};

void offer(Candidate& best, double makespan, const std::vector<std::size_t>& resource,
           const std::vector<double>& start) {
  ++best.evaluated;
  if (std::tie(makespan, resource, start) < std::tie(best.makespan, best.resource, best.start)) {
    best.makespan = makespan;
    best.resource = resource;
    best.start = start;
  }
}

void lower_bound_update(std::atomic<double>& bound, double value) {
  double cur = bound.load(std::memory_order_relaxed);
  while (value < cur && !bound.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
  }
}

struct Dfs {
  const Problem& p;
  std::atomic<double>& shared_bound;
  Candidate best;
  std::vector<double> free;
  std::vector<double> job_ready;
  std::vector<std::size_t> next;
  std::vector<std::size_t> resource;
  std::vector<double> start;
  std::size_t placed = 0;

  Dfs(const Problem& problem, std::atomic<double>& bound)
      : p(problem),
        shared_bound(bound),
        free(problem.release),
        job_ready(problem.chains.size(), 0.0),
        next(problem.chains.size(), 0),
        resource(problem.n, 0),
        start(problem.n, 0.0) {}

  double bound() const { return std::min(best.makespan, shared_bound.load(std::memory_order_relaxed)); }

  // Applies one placement and returns what is needed to undo it.
  struct Undo {
    std::size_t job, r;
    double free, ready;
  };

  Undo place(std::size_t j, std::size_t option) {
    const std::size_t i = p.chains[j][next[j]];
    const auto [r, d] = p.options[i][option];
    Undo u{j, r, free[r], job_ready[j]};
    const double s = std::max(free[r], job_ready[j]);
    resource[i] = r;
    start[i] = s;
    free[r] = s + d;
    job_ready[j] = s + d;
    ++next[j];
    ++placed;
    return u;
  }

  void undo(const Undo& u) {
    --placed;
    --next[u.job];
    free[u.r] = u.free;
    job_ready[u.job] = u.ready;
  }

  double current_bound() const {
    double lb = 0.0;
    for (std::size_t j = 0; j < p.chains.size(); ++j) {
      if (next[j] < p.chains[j].size()) {
        lb = std::max(lb, job_ready[j] + p.min_tail[p.chains[j][next[j]]]);
      } else {
        lb = std::max(lb, job_ready[j]);
      }
    }
    return lb;
  }

  void search() {
    if (placed == p.n) {
      double makespan = 0.0;
      for (double r : job_ready) makespan = std::max(makespan, r);
      offer(best, makespan, resource, start);
      lower_bound_update(shared_bound, best.makespan);
      return;
    }
    for (std::size_t j = 0; j < p.chains.size(); ++j) {
      if (next[j] == p.chains[j].size()) continue;
      const std::size_t i = p.chains[j][next[j]];
      for (std::size_t o = 0; o < p.options[i].size(); ++o) {
        const Undo u = place(j, o);
        if (current_bound() <= bound()) search();
        undo(u);
      }
    }
  }
};

OracleSchedule to_schedule(const Instance& instance, const Problem& p, const Candidate& c) {
  OracleSchedule out;
  out.makespan = p.n ? c.makespan : 0.0;
  out.evaluated = c.evaluated;
  for (std::size_t i = 0; i < p.n; ++i) {
    const Activity& a = instance.activities()[i];
    const std::size_t r = c.resource[i];
    const std::string& rid = instance.resources()[r].id;
    out.slots.push_back({a.id, rid, c.start[i], c.start[i] + a.duration_on(rid).m});
  }
  return out;
}

}  // namespace

OracleSchedule brute_force(const Instance& instance, std::size_t limit, Exec exec) {
  const Problem p = build_problem(instance, limit);
  if (p.n == 0) return {};

  // Split the tree into two-placement prefixes so there is parallel slack
  // even on instances with only a couple of jobs.
  struct Prefix {
    std::size_t j1, o1, j2, o2;
    bool second;
  };
  std::vector<Prefix> prefixes;
  for (std::size_t j1 = 0; j1 < p.chains.size(); ++j1) {
    if (p.chains[j1].empty()) continue;
    for (std::size_t o1 = 0; o1 < p.options[p.chains[j1][0]].size(); ++o1) {
      if (p.n == 1) {
        prefixes.push_back({j1, o1, 0, 0, false});
        continue;
      }
      for (std::size_t j2 = 0; j2 < p.chains.size(); ++j2) {
        const std::size_t pos = j2 == j1 ? 1 : 0;
        if (pos >= p.chains[j2].size()) continue;
        for (std::size_t o2 = 0; o2 < p.options[p.chains[j2][pos]].size(); ++o2) {
          prefixes.push_back({j1, o1, j2, o2, true});
        }
      }
    }
  }

  std::atomic<double> shared{std::numeric_limits<double>::infinity()};
  std::vector<Candidate> results(prefixes.size());
  const long np = static_cast<long>(prefixes.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (long t = 0; t < np; ++t) {
    const Prefix& pre = prefixes[static_cast<std::size_t>(t)];
    Dfs dfs(p, shared);
    dfs.place(pre.j1, pre.o1);
    if (pre.second) dfs.place(pre.j2, pre.o2);
    if (dfs.current_bound() <= dfs.bound()) dfs.search();
    results[static_cast<std::size_t>(t)] = std::move(dfs.best);
  }

  Candidate best;
  std::size_t evaluated = 0;
  for (const Candidate& c : results) {
    evaluated += c.evaluated;
    if (!c.resource.empty() && (best.resource.empty() || c.better_than(best))) best = c;
  }
  best.evaluated = evaluated;
  return to_schedule(instance, p, best);
}

OracleSchedule brute_force_reference(const Instance& instance, std::size_t limit) {
  const Problem p = build_problem(instance, limit);
  if (p.n == 0) return {};

  Candidate best;
  std::vector<std::size_t> choice(p.n, 0);
  std::vector<std::size_t> resource(p.n, 0);
  std::vector<double> start(p.n, 0.0);
  std::vector<double> finish(p.n, 0.0);
  while (true) {
    for (std::size_t i = 0; i < p.n; ++i) resource[i] = p.options[i][choice[i]].first;

    std::vector<std::size_t> order(p.n);
    std::iota(order.begin(), order.end(), 0);
    do {
      // Keep only orders that respect every job chain.
      std::vector<std::size_t> seen(p.chains.size(), 0);
      bool feasible = true;
      for (std::size_t i : order) {
        if (p.pos_of[i] != seen[p.job_of[i]]++) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;

      std::vector<double> free = p.release;
      double makespan = 0.0;
      for (std::size_t i : order) {
        const std::size_t j = p.job_of[i];
        const double ready = p.pos_of[i] == 0 ? 0.0 : finish[p.chains[j][p.pos_of[i] - 1]];
        const std::size_t r = resource[i];
        start[i] = std::max(free[r], ready);
        finish[i] = start[i] + p.options[i][choice[i]].second;
        free[r] = finish[i];
        makespan = std::max(makespan, finish[i]);
      }
      offer(best, makespan, resource, start);
    } while (std::next_permutation(order.begin(), order.end()));

    // Odometer over the resource choices.
    std::size_t k = 0;
    while (k < p.n && ++choice[k] == p.options[k].size()) choice[k++] = 0;
    if (k == p.n) break;
  }
  return to_schedule(instance, p, best);
}

EddResult edd_single_machine(const Instance& instance) {
  require_crisp(instance, "edd_single_machine");
  if (instance.resources().size() != 1) throw std::domain_error("edd_single_machine needs exactly one resource");
  const Resource& machine = instance.resources().front();
  struct Item {
    const Job* job;
    const Activity* activity;
  };
  std::vector<Item> items;
  for (const Job& j : instance.jobs()) {
    if (j.activity_ids.size() != 1) throw std::domain_error("edd_single_machine needs one activity per job");
    const Activity* a = instance.find_activity(j.activity_ids.front());
    if (!a || !a->capable_on(machine.id)) {
      throw std::domain_error("job '" + j.id + "' cannot run on the single resource");
    }
    items.push_back({&j, a});
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& x, const Item& y) { return x.job->due_date.m < y.job->due_date.m; });

  EddResult out;
  out.max_lateness = -std::numeric_limits<double>::infinity();
  double t = machine.available_from.m;
  for (const Item& it : items) {
    t += it.activity->duration_on(machine.id).m;
    out.job_order.push_back(it.job->id);
    out.activity_order.push_back(it.activity->id);
    out.finish.push_back(t);
    out.max_lateness = std::max(out.max_lateness, t - it.job->due_date.m);
  }
  if (items.empty()) out.max_lateness = 0.0;
  return out;
}

json oracle_to_json(const OracleSchedule& schedule) {
  json slots = json::array();
  for (const OracleSlot& s : schedule.slots) {
    slots.push_back({{"activity_id", s.activity_id},
                     {"resource_id", s.resource_id},
                     {"start", s.start},
                     {"finish", s.finish}});
  }
  return {{"makespan", schedule.makespan}, {"slots", slots}};
}

}  // namespace fsched
