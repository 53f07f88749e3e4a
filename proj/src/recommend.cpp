#include "fuzzysched/recommend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fuzzysched/errors.hpp"

namespace fsched {

double ResourceList::context_load() const {
  double load = 0.0;
  for (const ListEntry& e : entries) {
    if (!e.allocatable) load += e.duration;
  }
  return load;
}

const ResourceList* RecommendationSet::find(std::string_view resource_id) const {
  for (const ResourceList& l : lists) {
    if (l.resource_id == resource_id) return &l;
  }
  return nullptr;
}

double balanced_score(double score, double load, double mean_load, double lambda) {
  if (!(mean_load > 0.0)) return score;
  return score - lambda * (load / mean_load - 1.0);
}

std::vector<ResourceList> resource_specific(const std::vector<Prioritized>& prioritized, const Schedule& schedule,
                                            const Instance& instance, const RatingModel& model,
                                            const Arrangement& arrangement, double now, Exec exec,
                                            std::vector<std::string>* warnings) {
  const Config& cfg = instance.config();
  const auto& resources = instance.resources();
  std::vector<ResourceList> lists(resources.size());
  std::vector<std::vector<std::string>> notes(resources.size());
  std::vector<std::string> errors(resources.size());

  const long n = static_cast<long>(resources.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel && n > 1 && prioritized.size() > 16)
  for (long ri = 0; ri < n; ++ri) {
    const auto k = static_cast<std::size_t>(ri);
    const Resource& r = resources[k];
    ResourceList& list = lists[k];
    list.resource_id = r.id;
    try {
      for (const Prioritized& p : prioritized) {
        const Activity* a = instance.find_activity(p.activity_id);
        if (!a || !a->capable_on(r.id)) continue;
        ListEntry e;
        e.activity_id = a->id;
        e.job_score = p.score;
        e.job_tier = p.tier;
        e.duration = defuzz(a->duration_on(r.id), cfg.defuzzification);
        const Activity* pred = instance.predecessor(*a);
        e.ready = !pred || schedule.is_allocated(pred->id);
        if (model.resource) {
          Inputs in = compute_criteria(*a, instance, arrangement, schedule, now, &r).to_inputs();
          in.emplace(std::string(var::job_priority), defuzz_centroid(p.score));
          const Inference inf = infer_detailed(*model.resource, in);
          if (!inf.fired) notes[k].push_back("no resource-level rule fired for '" + a->id + "' on '" + r.id + "'");
          e.score = inf.score;
        } else {
          e.score = p.score;
        }
        list.entries.push_back(std::move(e));
      }
      // The job-level tiers stay intact; the resource score orders within a tier.
      std::stable_sort(list.entries.begin(), list.entries.end(), [&](const ListEntry& x, const ListEntry& y) {
        if (x.job_tier != y.job_tier) return x.job_tier < y.job_tier;
        return compare(x.score, y.score, cfg.comparison_epsilon) > 0;
      });

      // Trailing context: allocations on r finishing within the overlap window.
      double latest = -std::numeric_limits<double>::infinity();
      for (const Allocation& al : schedule.allocations()) {
        if (al.resource_id == r.id) latest = std::max(latest, al.crisp_finish);
      }
      const double from = latest - cfg.effective_overlap();
      for (const Allocation& al : schedule.allocations()) {
        if (al.resource_id != r.id || al.crisp_finish < from) continue;
        ListEntry e;
        e.activity_id = al.activity_id;
        e.duration = al.crisp_finish - al.crisp_start;
        e.allocatable = false;
        list.entries.push_back(std::move(e));
      }
    } catch (const std::exception& ex) {
      errors[k] = ex.what();
    }
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw ConfigError(e);
  }
  if (warnings) {
    for (const auto& v : notes) warnings->insert(warnings->end(), v.begin(), v.end());
  }
  return lists;
}

namespace {

struct Candidate {
  std::size_t list = 0;
  TriFuzzy score;
  double crisp = 0.0;
  double duration = 0.0;
};

struct Pending {
  std::string activity_id;
  int tier = 0;
  std::vector<Candidate> candidates;
};

}  // namespace

RecommendationSet resource_comprehensive(const std::vector<ResourceList>& lists, const Instance& instance) {
  const Config& cfg = instance.config();
  const double eps = cfg.comparison_epsilon;
  const std::size_t nr = lists.size();

  // Gather each allocatable activity with its candidate resources.
  std::vector<Pending> pending;
  std::map<std::string, std::size_t> slot;
  std::vector<double> base_load(nr, 0.0);
  for (std::size_t r = 0; r < nr; ++r) {
    base_load[r] = lists[r].context_load();
    for (const ListEntry& e : lists[r].entries) {
      if (!e.allocatable) continue;
      auto [it, fresh] = slot.emplace(e.activity_id, pending.size());
      if (fresh) pending.push_back({e.activity_id, e.job_tier, {}});
      Pending& p = pending[it->second];
      p.tier = std::min(p.tier, e.job_tier);
      p.candidates.push_back({r, e.score, defuzz_centroid(e.score), e.duration});
    }
  }
  std::stable_sort(pending.begin(), pending.end(), [](const Pending& x, const Pending& y) {
    if (x.tier != y.tier) return x.tier < y.tier;
    return x.activity_id < y.activity_id;
  });

  RecommendationSet out;
  std::vector<std::size_t> assigned(pending.size(), 0);  // index into candidates
  std::vector<double> load = base_load;

  auto better_tie = [&](const Candidate& x, const Candidate& y) {
    // Smaller current load, then lexical resource id.
    if (load[x.list] != load[y.list]) return load[x.list] < load[y.list];
    return lists[x.list].resource_id < lists[y.list].resource_id;
  };

  // First pass: maximal fuzzy score, ties to the less loaded resource.
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const auto& cands = pending[i].candidates;
    std::size_t best = 0;
    for (std::size_t c = 1; c < cands.size(); ++c) {
      const auto ord = compare(cands[c].score, cands[best].score, eps);
      if (ord > 0 || (ord == 0 && better_tie(cands[c], cands[best]))) best = c;
    }
    assigned[i] = best;
    load[cands[best].list] += cands[best].duration;
  }
  out.iteration_count = 1;

  // Load-balanced re-rating until nothing significant changes.
  std::vector<std::vector<double>> previous;
  for (const Pending& p : pending) {
    std::vector<double> v;
    for (const Candidate& c : p.candidates) v.push_back(c.crisp);
    previous.push_back(std::move(v));
  }
  bool settled = pending.empty();
  while (!settled && out.iteration_count < cfg.max_fixpoint_iters) {
    ++out.iteration_count;
    bool changed = false;
    double max_delta = 0.0;
    double total = 0.0;
    for (double l : load) total += l;
    const double mean = nr ? total / static_cast<double>(nr) : 0.0;

    for (std::size_t i = 0; i < pending.size(); ++i) {
      const auto& cands = pending[i].candidates;
      load[cands[assigned[i]].list] -= cands[assigned[i]].duration;
      std::size_t best = 0;
      std::vector<double> eff(cands.size());
      for (std::size_t c = 0; c < cands.size(); ++c) {
        eff[c] = balanced_score(cands[c].crisp, load[cands[c].list] + cands[c].duration, mean,
                                cfg.load_balance_lambda);
        max_delta = std::max(max_delta, std::abs(eff[c] - previous[i][c]));
      }
      for (std::size_t c = 1; c < cands.size(); ++c) {
        const double d = eff[c] - eff[best];
        if (d > eps || (std::abs(d) <= eps && better_tie(cands[c], cands[best]))) best = c;
      }
      previous[i] = std::move(eff);
      if (best != assigned[i]) changed = true;
      assigned[i] = best;
      load[cands[best].list] += cands[best].duration;
    }
    settled = !changed || max_delta <= cfg.significance_epsilon;
  }
  out.converged = settled || std::all_of(pending.begin(), pending.end(),
                                         [](const Pending& p) { return p.candidates.size() == 1; });

  // Final lists: assigned entries in their resource-specific order, truncated
  // to the window capacity. Context entries are carried along unchanged.
  std::map<std::string, std::size_t> owner;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    owner.emplace(pending[i].activity_id, pending[i].candidates[assigned[i]].list);
  }
  out.lists.resize(nr);
  for (std::size_t r = 0; r < nr; ++r) {
    ResourceList& dst = out.lists[r];
    dst.resource_id = lists[r].resource_id;
    std::vector<const ListEntry*> mine;
    for (const ListEntry& e : lists[r].entries) {
      if (e.allocatable) {
        auto it = owner.find(e.activity_id);
        if (it != owner.end() && it->second == r) mine.push_back(&e);
      }
    }
    double used = 0.0;
    std::size_t keep = 0;
    while (keep < mine.size() && (keep == 0 || used + mine[keep]->duration <= cfg.horizon)) {
      used += mine[keep]->duration;
      ++keep;
    }
    bool has_ready = std::any_of(mine.begin(), mine.begin() + static_cast<long>(keep),
                                 [](const ListEntry* e) { return e->ready; });
    for (std::size_t k = 0; k < mine.size(); ++k) {
      // Past the capacity only the first ready entry may still join, so a list
      // never consists solely of entries blocked by their predecessors.
      if (k < keep || (!has_ready && mine[k]->ready)) {
        if (k >= keep) has_ready = true;
        dst.entries.push_back(*mine[k]);
      } else {
        out.truncated.push_back(mine[k]->activity_id);
      }
    }
    for (const ListEntry& e : lists[r].entries) {
      if (!e.allocatable) dst.entries.push_back(e);
    }
  }
  return out;
}

json recommendations_to_json(const RecommendationSet& recs) {
  json lists = json::object();
  for (const ResourceList& l : recs.lists) {
    json entries = json::array();
    for (const ListEntry& e : l.entries) {
      entries.push_back({{"activity_id", e.activity_id},
                         {"score", fuzzy_to_json(e.score)},
                         {"allocatable", e.allocatable}});
    }
    lists[l.resource_id] = entries;
  }
  return {{"lists", lists},
          {"iteration_count", recs.iteration_count},
          {"converged", recs.converged},
          {"truncated", recs.truncated}};
}

}  // namespace fsched
