#include "fuzzysched/generate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace fsched {

namespace {

// std distributions are implementation-defined; mt19937_64 itself is not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

double round2(double x) { return std::round(x * 100.0) / 100.0; }

std::string padded(int value, int count) {
  const int width = static_cast<int>(std::to_string(std::max(count - 1, 0)).size());
  std::string s = std::to_string(value);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

TriFuzzy vague(Rng& rng, double peak, const GenOptions& o) {
  if (o.spread <= 0.0 || !rng.chance(o.fuzzy_fraction)) return TriFuzzy::crisp(peak);
  const double a = std::max(0.0, round2(peak - o.spread * peak * rng.uniform()));
  const double b = round2(peak + o.spread * peak * rng.uniform());
  return {std::min(a, peak), peak, std::max(b, peak)};
}

}  // namespace

Instance generate_instance(const GenOptions& o) {
  Rng rng(o.seed);
  std::vector<Resource> resources;
  for (int r = 0; r < o.resources; ++r) {
    Resource res;
    res.id = "R" + padded(r + 1, o.resources + 1);
    res.available_from = rng.chance(0.7) ? TriFuzzy{} : vague(rng, rng.integer(1, 5), o);
    res.strategic_weight = round2(rng.uniform());
    resources.push_back(std::move(res));
  }

  std::vector<Job> jobs;
  std::vector<Activity> activities;
  for (int j = 0; j < o.jobs; ++j) {
    Job job;
    job.id = "J" + padded(j + 1, o.jobs + 1);
    job.importance = round2(rng.uniform());
    const int count = o.vary_activities ? rng.integer(1, o.activities_per_job) : o.activities_per_job;
    double work = 0.0;
    for (int k = 0; k < count; ++k) {
      Activity a;
      a.id = job.id + "." + std::to_string(k + 1);
      a.job_id = job.id;
      a.index_in_job = k;
      const int peak = rng.integer(o.min_duration, o.max_duration);
      a.duration = vague(rng, peak, o);
      work += peak;

      std::vector<int> pool(static_cast<std::size_t>(o.resources));
      for (int r = 0; r < o.resources; ++r) pool[static_cast<std::size_t>(r)] = r;
      const int want = rng.integer(1, std::max(1, std::min(o.max_capable, o.resources)));
      for (int s = 0; s < want; ++s) {
        const int pick = rng.integer(s, o.resources - 1);
        std::swap(pool[static_cast<std::size_t>(s)], pool[static_cast<std::size_t>(pick)]);
      }
      std::vector<int> chosen(pool.begin(), pool.begin() + want);
      std::sort(chosen.begin(), chosen.end());
      for (std::size_t s = 0; s < chosen.size(); ++s) {
        const std::string& rid = resources[static_cast<std::size_t>(chosen[s])].id;
        a.capable_resources.push_back(rid);
        if (s > 0 && rng.chance(o.override_probability)) {
          a.duration_overrides.emplace(rid, vague(rng, rng.integer(o.min_duration, o.max_duration), o));
        }
      }
      job.activity_ids.push_back(a.id);
      activities.push_back(std::move(a));
    }
    job.due_date = vague(rng, std::round(work * rng.uniform(1.0, 2.0)), o);
    jobs.push_back(std::move(job));
  }

  Config cfg = o.config;
  cfg.seed = o.seed;
  return Instance(std::move(jobs), std::move(activities), std::move(resources), cfg);
}

}  // namespace fsched
