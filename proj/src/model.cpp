#include "fuzzysched/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fsched {

const TriFuzzy& Activity::duration_on(std::string_view resource) const {
  if (!duration_overrides.empty()) {
    auto it = duration_overrides.find(std::string(resource));
    if (it != duration_overrides.end()) return it->second;
  }
  return duration;
}

bool Activity::capable_on(std::string_view resource) const {
  return std::find(capable_resources.begin(), capable_resources.end(), resource) !=
         capable_resources.end();
}

Instance::Instance(std::vector<Job> jobs, std::vector<Activity> activities,
                   std::vector<Resource> resources, Config config)
    : jobs_(std::move(jobs)),
      activities_(std::move(activities)),
      resources_(std::move(resources)),
      config_(config) {
  // First occurrence wins for lookups; duplicates are reported by validate().
  for (std::size_t i = 0; i < jobs_.size(); ++i) job_index_.emplace(jobs_[i].id, i);
  for (std::size_t i = 0; i < activities_.size(); ++i) activity_index_.emplace(activities_[i].id, i);
  for (std::size_t i = 0; i < resources_.size(); ++i) resource_index_.emplace(resources_[i].id, i);
}

const Activity* Instance::find_activity(std::string_view id) const {
  auto it = activity_index_.find(std::string(id));
  return it == activity_index_.end() ? nullptr : &activities_[it->second];
}

const Job* Instance::find_job(std::string_view id) const {
  auto it = job_index_.find(std::string(id));
  return it == job_index_.end() ? nullptr : &jobs_[it->second];
}

const Resource* Instance::find_resource(std::string_view id) const {
  auto it = resource_index_.find(std::string(id));
  return it == resource_index_.end() ? nullptr : &resources_[it->second];
}

std::optional<std::size_t> Instance::activity_index(std::string_view id) const {
  auto it = activity_index_.find(std::string(id));
  if (it == activity_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Instance::resource_index(std::string_view id) const {
  auto it = resource_index_.find(std::string(id));
  if (it == resource_index_.end()) return std::nullopt;
  return it->second;
}

const Activity* Instance::predecessor(const Activity& activity) const {
  const Job* job = find_job(activity.job_id);
  if (!job) return nullptr;
  auto it = std::find(job->activity_ids.begin(), job->activity_ids.end(), activity.id);
  if (it == job->activity_ids.end() || it == job->activity_ids.begin()) return nullptr;
  return find_activity(*std::prev(it));
}

Instance Instance::with_config(Config config) const {
  return Instance(jobs_, activities_, resources_, config);
}

std::vector<Violation> validate(const Instance& instance) {
  std::vector<Violation> out;
  auto report = [&out](std::string entity, std::string rule, std::string message) {
    out.push_back({std::move(entity), std::move(rule), std::move(message)});
  };

  std::set<std::string> seen;
  for (const Job& job : instance.jobs()) {
    if (!seen.insert("job:" + job.id).second) report("job " + job.id, "duplicate-id", "job id is not unique");
  }
  for (const Resource& r : instance.resources()) {
    if (!seen.insert("resource:" + r.id).second) {
      report("resource " + r.id, "duplicate-id", "resource id is not unique");
    }
    if (r.available_from.a < 0) {
      report("resource " + r.id, "negative-time", "available_from support starts before 0");
    }
    if (!(r.strategic_weight >= 0 && r.strategic_weight <= 1)) {
      report("resource " + r.id, "range", "strategic_weight must lie in [0, 1]");
    }
  }

  std::set<std::pair<std::string, int>> positions;
  std::set<std::string> jobs_with_duplicate_index;
  for (const Activity& a : instance.activities()) {
    const std::string entity = "activity " + a.id;
    if (!seen.insert("activity:" + a.id).second) report(entity, "duplicate-id", "activity id is not unique");
    if (a.duration.a < 0) report(entity, "negative-duration", "duration support starts before 0");
    if (a.capable_resources.empty()) {
      report(entity, "empty-capability", "activity lists no capable resource");
    }
    for (const std::string& r : a.capable_resources) {
      if (!instance.find_resource(r)) {
        report(entity, "dangling-resource", "capable resource '" + r + "' does not exist");
      }
    }
    for (const auto& [r, d] : a.duration_overrides) {
      if (!a.capable_on(r)) {
        report(entity, "override-not-capable", "duration override for non-capable resource '" + r + "'");
      }
      if (d.a < 0) report(entity, "negative-duration", "override for '" + r + "' starts before 0");
    }
    const Job* job = instance.find_job(a.job_id);
    if (!job) {
      report(entity, "dangling-job", "job '" + a.job_id + "' does not exist");
    } else if (std::find(job->activity_ids.begin(), job->activity_ids.end(), a.id) ==
               job->activity_ids.end()) {
      report(entity, "orphan-activity", "job '" + a.job_id + "' does not list this activity");
    }
    if (a.index_in_job < 0) report(entity, "ordering", "index_in_job must be non-negative");
    if (!positions.insert({a.job_id, a.index_in_job}).second) {
      jobs_with_duplicate_index.insert(a.job_id);
      report(entity, "ordering",
             "index_in_job " + std::to_string(a.index_in_job) + " is used twice in job '" + a.job_id + "'");
    }
  }

  for (const Job& job : instance.jobs()) {
    const std::string entity = "job " + job.id;
    if (job.activity_ids.empty()) report(entity, "empty-job", "job has no activities");
    if (job.due_date.a < 0) report(entity, "negative-time", "due date support starts before 0");
    if (!(job.importance >= 0 && job.importance <= 1)) {
      report(entity, "range", "importance must lie in [0, 1]");
    }
    for (std::size_t k = 0; k < job.activity_ids.size(); ++k) {
      const Activity* a = instance.find_activity(job.activity_ids[k]);
      if (!a) {
        report(entity, "dangling-activity", "activity '" + job.activity_ids[k] + "' does not exist");
        continue;
      }
      if (a->job_id != job.id) {
        report(entity, "job-mismatch", "activity '" + a->id + "' belongs to job '" + a->job_id + "'");
      } else if (a->index_in_job != static_cast<int>(k) && !jobs_with_duplicate_index.count(job.id)) {
        report(entity, "ordering",
               "activity '" + a->id + "' has index_in_job " + std::to_string(a->index_in_job) +
                   " but is listed at position " + std::to_string(k));
      }
    }
  }

  const Config& c = instance.config();
  if (!(c.horizon > 0)) report("config", "range", "horizon must be positive");
  if (!(c.effective_step() > 0)) report("config", "range", "step must be positive");
  if (!(c.effective_overlap() >= 0)) report("config", "range", "overlap must be non-negative");
  if (!(c.significance_epsilon >= 0)) report("config", "range", "significance_epsilon must be non-negative");
  if (!(c.comparison_epsilon >= 0)) report("config", "range", "comparison_epsilon must be non-negative");
  if (c.max_fixpoint_iters < 1) report("config", "range", "max_fixpoint_iters must be at least 1");
  if (!(c.load_balance_lambda >= 0)) report("config", "range", "load_balance_lambda must be non-negative");
  return out;
}

bool Schedule::is_allocated(std::string_view activity_id) const {
  return by_activity_.count(std::string(activity_id)) != 0;
}

const Allocation* Schedule::find(std::string_view activity_id) const {
  auto it = by_activity_.find(std::string(activity_id));
  return it == by_activity_.end() ? nullptr : &allocations_[it->second];
}

void Schedule::append(Allocation allocation) {
  if (!by_activity_.emplace(allocation.activity_id, allocations_.size()).second) {
    throw std::logic_error("activity '" + allocation.activity_id + "' allocated twice");
  }
  allocations_.push_back(std::move(allocation));
}

std::optional<double> Schedule::first_selected(std::string_view activity_id) const {
  auto it = first_selected_.find(std::string(activity_id));
  if (it == first_selected_.end()) return std::nullopt;
  return it->second;
}

void Schedule::mark_selected(const std::string& activity_id, double now) {
  first_selected_.emplace(activity_id, now);
}

double Schedule::makespan() const {
  double out = 0.0;
  for (const Allocation& a : allocations_) out = std::max(out, a.crisp_finish);
  return out;
}

std::set<std::string> unscheduled_activities(const Instance& instance, const Schedule& schedule) {
  std::set<std::string> out;
  for (const Activity& a : instance.activities()) {
    if (!schedule.is_allocated(a.id)) out.insert(a.id);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using ptr = json::json_pointer;

Config read_config(const JsonReader& in) {
  Config c;
  const ptr at("/config");
  if (!in.has(at)) return c;
  in.only_keys(at, {"horizon", "step", "overlap", "significance_epsilon", "max_fixpoint_iters",
                    "comparison_epsilon", "load_balance_lambda", "defuzzification", "seed"});
  const json& obj = in.object(at);
  if (obj.contains("horizon")) c.horizon = in.number(at / "horizon");
  if (obj.contains("step")) c.step = in.number(at / "step");
  if (obj.contains("overlap")) c.overlap = in.number(at / "overlap");
  if (obj.contains("significance_epsilon")) c.significance_epsilon = in.number(at / "significance_epsilon");
  if (obj.contains("max_fixpoint_iters")) {
    c.max_fixpoint_iters = static_cast<int>(in.integer(at / "max_fixpoint_iters"));
  }
  if (obj.contains("comparison_epsilon")) c.comparison_epsilon = in.number(at / "comparison_epsilon");
  if (obj.contains("load_balance_lambda")) c.load_balance_lambda = in.number(at / "load_balance_lambda");
  if (obj.contains("defuzzification")) {
    const std::string d = in.string(at / "defuzzification");
    if (d == "centroid") {
      c.defuzzification = Defuzzification::centroid;
    } else if (d == "peak") {
      c.defuzzification = Defuzzification::peak;
    } else {
      in.fail(at / "defuzzification", "expected \"centroid\" or \"peak\"");
    }
  }
  if (obj.contains("seed")) {
    const long long s = in.integer(at / "seed");
    if (s < 0) in.fail(at / "seed", "seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  return c;
}

std::vector<std::string> read_string_list(const JsonReader& in, const ptr& at) {
  std::vector<std::string> out;
  const json& arr = in.array(at);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(in.string(at / i));
  return out;
}

}  // namespace

Instance load_instance(const std::string& file, std::string_view text) {
  JsonReader in(file, text);
  const ptr root("");
  in.only_keys(root, {"jobs", "activities", "resources", "config"});

  std::vector<Resource> resources;
  const ptr rs("/resources");
  for (std::size_t i = 0; i < in.array(rs).size(); ++i) {
    const ptr at = rs / i;
    in.only_keys(at, {"id", "available_from", "strategic_weight"});
    Resource r;
    r.id = in.string(at / "id");
    if (in.has(at / "available_from")) r.available_from = in.fuzzy(at / "available_from");
    if (in.has(at / "strategic_weight")) r.strategic_weight = in.number(at / "strategic_weight");
    resources.push_back(std::move(r));
  }

  std::vector<Job> jobs;
  const ptr js("/jobs");
  for (std::size_t i = 0; i < in.array(js).size(); ++i) {
    const ptr at = js / i;
    in.only_keys(at, {"id", "activity_ids", "due_date", "importance"});
    Job j;
    j.id = in.string(at / "id");
    j.activity_ids = read_string_list(in, at / "activity_ids");
    j.due_date = in.fuzzy(at / "due_date");
    if (in.has(at / "importance")) j.importance = in.number(at / "importance");
    jobs.push_back(std::move(j));
  }

  std::vector<Activity> activities;
  const ptr as("/activities");
  for (std::size_t i = 0; i < in.array(as).size(); ++i) {
    const ptr at = as / i;
    in.only_keys(at, {"id", "job_id", "index_in_job", "duration", "capable_resources", "duration_overrides"});
    Activity a;
    a.id = in.string(at / "id");
    a.job_id = in.string(at / "job_id");
    a.index_in_job = static_cast<int>(in.integer(at / "index_in_job"));
    a.duration = in.fuzzy(at / "duration");
    a.capable_resources = read_string_list(in, at / "capable_resources");
    if (in.has(at / "duration_overrides")) {
      for (const auto& [key, _] : in.object(at / "duration_overrides").items()) {
        a.duration_overrides.emplace(key, in.fuzzy(at / "duration_overrides" / key));
      }
    }
    activities.push_back(std::move(a));
  }

  return Instance(std::move(jobs), std::move(activities), std::move(resources), read_config(in));
}

Instance read_instance_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SchemaError(path, "", std::nullopt, "cannot open file");
  std::ostringstream buf;
  buf << f.rdbuf();
  return load_instance(path, buf.str());
}

json instance_to_json(const Instance& instance) {
  json out;
  const Config& c = instance.config();
  json cfg = {{"horizon", c.horizon},
              {"significance_epsilon", c.significance_epsilon},
              {"max_fixpoint_iters", c.max_fixpoint_iters},
              {"comparison_epsilon", c.comparison_epsilon},
              {"load_balance_lambda", c.load_balance_lambda},
              {"defuzzification", c.defuzzification == Defuzzification::peak ? "peak" : "centroid"},
              {"seed", c.seed}};
  if (c.step) cfg["step"] = *c.step;
  if (c.overlap) cfg["overlap"] = *c.overlap;
  out["config"] = cfg;

  out["resources"] = json::array();
  for (const Resource& r : instance.resources()) {
    out["resources"].push_back({{"id", r.id},
                                {"available_from", fuzzy_to_json(r.available_from)},
                                {"strategic_weight", r.strategic_weight}});
  }
  out["jobs"] = json::array();
  for (const Job& j : instance.jobs()) {
    out["jobs"].push_back({{"id", j.id},
                           {"activity_ids", j.activity_ids},
                           {"due_date", fuzzy_to_json(j.due_date)},
                           {"importance", j.importance}});
  }
  out["activities"] = json::array();
  for (const Activity& a : instance.activities()) {
    json entry = {{"id", a.id},
                  {"job_id", a.job_id},
                  {"index_in_job", a.index_in_job},
                  {"duration", fuzzy_to_json(a.duration)},
                  {"capable_resources", a.capable_resources}};
    if (!a.duration_overrides.empty()) {
      json overrides = json::object();
      for (const auto& [r, d] : a.duration_overrides) overrides[r] = fuzzy_to_json(d);
      entry["duration_overrides"] = overrides;
    }
    out["activities"].push_back(std::move(entry));
  }
  return out;
}

json allocation_to_json(const Allocation& a) {
  return {{"activity_id", a.activity_id},
          {"resource_id", a.resource_id},
          {"fuzzy_start", fuzzy_to_json(a.fuzzy_start)},
          {"fuzzy_finish", fuzzy_to_json(a.fuzzy_finish)},
          {"crisp_start", a.crisp_start},
          {"crisp_finish", a.crisp_finish},
          {"iteration", a.iteration}};
}

json iteration_to_json(const IterationRecord& r) {
  json priorities = json::array();
  for (const ScoredActivity& s : r.priorities) {
    priorities.push_back({{"activity_id", s.activity_id}, {"score", fuzzy_to_json(s.score)}});
  }
  return {{"iteration", r.iteration},
          {"window_start", r.window_start},
          {"selected", r.selected},
          {"priorities", priorities},
          {"recommendations", r.recommendations},
          {"fixpoint_iterations", r.fixpoint_iterations},
          {"converged", r.converged},
          {"allocated", r.allocated},
          {"deferred", r.deferred},
          {"warnings", r.warnings}};
}

json schedule_to_json(const Schedule& schedule) {
  json allocations = json::array();
  for (const Allocation& a : schedule.allocations()) allocations.push_back(allocation_to_json(a));
  json log = json::array();
  for (const IterationRecord& r : schedule.iteration_log()) log.push_back(iteration_to_json(r));
  return {{"allocations", allocations}, {"iteration_log", log}};
}

}  // namespace fsched
