#include "fuzzysched/rating.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "fuzzysched/errors.hpp"

namespace fsched {

const TriFuzzy* LinguisticVariable::term(std::string_view term_name) const {
  for (const auto& [name, shape] : terms) {
    if (name == term_name) return &shape;
  }
  return nullptr;
}

namespace {

std::size_t term_index(const LinguisticVariable& v, std::string_view name) {
  for (std::size_t i = 0; i < v.terms.size(); ++i) {
    if (v.terms[i].first == name) return i;
  }
  throw ConfigError("variable '" + v.name + "' has no term '" + std::string(name) + "'");
}

void check_variable(const LinguisticVariable& v) {
  if (v.name.empty()) throw ConfigError("variable without a name");
  if (!(v.lo < v.hi)) throw ConfigError("variable '" + v.name + "' has an empty domain");
  if (v.terms.empty()) throw ConfigError("variable '" + v.name + "' has no terms");
  std::set<std::string> names;
  for (const auto& [name, t] : v.terms) {
    if (!names.insert(name).second) throw ConfigError("variable '" + v.name + "' repeats term '" + name + "'");
    if (!t.valid()) throw ConfigError("term '" + v.name + "." + name + "' is not a valid triangle");
    if (t.a < v.lo || t.b > v.hi) {
      throw ConfigError("term '" + v.name + "." + name + "' leaves the variable domain");
    }
  }
}

// True when the union of the term supports is the whole domain.
bool covers_domain(const LinguisticVariable& v) {
  std::vector<std::pair<double, double>> spans;
  for (const auto& [_, t] : v.terms) spans.emplace_back(t.a, t.b);
  std::sort(spans.begin(), spans.end());
  double reach = v.lo;
  for (const auto& [a, b] : spans) {
    if (a > reach) return false;
    reach = std::max(reach, b);
  }
  return reach >= v.hi;
}

}  // namespace

RuleBase::RuleBase(std::vector<LinguisticVariable> inputs, LinguisticVariable output, std::vector<Rule> rules)
    : inputs_(std::move(inputs)), output_(std::move(output)), rules_(std::move(rules)) {
  std::set<std::string> names;
  for (const LinguisticVariable& v : inputs_) {
    check_variable(v);
    if (!names.insert(v.name).second) throw ConfigError("input variable '" + v.name + "' declared twice");
  }
  check_variable(output_);
  if (output_.lo != 0.0 || output_.hi != 1.0) {
    throw ConfigError("output variable '" + output_.name + "' must have domain [0, 1]");
  }
  if (!covers_domain(output_)) {
    throw ConfigError("output terms of '" + output_.name + "' do not cover [0, 1]");
  }
  if (rules_.empty()) throw ConfigError("rule base has no rules");

  for (const Rule& rule : rules_) {
    if (rule.antecedents.empty()) throw ConfigError("rule without antecedents");
    if (!(rule.weight > 0.0 && rule.weight <= 1.0)) throw ConfigError("rule weight must lie in (0, 1]");
    Resolved r;
    r.weight = rule.weight;
    for (const auto& [var, term] : rule.antecedents) {
      auto it = std::find_if(inputs_.begin(), inputs_.end(),
                             [&](const LinguisticVariable& v) { return v.name == var; });
      if (it == inputs_.end()) throw ConfigError("rule references unknown variable '" + var + "'");
      r.antecedents.emplace_back(static_cast<std::size_t>(it - inputs_.begin()), term_index(*it, term));
    }
    if (rule.consequent.first != output_.name) {
      throw ConfigError("rule concludes on '" + rule.consequent.first + "', expected '" + output_.name + "'");
    }
    r.consequent = term_index(output_, rule.consequent.second);
    resolved_.push_back(std::move(r));
  }
}

std::vector<std::string> RuleBase::referenced_inputs() const {
  std::set<std::size_t> used;
  for (const Resolved& r : resolved_) {
    for (const auto& [v, _] : r.antecedents) used.insert(v);
  }
  std::vector<std::string> out;
  for (std::size_t v : used) out.push_back(inputs_[v].name);
  return out;
}

// Aggregation --------------------------------------------------------------

namespace {

// min(height, membership) just inside an interval, so vertical shoulder edges
// at the interval ends do not leak into the interior.
struct Line {
  double slope;
  double intercept;
  double at(double x) const { return slope * x + intercept; }
};

Line clipped_line(const TriFuzzy& t, double h, double x0, double x1) {
  const double p = x0 + 0.25 * (x1 - x0);
  const double q = x0 + 0.75 * (x1 - x0);
  const double fp = std::min(h, t.membership(p));
  const double fq = std::min(h, t.membership(q));
  const double slope = (fq - fp) / (q - p);
  return {slope, fp - slope * p};
}

}  // namespace

TriFuzzy aggregate_shape(const std::vector<TriFuzzy>& terms, const std::vector<double>& heights) {
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (heights[k] > 0.0) active.push_back(k);
  }
  if (active.empty()) return {};

  double lo = terms[active.front()].a;
  double hi = terms[active.front()].b;
  std::vector<double> cuts;
  for (std::size_t k : active) {
    const TriFuzzy& t = terms[k];
    const double h = heights[k];
    lo = std::min(lo, t.a);
    hi = std::max(hi, t.b);
    cuts.insert(cuts.end(), {t.a, t.m, t.b, t.a + h * (t.m - t.a), t.b - h * (t.b - t.m)});
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double area = 0.0;
  double moment = 0.0;
  std::vector<Line> lines;
  std::vector<double> sub;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double x0 = cuts[c];
    const double x1 = cuts[c + 1];
    if (!(x1 > x0)) continue;
    lines.clear();
    for (std::size_t k : active) lines.push_back(clipped_line(terms[k], heights[k], x0, x1));

    // The upper envelope is linear between pairwise crossings.
    sub.assign({x0, x1});
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        const double ds = lines[i].slope - lines[j].slope;
        if (ds == 0.0) continue;
        const double x = (lines[j].intercept - lines[i].intercept) / ds;
        if (x > x0 && x < x1) sub.push_back(x);
      }
    }
    std::sort(sub.begin(), sub.end());
    for (std::size_t s = 0; s + 1 < sub.size(); ++s) {
      const double u0 = sub[s];
      const double u1 = sub[s + 1];
      const double w = u1 - u0;
      if (!(w > 0.0)) continue;
      // Pick the dominant line at the midpoint and integrate it exactly.
      const double mid = 0.5 * (u0 + u1);
      const Line* top = &lines.front();
      for (const Line& l : lines) {
        if (l.at(mid) > top->at(mid)) top = &l;
      }
      const double f0 = std::max(0.0, top->at(u0));
      const double f1 = std::max(0.0, top->at(u1));
      area += 0.5 * w * (f0 + f1);
      moment += w * (u0 * (2.0 * f0 + f1) + u1 * (f0 + 2.0 * f1)) / 6.0;
    }
  }

  double centroid = 0.0;
  if (area > 0.0) {
    centroid = moment / area;
  } else {
    // Only singleton terms fired: height-weighted mean of their positions.
    double wsum = 0.0;
    for (std::size_t k : active) {
      centroid += heights[k] * terms[k].m;
      wsum += heights[k];
    }
    centroid /= wsum;
  }
  centroid = std::clamp(centroid, lo, hi);
  return {lo, centroid, hi};
}

Inference infer_detailed(const RuleBase& rb, const Inputs& inputs) {
  std::vector<double> clamped(rb.inputs_.size(), 0.0);
  std::vector<bool> present(rb.inputs_.size(), false);
  for (const RuleBase::Resolved& r : rb.resolved_) {
    for (const auto& [v, _] : r.antecedents) {
      if (present[v]) continue;
      auto it = inputs.find(rb.inputs_[v].name);
      if (it == inputs.end()) throw ConfigError("missing input for variable '" + rb.inputs_[v].name + "'");
      if (!std::isfinite(it->second)) {
        throw ConfigError("non-finite input for variable '" + rb.inputs_[v].name + "'");
      }
      clamped[v] = rb.inputs_[v].clamp(it->second);
      present[v] = true;
    }
  }

  Inference out;
  out.term_heights.assign(rb.output_.terms.size(), 0.0);
  for (const RuleBase::Resolved& r : rb.resolved_) {
    double strength = 1.0;
    for (const auto& [v, t] : r.antecedents) {
      strength = std::min(strength, rb.inputs_[v].terms[t].second.membership(clamped[v]));
    }
    strength *= r.weight;
    out.term_heights[r.consequent] = std::max(out.term_heights[r.consequent], strength);
  }
  out.fired = std::any_of(out.term_heights.begin(), out.term_heights.end(), [](double h) { return h > 0.0; });
  if (!out.fired) return out;

  std::vector<TriFuzzy> shapes;
  shapes.reserve(rb.output_.terms.size());
  for (const auto& [_, t] : rb.output_.terms) shapes.push_back(t);
  out.score = aggregate_shape(shapes, out.term_heights);
  return out;
}

TriFuzzy infer(const RuleBase& rule_base, const Inputs& inputs) {
  Inference r = infer_detailed(rule_base, inputs);
  if (!r.fired) std::clog << "warning: no rule fired; score defaults to (0, 0, 0)\n";
  return r.score;
}

// Loading ---------------------------------------------------------------------

namespace {

using ptr = json::json_pointer;

LinguisticVariable read_variable(const JsonReader& in, const ptr& at) {
  in.only_keys(at, {"name", "domain", "terms"});
  LinguisticVariable v;
  v.name = in.string(at / "name");
  const json& dom = in.array(at / "domain");
  if (dom.size() != 2) in.fail(at / "domain", "domain must be [lo, hi]");
  v.lo = in.number(at / "domain" / 0);
  v.hi = in.number(at / "domain" / 1);
  if (!(v.lo < v.hi)) in.fail(at / "domain", "domain must satisfy lo < hi");
  const json& terms = in.object(at / "terms");
  if (terms.empty()) in.fail(at / "terms", "a variable needs at least one term");
  for (const auto& [name, _] : terms.items()) {
    const TriFuzzy t = in.fuzzy(at / "terms" / name);
    if (t.a < v.lo || t.b > v.hi) in.fail(at / "terms" / name, "term support leaves the domain");
    v.terms.emplace_back(name, t);
  }
  return v;
}

std::pair<std::string, std::string> read_pair(const JsonReader& in, const ptr& at) {
  const json& p = in.array(at);
  if (p.size() != 2) in.fail(at, "expected [variable, term]");
  return {in.string(at / 0), in.string(at / 1)};
}

std::vector<Rule> read_rules(const JsonReader& in, const ptr& at, const std::vector<LinguisticVariable>& vars,
                             const LinguisticVariable& output) {
  std::vector<Rule> rules;
  const json& arr = in.array(at);
  if (arr.empty()) in.fail(at, "rule list is empty");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const ptr r = at / i;
    in.only_keys(r, {"if", "then", "weight"});
    Rule rule;
    const json& ifs = in.array(r / "if");
    if (ifs.empty()) in.fail(r / "if", "rule needs at least one antecedent");
    for (std::size_t k = 0; k < ifs.size(); ++k) {
      auto [var, term] = read_pair(in, r / "if" / k);
      auto it = std::find_if(vars.begin(), vars.end(), [&](const LinguisticVariable& v) { return v.name == var; });
      if (it == vars.end()) in.fail(r / "if" / k / 0, "unknown variable '" + var + "'");
      if (!it->term(term)) in.fail(r / "if" / k / 1, "variable '" + var + "' has no term '" + term + "'");
      rule.antecedents.emplace_back(std::move(var), std::move(term));
    }
    rule.consequent = read_pair(in, r / "then");
    if (rule.consequent.first != output.name) {
      in.fail(r / "then" / 0, "consequent must name the output variable '" + output.name + "'");
    }
    if (!output.term(rule.consequent.second)) {
      in.fail(r / "then" / 1, "output has no term '" + rule.consequent.second + "'");
    }
    if (in.has(r / "weight")) {
      rule.weight = in.number(r / "weight");
      if (!(rule.weight > 0.0 && rule.weight <= 1.0)) in.fail(r / "weight", "weight must lie in (0, 1]");
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

RuleBase build(const JsonReader& in, const ptr& at, std::vector<LinguisticVariable> vars,
               LinguisticVariable output, std::vector<Rule> rules) {
  try {
    return RuleBase(std::move(vars), std::move(output), std::move(rules));
  } catch (const ConfigError& e) {
    in.fail(at, e.what());
  }
}

}  // namespace

RatingModel load_rating_model(const std::string& file, std::string_view text) {
  JsonReader in(file, text);
  in.only_keys(ptr(""), {"variables", "output", "rules", "resource_rules"});
  std::vector<LinguisticVariable> vars;
  const ptr vs("/variables");
  std::set<std::string> names;
  for (std::size_t i = 0; i < in.array(vs).size(); ++i) {
    vars.push_back(read_variable(in, vs / i));
    if (!names.insert(vars.back().name).second) in.fail(vs / i / "name", "variable declared twice");
  }
  LinguisticVariable output = read_variable(in, ptr("/output"));
  if (output.lo != 0.0 || output.hi != 1.0) in.fail(ptr("/output/domain"), "output domain must be [0, 1]");
  if (!covers_domain(output)) in.fail(ptr("/output/terms"), "output terms must cover [0, 1]");

  RatingModel model{build(in, ptr("/rules"), vars, output, read_rules(in, ptr("/rules"), vars, output)),
                    std::nullopt};
  if (in.has(ptr("/resource_rules"))) {
    model.resource = build(in, ptr("/resource_rules"), vars, output,
                           read_rules(in, ptr("/resource_rules"), vars, output));
  }
  return model;
}

RatingModel read_rating_model_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SchemaError(path, "", std::nullopt, "cannot open file");
  std::ostringstream buf;
  buf << f.rdbuf();
  return load_rating_model(path, buf.str());
}

const RatingModel& default_rating_model() {
  static const RatingModel model = load_rating_model("<default_rules.json>", default_rules_text());
  return model;
}

json rule_base_to_json(const RuleBase& rb) {
  auto var_json = [](const LinguisticVariable& v) {
    json terms = json::object();
    for (const auto& [name, t] : v.terms) terms[name] = fuzzy_to_json(t);
    return json{{"name", v.name}, {"domain", {v.lo, v.hi}}, {"terms", terms}};
  };
  json vars = json::array();
  for (const LinguisticVariable& v : rb.inputs()) vars.push_back(var_json(v));
  json rules = json::array();
  for (const Rule& r : rb.rules()) {
    json ifs = json::array();
    for (const auto& [v, t] : r.antecedents) ifs.push_back({v, t});
    rules.push_back({{"if", ifs}, {"then", {r.consequent.first, r.consequent.second}}, {"weight", r.weight}});
  }
  return {{"variables", vars}, {"output", var_json(rb.output())}, {"rules", rules}};
}

// Criteria and prioritisation ----------------------------------------------------

Inputs Criteria::to_inputs() const {
  return {{std::string(var::urgency), urgency},
          {std::string(var::importance), job_importance},
          {std::string(var::waiting_time), waiting_time},
          {std::string(var::resource_fit), resource_fit},
          {std::string(var::strategic_weight), strategic_weight}};
}

Criteria compute_criteria(const Activity& activity, const Instance& instance, const Arrangement& arrangement,
                          const Schedule& schedule, double now, const Resource* resource) {
  const Defuzzification method = instance.config().defuzzification;
  Criteria c;
  c.urgency = defuzz(arrangement.at(activity.id).latest_start, method) - now;
  if (const Job* job = instance.find_job(activity.job_id)) c.job_importance = job->importance;
  if (auto first = schedule.first_selected(activity.id)) c.waiting_time = std::max(0.0, now - *first);

  if (resource) {
    const double here = defuzz(activity.duration_on(resource->id), method);
    const double best = defuzz(optimistic_duration(activity), method);
    c.resource_fit = here > 0.0 ? std::clamp(best / here, 0.0, 1.0) : 1.0;
    c.strategic_weight = resource->strategic_weight;
  } else {
    c.resource_fit = 1.0;
    c.strategic_weight = 0.0;
    for (const std::string& rid : activity.capable_resources) {
      if (const Resource* r = instance.find_resource(rid)) {
        c.strategic_weight = std::max(c.strategic_weight, r->strategic_weight);
      }
    }
  }
  return c;
}

std::vector<Prioritized> prioritize_jobs(const std::vector<std::string>& activities, const Instance& instance,
                                         const Arrangement& arrangement, const Schedule& schedule,
                                         const RuleBase& rule_base, double now, Exec exec,
                                         std::vector<std::string>* warnings) {
  const long n = static_cast<long>(activities.size());
  std::vector<Prioritized> out(activities.size());
  std::vector<char> fired(activities.size(), 1);
  std::vector<std::string> errors(activities.size());

#pragma omp parallel for schedule(static) if (exec == Exec::parallel && n > 32)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k].activity_id = activities[k];
    try {
      const Activity* a = instance.find_activity(activities[k]);
      if (!a) throw ConfigError("unknown activity '" + activities[k] + "'");
      const Inference r =
          infer_detailed(rule_base, compute_criteria(*a, instance, arrangement, schedule, now).to_inputs());
      out[k].score = r.score;
      fired[k] = r.fired ? 1 : 0;
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw ConfigError(e);
  }
  if (warnings) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (!fired[k]) warnings->push_back("no job-level rule fired for '" + out[k].activity_id + "'");
    }
  }

  const double eps = instance.config().comparison_epsilon;
  std::stable_sort(out.begin(), out.end(), [eps](const Prioritized& x, const Prioritized& y) {
    return compare(x.score, y.score, eps) > 0;
  });
  for (std::size_t k = 1; k < out.size(); ++k) {
    out[k].tier = out[k - 1].tier + (compare(out[k - 1].score, out[k].score, eps) != 0 ? 1 : 0);
  }
  return out;
}

}  // namespace fsched
