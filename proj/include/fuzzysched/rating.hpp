#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzysched/exec.hpp"
#include "fuzzysched/fuzzy.hpp"
#include "fuzzysched/model.hpp"
#include "fuzzysched/retrograde.hpp"

namespace fsched {

struct LinguisticVariable {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::pair<std::string, TriFuzzy>> terms;

  const TriFuzzy* term(std::string_view term_name) const;
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

struct Rule {
  std::vector<std::pair<std::string, std::string>> antecedents;  // (variable, term)
  std::pair<std::string, std::string> consequent;                 // (output variable, term)
  double weight = 1.0;
};

using Inputs = std::map<std::string, double, std::less<>>;

struct Inference {
  TriFuzzy score;
  bool fired = false;
  /// Clip height of each output term after max-aggregation over rules.
  std::vector<double> term_heights;
};

class RuleBase;
Inference infer_detailed(const RuleBase& rule_base, const Inputs& inputs);

/// Mamdani rule base with a single output variable over [0, 1].
///
/// The constructor checks every structural invariant and resolves names to
/// indices once; a RuleBase that exists is always evaluable given inputs for
/// the variables it references.
class RuleBase {
 public:
  /// Throws ConfigError on any violated invariant.
  RuleBase(std::vector<LinguisticVariable> inputs, LinguisticVariable output, std::vector<Rule> rules);

  const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
  const LinguisticVariable& output() const { return output_; }
  const std::vector<Rule>& rules() const { return rules_; }

  /// Names of the input variables referenced by at least one rule.
  std::vector<std::string> referenced_inputs() const;

 private:
  friend Inference infer_detailed(const RuleBase&, const Inputs&);

  struct Resolved {
    std::vector<std::pair<std::size_t, std::size_t>> antecedents;  // (input, term)
    std::size_t consequent = 0;
    double weight = 1.0;
  };

  std::vector<LinguisticVariable> inputs_;
  LinguisticVariable output_;
  std::vector<Rule> rules_;
  std::vector<Resolved> resolved_;
};

/// Min for AND, product with the rule weight, max aggregation, centroid of
/// the aggregate. The result is (min support, centroid, max support) of the
/// aggregate; (0, 0, 0) when no rule fires. Throws ConfigError when an input
/// referenced by a rule is missing.
Inference infer_detailed(const RuleBase& rule_base, const Inputs& inputs);

/// `infer_detailed` that prints a warning to std::clog when nothing fires.
TriFuzzy infer(const RuleBase& rule_base, const Inputs& inputs);

/// Exact centroid and support of max_k min(height_k, term_k), the aggregate
/// output set. Singleton terms contribute only when the aggregate has zero
/// area, as a height-weighted mean of their positions.
TriFuzzy aggregate_shape(const std::vector<TriFuzzy>& terms, const std::vector<double>& heights);

/// Job-level and resource-level rule bases loaded from one file.
struct RatingModel {
  RuleBase job;
  std::optional<RuleBase> resource;
};

RatingModel load_rating_model(const std::string& file, std::string_view text);
RatingModel read_rating_model_file(const std::string& path);
/// The shipped default, compiled in from data/default_rules.json.
const RatingModel& default_rating_model();
std::string_view default_rules_text();

// Criteria ------------------------------------------------------------------

namespace var {
inline constexpr std::string_view urgency = "urgency";
inline constexpr std::string_view importance = "importance";
inline constexpr std::string_view waiting_time = "waiting_time";
inline constexpr std::string_view resource_fit = "resource_fit";
inline constexpr std::string_view strategic_weight = "strategic_weight";
inline constexpr std::string_view job_priority = "job_priority";
}  // namespace var

struct Criteria {
  double urgency = 0.0;           // defuzzified latest start minus now; negative means late
  double job_importance = 0.0;
  double waiting_time = 0.0;      // now minus first selection time
  double resource_fit = 1.0;      // fastest capable duration / duration here
  double strategic_weight = 0.0;

  Inputs to_inputs() const;
};

/// Without `resource`, resource_fit is 1 and strategic_weight is the best
/// weight among capable resources.
Criteria compute_criteria(const Activity& activity, const Instance& instance, const Arrangement& arrangement,
                          const Schedule& schedule, double now, const Resource* resource = nullptr);

struct Prioritized {
  std::string activity_id;
  TriFuzzy score;
  int tier = 0;  // entries with equal tier compare equal
};

/// Scores every activity with the job-level rule base and sorts descending by
/// fuzzy compare (stable, so equal scores keep input order).
std::vector<Prioritized> prioritize_jobs(const std::vector<std::string>& activities, const Instance& instance,
                                         const Arrangement& arrangement, const Schedule& schedule,
                                         const RuleBase& rule_base, double now, Exec exec = Exec::parallel,
                                         std::vector<std::string>* warnings = nullptr);

json rule_base_to_json(const RuleBase& rule_base);

}  // namespace fsched
