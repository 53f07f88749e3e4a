#include <gtest/gtest.h>

#include "fuzzysched/errors.hpp"
#include "fuzzysched/rating.hpp"
#include "fuzzysched/retrograde.hpp"
#include "support.hpp"

using namespace fsched;
using test::Builder;
using test::C;

namespace {

LinguisticVariable priority_lo_hi() {
  return {"priority", 0, 1, {{"low", {0, 0.25, 0.5}}, {"high", {0.5, 0.75, 1}}}};
}

RuleBase single_rule() {
  LinguisticVariable u{"urgency", -20, 60, {{"high", {-20, -20, 10}}, {"low", {0, 60, 60}}}};
  return RuleBase({u}, priority_lo_hi(), {Rule{{{"urgency", "high"}}, {"priority", "high"}, 1.0}});
}

// u fires 'a' at 0.5, v fires 'b' at 1.
RuleBase two_rules() {
  LinguisticVariable u{"u", 0, 10, {{"a", {0, 0, 10}}}};
  LinguisticVariable v{"v", 0, 10, {{"b", {0, 5, 10}}}};
  return RuleBase({u, v}, priority_lo_hi(),
                  {Rule{{{"u", "a"}}, {"priority", "low"}, 1.0}, Rule{{{"v", "b"}}, {"priority", "high"}, 1.0}});
}

const char* kRules = R"({
  "variables": [
    {"name": "urgency", "domain": [0, 10], "terms": {"high": [0, 0, 10]}}
  ],
  "output": {"name": "priority", "domain": [0, 1], "terms": {"all": [0, 0.5, 1]}},
  "rules": [
    {"if": [["urgency", "high"]], "then": ["priority", "all"], "weight": 1}
  ]
})";

}  // namespace

TEST(Infer, FullFiringReproducesConsequent) {
  const Inference r = infer_detailed(single_rule(), {{"urgency", -20.0}});
  ASSERT_TRUE(r.fired);
  EXPECT_NEAR(r.score.a, 0.5, 1e-12);
  EXPECT_NEAR(r.score.m, defuzz_centroid({0.5, 0.75, 1}), 1e-12);
  EXPECT_NEAR(r.score.b, 1.0, 1e-12);
}

TEST(Infer, NothingFires) {
  const Inference r = infer_detailed(single_rule(), {{"urgency", 40.0}});
  EXPECT_FALSE(r.fired);
  EXPECT_EQ(r.score, (TriFuzzy{0, 0, 0}));
}

TEST(Infer, TwoClippedRules) {
  const RuleBase rb = two_rules();
  const Inputs in{{"u", 5.0}, {"v", 5.0}};
  const Inference r = infer_detailed(rb, in);
  // Clipped 'low' trapezoid: area 3/16 at 1/4; full 'high': area 1/4 at 3/4.
  EXPECT_NEAR(r.score.m, 15.0 / 28.0, 1e-12);
  EXPECT_NEAR(r.score.m, test::grid_mamdani_centroid(rb, in), 1e-3);
  EXPECT_EQ(r.score.a, 0.0);
  EXPECT_EQ(r.score.b, 1.0);
  ASSERT_EQ(r.term_heights.size(), 2u);
  EXPECT_DOUBLE_EQ(r.term_heights[0], 0.5);
  EXPECT_DOUBLE_EQ(r.term_heights[1], 1.0);
}

TEST(Infer, MissingInputIsConfigError) {
  EXPECT_THROW(infer_detailed(two_rules(), {{"u", 1.0}}), ConfigError);
}

TEST(Infer, WeightScalesStrength) {
  LinguisticVariable u{"u", 0, 1, {{"on", {0, 1, 1}}}};
  const RuleBase rb({u}, priority_lo_hi(), {Rule{{{"u", "on"}}, {"priority", "high"}, 0.4}});
  const Inference r = infer_detailed(rb, {{"u", 1.0}});
  EXPECT_DOUBLE_EQ(r.term_heights[1], 0.4);
}

TEST(Property, AgreesWithGridOracle) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    const RuleBase rb = test::random_rule_base(rng);
    const Inputs in = test::random_inputs(rng, rb);
    ASSERT_NEAR(infer_detailed(rb, in).score.m, test::grid_mamdani_centroid(rb, in), 1e-3) << "case " << i;
  }
}

TEST(Property, ScoresStayInOutputDomain) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 300; ++i) {
    const RuleBase rb = test::random_rule_base(rng);
    const Inputs in = test::random_inputs(rng, rb);
    const TriFuzzy s = infer_detailed(rb, in).score;
    EXPECT_TRUE(s.valid());
    EXPECT_GE(s.a, 0.0);
    EXPECT_LE(s.b, 1.0);
    EXPECT_EQ(infer_detailed(rb, in).score, s);
  }
}

TEST(Property, DefaultRuleBaseMonotoneInUrgency) {
  const RuleBase& rb = default_rating_model().job;
  for (int i = 0; i < 10; ++i) {
    for (int w = 0; w < 10; ++w) {
      double previous = -1.0;
      // Walk from most slack to least slack.
      for (int u = 9; u >= 0; --u) {
        const Inputs in{{std::string(var::urgency), -20.0 + u * (80.0 / 9.0)},
                        {std::string(var::importance), i / 9.0},
                        {std::string(var::waiting_time), w * (100.0 / 9.0)}};
        const double score = defuzz_centroid(infer_detailed(rb, in).score);
        EXPECT_GE(score + 1e-12, previous) << "u=" << u << " i=" << i << " w=" << w;
        previous = score;
      }
    }
  }
}

TEST(Property, SingletonTermsGiveLookupTable) {
  LinguisticVariable u{"u", 0, 2, {{"zero", C(0)}, {"one", C(1)}, {"two", C(2)}}};
  LinguisticVariable out{"priority",
                         0,
                         1,
                         {{"cover", {0, 0.5, 1}}, {"s1", C(0.1)}, {"s2", C(0.6)}, {"s3", C(0.9)}}};
  const RuleBase rb({u}, out,
                    {Rule{{{"u", "zero"}}, {"priority", "s3"}, 1.0}, Rule{{{"u", "one"}}, {"priority", "s1"}, 1.0},
                     Rule{{{"u", "two"}}, {"priority", "s2"}, 1.0}});
  const std::map<double, double> table{{0.0, 0.9}, {1.0, 0.1}, {2.0, 0.6}};
  for (const auto& [x, y] : table) {
    const Inference r = infer_detailed(rb, {{"u", x}});
    EXPECT_TRUE(r.fired);
    EXPECT_DOUBLE_EQ(r.score.m, y) << x;
  }
  EXPECT_FALSE(infer_detailed(rb, {{"u", 0.5}}).fired);
}

TEST(RuleBase, StructuralChecks) {
  LinguisticVariable u{"u", 0, 1, {{"on", {0, 1, 1}}}};
  LinguisticVariable gap{"priority", 0, 1, {{"low", {0, 0.2, 0.4}}, {"high", {0.6, 0.8, 1}}}};
  EXPECT_THROW(RuleBase({u}, gap, {Rule{{{"u", "on"}}, {"priority", "low"}, 1}}), ConfigError);
  EXPECT_THROW(RuleBase({u}, priority_lo_hi(), {}), ConfigError);
  EXPECT_THROW(RuleBase({u}, priority_lo_hi(), {Rule{{{"u", "off"}}, {"priority", "low"}, 1}}), ConfigError);
  EXPECT_THROW(RuleBase({u}, priority_lo_hi(), {Rule{{{"u", "on"}}, {"priority", "low"}, 0}}), ConfigError);
  LinguisticVariable wide{"u", 0, 1, {{"on", {0, 1, 2}}}};
  EXPECT_THROW(RuleBase({wide}, priority_lo_hi(), {Rule{{{"u", "on"}}, {"priority", "low"}, 1}}), ConfigError);
}

TEST(RuleFile, Loads) {
  const RatingModel m = load_rating_model("r.json", kRules);
  EXPECT_EQ(m.job.rules().size(), 1u);
  EXPECT_FALSE(m.resource.has_value());
}

TEST(RuleFile, UnknownTermReportsLine) {
  std::string text = kRules;
  text.replace(text.find("[\"urgency\", \"high\"]"), 19, "[\"urgency\", \"hgh\"]");
  try {
    load_rating_model("r.json", text);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.pointer(), "/rules/0/if/0/1");
    EXPECT_EQ(e.line(), 7);
  }
}

TEST(RuleFile, UncoveredOutputReportsLine) {
  std::string text = kRules;
  text.replace(text.find("[0, 0.5, 1]"), 11, "[0, 0.5, 0.9]");
  try {
    load_rating_model("r.json", text);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.pointer(), "/output/terms");
    EXPECT_EQ(e.line(), 5);
  }
}

TEST(RuleFile, DefaultRoundTrips) {
  const RatingModel& m = default_rating_model();
  ASSERT_TRUE(m.resource.has_value());
  EXPECT_EQ(m.job.rules().size(), 12u);
  const json again = rule_base_to_json(load_rating_model("d", default_rules_text()).job);
  EXPECT_EQ(again, rule_base_to_json(m.job));
}

TEST(Criteria, Examples) {
  const Instance inst = Builder()
                            .resource("R1", {}, 0.3)
                            .resource("R2", {}, 0.8)
                            .job("J1", C(10), {{{2, 3, 4}, {"R1", "R2"}}}, 0.9)
                            .job("J2", C(5), {{C(2), {"R1"}}})
                            .build();
  const Arrangement arr = backward_pass(inst);
  const Criteria c = compute_criteria(*inst.find_activity("J1.1"), inst, arr, Schedule(), 0.0);
  EXPECT_DOUBLE_EQ(c.urgency, 7.0);
  EXPECT_EQ(c.job_importance, 0.9);
  EXPECT_EQ(c.waiting_time, 0.0);
  EXPECT_EQ(c.strategic_weight, 0.8);

  const Criteria late = compute_criteria(*inst.find_activity("J2.1"), inst, arr, Schedule(), 10.0);
  EXPECT_DOUBLE_EQ(late.urgency, -7.0);

  Schedule s;
  s.mark_selected("J2.1", 4.0);
  EXPECT_DOUBLE_EQ(compute_criteria(*inst.find_activity("J2.1"), inst, arr, s, 10.0).waiting_time, 6.0);
}

TEST(Criteria, ResourceFit) {
  Builder b;
  b.resource("R1").resource("R2", {}, 1.0).job("J1", C(20), {{C(2), {"R1", "R2"}}});
  b.activities[0].duration_overrides["R2"] = C(4);
  const Instance inst = b.build();
  const Arrangement arr = backward_pass(inst);
  const Activity& a = inst.activities()[0];
  EXPECT_DOUBLE_EQ(compute_criteria(a, inst, arr, Schedule(), 0, inst.find_resource("R1")).resource_fit, 1.0);
  const Criteria on2 = compute_criteria(a, inst, arr, Schedule(), 0, inst.find_resource("R2"));
  EXPECT_DOUBLE_EQ(on2.resource_fit, 0.5);
  EXPECT_EQ(on2.strategic_weight, 1.0);
}

TEST(Prioritize, ImportanceRaisesScore) {
  const Instance inst = Builder()
                            .resource("R1")
                            .job("LOW", C(10), {{C(3), {"R1"}}}, 0.1)
                            .job("HIGH", C(10), {{C(3), {"R1"}}}, 0.9)
                            .build();
  const Arrangement arr = backward_pass(inst);
  const auto out = prioritize_jobs({"LOW.1", "HIGH.1"}, inst, arr, Schedule(), default_rating_model().job, 0.0);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].activity_id, "HIGH.1");
  EXPECT_GT(defuzz_centroid(out[0].score), defuzz_centroid(out[1].score));
  EXPECT_LT(out[0].tier, out[1].tier);
}

TEST(Prioritize, EmptyAndTies) {
  const Instance inst =
      Builder().resource("R1").job("A", C(10), {{C(3), {"R1"}}}).job("B", C(10), {{C(3), {"R1"}}}).build();
  const Arrangement arr = backward_pass(inst);
  EXPECT_TRUE(prioritize_jobs({}, inst, arr, Schedule(), default_rating_model().job, 0.0).empty());
  const auto out = prioritize_jobs({"B.1", "A.1"}, inst, arr, Schedule(), default_rating_model().job, 0.0);
  EXPECT_EQ(out[0].score, out[1].score);
  EXPECT_EQ(out[0].tier, out[1].tier);
  EXPECT_EQ(out[0].activity_id, "B.1");
}

TEST(Prioritize, SerialMatchesParallel) {
  Builder b;
  b.resource("R1");
  for (int j = 0; j < 100; ++j) {
    b.job("J" + std::to_string(j), C(5.0 + j % 37), {{C(1.0 + j % 5), {"R1"}}}, (j % 11) / 10.0);
  }
  const Instance inst = b.build();
  const Arrangement arr = backward_pass(inst);
  std::vector<std::string> ids;
  for (const auto& a : inst.activities()) ids.push_back(a.id);
  const auto& rb = default_rating_model().job;
  const auto p = prioritize_jobs(ids, inst, arr, Schedule(), rb, 3.0, Exec::parallel);
  const auto s = prioritize_jobs(ids, inst, arr, Schedule(), rb, 3.0, Exec::serial);
  ASSERT_EQ(p.size(), s.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(p[i].activity_id, s[i].activity_id);
    EXPECT_EQ(p[i].score, s[i].score);
    EXPECT_EQ(p[i].tier, s[i].tier);
  }
}
