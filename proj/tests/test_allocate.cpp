#include <gtest/gtest.h>

#include "fuzzysched/allocate.hpp"
#include "fuzzysched/baseline.hpp"
#include "fuzzysched/errors.hpp"
#include "fuzzysched/generate.hpp"
#include "fuzzysched/retrograde.hpp"
#include "support.hpp"

using namespace fsched;
using test::Builder;
using test::C;

namespace {

RecommendationSet recs(std::vector<std::pair<std::string, std::vector<std::string>>> lists) {
  RecommendationSet r;
  for (auto& [res, ids] : lists) {
    ResourceList l{res, {}};
    for (auto& id : ids) {
      ListEntry e;
      e.activity_id = id;
      l.entries.push_back(e);
    }
    r.lists.push_back(std::move(l));
  }
  return r;
}

Instance chain_on_two() {
  return Builder().resource("R1").resource("R2").job("J1", C(20), {{{2, 3, 4}, {"R1"}}, {C(1), {"R2"}}}).build();
}

}  // namespace

TEST(Commit, FreeResource) {
  const Instance inst = chain_on_two();
  Schedule s;
  const CommitResult r = commit(recs({{"R1", {"J1.1"}}}), s, inst, 1);
  EXPECT_EQ(r.allocated, (std::vector<std::string>{"J1.1"}));
  const Allocation* a = s.find("J1.1");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->fuzzy_start, (TriFuzzy{0, 0, 0}));
  EXPECT_EQ(a->fuzzy_finish, (TriFuzzy{2, 3, 4}));
  EXPECT_DOUBLE_EQ(a->crisp_finish, 3.0);
  EXPECT_EQ(a->iteration, 1);
}

TEST(Commit, StartsAfterPredecessor) {
  const Instance inst = chain_on_two();
  Schedule s;
  commit(recs({{"R1", {"J1.1"}}}), s, inst, 1);
  commit(recs({{"R2", {"J1.2"}}}), s, inst, 2);
  EXPECT_EQ(s.find("J1.2")->fuzzy_start, (TriFuzzy{2, 3, 4}));
  EXPECT_EQ(s.find("J1.2")->fuzzy_finish, (TriFuzzy{3, 4, 5}));
}

TEST(Commit, SkipsWhenPredecessorMissing) {
  const Instance inst = chain_on_two();
  Schedule s;
  const CommitResult r = commit(recs({{"R2", {"J1.2"}}}), s, inst, 1);
  EXPECT_TRUE(r.allocated.empty());
  EXPECT_EQ(r.deferred, (std::vector<std::string>{"J1.2"}));
  EXPECT_FALSE(s.is_allocated("J1.2"));
}

TEST(Commit, SameResourceSequential) {
  const Instance inst = Builder()
                            .resource("R1", {1, 1, 1})
                            .job("A", C(20), {{C(2), {"R1"}}})
                            .job("B", C(20), {{{1, 2, 3}, {"R1"}}})
                            .build();
  Schedule s;
  commit(recs({{"R1", {"A.1", "B.1"}}}), s, inst);
  EXPECT_EQ(s.find("A.1")->fuzzy_start, C(1));
  EXPECT_EQ(s.find("B.1")->fuzzy_start, C(3));
  EXPECT_EQ(s.find("B.1")->fuzzy_finish, (TriFuzzy{4, 5, 6}));
}

TEST(Commit, WarnsAfterLatestStart) {
  const Instance inst = Builder().resource("R1", C(5)).job("A", C(6), {{C(3), {"R1"}}}).build();
  const Arrangement arr = backward_pass(inst);
  Schedule s;
  const CommitResult r = commit(recs({{"R1", {"A.1"}}}), s, inst, 1, &arr);
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Run, Empty) {
  const Schedule s = run(Instance(), default_rating_model());
  EXPECT_TRUE(s.allocations().empty());
  EXPECT_TRUE(s.iteration_log().empty());
}

TEST(Run, SingleActivity) {
  const Instance inst = Builder().resource("R1").job("J1", C(10), {{C(4), {"R1"}}}).build();
  const Schedule s = run(inst, default_rating_model());
  ASSERT_EQ(s.allocations().size(), 1u);
  EXPECT_EQ(s.allocations()[0].activity_id, "J1.1");
  EXPECT_EQ(s.allocations()[0].crisp_finish, 4.0);
  EXPECT_EQ(s.iteration_log().size(), 1u);
}

TEST(Run, SmallCrispAgainstOracle) {
  const Instance inst = Builder()
                            .resource("R1")
                            .resource("R2")
                            .job("J1", C(12), {{C(3), {"R1"}}, {C(2), {"R2"}}})
                            .job("J2", C(10), {{C(2), {"R2"}}, {C(4), {"R1"}}})
                            .job("J3", C(15), {{C(3), {"R1", "R2"}}})
                            .build();
  const Schedule s = run(inst, default_rating_model());
  EXPECT_TRUE(test::check_schedule(inst, s).empty()) << test::join(test::check_schedule(inst, s));
  const double best = brute_force(inst).makespan;
  EXPECT_GE(s.makespan(), best);
  EXPECT_LE(s.makespan(), 1.5 * best);
}

TEST(Run, StallOnDeadCapability) {
  // Validation would reject the dangling resource; run is called anyway.
  const Instance inst = Builder().resource("R1").job("J1", C(10), {{C(4), {"R9"}}}).build();
  ASSERT_FALSE(validate(inst).empty());
  EXPECT_THROW(run(inst, default_rating_model()), StallError);
}

TEST(Property, FeasibleCompleteDeterministic) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GenOptions g;
    g.seed = seed;
    g.jobs = 2 + static_cast<int>(seed % 6);
    g.activities_per_job = 4;
    g.vary_activities = true;
    g.resources = 1 + static_cast<int>(seed % 5);
    g.spread = seed % 2 ? 0.3 : 0.0;
    const Instance inst = generate_instance(g);
    ASSERT_TRUE(validate(inst).empty());
    const Schedule s = run(inst, default_rating_model());
    const auto problems = test::check_schedule(inst, s);
    EXPECT_TRUE(problems.empty()) << "seed " << seed << ": " << test::join(problems);

    // Unscheduled set shrinks with every logged iteration.
    std::size_t done = 0;
    for (const auto& rec : s.iteration_log()) {
      EXPECT_FALSE(rec.allocated.empty());
      done += rec.allocated.size();
    }
    EXPECT_EQ(done, inst.activities().size());

    const Schedule again = run(inst, default_rating_model(), {Exec::serial});
    EXPECT_EQ(schedule_to_json(s).dump(), schedule_to_json(again).dump());
  }
}

TEST(Property, PeakDefuzzificationAlsoFeasible) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenOptions g;
    g.seed = seed;
    g.jobs = 5;
    g.activities_per_job = 3;
    g.resources = 3;
    g.spread = 0.4;
    g.config.defuzzification = Defuzzification::peak;
    const Instance inst = generate_instance(g);
    const Schedule s = run(inst, default_rating_model());
    EXPECT_TRUE(test::check_schedule(inst, s).empty()) << test::join(test::check_schedule(inst, s));
  }
}
