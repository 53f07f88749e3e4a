#include <gtest/gtest.h>

#include "fuzzysched/baseline.hpp"
#include "fuzzysched/generate.hpp"
#include "fuzzysched/retrograde.hpp"
#include "support.hpp"

using namespace fsched;
using test::Builder;
using test::C;

TEST(BackwardPass, CrispChain) {
  const Instance inst = Builder().resource("R1").job("J1", C(10), {{C(3), {"R1"}}, {C(2), {"R1"}}}).build();
  const Arrangement arr = backward_pass(inst);
  EXPECT_EQ(arr.at("J1.1").latest_start, C(5));
  EXPECT_EQ(arr.at("J1.2").latest_start, C(8));
  EXPECT_EQ(arr.at("J1.2").latest_finish, C(10));
  EXPECT_EQ(arr.at("J1.1").latest_finish, C(8));
}

TEST(BackwardPass, FuzzyDuration) {
  const Instance inst = Builder().resource("R1").job("J1", C(10), {{{2, 3, 4}, {"R1"}}}).build();
  EXPECT_EQ(backward_pass(inst).at("J1.1").latest_start, sub(C(10), {2, 3, 4}));
  EXPECT_EQ(backward_pass(inst).at("J1.1").latest_start, (TriFuzzy{6, 7, 8}));
}

TEST(BackwardPass, Empty) { EXPECT_TRUE(backward_pass(Instance()).empty()); }

TEST(BackwardPass, OptimisticDurationUsesFastestResource) {
  Builder b;
  b.resource("R1").resource("R2").job("J1", C(10), {{C(5), {"R1", "R2"}}});
  b.activities[0].duration_overrides["R2"] = C(2);
  EXPECT_EQ(backward_pass(b.build()).at("J1.1").latest_start, C(8));
}

TEST(BackwardPass, NegativeSlackKept) {
  const Instance inst = Builder().resource("R1").job("J1", C(5), {{C(7), {"R1"}}}).build();
  EXPECT_EQ(backward_pass(inst).at("J1.1").latest_start, C(-2));
}

TEST(RelativeOrder, Examples) {
  const Instance inst =
      Builder().resource("R1").job("B", C(13), {{C(5), {"R1"}}}).job("A", C(10), {{C(5), {"R1"}}}).build();
  EXPECT_EQ(relative_order(backward_pass(inst)), (std::vector<std::string>{"A.1", "B.1"}));

  const Instance tie =
      Builder().resource("R1").job("B", C(10), {{C(5), {"R1"}}}).job("A", C(10), {{C(5), {"R1"}}}).build();
  EXPECT_EQ(relative_order(backward_pass(tie)), (std::vector<std::string>{"A.1", "B.1"}));

  const Instance one = Builder().resource("R1").job("A", C(10), {{C(5), {"R1"}}}).build();
  EXPECT_EQ(relative_order(backward_pass(one)), (std::vector<std::string>{"A.1"}));
}

TEST(Property, CrispMatchesChainRecursion) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenOptions g;
    g.seed = seed;
    g.jobs = 1 + static_cast<int>(seed % 10);
    g.activities_per_job = 5;
    g.vary_activities = true;
    g.resources = 3;
    const Instance inst = generate_instance(g);
    const Arrangement arr = backward_pass(inst);
    for (const Job& job : inst.jobs()) {
      std::vector<double> d;
      for (const auto& id : job.activity_ids) {
        const Activity& a = *inst.find_activity(id);
        double best = a.duration_on(a.capable_resources[0]).m;
        for (const auto& r : a.capable_resources) best = std::min(best, a.duration_on(r).m);
        d.push_back(best);
      }
      const auto want = test::chain_backward(job.activity_ids, d, job.due_date.m);
      for (const auto& [id, ls] : want) {
        ASSERT_TRUE(arr.at(id).latest_start.is_crisp());
        ASSERT_NEAR(arr.at(id).latest_start.m, ls, 1e-9);
      }
    }
    const auto cpm = cpm_backward(inst);
    for (const auto& e : arr.entries()) EXPECT_NEAR(e.latest_start.m, cpm.at(e.activity_id), 1e-9);
  }
}

TEST(Property, SpreadGrowsBackwardAlongChain) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenOptions g;
    g.seed = seed;
    g.jobs = 4;
    g.activities_per_job = 5;
    g.spread = 0.4;
    g.fuzzy_fraction = 0.7;
    const Instance inst = generate_instance(g);
    const Arrangement arr = backward_pass(inst);
    for (const Job& job : inst.jobs()) {
      for (std::size_t k = job.activity_ids.size(); k-- > 1;) {
        EXPECT_GE(arr.at(job.activity_ids[k - 1]).latest_start.width() + 1e-9,
                  arr.at(job.activity_ids[k]).latest_start.width());
      }
    }
  }
}

TEST(Property, CompleteAndDeterministicAcrossExec) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenOptions g;
    g.seed = seed;
    g.jobs = 80;
    g.activities_per_job = 4;
    g.spread = 0.3;
    const Instance inst = generate_instance(g);
    const Arrangement par = backward_pass(inst, Exec::parallel);
    const Arrangement ser = backward_pass(inst, Exec::serial);
    ASSERT_EQ(par.size(), inst.activities().size());
    for (const Activity& a : inst.activities()) EXPECT_TRUE(par.contains(a.id));
    EXPECT_EQ(arrangement_to_json(par), arrangement_to_json(ser));
  }
}
