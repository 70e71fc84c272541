#include "iface/awareness.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "iface/model.hpp"
#include "iface/uii.hpp"
#include "test_support.hpp"

namespace {

using iface::SensorSet;
using iface::model::build_chain_example;
using iface::model::Instance;
using iface::testsupport::random_instance;
using namespace iface::awareness;

std::set<std::uint64_t> codes(const std::vector<SensorSet>& masks) {
  std::set<std::uint64_t> out;
  for (const auto& m : masks) out.insert(m.decimal_code().value());
  return out;
}

TEST(SReduced, ChainDropsTheHeadingSensor) {
  const Instance inst = build_chain_example();
  iface::uii::GammaOracle oracle(inst.system, inst.pool);
  const SensorSet reduced = compute_s_reduced(oracle, inst.task);
  EXPECT_EQ(reduced, SensorSet::from_ids({0, 1, 2}));
}

TEST(SReduced, AlwaysContainsTheTask) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = random_instance(rng, 6, 7);
    iface::uii::GammaOracle oracle(inst.system, inst.pool);
    const SensorSet reduced = compute_s_reduced(oracle, inst.task);
    EXPECT_TRUE(inst.task.s_task.subset_of(reduced));
  }
}

TEST(Family, ChainHasTheSixKnownMembers) {
  const Instance inst = build_chain_example();
  iface::uii::GammaOracle oracle(inst.system, inst.pool);
  const AwarenessFamily family =
      enumerate_sitaware_reduced(oracle, inst.task);
  EXPECT_EQ(family.gamma_task, 2);
  EXPECT_EQ(codes(family.sitaware_reduced),
            (std::set<std::uint64_t>{1, 2, 3, 5, 6, 7}));
  // Sorted by (cardinality, mask).
  ASSERT_EQ(family.sitaware_reduced.size(), 6u);
  EXPECT_EQ(family.sitaware_reduced[0].decimal_code().value(), 1u);
  EXPECT_EQ(family.sitaware_reduced[1].decimal_code().value(), 2u);
  EXPECT_EQ(family.sitaware_reduced[2].decimal_code().value(), 3u);
  EXPECT_EQ(family.sitaware_reduced.back().decimal_code().value(), 7u);
}

TEST(Family, TaskIsAlwaysAMember) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = random_instance(rng, 6, 7);
    iface::uii::GammaOracle oracle(inst.system, inst.pool);
    const AwarenessFamily family =
        enumerate_sitaware_reduced(oracle, inst.task);
    EXPECT_TRUE(std::find(family.sitaware_reduced.begin(),
                          family.sitaware_reduced.end(),
                          inst.task.s_task) != family.sitaware_reduced.end());
  }
}

TEST(Family, MatchesBruteForceFilterOfTheReducedPowerSet) {
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 25; ++trial) {
    const Instance inst = random_instance(rng, 6, 7);
    iface::uii::GammaOracle oracle(inst.system, inst.pool);
    const AwarenessFamily family =
        enumerate_sitaware_reduced(oracle, inst.task);

    std::set<std::uint64_t> expected;
    const auto reduced_ids = family.s_reduced.ids();
    const std::uint64_t limit = std::uint64_t{1} << reduced_ids.size();
    for (std::uint64_t code = 1; code < limit; ++code) {
      SensorSet p;
      for (std::size_t bit = 0; bit < reduced_ids.size(); ++bit) {
        if ((code >> bit) & 1u) p.set(reduced_ids[bit]);
      }
      if (oracle.gamma(p) == oracle.gamma_union_task(p, inst.task)) {
        expected.insert(p.decimal_code().value());
      }
    }
    EXPECT_EQ(codes(family.sitaware_reduced), expected);
  }
}

TEST(Family, CapRestrictsCardinality) {
  const Instance inst = build_chain_example();
  iface::uii::GammaOracle oracle(inst.system, inst.pool);
  EnumerateOptions opts;
  opts.cardinality_cap = 1;
  const AwarenessFamily family =
      enumerate_sitaware_reduced(oracle, inst.task, opts);
  EXPECT_EQ(codes(family.sitaware_reduced), (std::set<std::uint64_t>{1, 2}));
}

TEST(Family, AggressivePruningPreservesTheFamily) {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 25; ++trial) {
    const Instance inst = random_instance(rng, 6, 7);
    iface::uii::GammaOracle oracle(inst.system, inst.pool);
    for (std::optional<int> cap :
         {std::optional<int>{}, std::optional<int>{1}, std::optional<int>{2},
          std::optional<int>{3}}) {
      EnumerateOptions plain{.cardinality_cap = cap};
      EnumerateOptions aggressive{.cardinality_cap = cap,
                                  .aggressive_prune = true};
      const auto a = enumerate_sitaware_reduced(oracle, inst.task, plain);
      const auto b = enumerate_sitaware_reduced(oracle, inst.task, aggressive);
      EXPECT_EQ(codes(a.sitaware_reduced), codes(b.sitaware_reduced));
    }
  }
}

TEST(Family, ParallelSweepMatchesSequential) {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 15; ++trial) {
    const Instance inst = random_instance(rng, 6, 7);
    iface::uii::GammaOracle oracle(inst.system, inst.pool);
    const auto seq = enumerate_sitaware_reduced(oracle, inst.task, {});
    EnumerateOptions par;
    par.workers = 3;
    const auto para = enumerate_sitaware_reduced(oracle, inst.task, par);
    EXPECT_EQ(seq.sitaware_reduced, para.sitaware_reduced);
  }
}

TEST(Membership, ChainTableRow) {
  const Instance inst = build_chain_example();
  iface::uii::GammaOracle oracle(inst.system, inst.pool);
  const AwarenessFamily family =
      enumerate_sitaware_reduced(oracle, inst.task);
  // The full power set has twelve aware members; {s_a}, {s_h}, {s_a, s_h}
  // are the three failures.
  const std::set<std::uint64_t> aware = {1, 2, 3,  5,  6,  7,
                                         9, 10, 11, 13, 14, 15};
  for (std::uint64_t code = 1; code < 16; ++code) {
    const SensorSet s = SensorSet::from_decimal_code(code);
    EXPECT_EQ(is_situation_aware(oracle, inst.task, family, s),
              aware.count(code) > 0)
        << code;
  }
  EXPECT_FALSE(is_situation_aware(oracle, inst.task, family,
                                  SensorSet::from_ids({2, 3})));
  EXPECT_TRUE(is_situation_aware(oracle, inst.task, family,
                                 SensorSet::from_ids({0, 3})));
  EXPECT_TRUE(is_situation_aware(oracle, inst.task, family, inst.pool.all()));
}

TEST(Membership, AgreesWithDirectTestExhaustively) {
  std::mt19937_64 rng(111);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_instance(rng, 6, 8);
    iface::uii::GammaOracle oracle(inst.system, inst.pool);
    const AwarenessFamily family =
        enumerate_sitaware_reduced(oracle, inst.task);
    const std::uint64_t limit = std::uint64_t{1} << inst.pool.size();
    for (std::uint64_t code = 0; code < limit; ++code) {
      const SensorSet s = SensorSet::from_decimal_code(code);
      const bool direct =
          oracle.gamma(s) == oracle.gamma_union_task(s, inst.task);
      EXPECT_EQ(is_situation_aware(oracle, inst.task, family, s), direct)
          << code;
    }
  }
}

TEST(Expand, ChainYieldsTwelveMembers) {
  const Instance inst = build_chain_example();
  iface::uii::GammaOracle oracle(inst.system, inst.pool);
  const AwarenessFamily family =
      enumerate_sitaware_reduced(oracle, inst.task);
  const auto expanded = expand_sitaware(family, inst.pool, 1u << 20);
  EXPECT_EQ(expanded.size(), 12u);
  for (const auto& s : expanded) {
    EXPECT_TRUE(is_situation_aware(oracle, inst.task, family, s));
  }
}

TEST(Expand, EveryProducedSetIsAware) {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_instance(rng, 6, 7);
    iface::uii::GammaOracle oracle(inst.system, inst.pool);
    const AwarenessFamily family =
        enumerate_sitaware_reduced(oracle, inst.task);
    const auto expanded = expand_sitaware(family, inst.pool, 1u << 20);

    std::set<std::uint64_t> aware_codes;
    const std::uint64_t limit = std::uint64_t{1} << inst.pool.size();
    for (std::uint64_t code = 1; code < limit; ++code) {
      const SensorSet s = SensorSet::from_decimal_code(code);
      if (oracle.gamma(s) == oracle.gamma_union_task(s, inst.task)) {
        aware_codes.insert(code);
      }
    }
    for (const auto code : codes(expanded)) {
      EXPECT_TRUE(aware_codes.count(code)) << code;
    }
    EXPECT_EQ(codes(expanded).size(), expanded.size());  // deduplicated
  }
}

// Sensors outside the reduced set can jointly span the task subspace even
// though each alone spans none of it. Such sets are aware, but their
// intersection with s_reduced is not, so the crossed expansion misses them.
// The membership test must therefore stay the direct rank test.
TEST(MembershipGap, JointCoverageOutsideTheReducedSet) {
  Instance inst;
  inst.system.a = Eigen::MatrixXd::Zero(2, 2);
  inst.system.b = Eigen::MatrixXd::Zero(2, 1);
  std::vector<Eigen::RowVectorXd> rows(3, Eigen::RowVectorXd::Zero(2));
  rows[0] << 1, 0;
  rows[1] << 0, 1;
  rows[2] << 1, 1;
  inst.pool = iface::model::SensorPool(std::move(rows));
  inst.task = iface::model::make_task(inst.pool, SensorSet::single(2));

  iface::uii::GammaOracle oracle(inst.system, inst.pool);
  const AwarenessFamily family =
      enumerate_sitaware_reduced(oracle, inst.task);
  EXPECT_EQ(family.s_reduced, SensorSet::single(2));

  const SensorSet joint = SensorSet::from_ids({0, 1});
  // Aware by the direct test...
  EXPECT_TRUE(is_situation_aware(oracle, inst.task, family, joint));
  // ...but its reduced core is empty and not aware on its own.
  const SensorSet core = joint & family.s_reduced;
  EXPECT_TRUE(core.empty());
  EXPECT_NE(oracle.gamma_union_task(core, inst.task), oracle.gamma(core));
  // The crossed expansion cannot reach it.
  const auto expanded = expand_sitaware(family, inst.pool, 1u << 10);
  EXPECT_FALSE(codes(expanded).count(joint.decimal_code().value()));
}

TEST(Expand, LimitReturnsDistinctAwareMembers) {
  const Instance inst = build_chain_example();
  iface::uii::GammaOracle oracle(inst.system, inst.pool);
  const AwarenessFamily family =
      enumerate_sitaware_reduced(oracle, inst.task);
  const auto expanded = expand_sitaware(family, inst.pool, 3);
  EXPECT_EQ(expanded.size(), 3u);
  EXPECT_EQ(codes(expanded).size(), 3u);
  for (const auto& s : expanded) {
    EXPECT_TRUE(is_situation_aware(oracle, inst.task, family, s));
  }
}

TEST(Expand, SingleFullPoolMemberExpandsToItself) {
  const Instance inst = build_chain_example();
  AwarenessFamily family;
  family.s_reduced = inst.pool.all();
  family.sitaware_reduced = {inst.pool.all()};
  const auto expanded = expand_sitaware(family, inst.pool, 1u << 20);
  ASSERT_EQ(expanded.size(), 1u);
  EXPECT_EQ(expanded[0], inst.pool.all());
}

TEST(Family, FeasibleForSomeThresholdIffMember) {
  // A set is in the family exactly when the paired inequalities
  // Γ(P) >= t and Γ(P ∪ S_task) <= t admit some integer t in range.
  std::mt19937_64 rng(115);
  for (int trial = 0; trial < 15; ++trial) {
    const Instance inst = random_instance(rng, 5, 6);
    iface::uii::GammaOracle oracle(inst.system, inst.pool);
    const AwarenessFamily family =
        enumerate_sitaware_reduced(oracle, inst.task);
    const auto member_codes = codes(family.sitaware_reduced);
    const int gamma_task = oracle.gamma(inst.task.s_task);
    const int gamma_reduced = oracle.gamma(family.s_reduced);

    const auto reduced_ids = family.s_reduced.ids();
    const std::uint64_t limit = std::uint64_t{1} << reduced_ids.size();
    for (std::uint64_t code = 1; code < limit; ++code) {
      SensorSet p;
      for (std::size_t bit = 0; bit < reduced_ids.size(); ++bit) {
        if ((code >> bit) & 1u) p.set(reduced_ids[bit]);
      }
      bool feasible_for_some_t = false;
      for (int t = gamma_task; t <= gamma_reduced; ++t) {
        if (oracle.gamma(p) >= t &&
            oracle.gamma_union_task(p, inst.task) <= t) {
          feasible_for_some_t = true;
          break;
        }
      }
      EXPECT_EQ(feasible_for_some_t,
                member_codes.count(p.decimal_code().value()) > 0);
    }
  }
}

}  // namespace
