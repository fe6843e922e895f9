#include <gtest/gtest.h>

#include "ergo/partitions.hpp"
#include "support.hpp"

using namespace ergo;
using ergo::testing::Rng;

namespace {

const StateSpace kNat = StateSpace::nat();
const UPSet kEvens = UPSet::make(0, 2, {0});
const UPSet kOdds = UPSet::make(0, 2, {1});

Partition<UPSet> nat_partition(std::vector<UPSet> blocks) {
  return Partition<UPSet>::validate(std::move(blocks), kNat);
}

}  // namespace

TEST(Validate, AcceptsPartitions) {
  EXPECT_EQ(nat_partition({kOdds, kEvens}).size(), 2u);
  const auto d2 = nat_partition({UPSet::ray(2), UPSet::singleton(1), UPSet::singleton(0)});
  ASSERT_EQ(d2.size(), 3u);
  // canonical order by least element
  EXPECT_EQ(d2.block(0), UPSet::singleton(0));
  EXPECT_EQ(d2.block(2), UPSet::ray(2));
}

TEST(Validate, ReportsViolatedAxiom) {
  try {
    nat_partition({kEvens, UPSet::ray(4)});
    FAIL();
  } catch (const PartitionError& e) {
    EXPECT_EQ(e.kind(), PartitionError::Kind::Overlap);
    EXPECT_EQ(e.witness(), State{4});
  }
  try {
    nat_partition({kEvens, UPSet::ray(6).intersect(kOdds)});
    FAIL();
  } catch (const PartitionError& e) {
    EXPECT_EQ(e.kind(), PartitionError::Kind::Uncovered);
    EXPECT_EQ(e.witness(), State{1});
  }
  try {
    nat_partition({UPSet::all(), UPSet()});
    FAIL();
  } catch (const PartitionError& e) {
    EXPECT_EQ(e.kind(), PartitionError::Kind::EmptyBlock);
  }
  EXPECT_THROW(nat_partition({}), PartitionError);
  EXPECT_THROW(Partition<FiniteSet>::validate({FiniteSet::full(3)}, StateSpace::finite(4)), SpaceMismatch);
}

TEST(Refines, Examples) {
  const auto chain = builtin::example2(3);
  const auto trivial = Partition<UPSet>::trivial(kNat);
  const auto parity = nat_partition({kEvens, kOdds});
  EXPECT_TRUE(refines(trivial, parity));
  EXPECT_TRUE(refines(trivial, chain.at(3)));
  EXPECT_TRUE(refines(chain.at(1), chain.at(2)));
  EXPECT_FALSE(refines(chain.at(2), chain.at(1)));
  EXPECT_FALSE(refines(parity, chain.at(2)));
  EXPECT_THROW(refines(Partition<FiniteSet>::trivial(StateSpace::finite(2)),
                       Partition<FiniteSet>::trivial(StateSpace::finite(3))),
               SpaceMismatch);
}

TEST(Psi, Examples) {
  const auto chain = builtin::example2(2);
  EXPECT_EQ(psi(chain.at(2), chain.at(1)).table, (std::vector<BlockId>{0, 1, 1}));
  EXPECT_TRUE(psi(chain.at(2), chain.at(2)).is_identity());
  EXPECT_EQ(psi(chain.at(2), chain.at(0)).table, (std::vector<BlockId>{0, 0, 0}));
  try {
    psi(chain.at(1), chain.at(2));
    FAIL();
  } catch (const NotARefinement& e) {
    EXPECT_EQ(e.fine_block(), 1u);
  }
}

TEST(Join, Examples) {
  const auto parity = nat_partition({kEvens, kOdds});
  const auto cut = nat_partition({UPSet::finite({0, 1, 2, 3, 4}), UPSet::ray(5)});
  const auto j = join(parity, cut);
  ASSERT_EQ(j.size(), 4u);
  EXPECT_EQ(j.block(0), UPSet::finite({0, 2, 4}));
  EXPECT_EQ(j.block(1), UPSet::finite({1, 3}));
  EXPECT_EQ(j.block(2), kOdds.intersect(UPSet::ray(5)));
  EXPECT_EQ(j.block(3), kEvens.intersect(UPSet::ray(5)));
  EXPECT_EQ(join(parity, parity), parity);
  EXPECT_EQ(join(parity, Partition<UPSet>::trivial(kNat)), parity);
}

TEST(PartitionProperty, RefinementIsAPartialOrder) {
  const auto all = ergo::testing::all_partitions(4);
  ASSERT_EQ(all.size(), 15u);  // Bell number B4
  for (const auto& a : all) {
    EXPECT_TRUE(refines(a, a));
    for (const auto& b : all) {
      if (refines(a, b) && refines(b, a)) {
        EXPECT_EQ(a, b);
      }
      for (const auto& c : all) {
        if (refines(a, b) && refines(b, c)) {
          EXPECT_TRUE(refines(a, c));
        }
      }
    }
  }
}

TEST(PartitionProperty, JoinIsLeastUpperBound) {
  const auto all = ergo::testing::all_partitions(4);
  for (const auto& a : all) {
    for (const auto& b : all) {
      const auto j = join(a, b);
      EXPECT_TRUE(refines(a, j));
      EXPECT_TRUE(refines(b, j));
      for (const auto& g : all) {
        if (refines(a, g) && refines(b, g)) {
          EXPECT_TRUE(refines(j, g));
        }
      }
    }
  }
}

TEST(PartitionProperty, PsiIsFunctorial) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = ergo::testing::uniform(rng, 1, 64);
    const auto p0 = ergo::testing::random_partition(rng, n, 4);
    const auto p1 = ergo::testing::random_refinement(rng, p0, 3);
    const auto p2 = ergo::testing::random_refinement(rng, p1, 3);
    EXPECT_TRUE(psi(p1, p1).is_identity());
    EXPECT_EQ(compose(psi(p1, p0), psi(p2, p1)), psi(p2, p0));
    for (BlockId b = 0; b < p2.size(); ++b) {
      EXPECT_TRUE(p2.block(b).is_subset_of(p0.block(psi(p2, p0)(b))));
    }
    const auto q = ergo::testing::random_partition(rng, n, 4);
    const auto j = join(p2, q);
    EXPECT_TRUE(refines(p2, j));
    EXPECT_TRUE(refines(q, j));
  }
}
