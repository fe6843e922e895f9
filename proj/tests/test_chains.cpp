#include <gtest/gtest.h>

#include "ergo/chains.hpp"
#include "ergo/visit_analysis.hpp"
#include "support.hpp"

using namespace ergo;

namespace {
const StateSpace kNat = StateSpace::nat();
const UPSet kEvens = UPSet::make(0, 2, {0});
const UPSet kOdds = UPSet::make(0, 2, {1});
}  // namespace

TEST(IndexPoset, ClosureAndChecks) {
  auto p = IndexPoset::from_relation({"bot", "a", "b", "top"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  EXPECT_TRUE(p.leq(0, 3));
  EXPECT_FALSE(p.leq(1, 2));
  EXPECT_TRUE(p.is_directed());
  EXPECT_FALSE(p.is_total());
  EXPECT_THROW(p.linear_order(), PosetError);
  EXPECT_THROW(IndexPoset::from_relation({"a", "b"}, {{0, 1}, {1, 0}}), PosetError);
  auto v = IndexPoset::from_relation({"bot", "a", "b"}, {{0, 1}, {0, 2}});
  EXPECT_FALSE(v.is_directed());
  auto omega = IndexPoset::truncated_omega(4);
  EXPECT_EQ(omega.size(), 5u);
  EXPECT_EQ(omega.linear_order(), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(IndexPoset::total({"z", "y", "x"}).linear_order(), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(CheckMonotone, Examples) {
  EXPECT_TRUE(check_monotone(builtin::example2(5)).ok());

  const auto parity = Partition<UPSet>::validate({kEvens, kOdds}, kNat);
  RefinementChain<UPSet> constant(IndexPoset::truncated_omega(3), {parity, parity, parity, parity});
  EXPECT_TRUE(check_monotone(constant).ok());

  RefinementChain<UPSet> bad(IndexPoset::truncated_omega(2),
                             {Partition<UPSet>::trivial(kNat), parity, Partition<UPSet>::trivial(kNat)});
  const auto r = check_monotone(bad);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violation->lower, 1u);
  EXPECT_EQ(r.violation->upper, 2u);
  EXPECT_EQ(r.violation->fine_block, 0u);
}

TEST(CheckMonotone, ExplicitPosetChecksEveryComparablePair) {
  const auto parity = Partition<UPSet>::validate({kEvens, kOdds}, kNat);
  const auto cut = builtin::example2(1).at(1);
  // 0 <= 2 is only implied transitively through 1, and it fails
  RefinementChain<UPSet> c(IndexPoset::from_relation({"a", "b", "c"}, {{0, 1}, {1, 2}}),
                           {parity, Partition<UPSet>::trivial(kNat), cut});
  EXPECT_FALSE(check_monotone(c).ok());
}

TEST(ExtractCofinalChain, Examples) {
  EXPECT_EQ(extract_cofinal_chain(IndexPoset::truncated_omega(6), {6}), std::vector<std::size_t>{6});
  EXPECT_EQ(extract_cofinal_chain(IndexPoset::truncated_omega(6), {2, 4, 6}), (std::vector<std::size_t>{2, 4, 6}));

  auto diamond = IndexPoset::from_relation({"bot", "a", "b", "top"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  const auto chain = extract_cofinal_chain(diamond, {3});
  EXPECT_EQ(chain, std::vector<std::size_t>{3});
  // {a, b} is not cofinal: top lies below neither
  try {
    extract_cofinal_chain(diamond, {1, 2});
    FAIL();
  } catch (const PosetError& e) {
    EXPECT_EQ(e.kind(), PosetError::Kind::NotCofinal);
    EXPECT_EQ(e.witness(), std::size_t{3});
  }
  // Without the top element, {a, b} is cofinal and the upper bound search has
  // nothing to join them with.
  auto vee = IndexPoset::from_relation({"bot", "a", "b"}, {{0, 1}, {0, 2}});
  try {
    extract_cofinal_chain(vee, {1, 2});
    FAIL();
  } catch (const PosetError& e) {
    EXPECT_EQ(e.kind(), PosetError::Kind::NotDirected);
  }
}

TEST(ExtractCofinalChain, DiamondWithRedundantCofinalSet) {
  auto diamond = IndexPoset::from_relation({"bot", "a", "b", "top"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  EXPECT_EQ(extract_cofinal_chain(diamond, {1, 2, 3}), (std::vector<std::size_t>{1, 3}));
}

TEST(ExtractCofinalChain, PartitionLatticeOfThreePoints) {
  const auto lattice = ergo::testing::partition_lattice(3);
  ASSERT_EQ(lattice.size(), 5u);
  std::size_t finest = 0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (lattice.at(i).size() == 3) finest = i;
  }
  const auto chain = extract_cofinal_chain(lattice.index, {finest});
  EXPECT_EQ(chain.back(), finest);
  for (std::size_t i = 0; i < lattice.size(); ++i) EXPECT_TRUE(lattice.index.leq(i, chain.back()));
}

TEST(Builtin, Example2Levels) {
  const auto chain = builtin::example2(3);
  ASSERT_EQ(chain.size(), 4u);
  EXPECT_EQ(chain.at(0), Partition<UPSet>::trivial(kNat));
  const auto& d3 = chain.at(3);
  ASSERT_EQ(d3.size(), 4u);
  EXPECT_EQ(d3.block(0), UPSet::singleton(0));
  EXPECT_EQ(d3.block(1), UPSet::singleton(1));
  EXPECT_EQ(d3.block(2), UPSet::singleton(2));
  EXPECT_EQ(d3.block(3), UPSet::ray(3));
  EXPECT_EQ(chain.provenance.name, "example2");
}

TEST(FilterProxy, RequiresInfiniteCoinfinite) {
  EXPECT_NO_THROW(FilterProxy{kEvens});
  EXPECT_THROW(FilterProxy{UPSet::ray(3)}, DomainError);
  EXPECT_THROW(FilterProxy{UPSet::finite({1, 2})}, DomainError);
}

TEST(Builtin, FilterFamily) {
  for (const UPSet& u : {kEvens, UPSet::make(2, 3, {1}, {0})}) {
    const FilterProxy proxy(u);
    const auto fam = builtin::filter_family(proxy, 3);
    EXPECT_TRUE(check_monotone(fam).ok());
    EXPECT_TRUE(fam.index.is_directed());
    EXPECT_GE(fam.size(), 5u);
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const auto& p = fam.at(i);
      const auto ub = std::find(p.blocks().begin(), p.blocks().end(), u);
      ASSERT_NE(ub, p.blocks().end());
      const BlockId uid = static_cast<BlockId>(ub - p.blocks().begin());
      for (State x = 0; x < 8; ++x) {
        const auto v = delta(p, NatMap(Shift{1}), x);
        EXPECT_TRUE(v.contains(uid));
        std::vector<BlockId> infinite;
        for (BlockId b = 0; b < p.size(); ++b) {
          if (p.block(b).is_infinite()) infinite.push_back(b);
        }
        EXPECT_EQ(v.block_ids, infinite);
      }
    }
    // join-closed
    for (std::size_t i = 0; i < fam.size(); ++i) {
      for (std::size_t j = 0; j < fam.size(); ++j) {
        const auto jn = join(fam.at(i), fam.at(j));
        EXPECT_NE(std::find(fam.levels.begin(), fam.levels.end(), jn), fam.levels.end());
      }
    }
  }
}
