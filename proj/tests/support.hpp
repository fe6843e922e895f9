#pragma once

// Random instance generators and brute-force oracles shared by the unit and
// acceptance suites. Nothing here calls orbit_descriptor or delta.

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

#include "ergo/ergo.hpp"

namespace ergo::testing {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline FiniteMap random_map(Rng& rng, std::size_t n) {
  std::vector<State> table(n);
  for (auto& v : table) v = uniform(rng, 0, n - 1);
  return FiniteMap(std::move(table));
}

/// Assigns each state a block label in [0, blocks) and keeps the nonempty ones.
inline Partition<FiniteSet> random_partition(Rng& rng, std::size_t n, std::size_t max_blocks) {
  const std::size_t k = uniform(rng, 1, std::max<std::size_t>(1, max_blocks));
  std::vector<FiniteSet> blocks(k, FiniteSet(n));
  for (State s = 0; s < n; ++s) blocks[uniform(rng, 0, k - 1)].insert(s);
  blocks.erase(std::remove_if(blocks.begin(), blocks.end(), [](const FiniteSet& b) { return b.empty(); }),
               blocks.end());
  return Partition<FiniteSet>::validate(std::move(blocks), StateSpace::finite(n));
}

/// A refinement of `base`: each block is split into up to `parts` pieces.
inline Partition<FiniteSet> random_refinement(Rng& rng, const Partition<FiniteSet>& base, std::size_t parts) {
  const std::size_t n = base.space().size();
  std::vector<FiniteSet> blocks;
  for (const auto& b : base.blocks()) {
    const std::size_t k = uniform(rng, 1, parts);
    std::vector<FiniteSet> pieces(k, FiniteSet(n));
    for (State s : b.elements()) pieces[uniform(rng, 0, k - 1)].insert(s);
    for (auto& p : pieces) {
      if (!p.empty()) blocks.push_back(std::move(p));
    }
  }
  return Partition<FiniteSet>::validate(std::move(blocks), base.space());
}

/// A chain Delta_0 <= ... <= Delta_{len-1} built by successive splitting.
inline RefinementChain<FiniteSet> random_chain(Rng& rng, std::size_t n, std::size_t len) {
  std::vector<Partition<FiniteSet>> levels{random_partition(rng, n, 3)};
  while (levels.size() < len) levels.push_back(random_refinement(rng, levels.back(), 3));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < len; ++i) labels.push_back("L" + std::to_string(i));
  return {IndexPoset::total(std::move(labels)), std::move(levels)};
}

/// Join closure of a few random partitions, indexed by refinement. The
/// result has at most `max_size` members; generators are dropped until the
/// closure fits.
inline RefinementChain<FiniteSet> random_directed_family(Rng& rng, std::size_t n, std::size_t max_size) {
  while (true) {
    const std::size_t gens = uniform(rng, 1, 3);
    std::vector<Partition<FiniteSet>> family;
    auto add = [&](Partition<FiniteSet> p) {
      if (std::find(family.begin(), family.end(), p) == family.end()) family.push_back(std::move(p));
    };
    for (std::size_t g = 0; g < gens; ++g) add(random_partition(rng, n, uniform(rng, 1, 4)));
    for (std::size_t i = 0; i < family.size() && family.size() <= max_size; ++i) {
      for (std::size_t j = 0; j < i; ++j) add(join(family[i], family[j]));
    }
    if (family.size() > max_size) continue;
    std::shuffle(family.begin(), family.end(), rng);
    std::vector<std::string> labels;
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t i = 0; i < family.size(); ++i) {
      labels.push_back("P" + std::to_string(i));
      for (std::size_t j = 0; j < family.size(); ++j) {
        if (i != j && refines(family[i], family[j])) rel.emplace_back(i, j);
      }
    }
    return {IndexPoset::from_relation(std::move(labels), rel), std::move(family)};
  }
}

inline UPSet random_upset(Rng& rng, State max_threshold = 10, State max_period = 6) {
  const State t = uniform(rng, 0, max_threshold);
  const State p = uniform(rng, 1, max_period);
  std::vector<State> residues;
  std::vector<State> exceptions;
  for (State r = 0; r < p; ++r) {
    if (uniform(rng, 0, 1)) residues.push_back(r);
  }
  for (State e = 0; e < t; ++e) {
    if (uniform(rng, 0, 1)) exceptions.push_back(e);
  }
  return UPSet::raw(t, p, residues, exceptions);
}

/// A partition of the naturals built from residue classes mod p with a few
/// small states split off. Blocks are disjoint and cover by construction.
inline Partition<UPSet> random_upset_partition(Rng& rng) {
  const State p = uniform(rng, 1, 6);
  const std::size_t k = uniform(rng, 1, p);
  std::vector<std::vector<State>> classes(k);
  for (State r = 0; r < p; ++r) classes[r < k ? r : uniform(rng, 0, k - 1)].push_back(r);
  std::vector<UPSet> blocks;
  for (const auto& c : classes) blocks.push_back(UPSet::make(0, p, c));
  const std::size_t cuts = uniform(rng, 0, 3);
  for (std::size_t i = 0; i < cuts; ++i) {
    const State s = uniform(rng, 0, 12);
    const UPSet single = UPSet::singleton(s);
    bool already = std::any_of(blocks.begin(), blocks.end(), [&](const UPSet& b) { return b == single; });
    if (already) continue;
    for (auto& b : blocks) b = b.intersect(single.complement());
    blocks.push_back(single);
  }
  blocks.erase(std::remove_if(blocks.begin(), blocks.end(), [](const UPSet& b) { return b.empty(); }), blocks.end());
  return Partition<UPSet>::validate(std::move(blocks), StateSpace::nat());
}

inline NatMap random_nat_map(Rng& rng) {
  switch (uniform(rng, 0, 2)) {
    case 0: return NatMap(Identity{});
    case 1: return NatMap(Constant{uniform(rng, 0, 20)});
    default: return NatMap(Shift{uniform(rng, 1, 5)});
  }
}

/// Transient and cycle of T^1(x), T^2(x), ... by recording every visited
/// state in a hash map until one repeats.
struct BruteOrbit {
  std::vector<State> transient;
  std::vector<State> cycle;
};

template <class Map>
BruteOrbit brute_orbit(const Map& map, State x) {
  std::unordered_map<State, std::size_t> seen;
  std::vector<State> path;
  State y = map(x);
  while (!seen.count(y)) {
    seen.emplace(y, path.size());
    path.push_back(y);
    y = map(y);
  }
  const auto mu = static_cast<std::ptrdiff_t>(seen[y]);
  return {{path.begin(), path.begin() + mu}, {path.begin() + mu, path.end()}};
}

template <class Map>
State apply_n(const Map& map, State x, std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) x = map(x);
  return x;
}

/// Blocks hit by T^n(x) for n in |X|+1 .. 2|X|. Transient plus period never
/// exceed |X|, so these iterates run around the whole cycle.
inline std::vector<BlockId> brute_delta(const Partition<FiniteSet>& part, const FiniteMap& map, State x) {
  const std::size_t n = map.size();
  std::set<BlockId> hit;
  State y = apply_n(map, x, n);
  for (std::size_t k = n + 1; k <= 2 * n; ++k) {
    y = map(y);
    hit.insert(part.block_of(y));
  }
  return {hit.begin(), hit.end()};
}

/// Blocks hit by T^n(x) over a late window of n. Past the largest threshold
/// the block of s + k*d depends only on (s + k*d) mod L, which repeats with
/// period dividing L, so a window of 4*L*stride iterates is exhaustive.
inline std::vector<BlockId> sampled_delta(const Partition<UPSet>& part, const NatMap& map, State x) {
  State max_t = 0;
  State l = 1;
  for (const auto& b : part.blocks()) {
    max_t = std::max(max_t, b.threshold());
    l = std::lcm(l, b.period());
  }
  State stride = 1;
  if (auto* s = std::get_if<Shift>(&map.kind())) stride = s->stride;
  const std::uint64_t start = max_t + 1;
  std::set<BlockId> hit;
  State y = apply_n(map, x, start);
  for (std::uint64_t k = 0; k < 4 * l * stride; ++k) {
    hit.insert(part.block_of(y));
    y = map(y);
  }
  return {hit.begin(), hit.end()};
}

/// All set partitions of {0, ..., n-1} (restricted growth strings).
inline std::vector<Partition<FiniteSet>> all_partitions(std::size_t n) {
  std::vector<Partition<FiniteSet>> out;
  std::vector<std::size_t> label(n, 0);
  auto rec = [&](auto&& self, std::size_t i, std::size_t used) -> void {
    if (i == n) {
      std::vector<FiniteSet> blocks(used, FiniteSet(n));
      for (State s = 0; s < n; ++s) blocks[label[s]].insert(s);
      out.push_back(Partition<FiniteSet>::validate(std::move(blocks), StateSpace::finite(n)));
      return;
    }
    for (std::size_t b = 0; b <= used; ++b) {
      label[i] = b;
      self(self, i + 1, std::max(used, b + 1));
    }
  };
  rec(rec, 0, 0);
  return out;
}

/// The refinement lattice of partitions of {0, ..., n-1} as a chain object.
inline RefinementChain<FiniteSet> partition_lattice(std::size_t n) {
  auto parts = all_partitions(n);
  std::vector<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    labels.push_back(parts[i].to_string());
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (i != j && refines(parts[i], parts[j])) rel.emplace_back(i, j);
    }
  }
  return {IndexPoset::from_relation(std::move(labels), rel), std::move(parts)};
}

/// Non-directed inverse system with nonempty levels and bijective maps but
/// no thread. Three lower indices c0, c1, c2 and three upper indices
/// a0, a1, a2 with a_k above c_k and c_{k+1}; every level is {0, 1}. All maps
/// are the identity except a2 -> c0, which swaps 0 and 1. Going around the
/// hexagon a thread would need b = 1 - b.
inline InverseSystem hexagon_fixture() {
  // indices: 0..2 = c0..c2, 3..5 = a0..a2
  std::vector<std::pair<std::size_t, std::size_t>> rel{{0, 3}, {1, 3}, {1, 4}, {2, 4}, {2, 5}, {0, 5}};
  InverseSystem sys{IndexPoset::from_relation({"c0", "c1", "c2", "a0", "a1", "a2"}, rel), {}, {}};
  sys.levels.assign(6, {0, 1});
  const std::map<BlockId, BlockId> id{{0, 0}, {1, 1}};
  const std::map<BlockId, BlockId> swap{{0, 1}, {1, 0}};
  for (std::size_t i = 0; i < 6; ++i) sys.maps[{i, i}] = id;
  for (auto [lo, hi] : rel) sys.maps[{lo, hi}] = (lo == 0 && hi == 5) ? swap : id;
  return sys;
}

}  // namespace ergo::testing
