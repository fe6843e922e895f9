#pragma once

// The blocks of a partition that an orbit visits infinitely often, and the
// intersection of chosen visited blocks along a chain.

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ergo/chains.hpp"
#include "ergo/common.hpp"
#include "ergo/partitions.hpp"
#include "ergo/state_space.hpp"

namespace ergo {

/// Block IDs (sorted) of the blocks visited by T^n(point) for infinitely
/// many n >= 1. Never empty.
struct VisitSet {
  State point = 0;
  std::vector<BlockId> block_ids;

  std::size_t count() const { return block_ids.size(); }
  bool contains(BlockId b) const { return std::binary_search(block_ids.begin(), block_ids.end(), b); }
  friend bool operator==(const VisitSet&, const VisitSet&) = default;
};

namespace detail {

inline bool meets_progression(const UPSet& block, State first, State stride) {
  // {first + k*stride} meets the residue class r mod p infinitely often iff
  // r == first (mod gcd(stride, p)).
  const State g = std::gcd(stride, block.period());
  for (State r : block.residues()) {
    if (r % g == first % g) return true;
  }
  return false;
}

inline bool meets_progression(const FiniteSet&, State, State) {
  throw InvariantViolation("an orbit in a finite space cannot have an arithmetic tail");
}

template <class Set, class Map>
void check_space(const Partition<Set>& partition, const Map& map) {
  if (partition.space() != map.space()) {
    throw SpaceMismatch("partition over " + partition.space().to_string() + " but map over " +
                        map.space().to_string());
  }
}

}  // namespace detail

template <class Set>
VisitSet delta(const Partition<Set>& partition, const MapFor<Set>& map, State x) {
  detail::check_space(partition, map);
  if (!partition.space().contains(x)) {
    throw DomainError("state " + std::to_string(x) + " outside " + partition.space().to_string());
  }
  const OrbitDescriptor orbit = orbit_descriptor(map, x);
  VisitSet v{x, {}};
  if (const auto* cycle = std::get_if<CycleTail>(&orbit.tail)) {
    for (State s : cycle->states) v.block_ids.push_back(partition.block_of(s));
    std::sort(v.block_ids.begin(), v.block_ids.end());
    v.block_ids.erase(std::unique(v.block_ids.begin(), v.block_ids.end()), v.block_ids.end());
  } else {
    const auto& a = std::get<ArithmeticTail>(orbit.tail);
    for (BlockId b = 0; b < partition.size(); ++b) {
      if (detail::meets_progression(partition.block(b), a.first, a.stride)) v.block_ids.push_back(b);
    }
  }
  if (v.block_ids.empty()) throw InvariantViolation("visit set is empty");
  return v;
}

/// What a finite prefix of chosen blocks says about their full intersection.
enum class IntersectionTrend {
  Empty,               // already empty at the last level
  EmptyInLimit,        // minima strictly increase over the tail of the prefix
  NonemptyStabilized,  // the last levels agree on a nonempty finite set
  Undetermined,
};

inline std::string to_string(IntersectionTrend t) {
  switch (t) {
    case IntersectionTrend::Empty: return "empty";
    case IntersectionTrend::EmptyInLimit: return "empty in the limit (witnessed by unbounded minima)";
    case IntersectionTrend::NonemptyStabilized: return "nonempty (stabilized)";
    case IntersectionTrend::Undetermined: return "undetermined";
  }
  return "undetermined";
}

template <class Set>
struct IntersectionReport {
  std::vector<std::size_t> indices;     // chain indices in increasing order
  std::vector<BlockId> selected;        // chosen block at each index
  std::vector<Set> prefix;              // intersection of the first k+1 choices
  std::vector<std::optional<State>> minima;
  IntersectionTrend trend = IntersectionTrend::Undetermined;

  const Set& intersection() const { return prefix.back(); }
};

class InvalidSelection : public Error {
 public:
  using Error::Error;
};

/// Chooses a block from the visit set at a chain index.
using BlockSelector = std::function<BlockId(std::size_t index, const VisitSet&)>;

inline BlockId least_block(std::size_t, const VisitSet& v) { return v.block_ids.front(); }

/// Intersects the selected visited blocks along the first depth+1 indices of
/// a totally ordered chain and classifies the trend of the prefixes.
template <class Set>
IntersectionReport<Set> chain_block_intersection(const RefinementChain<Set>& chain, const MapFor<Set>& map,
                                                 State x, const BlockSelector& select = least_block,
                                                 std::optional<std::size_t> depth = std::nullopt) {
  IntersectionReport<Set> r;
  std::vector<std::size_t> order = chain.index.linear_order();
  if (depth && *depth + 1 < order.size()) order.resize(*depth + 1);
  r.indices = order;
  for (std::size_t i : order) {
    const auto& part = chain.at(i);
    const VisitSet v = delta(part, map, x);
    const BlockId b = select(i, v);
    if (!v.contains(b)) {
      throw InvalidSelection("block " + std::to_string(b) + " at index " + chain.index.label(i) +
                             " is not visited infinitely often");
    }
    r.selected.push_back(b);
    Set next = r.prefix.empty() ? part.block(b) : r.prefix.back().intersect(part.block(b));
    r.minima.push_back(next.min_element());
    r.prefix.push_back(std::move(next));
  }

  const std::size_t n = r.prefix.size();
  const Set& last = r.prefix.back();
  if (last.empty()) {
    r.trend = IntersectionTrend::Empty;
  } else if (n >= 2 && !last.is_infinite() && r.prefix[n - 2] == last) {
    r.trend = IntersectionTrend::NonemptyStabilized;
  } else if (n >= 2) {
    bool increasing = true;
    for (std::size_t k = n / 2; k < n && increasing; ++k) {
      increasing = k > 0 && r.minima[k] && r.minima[k - 1] && *r.minima[k] > *r.minima[k - 1];
    }
    if (increasing) r.trend = IntersectionTrend::EmptyInLimit;
  }
  return r;
}

}  // namespace ergo
