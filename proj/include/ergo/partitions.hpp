#pragma once

// Finite partitions of a space, the refinement order, projection maps between
// comparable partitions and the join.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ergo/common.hpp"
#include "ergo/set_algebra.hpp"
#include "ergo/state_space.hpp"

namespace ergo {

/// Why a list of blocks is not a partition.
class PartitionError : public Error {
 public:
  enum class Kind { EmptyBlock, Overlap, Uncovered };

  PartitionError(Kind kind, std::optional<State> witness, const std::string& what)
      : Error(what), kind_(kind), witness_(witness) {}

  Kind kind() const { return kind_; }
  /// The offending state for Overlap and Uncovered.
  std::optional<State> witness() const { return witness_; }

 private:
  Kind kind_;
  std::optional<State> witness_;
};

class NotARefinement : public Error {
 public:
  NotARefinement(BlockId fine_block, const std::string& what) : Error(what), fine_block_(fine_block) {}
  /// A block of the finer candidate that lies in no block of the coarser one.
  BlockId fine_block() const { return fine_block_; }

 private:
  BlockId fine_block_;
};

/// Everything in the space, in the given representation.
template <class Set>
Set universe(const StateSpace& space);
template <>
inline FiniteSet universe<FiniteSet>(const StateSpace& space) {
  return FiniteSet::full(space.size());
}
template <>
inline UPSet universe<UPSet>(const StateSpace& space) {
  if (space.is_finite()) throw SpaceMismatch("ultimately periodic sets live on the symbolic space");
  return UPSet::all();
}

inline StateSpace space_of(const FiniteSet& s) { return StateSpace::finite(s.universe_size()); }
inline StateSpace space_of(const UPSet&) { return StateSpace::nat(); }

/// A finite partition with blocks sorted by least element. Block IDs are
/// positions in that order.
template <SetLike Set>
class Partition {
 public:
  /// Checks the partition axioms and returns the canonical partition.
  static Partition validate(std::vector<Set> blocks, const StateSpace& space) {
    const Set all = universe<Set>(space);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (space_of(blocks[i]) != space) {
        throw SpaceMismatch("block " + std::to_string(i) + " is not a subset of " + space.to_string());
      }
      if (blocks[i].empty()) {
        throw PartitionError(PartitionError::Kind::EmptyBlock, std::nullopt,
                             "block " + std::to_string(i) + " is empty");
      }
    }
    Set covered = all.complement();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (std::size_t j = i + 1; j < blocks.size(); ++j) {
        if (auto w = blocks[i].intersect(blocks[j]).min_element()) {
          throw PartitionError(PartitionError::Kind::Overlap, w,
                               "blocks " + std::to_string(i) + " and " + std::to_string(j) +
                                   " overlap at " + std::to_string(*w));
        }
      }
      covered = covered.unite(blocks[i]);
    }
    if (auto w = covered.complement().min_element()) {
      throw PartitionError(PartitionError::Kind::Uncovered, w,
                           "state " + std::to_string(*w) + " is in no block");
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const Set& a, const Set& b) { return *a.min_element() < *b.min_element(); });
    return Partition(space, std::move(blocks));
  }

  /// The one-block partition {X}.
  static Partition trivial(const StateSpace& space) { return Partition(space, {universe<Set>(space)}); }

  const StateSpace& space() const { return space_; }
  const std::vector<Set>& blocks() const { return blocks_; }
  const Set& block(BlockId id) const { return blocks_.at(id); }
  std::size_t size() const { return blocks_.size(); }

  /// The block containing x.
  BlockId block_of(State x) const {
    for (BlockId i = 0; i < blocks_.size(); ++i) {
      if (blocks_[i].member(x)) return i;
    }
    throw DomainError("state " + std::to_string(x) + " outside " + space_.to_string());
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      if (i) s += ", ";
      s += blocks_[i].to_string();
    }
    return s + "]";
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  Partition(StateSpace space, std::vector<Set> blocks) : space_(space), blocks_(std::move(blocks)) {}

  StateSpace space_;
  std::vector<Set> blocks_;
};

namespace detail {

template <class Set>
void same_space(const Partition<Set>& a, const Partition<Set>& b) {
  if (a.space() != b.space()) {
    throw SpaceMismatch("partitions of " + a.space().to_string() + " and " + b.space().to_string());
  }
}

// The coarse block containing `fine`, if any. Disjointness makes the block
// containing fine's least element the only candidate.
template <class Set>
std::optional<BlockId> containing_block(const Partition<Set>& coarse, const Set& fine) {
  const BlockId candidate = coarse.block_of(*fine.min_element());
  if (fine.is_subset_of(coarse.block(candidate))) return candidate;
  return std::nullopt;
}

}  // namespace detail

/// coarse <= fine: every block of `fine` lies inside some block of `coarse`.
template <class Set>
bool refines(const Partition<Set>& coarse, const Partition<Set>& fine) {
  detail::same_space(coarse, fine);
  return std::all_of(fine.blocks().begin(), fine.blocks().end(),
                     [&](const Set& b) { return detail::containing_block(coarse, b).has_value(); });
}

/// The containment map from the blocks of a finer partition to the blocks of
/// a coarser one.
struct ProjectionMap {
  std::vector<BlockId> table;  // fine block id -> coarse block id

  BlockId operator()(BlockId fine_block) const { return table.at(fine_block); }
  bool is_identity() const {
    for (BlockId i = 0; i < table.size(); ++i) {
      if (table[i] != i) return false;
    }
    return true;
  }
  friend bool operator==(const ProjectionMap&, const ProjectionMap&) = default;
};

template <class Set>
ProjectionMap psi(const Partition<Set>& fine, const Partition<Set>& coarse) {
  detail::same_space(fine, coarse);
  ProjectionMap m;
  m.table.reserve(fine.size());
  for (BlockId i = 0; i < fine.size(); ++i) {
    auto target = detail::containing_block(coarse, fine.block(i));
    if (!target) {
      throw NotARefinement(i, "block " + fine.block(i).to_string() + " lies in no block of the coarser partition");
    }
    m.table.push_back(*target);
  }
  return m;
}

/// outer after inner.
inline ProjectionMap compose(const ProjectionMap& outer, const ProjectionMap& inner) {
  ProjectionMap m;
  for (BlockId b : inner.table) m.table.push_back(outer(b));
  return m;
}

/// Coarsest common refinement: all nonempty pairwise intersections.
template <class Set>
Partition<Set> join(const Partition<Set>& a, const Partition<Set>& b) {
  detail::same_space(a, b);
  std::vector<Set> blocks;
  for (const Set& x : a.blocks()) {
    for (const Set& y : b.blocks()) {
      Set c = x.intersect(y);
      if (!c.empty()) blocks.push_back(std::move(c));
    }
  }
  return Partition<Set>::validate(std::move(blocks), a.space());
}

}  // namespace ergo
