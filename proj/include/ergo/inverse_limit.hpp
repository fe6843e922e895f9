#pragma once

// Inverse systems of visit sets, their threads (elements of the inverse
// limit), and the constructive thread-building used on directed index sets
// with a countable cofinal chain.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergo/chains.hpp"
#include "ergo/common.hpp"
#include "ergo/partitions.hpp"
#include "ergo/visit_analysis.hpp"

namespace ergo {

/// A family of finite sets of block IDs over an index poset, with a map
/// levels[hi] -> levels[lo] for every comparable pair lo <= hi.
struct InverseSystem {
  IndexPoset index;
  std::vector<std::vector<BlockId>> levels;
  std::map<std::pair<std::size_t, std::size_t>, std::map<BlockId, BlockId>> maps;  // (lo, hi) -> table

  /// Image of block `b` of level `hi` in level `lo`; requires lo <= hi.
  BlockId project(std::size_t hi, std::size_t lo, BlockId b) const {
    auto it = maps.find({lo, hi});
    if (it == maps.end()) {
      throw Error("no map from index " + index.label(hi) + " to index " + index.label(lo));
    }
    auto jt = it->second.find(b);
    if (jt == it->second.end()) {
      throw Error("block " + std::to_string(b) + " is not in level " + index.label(hi));
    }
    return jt->second;
  }

  bool in_level(std::size_t i, BlockId b) const {
    return std::binary_search(levels[i].begin(), levels[i].end(), b);
  }
};

/// One block per index, compatible with every map of the system.
struct Thread {
  std::vector<BlockId> blocks;
  friend bool operator==(const Thread&, const Thread&) = default;
  friend auto operator<=>(const Thread&, const Thread&) = default;
};

inline bool is_thread(const InverseSystem& sys, const Thread& t) {
  if (t.blocks.size() != sys.index.size()) return false;
  for (std::size_t i = 0; i < t.blocks.size(); ++i) {
    if (!sys.in_level(i, t.blocks[i])) return false;
  }
  for (auto [lo, hi] : sys.index.comparable_pairs()) {
    if (sys.project(hi, lo, t.blocks[hi]) != t.blocks[lo]) return false;
  }
  return true;
}

struct LawCheck {
  bool passed = true;
  std::string witness;

  void fail(std::string w) {
    if (passed) witness = std::move(w);
    passed = false;
  }
};

struct SystemReport {
  LawCheck nonempty;      // every level has a block
  LawCheck containment;   // every map lands inside its target level
  LawCheck identity;      // the map of lambda <= lambda is the identity
  LawCheck composition;   // maps compose along lambda <= lambda' <= lambda''
  LawCheck surjectivity;  // every map is onto its target level

  bool ok() const {
    return nonempty.passed && containment.passed && identity.passed && composition.passed && surjectivity.passed;
  }
};

inline SystemReport check_inverse_system(const InverseSystem& sys) {
  SystemReport r;
  const auto& idx = sys.index;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (sys.levels[i].empty()) r.nonempty.fail("level " + idx.label(i) + " is empty");
  }
  for (auto [lo, hi] : idx.comparable_pairs()) {
    const std::string pair = idx.label(hi) + " -> " + idx.label(lo);
    auto it = sys.maps.find({lo, hi});
    if (it == sys.maps.end()) {
      r.containment.fail("missing map " + pair);
      continue;
    }
    std::vector<bool> hit(sys.levels[lo].size(), false);
    for (BlockId b : sys.levels[hi]) {
      auto jt = it->second.find(b);
      if (jt == it->second.end()) {
        r.containment.fail("map " + pair + " undefined at block " + std::to_string(b));
        continue;
      }
      auto pos = std::lower_bound(sys.levels[lo].begin(), sys.levels[lo].end(), jt->second);
      if (pos == sys.levels[lo].end() || *pos != jt->second) {
        r.containment.fail("map " + pair + " sends block " + std::to_string(b) + " outside the target level");
        continue;
      }
      hit[static_cast<std::size_t>(pos - sys.levels[lo].begin())] = true;
      if (lo == hi && jt->second != b) {
        r.identity.fail("map " + pair + " moves block " + std::to_string(b));
      }
    }
    for (std::size_t k = 0; k < hit.size(); ++k) {
      if (!hit[k]) {
        r.surjectivity.fail("block " + std::to_string(sys.levels[lo][k]) + " of level " + idx.label(lo) +
                            " has no preimage in level " + idx.label(hi));
      }
    }
  }
  if (!r.containment.passed) return r;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b) {
      if (!idx.leq(a, b)) continue;
      for (std::size_t c = 0; c < idx.size(); ++c) {
        if (!idx.leq(b, c)) continue;
        for (BlockId x : sys.levels[c]) {
          if (sys.project(b, a, sys.project(c, b, x)) != sys.project(c, a, x)) {
            r.composition.fail("maps " + idx.label(c) + " -> " + idx.label(b) + " -> " + idx.label(a) +
                               " disagree with " + idx.label(c) + " -> " + idx.label(a) + " at block " +
                               std::to_string(x));
          }
        }
      }
    }
  }
  return r;
}

/// Every thread of the system, sorted lexicographically by (index, block ID).
/// An empty result means the inverse limit is empty. `limit` > 0 stops after
/// that many threads.
inline std::vector<Thread> enumerate_threads(const InverseSystem& sys, std::size_t limit = 0) {
  const auto& idx = sys.index;
  const std::size_t n = idx.size();
  // Visit indices with many elements below them first so that most choices
  // are forced by earlier ones.
  std::vector<std::size_t> order(n);
  std::vector<std::size_t> below(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = i;
    for (std::size_t j = 0; j < n; ++j) below[i] += idx.leq(j, i) ? 1 : 0;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return below[a] > below[b]; });

  std::vector<Thread> out;
  std::vector<BlockId> choice(n);
  std::vector<bool> assigned(n, false);

  auto consistent = [&](std::size_t i, BlockId b) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!assigned[j]) continue;
      if (idx.leq(j, i) && sys.project(i, j, b) != choice[j]) return false;
      if (idx.leq(i, j) && sys.project(j, i, choice[j]) != b) return false;
    }
    return true;
  };

  auto search = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == n) {
      out.push_back(Thread{choice});
      return limit == 0 || out.size() < limit;
    }
    const std::size_t i = order[depth];
    for (BlockId b : sys.levels[i]) {
      if (!consistent(i, b)) continue;
      choice[i] = b;
      assigned[i] = true;
      const bool more = self(self, depth + 1);
      assigned[i] = false;
      if (!more) return false;
    }
    return true;
  };
  search(search, 0);
  std::sort(out.begin(), out.end());
  return out;
}

/// On a totally ordered index set: choose the least block at the top index
/// and push it down through the maps.
inline Thread build_thread_along_chain(const InverseSystem& sys) {
  const auto order = sys.index.linear_order();
  const std::size_t top = order.back();
  if (sys.levels[top].empty()) throw InvariantViolation("top level of the chain is empty");
  const BlockId chosen = sys.levels[top].front();
  Thread t{std::vector<BlockId>(sys.index.size())};
  for (std::size_t i : order) t.blocks[i] = sys.project(top, i, chosen);
  return t;
}

class ExtensionError : public Error {
 public:
  enum class Kind { NoDominatingChainElement, IllDefined };
  ExtensionError(Kind kind, std::size_t index, const std::string& what) : Error(what), kind_(kind), index_(index) {}
  Kind kind() const { return kind_; }
  std::size_t index() const { return index_; }

 private:
  Kind kind_;
  std::size_t index_;
};

/// Extends a thread given on an increasing chain of indices to the whole
/// index poset. Each index takes the image of the block chosen at any chain
/// element above it; all such images are checked to agree.
inline Thread extend_thread_to_directed(const InverseSystem& sys, const std::vector<std::size_t>& chain,
                                        const std::vector<BlockId>& chain_blocks) {
  if (chain.size() != chain_blocks.size()) throw Error("chain and chain thread differ in length");
  Thread t{std::vector<BlockId>(sys.index.size())};
  for (std::size_t i = 0; i < sys.index.size(); ++i) {
    std::optional<BlockId> value;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      if (!sys.index.leq(i, chain[k])) continue;
      const BlockId image = sys.project(chain[k], i, chain_blocks[k]);
      if (value && *value != image) {
        throw ExtensionError(ExtensionError::Kind::IllDefined, i,
                             "index " + sys.index.label(i) + " receives different blocks from the chain");
      }
      value = image;
    }
    if (!value) {
      throw ExtensionError(ExtensionError::Kind::NoDominatingChainElement, i,
                           "index " + sys.index.label(i) + " lies below no chain element");
    }
    t.blocks[i] = *value;
  }
  return t;
}

/// A thread on a directed index poset: extract an increasing chain through
/// the cofinal subset, choose the least block at its last element, push it
/// down the chain and extend to every index.
inline Thread construct_thread(const InverseSystem& sys, const std::vector<std::size_t>& cofinal) {
  const auto chain = extract_cofinal_chain(sys.index, cofinal);
  const std::size_t top = chain.back();
  if (sys.levels[top].empty()) throw InvariantViolation("level " + sys.index.label(top) + " is empty");
  const BlockId chosen = sys.levels[top].front();
  std::vector<BlockId> chain_blocks;
  for (std::size_t nu : chain) chain_blocks.push_back(sys.project(top, nu, chosen));
  return extend_thread_to_directed(sys, chain, chain_blocks);
}

/// Maximal elements of the index poset; a cofinal subset of any finite poset.
inline std::vector<std::size_t> maximal_elements(const IndexPoset& poset) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < poset.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < poset.size() && maximal; ++j) maximal = j == i || !poset.leq(i, j);
    if (maximal) out.push_back(i);
  }
  return out;
}

/// The inverse system of visit sets of a point along a refinement chain.
template <class Set>
struct PartitionSystem {
  RefinementChain<Set> chain;
  State point;
  std::vector<VisitSet> visits;
  InverseSystem system;

  const Set& block(std::size_t index, BlockId b) const { return chain.at(index).block(b); }
};

class NotMonotone : public Error {
 public:
  NotMonotone(MonotoneViolation v, const std::string& what) : Error(what), violation_(v) {}
  const MonotoneViolation& violation() const { return violation_; }

 private:
  MonotoneViolation violation_;
};

/// Computes every visit set and every restricted projection map. The image
/// of each visited block is checked to be visited as well.
template <class Set>
PartitionSystem<Set> build_system(const RefinementChain<Set>& chain, const MapFor<Set>& map, State x) {
  const auto mono = check_monotone(chain);
  if (!mono.ok()) {
    const auto& v = *mono.violation;
    throw NotMonotone(v, "partition at " + chain.index.label(v.upper) + " does not refine the one at " +
                             chain.index.label(v.lower));
  }
  PartitionSystem<Set> ps{chain, x, {}, InverseSystem{chain.index, {}, {}}};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    ps.visits.push_back(delta(chain.at(i), map, x));
    ps.system.levels.push_back(ps.visits.back().block_ids);
  }
  for (auto [lo, hi] : chain.index.comparable_pairs()) {
    const ProjectionMap full = psi(chain.at(hi), chain.at(lo));
    auto& table = ps.system.maps[{lo, hi}];
    for (BlockId b : ps.visits[hi].block_ids) {
      const BlockId image = full(b);
      if (!ps.visits[lo].contains(image)) {
        throw InvariantViolation("visited block " + std::to_string(b) + " at " + chain.index.label(hi) +
                                 " projects to an unvisited block at " + chain.index.label(lo));
      }
      table.emplace(b, image);
    }
  }
  return ps;
}

}  // namespace ergo
