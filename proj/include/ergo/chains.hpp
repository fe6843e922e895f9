#pragma once

// Index posets, refinement chains over them and the built-in chain families.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergo/common.hpp"
#include "ergo/partitions.hpp"
#include "ergo/set_algebra.hpp"

namespace ergo {

class PosetError : public Error {
 public:
  enum class Kind { NotPartialOrder, NotDirected, NotCofinal, NotTotal, UnknownElement };

  PosetError(Kind kind, std::optional<std::size_t> witness, const std::string& what)
      : Error(what), kind_(kind), witness_(witness) {}

  Kind kind() const { return kind_; }
  std::optional<std::size_t> witness() const { return witness_; }

 private:
  Kind kind_;
  std::optional<std::size_t> witness_;
};

/// A finite partial order on elements 0..n-1. Either an explicit relation,
/// closed reflexively and transitively at construction, or the truncated
/// chain 0 <= 1 <= ... <= K.
class IndexPoset {
 public:
  static IndexPoset truncated_omega(std::size_t depth) {
    IndexPoset p(depth + 1);
    p.omega_ = true;
    for (std::size_t i = 0; i <= depth; ++i) {
      p.labels_[i] = std::to_string(i);
      for (std::size_t j = i; j <= depth; ++j) p.set(i, j);
    }
    return p;
  }

  /// `relation` lists pairs (a, b) meaning a <= b.
  static IndexPoset from_relation(std::vector<std::string> labels,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& relation) {
    const std::size_t n = labels.size();
    if (n == 0) throw PosetError(PosetError::Kind::NotPartialOrder, std::nullopt, "index set is empty");
    IndexPoset p(n);
    p.labels_ = std::move(labels);
    for (std::size_t i = 0; i < n; ++i) p.set(i, i);
    for (auto [a, b] : relation) {
      if (a >= n || b >= n) throw PosetError(PosetError::Kind::UnknownElement, std::max(a, b), "relation names an unknown index");
      p.set(a, b);
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!p.leq(i, k)) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (p.leq(k, j)) p.set(i, j);
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (p.leq(i, j) && p.leq(j, i)) {
          throw PosetError(PosetError::Kind::NotPartialOrder, i,
                           "indices " + p.labels_[i] + " and " + p.labels_[j] + " are mutually below each other");
        }
      }
    }
    return p;
  }

  /// A total order following the list order.
  static IndexPoset total(std::vector<std::string> labels) {
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t i = 0; i + 1 < labels.size(); ++i) rel.emplace_back(i, i + 1);
    return from_relation(std::move(labels), rel);
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  bool is_truncated_omega() const { return omega_; }
  bool leq(std::size_t a, std::size_t b) const { return rel_[a * size() + b]; }
  bool comparable(std::size_t a, std::size_t b) const { return leq(a, b) || leq(b, a); }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

  /// First upper bound of {a, b} in construction order.
  std::optional<std::size_t> upper_bound(std::size_t a, std::size_t b) const {
    for (std::size_t u = 0; u < size(); ++u) {
      if (leq(a, u) && leq(b, u)) return u;
    }
    return std::nullopt;
  }

  /// A pair with no upper bound, if any.
  std::optional<std::pair<std::size_t, std::size_t>> undirected_pair() const {
    for (std::size_t a = 0; a < size(); ++a) {
      for (std::size_t b = a + 1; b < size(); ++b) {
        if (!upper_bound(a, b)) return std::make_pair(a, b);
      }
    }
    return std::nullopt;
  }
  bool is_directed() const { return !undirected_pair().has_value(); }

  bool is_total() const {
    for (std::size_t a = 0; a < size(); ++a) {
      for (std::size_t b = a + 1; b < size(); ++b) {
        if (!comparable(a, b)) return false;
      }
    }
    return true;
  }

  /// Elements from least to greatest. Requires a total order.
  std::vector<std::size_t> linear_order() const {
    if (!is_total()) throw PosetError(PosetError::Kind::NotTotal, std::nullopt, "index poset is not a chain");
    std::vector<std::size_t> order(size());
    for (std::size_t i = 0; i < size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) { return a != b && leq(a, b); });
    return order;
  }

  /// Comparable pairs (lo, hi) with lo <= hi, including lo == hi.
  std::vector<std::pair<std::size_t, std::size_t>> comparable_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < size(); ++a) {
      for (std::size_t b = 0; b < size(); ++b) {
        if (leq(a, b)) out.emplace_back(a, b);
      }
    }
    return out;
  }

  friend bool operator==(const IndexPoset&, const IndexPoset&) = default;

 private:
  explicit IndexPoset(std::size_t n) : labels_(n), rel_(n * n, false) {}
  void set(std::size_t a, std::size_t b) { rel_[a * size() + b] = true; }

  std::vector<std::string> labels_;
  std::vector<bool> rel_;
  bool omega_ = false;
};

struct Provenance {
  std::string name = "explicit";
  std::map<std::string, std::string> parameters;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// An assignment of a partition to every index.
template <class Set>
struct RefinementChain {
  IndexPoset index;
  std::vector<Partition<Set>> levels;
  Provenance provenance;

  RefinementChain(IndexPoset idx, std::vector<Partition<Set>> parts, Provenance prov = {})
      : index(std::move(idx)), levels(std::move(parts)), provenance(std::move(prov)) {
    if (levels.size() != index.size()) throw Error("chain needs exactly one partition per index");
    for (const auto& p : levels) {
      if (p.space() != levels.front().space()) throw SpaceMismatch("chain mixes partitions of different spaces");
    }
  }

  const Partition<Set>& at(std::size_t i) const { return levels.at(i); }
  std::size_t size() const { return levels.size(); }
  StateSpace space() const { return levels.front().space(); }
};

struct MonotoneViolation {
  std::size_t lower;
  std::size_t upper;
  BlockId fine_block;  // block of the upper level contained in no lower block
};

struct MonotoneReport {
  std::optional<MonotoneViolation> violation;
  std::size_t pairs_checked = 0;
  bool ok() const { return !violation.has_value(); }
};

/// Checks that lambda <= lambda' implies refines(levels[lambda], levels[lambda']).
/// Truncated-omega chains are checked on consecutive indices only.
template <class Set>
MonotoneReport check_monotone(const RefinementChain<Set>& chain) {
  MonotoneReport report;
  auto check_pair = [&](std::size_t lo, std::size_t hi) {
    ++report.pairs_checked;
    const auto& coarse = chain.at(lo);
    const auto& fine = chain.at(hi);
    for (BlockId b = 0; b < fine.size(); ++b) {
      if (!detail::containing_block(coarse, fine.block(b))) {
        report.violation = MonotoneViolation{lo, hi, b};
        return false;
      }
    }
    return true;
  };
  if (chain.index.is_truncated_omega()) {
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      if (!check_pair(i, i + 1)) return report;
    }
    return report;
  }
  for (auto [lo, hi] : chain.index.comparable_pairs()) {
    if (lo != hi && !check_pair(lo, hi)) return report;
  }
  return report;
}

/// An increasing sequence of indices that dominates every element of
/// `cofinal` (and therefore every index). The poset must be directed and every
/// index must lie below some element of `cofinal`.
inline std::vector<std::size_t> extract_cofinal_chain(const IndexPoset& poset,
                                                      const std::vector<std::size_t>& cofinal) {
  if (cofinal.empty()) throw PosetError(PosetError::Kind::NotCofinal, 0, "cofinal subset is empty");
  for (std::size_t c : cofinal) {
    if (c >= poset.size()) throw PosetError(PosetError::Kind::UnknownElement, c, "cofinal subset names an unknown index");
  }
  if (auto pair = poset.undirected_pair()) {
    throw PosetError(PosetError::Kind::NotDirected, pair->first,
                     "indices " + poset.label(pair->first) + " and " + poset.label(pair->second) +
                         " have no upper bound");
  }
  for (std::size_t i = 0; i < poset.size(); ++i) {
    bool dominated = std::any_of(cofinal.begin(), cofinal.end(), [&](std::size_t c) { return poset.leq(i, c); });
    if (!dominated) {
      throw PosetError(PosetError::Kind::NotCofinal, i, "index " + poset.label(i) + " lies below no cofinal element");
    }
  }
  std::vector<std::size_t> chain{cofinal.front()};
  for (std::size_t k = 1; k < cofinal.size(); ++k) {
    const std::size_t c = cofinal[k];
    if (poset.leq(c, chain.back())) continue;
    chain.push_back(*poset.upper_bound(chain.back(), c));
  }
  return chain;
}

/// A fixed infinite, co-infinite set standing in for a member of a free
/// ultrafilter on the naturals.
class FilterProxy {
 public:
  explicit FilterProxy(UPSet u) : u_(std::move(u)) {
    if (!u_.is_infinite()) throw DomainError("filter proxy set must be infinite");
    if (!u_.complement().is_infinite()) throw DomainError("filter proxy set must have an infinite complement");
  }
  const UPSet& set() const { return u_; }

 private:
  UPSet u_;
};

namespace builtin {

/// Levels lambda = 0..depth: {{0}, ..., {lambda-1}, [lambda, inf)}.
inline RefinementChain<UPSet> example2(std::size_t depth) {
  std::vector<Partition<UPSet>> levels;
  for (std::size_t lambda = 0; lambda <= depth; ++lambda) {
    std::vector<UPSet> blocks;
    for (State s = 0; s < lambda; ++s) blocks.push_back(UPSet::singleton(s));
    blocks.push_back(UPSet::ray(lambda));
    levels.push_back(Partition<UPSet>::validate(std::move(blocks), StateSpace::nat()));
  }
  return {IndexPoset::truncated_omega(depth), std::move(levels),
          Provenance{"example2", {{"depth", std::to_string(depth)}}}};
}

/// A join-closed family of partitions of the naturals that all contain the
/// proxy set U as a block, indexed by the refinement order. Generators:
/// U with the first j elements of the complement split off as singletons
/// (j = 0..depth), and U with the complement split by n mod 4 < 2.
inline RefinementChain<UPSet> filter_family(const FilterProxy& proxy, std::size_t depth) {
  const UPSet& u = proxy.set();
  const UPSet rest = u.complement();
  const auto nat = StateSpace::nat();

  std::vector<Partition<UPSet>> family;
  auto add = [&](Partition<UPSet> p) {
    if (std::find(family.begin(), family.end(), p) == family.end()) family.push_back(std::move(p));
  };

  UPSet remaining = rest;
  std::vector<UPSet> split;
  for (std::size_t j = 0; j <= depth; ++j) {
    std::vector<UPSet> blocks{u};
    blocks.insert(blocks.end(), split.begin(), split.end());
    blocks.push_back(remaining);
    add(Partition<UPSet>::validate(std::move(blocks), nat));
    const UPSet head = UPSet::singleton(*remaining.min_element());
    split.push_back(head);
    remaining = remaining.intersect(head.complement());
  }
  {
    const UPSet low = UPSet::make(0, 4, {0, 1});
    std::vector<UPSet> blocks{u};
    for (const UPSet& b : {rest.intersect(low), rest.intersect(low.complement())}) {
      if (!b.empty()) blocks.push_back(b);
    }
    add(Partition<UPSet>::validate(std::move(blocks), nat));
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) add(join(family[i], family[j]));
  }

  std::vector<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> relation;
  for (std::size_t i = 0; i < family.size(); ++i) {
    labels.push_back("F" + std::to_string(i));
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (i != j && refines(family[i], family[j])) relation.emplace_back(i, j);
    }
  }
  return {IndexPoset::from_relation(std::move(labels), relation), std::move(family),
          Provenance{"filter_family", {{"depth", std::to_string(depth)}, {"U", u.to_string()}}}};
}

}  // namespace builtin

}  // namespace ergo
