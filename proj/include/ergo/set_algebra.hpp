#pragma once

// Exact boolean algebra over the representable subsets of a state space.
//
//   FiniteSet  bitset over {0, ..., n-1}
//   UPSet      ultimately periodic subset of the naturals: a finite list of
//              members below a threshold t, and for n >= t membership is
//              decided by n mod p.
//
// Both types are values; every operation returns a fresh canonical object.

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ergo/common.hpp"

namespace ergo {

class FiniteSet {
 public:
  FiniteSet() = default;
  explicit FiniteSet(std::size_t universe_size)
      : size_(universe_size), words_((universe_size + 63) / 64, 0) {}

  static FiniteSet full(std::size_t universe_size) {
    FiniteSet s(universe_size);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.trim();
    return s;
  }

  template <class Range>
  static FiniteSet of(std::size_t universe_size, const Range& members) {
    FiniteSet s(universe_size);
    for (State x : members) s.insert(x);
    return s;
  }
  static FiniteSet of(std::size_t universe_size, std::initializer_list<State> members) {
    return of<std::initializer_list<State>>(universe_size, members);
  }

  std::size_t universe_size() const { return size_; }

  bool member(State x) const {
    check(x);
    return (words_[x >> 6] >> (x & 63)) & 1U;
  }

  void insert(State x) {
    check(x);
    words_[x >> 6] |= std::uint64_t{1} << (x & 63);
  }

  FiniteSet intersect(const FiniteSet& o) const {
    same_space(o);
    FiniteSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }

  FiniteSet unite(const FiniteSet& o) const {
    same_space(o);
    FiniteSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] |= o.words_[i];
    return r;
  }

  FiniteSet complement() const {
    FiniteSet r = *this;
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
  }

  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  std::optional<State> min_element() const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] != 0) return State{i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]))};
    }
    return std::nullopt;
  }

  /// Every subset of a finite space is finite.
  bool is_infinite() const { return false; }

  bool is_subset_of(const FiniteSet& o) const { return intersect(o) == *this; }

  std::vector<State> elements() const {
    std::vector<State> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "finite{";
    bool first = true;
    for (State x : elements()) {
      if (!first) os << ",";
      os << x;
      first = false;
    }
    os << "}";
    return os.str();
  }

  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

 private:
  void check(State x) const {
    if (x >= size_) {
      throw DomainError("state " + std::to_string(x) + " outside finite space of size " +
                        std::to_string(size_));
    }
  }
  void same_space(const FiniteSet& o) const {
    if (o.size_ != size_) throw SpaceMismatch("finite sets over spaces of different size");
  }
  void trim() {
    if (size_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Ultimately periodic subset of the naturals.
///
/// Members below `threshold()` are listed in `exceptions()`. For n at or above
/// the threshold, n is a member iff (n mod period()) is one of `residues()`.
/// Sets returned by any public operation are canonical: the period is the
/// minimal period of the tail and the threshold is the least one for that
/// period, so structural equality is set equality.
class UPSet {
 public:
  /// The empty set.
  UPSet() : mask_{false} {}

  /// Builds the set from raw fields without canonicalizing. Throws
  /// std::invalid_argument when the fields are structurally invalid.
  static UPSet raw(State threshold, State period, const std::vector<State>& residues,
                   const std::vector<State>& exceptions) {
    if (period == 0) throw std::invalid_argument("period must be positive");
    if (period > kMaxPeriod) throw DomainError("period exceeds representable limit");
    UPSet s;
    s.threshold_ = threshold;
    s.mask_.assign(period, false);
    for (State r : residues) {
      if (r >= period) throw std::invalid_argument("residue not below period");
      s.mask_[r] = true;
    }
    for (State e : exceptions) {
      if (e >= threshold) throw std::invalid_argument("exception not below threshold");
      s.exceptions_.push_back(e);
    }
    std::sort(s.exceptions_.begin(), s.exceptions_.end());
    s.exceptions_.erase(std::unique(s.exceptions_.begin(), s.exceptions_.end()), s.exceptions_.end());
    return s;
  }

  static UPSet make(State threshold, State period, const std::vector<State>& residues,
                    const std::vector<State>& exceptions = {}) {
    return raw(threshold, period, residues, exceptions).canonical();
  }

  static UPSet all() { return make(0, 1, {0}); }
  static UPSet singleton(State x) { return make(x + 1, 1, {}, {x}); }
  static UPSet finite(const std::vector<State>& members) {
    if (members.empty()) return UPSet{};
    State top = *std::max_element(members.begin(), members.end());
    return make(top + 1, 1, {}, members);
  }
  /// {from, from+1, from+2, ...}
  static UPSet ray(State from) { return make(from, 1, {0}); }
  /// {first, first+stride, first+2*stride, ...}
  static UPSet progression(State first, State stride) {
    if (stride == 0) throw std::invalid_argument("stride must be positive");
    return make(first, stride, {first % stride});
  }

  State threshold() const { return threshold_; }
  State period() const { return mask_.size(); }
  const std::vector<State>& exceptions() const { return exceptions_; }
  std::vector<State> residues() const {
    std::vector<State> out;
    for (std::size_t r = 0; r < mask_.size(); ++r) {
      if (mask_[r]) out.push_back(r);
    }
    return out;
  }

  bool member(State x) const {
    if (x < threshold_) return std::binary_search(exceptions_.begin(), exceptions_.end(), x);
    return mask_[x % mask_.size()];
  }

  UPSet intersect(const UPSet& o) const {
    return combine(o, [](bool a, bool b) { return a && b; });
  }
  UPSet unite(const UPSet& o) const {
    return combine(o, [](bool a, bool b) { return a || b; });
  }
  UPSet complement() const {
    UPSet r;
    r.threshold_ = threshold_;
    r.mask_ = mask_;
    r.mask_.flip();
    for (State n = 0; n < threshold_; ++n) {
      if (!member(n)) r.exceptions_.push_back(n);
    }
    return r.canonical();
  }

  bool empty() const {
    return exceptions_.empty() && std::none_of(mask_.begin(), mask_.end(), [](bool b) { return b; });
  }

  std::optional<State> min_element() const {
    if (!exceptions_.empty()) return exceptions_.front();
    const State p = period();
    for (State k = 0; k < p; ++k) {
      if (mask_[(threshold_ + k) % p]) return threshold_ + k;
    }
    return std::nullopt;
  }

  bool is_infinite() const {
    return std::any_of(mask_.begin(), mask_.end(), [](bool b) { return b; });
  }

  bool is_subset_of(const UPSet& o) const { return intersect(o) == *this; }

  /// Canonical form: minimal tail period, then minimal threshold.
  UPSet canonical() const {
    UPSet r = *this;
    const State p = period();
    for (State d = 1; d < p; ++d) {
      if (p % d != 0) continue;
      bool periodic = true;
      for (State i = d; i < p && periodic; ++i) periodic = mask_[i] == mask_[i % d];
      if (periodic) {
        r.mask_.assign(mask_.begin(), mask_.begin() + static_cast<std::ptrdiff_t>(d));
        break;
      }
    }
    const State q = r.period();
    while (r.threshold_ > 0) {
      const State n = r.threshold_ - 1;
      const bool listed = !r.exceptions_.empty() && r.exceptions_.back() == n;
      if (listed != r.mask_[n % q]) break;
      if (listed) r.exceptions_.pop_back();
      r.threshold_ = n;
    }
    return r;
  }

  /// Renders as `finite{a,b} ∪ ap(first,stride) ∪ ...`; the empty set is
  /// `finite{}`.
  std::string to_string() const {
    std::vector<std::string> parts;
    if (!exceptions_.empty()) {
      std::string s = "finite{";
      for (std::size_t i = 0; i < exceptions_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(exceptions_[i]);
      }
      parts.push_back(s + "}");
    }
    const State p = period();
    std::vector<State> firsts;
    for (State r : residues()) firsts.push_back(threshold_ + (r + p - threshold_ % p) % p);
    std::sort(firsts.begin(), firsts.end());
    for (State f : firsts) parts.push_back("ap(" + std::to_string(f) + "," + std::to_string(p) + ")");
    if (parts.empty()) return "finite{}";
    std::string out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) out += " ∪ " + parts[i];
    return out;
  }

  friend bool operator==(const UPSet&, const UPSet&) = default;

  static constexpr State kMaxPeriod = State{1} << 22;

 private:
  template <class Op>
  UPSet combine(const UPSet& o, Op op) const {
    const State pa = period();
    const State pb = o.period();
    const State l = std::lcm(pa, pb);
    if (l > kMaxPeriod) {
      throw DomainError("period of combined set exceeds representable limit");
    }
    UPSet r;
    r.threshold_ = std::max(threshold_, o.threshold_);
    r.mask_.assign(l, false);
    for (State k = 0; k < l; ++k) {
      const State n = r.threshold_ + k;
      r.mask_[n % l] = op(member(n), o.member(n));
    }
    for (State n = 0; n < r.threshold_; ++n) {
      if (op(member(n), o.member(n))) r.exceptions_.push_back(n);
    }
    return r.canonical();
  }

  State threshold_ = 0;
  std::vector<bool> mask_;
  std::vector<State> exceptions_;
};

/// Canonical form of a possibly non-canonical UPSet.
inline UPSet canonicalize(const UPSet& s) { return s.canonical(); }

/// Operations shared by both set representations.
template <class S>
concept SetLike = std::equality_comparable<S> && requires(const S& a, const S& b, State x) {
  { a.member(x) } -> std::same_as<bool>;
  { a.intersect(b) } -> std::same_as<S>;
  { a.unite(b) } -> std::same_as<S>;
  { a.complement() } -> std::same_as<S>;
  { a.empty() } -> std::same_as<bool>;
  { a.min_element() } -> std::same_as<std::optional<State>>;
  { a.is_infinite() } -> std::same_as<bool>;
  { a.is_subset_of(b) } -> std::same_as<bool>;
  { a.to_string() } -> std::same_as<std::string>;
};

static_assert(SetLike<FiniteSet>);
static_assert(SetLike<UPSet>);

}  // namespace ergo
