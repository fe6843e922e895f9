#pragma once

// The space X, self-maps T : X -> X, and exact orbit descriptors.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergo/common.hpp"
#include "ergo/set_algebra.hpp"

namespace ergo {

class StateSpace {
 public:
  static StateSpace finite(std::size_t size) {
    if (size == 0) throw DomainError("finite state space must be nonempty");
    return StateSpace(size);
  }
  static StateSpace nat() { return StateSpace(std::nullopt); }

  bool is_finite() const { return size_.has_value(); }
  /// Size of a finite space. Throws on the symbolic space.
  std::size_t size() const {
    if (!size_) throw DomainError("the symbolic space has no finite size");
    return *size_;
  }
  bool contains(State x) const { return !size_ || x < *size_; }

  std::string to_string() const {
    return size_ ? "finite(" + std::to_string(*size_) + ")" : std::string("nat");
  }

  friend bool operator==(const StateSpace&, const StateSpace&) = default;

 private:
  explicit StateSpace(std::optional<std::size_t> size) : size_(size) {}
  std::optional<std::size_t> size_;
};

/// A self-map of a finite space given by its image table.
class FiniteMap {
 public:
  explicit FiniteMap(std::vector<State> table) : table_(std::move(table)) {
    if (table_.empty()) throw DomainError("image table must be nonempty");
    for (std::size_t i = 0; i < table_.size(); ++i) {
      if (table_[i] >= table_.size()) {
        throw DomainError("image of state " + std::to_string(i) + " is outside the space");
      }
    }
  }

  std::size_t size() const { return table_.size(); }
  StateSpace space() const { return StateSpace::finite(table_.size()); }
  const std::vector<State>& table() const { return table_; }

  State operator()(State x) const {
    if (x >= table_.size()) {
      throw DomainError("state " + std::to_string(x) + " outside finite space of size " +
                        std::to_string(table_.size()));
    }
    return table_[x];
  }

  friend bool operator==(const FiniteMap&, const FiniteMap&) = default;

 private:
  std::vector<State> table_;
};

// Maps on the naturals.
struct Identity {
  friend bool operator==(const Identity&, const Identity&) = default;
};
struct Constant {
  State value;
  friend bool operator==(const Constant&, const Constant&) = default;
};
struct Shift {
  State stride = 1;
  friend bool operator==(const Shift&, const Shift&) = default;
};

using TailMap = std::variant<Identity, Constant, Shift>;

/// Finitely many explicit images; every other state follows `tail`.
struct FiniteOverride {
  std::map<State, State> overrides;
  TailMap tail;
  friend bool operator==(const FiniteOverride&, const FiniteOverride&) = default;
};

class NatMap {
 public:
  using Kind = std::variant<Identity, Constant, Shift, FiniteOverride>;

  NatMap(Kind kind) : kind_(std::move(kind)) {  // NOLINT(google-explicit-constructor)
    if (auto* s = std::get_if<Shift>(&kind_); s && s->stride == 0) {
      throw DomainError("shift stride must be positive");
    }
    if (auto* o = std::get_if<FiniteOverride>(&kind_)) {
      if (auto* s = std::get_if<Shift>(&o->tail); s && s->stride == 0) {
        throw DomainError("shift stride must be positive");
      }
    }
  }

  const Kind& kind() const { return kind_; }
  StateSpace space() const { return StateSpace::nat(); }

  State operator()(State x) const {
    return std::visit(
        [x](const auto& k) -> State {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, FiniteOverride>) {
            if (auto it = k.overrides.find(x); it != k.overrides.end()) return it->second;
            return apply_tail(k.tail, x);
          } else {
            return apply_tail(TailMap{k}, x);
          }
        },
        kind_);
  }

  std::string to_string() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, FiniteOverride>) {
            std::string s = "override{";
            bool first = true;
            for (auto [a, b] : k.overrides) {
              if (!first) s += ",";
              s += std::to_string(a) + ":" + std::to_string(b);
              first = false;
            }
            return s + "; " + tail_string(k.tail) + "}";
          } else {
            return tail_string(TailMap{k});
          }
        },
        kind_);
  }

  friend bool operator==(const NatMap&, const NatMap&) = default;

 private:
  static State apply_tail(const TailMap& t, State x) {
    if (std::holds_alternative<Identity>(t)) return x;
    if (auto* c = std::get_if<Constant>(&t)) return c->value;
    const State d = std::get<Shift>(t).stride;
    if (x > ~State{0} - d) throw DomainError("shift overflows the state type");
    return x + d;
  }
  static std::string tail_string(const TailMap& t) {
    if (std::holds_alternative<Identity>(t)) return "identity";
    if (auto* c = std::get_if<Constant>(&t)) return "constant(" + std::to_string(c->value) + ")";
    return "shift(" + std::to_string(std::get<Shift>(t).stride) + ")";
  }

  Kind kind_;
};

/// Pairs each set representation with the maps that act on its space.
template <class Set>
struct Backend;
template <>
struct Backend<FiniteSet> {
  using Map = FiniteMap;
};
template <>
struct Backend<UPSet> {
  using Map = NatMap;
};
template <class Set>
using MapFor = typename Backend<Set>::Map;

inline State apply(const FiniteMap& map, State x) { return map(x); }
inline State apply(const NatMap& map, State x) { return map(x); }

struct CycleTail {
  std::vector<State> states;
  friend bool operator==(const CycleTail&, const CycleTail&) = default;
};
struct ArithmeticTail {
  State first;
  State stride;
  friend bool operator==(const ArithmeticTail&, const ArithmeticTail&) = default;
};

/// Exact closed form of T^1(x), T^2(x), ...: a finite transient followed by
/// either a cycle or an arithmetic progression.
struct OrbitDescriptor {
  State start;
  std::vector<State> transient;
  std::variant<CycleTail, ArithmeticTail> tail;

  /// T^n(start); n = 0 yields start.
  State at(std::uint64_t n) const {
    if (n == 0) return start;
    if (n <= transient.size()) return transient[n - 1];
    const std::uint64_t k = n - transient.size() - 1;
    if (auto* c = std::get_if<CycleTail>(&tail)) return c->states[k % c->states.size()];
    const auto& a = std::get<ArithmeticTail>(tail);
    return a.first + k * a.stride;
  }

  friend bool operator==(const OrbitDescriptor&, const OrbitDescriptor&) = default;
};

namespace detail {

// Brent's cycle detection on y_k = T^{k+1}(x). Returns (mu, lambda).
template <class F>
std::pair<std::size_t, std::size_t> brent(F&& step, State y0) {
  std::size_t power = 1;
  std::size_t lam = 1;
  State tortoise = y0;
  State hare = step(y0);
  while (tortoise != hare) {
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    hare = step(hare);
    ++lam;
  }
  std::size_t mu = 0;
  tortoise = hare = y0;
  for (std::size_t i = 0; i < lam; ++i) hare = step(hare);
  while (tortoise != hare) {
    tortoise = step(tortoise);
    hare = step(hare);
    ++mu;
  }
  return {mu, lam};
}

}  // namespace detail

inline OrbitDescriptor orbit_descriptor(const FiniteMap& map, State x) {
  const State y0 = map(x);
  auto step = [&](State s) { return map(s); };
  auto [mu, lam] = detail::brent(step, y0);
  OrbitDescriptor d{x, {}, CycleTail{}};
  State y = y0;
  for (std::size_t i = 0; i < mu; ++i) {
    d.transient.push_back(y);
    y = map(y);
  }
  CycleTail c;
  for (std::size_t i = 0; i < lam; ++i) {
    c.states.push_back(y);
    y = map(y);
  }
  d.tail = std::move(c);
  return d;
}

inline OrbitDescriptor orbit_descriptor(const NatMap& map, State x) {
  const auto& kind = map.kind();
  if (std::holds_alternative<Identity>(kind)) return {x, {}, CycleTail{{x}}};
  if (auto* c = std::get_if<Constant>(&kind)) return {x, {}, CycleTail{{c->value}}};
  if (auto* s = std::get_if<Shift>(&kind)) return {x, {}, ArithmeticTail{x + s->stride, s->stride}};

  const auto& ov = std::get<FiniteOverride>(kind);
  const State max_key = ov.overrides.empty() ? 0 : ov.overrides.rbegin()->first;
  const auto* shift = std::get_if<Shift>(&ov.tail);

  // Simulate until a state repeats or, for a shift tail, the orbit has passed
  // every override key and can never return.
  std::map<State, std::size_t> seen;
  std::vector<State> path;
  State y = map(x);
  while (true) {
    if (auto it = seen.find(y); it != seen.end()) {
      OrbitDescriptor d{x, {}, CycleTail{}};
      d.transient.assign(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(it->second));
      CycleTail c;
      c.states.assign(path.begin() + static_cast<std::ptrdiff_t>(it->second), path.end());
      d.tail = std::move(c);
      return d;
    }
    if (shift && y > max_key && !ov.overrides.empty()) break;
    if (shift && ov.overrides.empty()) break;
    seen.emplace(y, path.size());
    path.push_back(y);
    y = map(y);
  }
  // Arithmetic tail from y; absorb transient states already on the progression.
  ArithmeticTail a{y, shift->stride};
  while (!path.empty() && a.first >= a.stride && path.back() == a.first - a.stride) {
    path.pop_back();
    a.first -= a.stride;
  }
  return {x, std::move(path), a};
}

/// T^n(x), computed through the orbit descriptor.
template <class Map>
State iterate(const Map& map, State x, std::uint64_t n) {
  if (n == 0) {
    if constexpr (std::is_same_v<Map, FiniteMap>) (void)map(x);
    return x;
  }
  return orbit_descriptor(map, x).at(n);
}

}  // namespace ergo
