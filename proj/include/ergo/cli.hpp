#pragma once

// Commands behind the `ergo` executable. Each command turns a parsed
// configuration into a Report.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ergo/config.hpp"
#include "ergo/ergo.hpp"
#include "ergo/report.hpp"

namespace ergo::cli {

using nlohmann::json;

struct RunOptions {
  std::vector<State> points;
  std::optional<std::size_t> depth;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> kCommands{"validate", "delta",   "intersect", "threads",
                                                  "build-thread", "verify", "examples"};
  return kCommands;
}

namespace detail {

using config::SemanticError;

template <class Set>
json block_json(const Partition<Set>& p, BlockId b) {
  return json{{"id", b}, {"set", p.block(b).to_string()}};
}

template <class Set>
json visit_json(const Partition<Set>& p, const VisitSet& v) {
  json blocks = json::array();
  for (BlockId b : v.block_ids) blocks.push_back(block_json(p, b));
  return json{{"blocks", blocks}, {"count", v.count()}};
}

template <class Set>
json thread_json(const PartitionSystem<Set>& ps, const Thread& t) {
  json out = json::array();
  for (std::size_t i = 0; i < t.blocks.size(); ++i) {
    out.push_back(json{{"index", ps.chain.index.label(i)}, {"block", t.blocks[i]},
                       {"set", ps.block(i, t.blocks[i]).to_string()}});
  }
  return out;
}

inline std::string plural(std::size_t n, const std::string& word) {
  return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
}

inline std::string law_detail(const LawCheck& c) { return c.passed ? std::string() : c.witness; }

template <class Set>
const MapFor<Set>& need_map(const config::Model<Set>& m, const std::string& command) {
  if (!m.map) throw SemanticError(0, "command " + command + " needs a map");
  return *m.map;
}

template <class Set>
RefinementChain<Set> need_chain(const config::Config& c, const config::Model<Set>& m, const RunOptions& o,
                                const std::string& command) {
  auto chain = config::make_chain(c, m, o.depth);
  if (!chain) throw SemanticError(0, "command " + command + " needs a chain");
  return std::move(*chain);
}

inline std::vector<State> points_of(const config::Config& c, const RunOptions& o) {
  std::vector<State> pts = !o.points.empty() ? o.points : c.points;
  if (pts.empty()) pts.push_back(0);
  for (State x : pts) {
    if (!c.space.contains(x)) throw SemanticError(0, "point " + std::to_string(x) + " outside " + c.space.to_string(), x);
  }
  return pts;
}

// Blocks hit by T^n(x) for n = |X|+1 .. 2|X|, which is the whole cycle.
inline std::vector<BlockId> simulated_visits(const Partition<FiniteSet>& p, const FiniteMap& map, State x) {
  const std::size_t n = map.size();
  State y = x;
  for (std::size_t k = 0; k < n; ++k) y = map(y);
  std::set<BlockId> hit;
  for (std::size_t k = 0; k < n; ++k) {
    y = map(y);
    hit.insert(p.block_of(y));
  }
  return {hit.begin(), hit.end()};
}

template <class Set>
std::vector<std::size_t> cofinal_indices(const config::Config& c, const IndexPoset& index) {
  if (c.cofinal.empty()) return maximal_elements(index);
  std::vector<std::size_t> out;
  for (const auto& name : c.cofinal) {
    auto i = index.index_of(name);
    if (!i) throw SemanticError(0, "cofinal element " + name + " is not a chain index");
    out.push_back(*i);
  }
  return out;
}

template <class Set>
void run_validate(const config::Config& c, const config::Model<Set>& m, const RunOptions& o, Report& r) {
  json parts = json::array();
  for (const auto& [name, p] : m.partitions) {
    json blocks = json::array();
    for (const auto& b : p.blocks()) blocks.push_back(b.to_string());
    parts.push_back(json{{"name", name}, {"blocks", blocks}});
    r.add("partition " + name + " is a finite partition", true, std::to_string(p.size()) + " blocks");
  }
  r.results["partitions"] = parts;
  if (auto chain = config::make_chain(c, m, o.depth)) {
    const auto mono = check_monotone(*chain);
    std::string detail = plural(mono.pairs_checked, "pair") + " checked";
    if (!mono.ok()) {
      const auto& v = *mono.violation;
      detail = "block " + chain->at(v.upper).block(v.fine_block).to_string() + " of " + chain->index.label(v.upper) +
               " lies in no block of " + chain->index.label(v.lower);
    }
    r.add("chain is monotone", mono.ok(), detail);
    r.results["chain"] = json{{"indices", chain->index.labels()},
                              {"directed", chain->index.is_directed()},
                              {"total", chain->index.is_total()},
                              {"source", chain->provenance.name}};
  }
}

template <class Set>
void run_delta(const config::Config& c, const config::Model<Set>& m, const RunOptions& o, Report& r) {
  const auto& map = need_map(m, "delta");
  const auto chain = config::make_chain(c, m, o.depth);
  json out = json::array();
  for (State x : points_of(c, o)) {
    json entry{{"point", x}};
    json parts = json::array();
    for (const auto& [name, p] : m.partitions) {
      const auto v = delta(p, map, x);
      json j = visit_json(p, v);
      j["name"] = name;
      parts.push_back(j);
      r.add("x=" + std::to_string(x) + ": visit set of " + name + " is nonempty", v.count() > 0);
    }
    entry["partitions"] = parts;
    if (chain) {
      json levels = json::array();
      for (std::size_t i = 0; i < chain->size(); ++i) {
        const auto v = delta(chain->at(i), map, x);
        json j = visit_json(chain->at(i), v);
        j["index"] = chain->index.label(i);
        levels.push_back(j);
        r.add("x=" + std::to_string(x) + ": visit set at index " + chain->index.label(i) + " is nonempty", v.count() > 0);
      }
      entry["chain"] = levels;
    }
    out.push_back(entry);
  }
  r.results["points"] = out;
}

template <class Set>
void run_intersect(const config::Config& c, const config::Model<Set>& m, const RunOptions& o, Report& r) {
  const auto& map = need_map(m, "intersect");
  const auto chain = need_chain(c, m, o, "intersect");
  if (!chain.index.is_total()) throw SemanticError(0, "intersect needs a totally ordered chain");
  BlockSelector select = least_block;
  if (c.selection) {
    const auto order = chain.index.linear_order();
    const auto& ids = *c.selection;
    select = [order, ids](std::size_t index, const VisitSet& v) -> BlockId {
      const auto pos = static_cast<std::size_t>(std::find(order.begin(), order.end(), index) - order.begin());
      return pos < ids.size() ? ids[pos] : v.block_ids.front();
    };
  }
  json out = json::array();
  for (State x : points_of(c, o)) {
    IntersectionReport<Set> ir;
    try {
      ir = chain_block_intersection(chain, map, x, select);
    } catch (const InvalidSelection& e) {
      throw SemanticError(0, e.what());
    }
    json levels = json::array();
    for (std::size_t k = 0; k < ir.indices.size(); ++k) {
      levels.push_back(json{{"index", chain.index.label(ir.indices[k])},
                            {"selected", block_json(chain.at(ir.indices[k]), ir.selected[k])},
                            {"intersection", ir.prefix[k].to_string()},
                            {"min", ir.minima[k] ? json(*ir.minima[k]) : json(nullptr)}});
    }
    out.push_back(json{{"point", x}, {"levels", levels}, {"trend", to_string(ir.trend)}});
  }
  r.results["points"] = out;
}

template <class Set>
std::optional<PartitionSystem<Set>> system_or_report(const RefinementChain<Set>& chain, const MapFor<Set>& map,
                                                     State x, Report& r) {
  try {
    return build_system(chain, map, x);
  } catch (const NotMonotone& e) {
    r.add("chain is monotone", false, e.what());
    return std::nullopt;
  }
}

constexpr std::size_t kThreadLimit = 1000;

template <class Set>
void run_threads(const config::Config& c, const config::Model<Set>& m, const RunOptions& o, Report& r) {
  const auto& map = need_map(m, "threads");
  const auto chain = need_chain(c, m, o, "threads");
  json out = json::array();
  for (State x : points_of(c, o)) {
    auto ps = system_or_report(chain, map, x, r);
    if (!ps) continue;
    const auto threads = enumerate_threads(ps->system, kThreadLimit);
    json list = json::array();
    for (const auto& t : threads) list.push_back(thread_json(*ps, t));
    json entry{{"point", x}, {"count", threads.size()}, {"threads", list}};
    if (threads.size() == kThreadLimit) entry["truncated"] = true;
    out.push_back(entry);
    if (chain.index.is_directed()) {
      r.add("x=" + std::to_string(x) + ": inverse limit over a directed index set is nonempty", !threads.empty(),
            detail::plural(threads.size(), "thread"));
    }
  }
  r.results["points"] = out;
}

template <class Set>
void run_build_thread(const config::Config& c, const config::Model<Set>& m, const RunOptions& o, Report& r) {
  const auto& map = need_map(m, "build-thread");
  const auto chain = need_chain(c, m, o, "build-thread");
  json out = json::array();
  for (State x : points_of(c, o)) {
    auto ps = system_or_report(chain, map, x, r);
    if (!ps) continue;
    json entry{{"point", x}};
    Thread t;
    if (chain.index.is_total()) {
      t = build_thread_along_chain(ps->system);
      entry["method"] = "least block at the top index, pushed down";
    } else {
      const auto cofinal = cofinal_indices<Set>(c, chain.index);
      std::vector<std::size_t> nu;
      try {
        nu = extract_cofinal_chain(chain.index, cofinal);
        t = construct_thread(ps->system, cofinal);
      } catch (const PosetError& e) {
        r.add("x=" + std::to_string(x) + ": cofinal chain exists", false, e.what());
        out.push_back(entry);
        continue;
      }
      json labels = json::array();
      for (std::size_t i : nu) labels.push_back(chain.index.label(i));
      entry["method"] = "thread on a cofinal chain, extended to every index";
      entry["cofinal_chain"] = labels;
    }
    entry["thread"] = thread_json(*ps, t);
    r.add("x=" + std::to_string(x) + ": constructed thread is compatible", is_thread(ps->system, t));
    if (chain.index.is_truncated_omega()) {
      const auto laws = check_inverse_system(ps->system);
      entry["note"] = "thread through depth " + std::to_string(chain.size() - 1) +
                      "; every projection between visit sets is onto, so each level's block has a preimage "
                      "at any deeper level of a monotone continuation";
      r.add("x=" + std::to_string(x) + ": projections between visit sets are onto", laws.surjectivity.passed,
            law_detail(laws.surjectivity));
    }
    out.push_back(entry);
  }
  r.results["points"] = out;
}

template <class Set>
void run_verify(const config::Config& c, const config::Model<Set>& m, const RunOptions& o, Report& r) {
  const auto& map = need_map(m, "verify");
  const auto chain = config::make_chain(c, m, o.depth);
  for (State x : points_of(c, o)) {
    const std::string px = "x=" + std::to_string(x) + ": ";
    for (const auto& [name, p] : m.partitions) {
      const auto v = delta(p, map, x);
      r.add(px + "visit set of " + name + " is nonempty", v.count() > 0);
      if constexpr (std::is_same_v<Set, FiniteSet>) {
        r.add(px + "visit set of " + name + " matches simulation", v.block_ids == simulated_visits(p, map, x));
      }
    }
    for (const auto& [fine_name, fine] : m.partitions) {
      for (const auto& [coarse_name, coarse] : m.partitions) {
        if (&fine == &coarse || !refines(coarse, fine)) continue;
        const auto proj = psi(fine, coarse);
        const auto dc = delta(coarse, map, x);
        bool contained = true;
        for (BlockId b : delta(fine, map, x).block_ids) contained = contained && dc.contains(proj(b));
        r.add(px + "visited blocks of " + fine_name + " project into visited blocks of " + coarse_name, contained);
      }
    }
    if (!chain) continue;
    auto ps = system_or_report(*chain, map, x, r);
    if (!ps) continue;
    r.add(px + "chain is monotone", true);
    const auto laws = check_inverse_system(ps->system);
    r.add(px + "every visit set along the chain is nonempty", laws.nonempty.passed, law_detail(laws.nonempty));
    r.add(px + "projections map visited blocks to visited blocks", laws.containment.passed, law_detail(laws.containment));
    r.add(px + "projection of an index to itself is the identity", laws.identity.passed, law_detail(laws.identity));
    r.add(px + "projections compose", laws.composition.passed, law_detail(laws.composition));
    r.add(px + "projections between visit sets are onto", laws.surjectivity.passed, law_detail(laws.surjectivity));
    if (chain->index.is_directed()) {
      const auto threads = enumerate_threads(ps->system);
      r.add(px + "inverse limit is nonempty", !threads.empty(), detail::plural(threads.size(), "thread"));
      const Thread t = chain->index.is_total() ? build_thread_along_chain(ps->system)
                                               : construct_thread(ps->system, cofinal_indices<Set>(c, chain->index));
      r.add(px + "constructed thread is among the enumerated threads",
            std::find(threads.begin(), threads.end(), t) != threads.end());
    }
  }
}

template <class Set>
void dispatch(const config::Config& c, const config::Model<Set>& m, const std::string& cmd, const RunOptions& o,
              Report& r) {
  if (cmd == "validate") return run_validate(c, m, o, r);
  if (cmd == "delta") return run_delta(c, m, o, r);
  if (cmd == "intersect") return run_intersect(c, m, o, r);
  if (cmd == "threads") return run_threads(c, m, o, r);
  if (cmd == "build-thread") return run_build_thread(c, m, o, r);
  if (cmd == "verify") return run_verify(c, m, o, r);
  throw SemanticError(0, "unknown command " + cmd);
}

}  // namespace detail

Report run_examples();

/// Runs `command` on a parsed configuration. Throws config::SemanticError
/// when the configuration cannot serve the command.
inline Report run(const config::Config& c, const std::string& command, const RunOptions& o = {}) {
  if (command == "examples") return run_examples();
  Report r;
  r.command = command;
  r.echo = json{{"command", command}, {"space", c.space.to_string()}};
  if (!o.points.empty()) r.echo["points"] = o.points;
  if (o.depth) r.echo["depth"] = *o.depth;
  std::visit([&](const auto& model) { detail::dispatch(c, model, command, o, r); }, c.model);
  return r;
}

namespace detail {

inline std::vector<std::string> visited_sets(const Partition<UPSet>& p, const VisitSet& v) {
  std::vector<std::string> out;
  for (BlockId b : v.block_ids) out.push_back(p.block(b).to_string());
  return out;
}

inline std::string join_strings(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "; " : "") + v[i];
  return s;
}

}  // namespace detail

/// Reproduces the worked examples on the naturals (shift, identity and
/// constant maps; the initial-segment chain; the filter-proxy family) and
/// compares against the expected blocks embedded below.
inline Report run_examples() {
  using detail::visited_sets;
  Report r;
  r.command = "examples";
  r.echo = json{{"command", "examples"}};
  const auto nat = StateSpace::nat();
  const UPSet evens = UPSet::progression(0, 2);
  const UPSet odds = UPSet::progression(1, 2);
  const auto parity = Partition<UPSet>::validate({evens, odds}, nat);
  const auto cut3 = builtin::example2(3).at(3);
  const auto mixed = Partition<UPSet>::validate(
      {UPSet::finite({0, 1, 2}), UPSet::make(3, 2, {1}), UPSet::make(3, 2, {0})}, nat);
  constexpr std::size_t kDepth = 10;
  const auto chain = builtin::example2(kDepth);
  const auto ray = [](std::size_t l) { return "ap(" + std::to_string(l) + ",1)"; };

  // Shift: the visited blocks are exactly the infinite ones.
  {
    const NatMap shift(Shift{1});
    const std::vector<std::pair<const Partition<UPSet>*, std::vector<std::string>>> cases{
        {&parity, {"ap(0,2)", "ap(1,2)"}}, {&cut3, {"ap(3,1)"}}, {&mixed, {"ap(3,2)", "ap(4,2)"}}};
    bool ok = true;
    std::string detail;
    for (const auto& [p, expected] : cases) {
      for (State x = 0; x <= 6; ++x) {
        const auto got = visited_sets(*p, delta(*p, shift, x));
        if (got != expected) {
          ok = false;
          detail = "x=" + std::to_string(x) + " on " + p->to_string() + ": " + detail::join_strings(got);
        }
      }
    }
    r.add("shift: the visit set is the set of infinite blocks", ok, detail);
  }

  // Identity: the block containing the point.
  {
    const NatMap id(Identity{});
    bool ok = true;
    for (State x = 0; x <= 6; ++x) {
      ok = ok && visited_sets(parity, delta(parity, id, x)) == std::vector<std::string>{x % 2 ? "ap(1,2)" : "ap(0,2)"};
      ok = ok && visited_sets(cut3, delta(cut3, id, x)) ==
                     std::vector<std::string>{x < 3 ? "finite{" + std::to_string(x) + "}" : "ap(3,1)"};
    }
    r.add("identity: the visit set is the block containing the point", ok);
  }

  // Constant x* : the block containing x*.
  {
    bool ok = true;
    for (State xstar : {1, 3}) {
      const NatMap cst(Constant{xstar});
      for (State x = 0; x <= 6; ++x) {
        ok = ok && visited_sets(parity, delta(parity, cst, x)) ==
                       std::vector<std::string>{xstar % 2 ? "ap(1,2)" : "ap(0,2)"};
        ok = ok && visited_sets(cut3, delta(cut3, cst, x)) ==
                       std::vector<std::string>{xstar < 3 ? "finite{" + std::to_string(xstar) + "}" : "ap(3,1)"};
      }
    }
    r.add("constant: the visit set is the block containing the fixed value", ok);
  }

  std::vector<PartitionSystem<UPSet>> systems;

  // Shift along the initial-segment chain from x = 0.
  {
    const NatMap shift(Shift{1});
    bool ok = true;
    json levels = json::array();
    for (std::size_t l = 0; l <= kDepth; ++l) {
      const auto got = visited_sets(chain.at(l), delta(chain.at(l), shift, 0));
      levels.push_back(got);
      ok = ok && got == std::vector<std::string>{ray(l)};
    }
    r.results["shift_visit_sets"] = levels;
    r.add("shift chain: the visit set at each level is the single ray [level, inf)", ok);

    const auto ir = chain_block_intersection(chain, shift, 0);
    bool minima_ok = ir.minima.size() == kDepth + 1;
    json minima = json::array();
    for (std::size_t k = 0; k < ir.minima.size(); ++k) {
      minima.push_back(ir.minima[k] ? json(*ir.minima[k]) : json(nullptr));
      minima_ok = minima_ok && ir.minima[k] == State{k};
    }
    r.results["shift_intersection_minima"] = minima;
    r.add("shift chain: the intersection of the visited rays is empty in the limit",
          minima_ok && ir.trend == IntersectionTrend::EmptyInLimit, to_string(ir.trend));

    auto ps = build_system(chain, shift, 0);
    const auto threads = enumerate_threads(ps.system);
    bool thread_ok = threads.size() == 1;
    if (thread_ok) {
      for (std::size_t l = 0; l <= kDepth; ++l) thread_ok = thread_ok && ps.block(l, threads[0].blocks[l]).to_string() == ray(l);
      r.results["shift_thread"] = detail::thread_json(ps, threads[0]);
    }
    r.add("shift chain: the inverse limit is the single thread of rays", thread_ok,
          detail::plural(threads.size(), "thread"));
    systems.push_back(std::move(ps));
  }

  // Identity and constant maps along the same chain.
  const auto singleton_case = [&](const NatMap& map, State x, State target, const std::string& label) {
    const std::string single = "finite{" + std::to_string(target) + "}";
    const auto ir = chain_block_intersection(chain, map, x);
    r.add(label + " chain: the intersection stabilizes at " + single,
          ir.trend == IntersectionTrend::NonemptyStabilized && ir.intersection().to_string() == single,
          ir.intersection().to_string());
    auto ps = build_system(chain, map, x);
    const auto threads = enumerate_threads(ps.system);
    bool ok = threads.size() == 1;
    if (ok) {
      for (std::size_t l = 0; l <= kDepth; ++l) {
        const std::string expected = target < l ? single : ray(l);
        ok = ok && ps.block(l, threads[0].blocks[l]).to_string() == expected;
      }
      r.results[label + "_thread"] = detail::thread_json(ps, threads[0]);
    }
    r.add(label + " chain: the inverse limit is a single thread ending in " + single, ok,
          detail::plural(threads.size(), "thread"));
    systems.push_back(std::move(ps));
  };
  singleton_case(NatMap(Identity{}), 5, 5, "identity");
  singleton_case(NatMap(Constant{3}), 7, 3, "constant");

  // Filter proxy: every partition of the family contains U = evens.
  {
    const FilterProxy proxy(evens);
    const auto family = builtin::filter_family(proxy, 3);
    const NatMap shift(Shift{1});
    bool member = true;
    bool infinite = true;
    for (const auto& p : family.levels) {
      const auto uid = static_cast<BlockId>(std::find(p.blocks().begin(), p.blocks().end(), evens) - p.blocks().begin());
      for (State x = 0; x <= 6; ++x) {
        const auto v = delta(p, shift, x);
        member = member && uid < p.size() && v.contains(uid);
        std::vector<BlockId> inf;
        for (BlockId b = 0; b < p.size(); ++b) {
          if (p.block(b).is_infinite()) inf.push_back(b);
        }
        infinite = infinite && v.block_ids == inf;
      }
    }
    r.add("filter proxy: U is visited in every partition of the family", member);
    r.add("filter proxy: the visited blocks are exactly the infinite blocks", infinite);
    r.add("filter proxy: U is infinite with infinite complement",
          evens.is_infinite() && evens.complement().is_infinite());

    auto ps = build_system(family, shift, 0);
    const auto threads = enumerate_threads(ps.system);
    Thread all_u;
    for (const auto& p : family.levels) {
      all_u.blocks.push_back(
          static_cast<BlockId>(std::find(p.blocks().begin(), p.blocks().end(), evens) - p.blocks().begin()));
    }
    const bool has_u = std::find(threads.begin(), threads.end(), all_u) != threads.end();
    r.add("filter proxy: choosing U at every index is a thread", has_u, detail::plural(threads.size(), "thread"));
    const Thread built = construct_thread(ps.system, maximal_elements(family.index));
    r.add("filter proxy: the constructed thread lies in the inverse limit",
          std::find(threads.begin(), threads.end(), built) != threads.end());
    r.results["filter_family_size"] = family.size();
    systems.push_back(std::move(ps));
  }

  // Projection laws on every system built above.
  {
    bool ok = true;
    std::string detail;
    for (const auto& ps : systems) {
      const auto laws = check_inverse_system(ps.system);
      if (!laws.ok()) {
        ok = false;
        detail = laws.identity.witness + laws.composition.witness + laws.surjectivity.witness;
      }
    }
    r.add("identity, composition and surjectivity laws hold on every example system", ok, detail);
  }
  return r;
}

}  // namespace ergo::cli
