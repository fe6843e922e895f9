#pragma once

// Text configuration for the command-line front end.
//
//   # comment
//   space nat                      | space finite(N)
//   map shift(d) | identity | constant(x) | table[a, b, ...]
//       | override{a:b, c:d; shift(d)}
//   partition NAME = [SET, SET, ...]
//   chain builtin example2 [depth K]
//   chain builtin filter_family U = SET [depth K]
//   chain explicit [NAME, NAME, ...]             (totally ordered as listed)
//   chain poset [NAME, ...] order [NAME <= NAME, ...]
//   points x, y, ...
//   cofinal [NAME, ...]
//   select [id, id, ...]                         (block per chain index)
//   depth K
//
//   SET := TERM (∪ TERM)*   with '|' accepted for '∪'
//   TERM := finite{a, b, ...} | ap(first, stride) | all
//
// Statements end at ';' or at a newline outside brackets.

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergo/chains.hpp"
#include "ergo/common.hpp"
#include "ergo/partitions.hpp"
#include "ergo/set_algebra.hpp"
#include "ergo/state_space.hpp"

namespace ergo::config {

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& msg)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Well-formed text that does not describe a valid system.
class SemanticError : public Error {
 public:
  SemanticError(int line, const std::string& msg, std::optional<State> witness = std::nullopt)
      : Error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + msg), line_(line), witness_(witness) {}
  int line() const { return line_; }
  std::optional<State> witness() const { return witness_; }

 private:
  int line_;
  std::optional<State> witness_;
};

struct SetTerm {
  enum class Kind { Finite, Progression, All } kind;
  std::vector<State> values;  // members, or {first, stride}
  int line;
};
using SetExpr = std::vector<SetTerm>;

struct ChainSpec {
  enum class Kind { Example2, FilterFamily, Explicit, Poset } kind;
  std::optional<std::size_t> depth;
  SetExpr filter_set;
  std::vector<std::string> members;
  std::vector<std::pair<std::string, std::string>> order;
  int line = 0;
};

template <class Set>
struct Model {
  std::optional<MapFor<Set>> map;
  std::vector<std::pair<std::string, Partition<Set>>> partitions;
};

struct Config {
  StateSpace space = StateSpace::nat();
  std::variant<Model<FiniteSet>, Model<UPSet>> model;
  std::optional<ChainSpec> chain;
  std::vector<State> points;
  std::vector<std::string> cofinal;
  std::optional<std::vector<BlockId>> selection;
  std::optional<std::size_t> depth;
};

namespace detail {

struct Token {
  enum class Kind { Ident, Number, Punct, Newline, End } kind;
  std::string text;
  int line;
  int column;
};

inline std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  int depth = 0;
  std::size_t i = 0;
  auto push = [&](Token::Kind k, std::string s, int c) { out.push_back({k, std::move(s), line, c}); };
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (ch == '\n') {
      if (depth == 0) push(Token::Kind::Newline, "\n", col);
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      ++col;
      continue;
    }
    const int start = col;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string s;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        s += text[i++];
        ++col;
      }
      push(Token::Kind::Number, s, start);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string s;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '-')) {
        s += text[i++];
        ++col;
      }
      push(Token::Kind::Ident, s, start);
      continue;
    }
    if (text.compare(i, 3, "∪") == 0) {
      push(Token::Kind::Punct, "|", start);
      i += 3;
      ++col;
      continue;
    }
    if (text.compare(i, 2, "<=") == 0) {
      push(Token::Kind::Punct, "<=", start);
      i += 2;
      col += 2;
      continue;
    }
    static const std::string kPunct = "{}[](),:;=|";
    if (kPunct.find(ch) != std::string::npos) {
      if (ch == '{' || ch == '[' || ch == '(') ++depth;
      if ((ch == '}' || ch == ']' || ch == ')') && depth > 0) --depth;
      push(Token::Kind::Punct, std::string(1, ch), start);
      ++i;
      ++col;
      continue;
    }
    throw ParseError(line, col, std::string("unexpected character '") + ch + "'");
  }
  push(Token::Kind::End, "", col);
  return out;
}

struct MapSpec {
  std::string kind;  // table | identity | shift | constant | override
  std::vector<State> values;
  std::map<State, State> overrides;
  std::string tail_kind;
  State tail_value = 0;
  int line = 0;
};

struct PartitionSpec {
  std::string name;
  std::vector<SetExpr> blocks;
  int line;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  std::optional<std::pair<std::optional<std::size_t>, int>> space;  // finite size or nat, line
  std::optional<MapSpec> map;
  std::vector<PartitionSpec> partitions;
  std::optional<ChainSpec> chain;
  std::vector<State> points;
  std::vector<std::string> cofinal;
  std::optional<std::vector<BlockId>> selection;
  std::optional<std::size_t> depth;

  void parse() {
    while (true) {
      while (peek_punct(";") || peek().kind == Token::Kind::Newline) ++pos_;
      if (peek().kind == Token::Kind::End) return;
      statement();
      if (peek().kind == Token::Kind::End) return;
      if (!peek_punct(";") && peek().kind != Token::Kind::Newline) fail("expected end of statement");
    }
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool peek_punct(const char* p) const { return peek().kind == Token::Kind::Punct && peek().text == p; }
  bool peek_ident(const char* w) const { return peek().kind == Token::Kind::Ident && peek().text == w; }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    const std::string found = t.kind == Token::Kind::End ? "end of input"
                              : t.kind == Token::Kind::Newline ? "end of line"
                                                              : "'" + t.text + "'";
    throw ParseError(t.line, t.column, msg + ", found " + found);
  }
  void expect(const char* p) {
    if (!peek_punct(p)) fail(std::string("expected '") + p + "'");
    ++pos_;
  }
  std::string ident() {
    if (peek().kind != Token::Kind::Ident) fail("expected a name");
    return toks_[pos_++].text;
  }
  void keyword(const char* w) {
    if (!peek_ident(w)) fail(std::string("expected '") + w + "'");
    ++pos_;
  }
  State number() {
    if (peek().kind != Token::Kind::Number) fail("expected a number");
    const Token& t = toks_[pos_];
    try {
      std::size_t used = 0;
      const auto v = std::stoull(t.text, &used);
      ++pos_;
      return v;
    } catch (const std::out_of_range&) {
      throw ParseError(t.line, t.column, "number out of range");
    }
  }
  template <class F>
  void list(const char* close, F&& item) {
    if (peek_punct(close)) {
      ++pos_;
      return;
    }
    while (true) {
      item();
      if (peek_punct(close)) {
        ++pos_;
        return;
      }
      expect(",");
    }
  }

  void statement() {
    const int line = peek().line;
    const std::string kw = ident();
    if (kw == "space") {
      if (peek_ident("nat")) {
        ++pos_;
        space = std::make_pair(std::nullopt, line);
      } else {
        keyword("finite");
        expect("(");
        const State n = number();
        expect(")");
        space = std::make_pair(std::optional<std::size_t>(n), line);
      }
    } else if (kw == "map") {
      map = map_spec();
      map->line = line;
    } else if (kw == "partition") {
      PartitionSpec p{ident(), {}, line};
      expect("=");
      expect("[");
      list("]", [&] { p.blocks.push_back(set_expr()); });
      partitions.push_back(std::move(p));
    } else if (kw == "chain") {
      chain = chain_spec();
      chain->line = line;
    } else if (kw == "points" || kw == "point") {
      points.push_back(number());
      while (peek_punct(",")) {
        ++pos_;
        points.push_back(number());
      }
    } else if (kw == "cofinal") {
      expect("[");
      list("]", [&] { cofinal.push_back(ident()); });
    } else if (kw == "select") {
      selection.emplace();
      expect("[");
      list("]", [&] { selection->push_back(number()); });
    } else if (kw == "depth") {
      depth = number();
    } else {
      --pos_;
      fail("unknown statement");
    }
  }

  MapSpec map_spec() {
    MapSpec m;
    m.kind = ident();
    if (m.kind == "table") {
      expect("[");
      list("]", [&] { m.values.push_back(number()); });
    } else if (m.kind == "shift" || m.kind == "constant") {
      expect("(");
      m.values.push_back(number());
      expect(")");
    } else if (m.kind == "override") {
      expect("{");
      while (!peek_punct(";")) {
        const State a = number();
        expect(":");
        m.overrides[a] = number();
        if (!peek_punct(";")) expect(",");
      }
      expect(";");
      m.tail_kind = ident();
      if (m.tail_kind == "shift" || m.tail_kind == "constant") {
        expect("(");
        m.tail_value = number();
        expect(")");
      } else if (m.tail_kind != "identity") {
        --pos_;
        fail("expected identity, shift(d) or constant(x)");
      }
      expect("}");
    } else if (m.kind != "identity") {
      --pos_;
      fail("unknown map kind");
    }
    return m;
  }

  ChainSpec chain_spec() {
    ChainSpec c{};
    const std::string how = ident();
    if (how == "builtin") {
      const std::string name = ident();
      if (name == "example2") {
        c.kind = ChainSpec::Kind::Example2;
      } else if (name == "filter_family") {
        c.kind = ChainSpec::Kind::FilterFamily;
        keyword("U");
        expect("=");
        c.filter_set = set_expr();
      } else {
        --pos_;
        fail("unknown builtin chain");
      }
      if (peek_ident("depth")) {
        ++pos_;
        c.depth = number();
      }
    } else if (how == "explicit" || how == "poset") {
      c.kind = how == "explicit" ? ChainSpec::Kind::Explicit : ChainSpec::Kind::Poset;
      expect("[");
      list("]", [&] { c.members.push_back(ident()); });
      if (c.kind == ChainSpec::Kind::Poset) {
        keyword("order");
        expect("[");
        list("]", [&] {
          std::string lo = ident();
          expect("<=");
          c.order.emplace_back(std::move(lo), ident());
        });
      }
    } else {
      --pos_;
      fail("expected builtin, explicit or poset");
    }
    return c;
  }

  SetExpr set_expr() {
    SetExpr e{term()};
    while (peek_punct("|")) {
      ++pos_;
      e.push_back(term());
    }
    return e;
  }

  SetTerm term() {
    const int line = peek().line;
    const std::string kw = ident();
    SetTerm t{SetTerm::Kind::All, {}, line};
    if (kw == "finite") {
      t.kind = SetTerm::Kind::Finite;
      expect("{");
      list("}", [&] { t.values.push_back(number()); });
    } else if (kw == "ap") {
      t.kind = SetTerm::Kind::Progression;
      expect("(");
      t.values.push_back(number());
      expect(",");
      t.values.push_back(number());
      expect(")");
      if (t.values[1] == 0) throw ParseError(line, toks_[pos_ - 2].column, "stride must be positive");
    } else if (kw != "all") {
      --pos_;
      fail("expected finite{...}, ap(first, stride) or all");
    }
    return t;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline UPSet build_set(const SetExpr& e, const UPSet*) {
  UPSet s;
  for (const auto& t : e) {
    switch (t.kind) {
      case SetTerm::Kind::Finite: s = s.unite(UPSet::finite(t.values)); break;
      case SetTerm::Kind::Progression: s = s.unite(UPSet::progression(t.values[0], t.values[1])); break;
      case SetTerm::Kind::All: s = UPSet::all(); break;
    }
  }
  return s;
}

inline FiniteSet build_set(const SetExpr& e, std::size_t n) {
  FiniteSet s(n);
  for (const auto& t : e) {
    switch (t.kind) {
      case SetTerm::Kind::Finite:
        for (State v : t.values) {
          if (v >= n) throw SemanticError(t.line, "state " + std::to_string(v) + " outside finite(" + std::to_string(n) + ")", v);
          s.insert(v);
        }
        break;
      case SetTerm::Kind::Progression:
        for (State v = t.values[0]; v < n; v += t.values[1]) s.insert(v);
        break;
      case SetTerm::Kind::All: s = FiniteSet::full(n); break;
    }
  }
  return s;
}

template <class Set>
Set build_set_for(const SetExpr& e, const StateSpace& space) {
  if constexpr (std::is_same_v<Set, UPSet>) {
    return build_set(e, static_cast<const UPSet*>(nullptr));
  } else {
    return build_set(e, space.size());
  }
}

inline TailMap build_tail(const MapSpec& m) {
  if (m.tail_kind == "shift") return Shift{m.tail_value};
  if (m.tail_kind == "constant") return Constant{m.tail_value};
  return Identity{};
}

template <class Set>
MapFor<Set> build_map(const MapSpec& m, const StateSpace& space) {
  if constexpr (std::is_same_v<Set, FiniteSet>) {
    if (m.kind != "table") throw SemanticError(m.line, "finite spaces take a map table[...]");
    if (m.values.size() != space.size()) {
      throw SemanticError(m.line, "map table has " + std::to_string(m.values.size()) + " entries for " + space.to_string());
    }
    try {
      return FiniteMap(m.values);
    } catch (const DomainError& e) {
      throw SemanticError(m.line, e.what());
    }
  } else {
    try {
      if (m.kind == "identity") return NatMap(Identity{});
      if (m.kind == "shift") return NatMap(Shift{m.values[0]});
      if (m.kind == "constant") return NatMap(Constant{m.values[0]});
      if (m.kind == "override") return NatMap(FiniteOverride{m.overrides, build_tail(m)});
    } catch (const DomainError& e) {
      throw SemanticError(m.line, e.what());
    }
    throw SemanticError(m.line, "map " + m.kind + " needs a finite space");
  }
}

template <class Set>
Model<Set> build_model(const Parser& p, const StateSpace& space) {
  Model<Set> model;
  if (p.map) model.map = build_map<Set>(*p.map, space);
  for (const auto& ps : p.partitions) {
    for (const auto& [name, part] : model.partitions) {
      if (name == ps.name) throw SemanticError(ps.line, "partition " + ps.name + " defined twice");
    }
    std::vector<Set> blocks;
    for (const auto& b : ps.blocks) blocks.push_back(build_set_for<Set>(b, space));
    try {
      model.partitions.emplace_back(ps.name, Partition<Set>::validate(std::move(blocks), space));
    } catch (const PartitionError& e) {
      throw SemanticError(ps.line, "partition " + ps.name + ": " + e.what(), e.witness());
    }
  }
  return model;
}

}  // namespace detail

/// Parses a configuration. Throws ParseError on malformed text and
/// SemanticError on text that names an invalid system.
inline Config parse_config(const std::string& text) {
  detail::Parser p(text);
  p.parse();
  Config c;
  if (p.space && p.space->first) {
    if (*p.space->first == 0) throw SemanticError(p.space->second, "finite space must be nonempty");
    c.space = StateSpace::finite(*p.space->first);
    c.model = detail::build_model<FiniteSet>(p, c.space);
  } else {
    c.model = detail::build_model<UPSet>(p, c.space);
  }
  c.chain = p.chain;
  c.points = p.points;
  c.cofinal = p.cofinal;
  c.selection = p.selection;
  c.depth = p.depth;
  if (c.chain && (c.chain->kind == ChainSpec::Kind::Example2 || c.chain->kind == ChainSpec::Kind::FilterFamily) &&
      c.space.is_finite()) {
    throw SemanticError(c.chain->line, "builtin chains live on the symbolic space");
  }
  for (State x : c.points) {
    if (!c.space.contains(x)) throw SemanticError(0, "point " + std::to_string(x) + " outside " + c.space.to_string(), x);
  }
  return c;
}

/// Builds the configured chain. `depth` overrides any depth in the file.
template <class Set>
std::optional<RefinementChain<Set>> make_chain(const Config& c, const Model<Set>& model,
                                               std::optional<std::size_t> depth = std::nullopt) {
  if (!c.chain) return std::nullopt;
  const ChainSpec& spec = *c.chain;
  const std::size_t k = depth ? *depth : spec.depth ? *spec.depth : c.depth ? *c.depth : 10;
  auto lookup = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < model.partitions.size(); ++i) {
      if (model.partitions[i].first == name) return i;
    }
    throw SemanticError(spec.line, "unknown partition " + name);
  };
  if constexpr (std::is_same_v<Set, UPSet>) {
    if (spec.kind == ChainSpec::Kind::Example2) return builtin::example2(k);
    if (spec.kind == ChainSpec::Kind::FilterFamily) {
      try {
        return builtin::filter_family(FilterProxy(detail::build_set(spec.filter_set, nullptr)), k);
      } catch (const DomainError& e) {
        throw SemanticError(spec.line, e.what());
      }
    }
  }
  if (spec.members.empty()) throw SemanticError(spec.line, "chain has no members");
  std::vector<Partition<Set>> levels;
  std::vector<std::string> labels;
  for (const auto& m : spec.members) {
    levels.push_back(model.partitions[lookup(m)].second);
    labels.push_back(m);
  }
  auto index_of = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < spec.members.size(); ++i) {
      if (spec.members[i] == name) return i;
    }
    throw SemanticError(spec.line, name + " is not a chain member");
  };
  try {
    if (spec.kind == ChainSpec::Kind::Explicit) {
      return RefinementChain<Set>(IndexPoset::total(std::move(labels)), std::move(levels));
    }
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (const auto& [lo, hi] : spec.order) rel.emplace_back(index_of(lo), index_of(hi));
    return RefinementChain<Set>(IndexPoset::from_relation(std::move(labels), rel), std::move(levels));
  } catch (const PosetError& e) {
    throw SemanticError(spec.line, e.what());
  }
}

}  // namespace ergo::config
