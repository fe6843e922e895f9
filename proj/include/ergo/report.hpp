#pragma once

// Command reports: a list of named pass/fail checks plus structured results.
// The machine format is a single JSON document with sorted keys.

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace ergo {

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
  friend bool operator==(const Check&, const Check&) = default;
};

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitParseError = 2, kExitSemanticError = 3 };

struct Report {
  std::string command;
  nlohmann::json echo = nlohmann::json::object();
  std::vector<Check> checks;
  nlohmann::json results = nlohmann::json::object();
  int exit_code = kExitOk;

  void add(std::string name, bool passed, std::string detail = {}) {
    checks.push_back({std::move(name), passed, std::move(detail)});
    if (!passed && exit_code == kExitOk) exit_code = kExitCheckFailed;
  }
  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }

  friend bool operator==(const Report&, const Report&) = default;
};

inline void to_json(nlohmann::json& j, const Check& c) {
  j = nlohmann::json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}};
}
inline void from_json(const nlohmann::json& j, Check& c) {
  j.at("name").get_to(c.name);
  j.at("passed").get_to(c.passed);
  j.at("detail").get_to(c.detail);
}

inline void to_json(nlohmann::json& j, const Report& r) {
  j = nlohmann::json{{"command", r.command},
                     {"echo", r.echo},
                     {"checks", r.checks},
                     {"results", r.results},
                     {"exit_code", r.exit_code}};
}
inline void from_json(const nlohmann::json& j, Report& r) {
  j.at("command").get_to(r.command);
  r.echo = j.at("echo");
  j.at("checks").get_to(r.checks);
  r.results = j.at("results");
  j.at("exit_code").get_to(r.exit_code);
}

inline std::string render_machine(const Report& r) { return nlohmann::json(r).dump(2) + "\n"; }

inline Report parse_machine(const std::string& text) { return nlohmann::json::parse(text).get<Report>(); }

namespace detail {

inline void render_value(std::ostream& os, const nlohmann::json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (it->is_structured() && !it->empty()) {
        os << pad << it.key() << ":\n";
        render_value(os, *it, indent + 2);
      } else {
        os << pad << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
      }
    }
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (e.is_structured() && !e.empty()) {
        os << pad << "-\n";
        render_value(os, e, indent + 2);
      } else {
        os << pad << "- " << (e.is_string() ? e.get<std::string>() : e.dump()) << "\n";
      }
    }
  } else {
    os << pad << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

}  // namespace detail

inline std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "command: " << r.command << "\n";
  if (!r.results.empty()) {
    os << "results:\n";
    detail::render_value(os, r.results, 2);
  }
  if (!r.checks.empty()) os << "checks:\n";
  for (const auto& c : r.checks) {
    os << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name;
    if (!c.detail.empty()) os << " -- " << c.detail;
    os << "\n";
  }
  os << "status: " << (r.exit_code == kExitOk ? "ok" : "failed") << " (exit " << r.exit_code << ")\n";
  return os.str();
}

}  // namespace ergo
