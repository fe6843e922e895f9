#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ergo/cli.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visit sets, refinement chains and inverse-limit threads"};
  std::string command;
  std::string config_path;
  std::vector<ergo::State> points;
  std::optional<std::size_t> depth;
  std::string format = "text";
  app.add_option("command", command, "validate | delta | intersect | threads | build-thread | verify | examples")
      ->required()
      ->check(CLI::IsMember(ergo::cli::commands()));
  app.add_option("--config", config_path, "configuration file");
  app.add_option("--point", points, "state to analyse (repeatable)")->take_all();
  app.add_option("--depth", depth, "depth of a builtin chain");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "machine"}));
  CLI11_PARSE(app, argc, argv);

  ergo::Report report;
  try {
    if (command == "examples") {
      report = ergo::cli::run_examples();
    } else {
      if (config_path.empty()) {
        std::cerr << "error: " << command << " needs --config\n";
        return ergo::kExitSemanticError;
      }
      const auto config = ergo::config::parse_config(read_file(config_path));
      report = ergo::cli::run(config, command, {points, depth});
    }
  } catch (const ergo::config::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return ergo::kExitParseError;
  } catch (const ergo::config::SemanticError& e) {
    std::cerr << "semantic error: " << e.what() << "\n";
    return ergo::kExitSemanticError;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ergo::kExitSemanticError;
  }
  std::cout << (format == "machine" ? ergo::render_machine(report) : ergo::render_text(report));
  return report.exit_code;
}
