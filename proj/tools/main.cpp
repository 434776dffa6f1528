#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "treebound/analyze.hpp"
#include "treebound/diag.hpp"
#include "treebound/report.hpp"

namespace {

// name:index=value with the index spelled raw, e.g. buy:ae*=5
bool parse_pin(const std::string& text, treebound::AnalyzerOptions& opts) {
  auto colon = text.find(':');
  auto eq = text.find('=', colon == std::string::npos ? 0 : colon);
  if (colon == std::string::npos || eq == std::string::npos || colon == 0 || eq <= colon + 1 ||
      eq + 1 >= text.size()) {
    return false;
  }
  std::string name = text.substr(0, colon);
  std::string index = text.substr(colon + 1, eq - colon - 1);
  std::string value = text.substr(eq + 1);
  for (char c : index) {
    if (c != '*' && c != 'a' && c != 'b' && c != 'c' && c != 'd' && c != 'e') return false;
  }
  auto parsed = treebound::parse_rational(value);
  if (!parsed) return false;
  opts.pins[name].emplace_back(index, *parsed);
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"treebound: linear resource bounds for first-order tree programs"};
  std::string file;
  std::string cost_model = "tick";
  int worldview_cap = 0;
  bool json = false;
  bool stats = false;
  bool dump_lp = false;
  std::vector<std::string> pins;
  treebound::AnalyzerOptions opts;

  app.add_option("file", file, "source file to analyze")->required();
  app.add_option("--cost-model", cost_model, "resource being counted")
      ->check(CLI::IsMember({"tick", "stack"}))
      ->capture_default_str();
  app.add_option("--check", opts.check,
                 "validate each certificate against this many generated inputs")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", opts.seed, "seed for input generation")->capture_default_str();
  app.add_option("--worldview-cap", worldview_cap, "hard limit on worldviews per definition")
      ->check(CLI::PositiveNumber);
  app.add_option("--pin", pins, "pin a signature entry, name:index=value (index like ae*)");
  app.add_flag("--json", json, "machine-readable report on stdout");
  app.add_flag("--stats", stats, "include constraint and solver statistics");
  app.add_flag("--dump-lp", dump_lp, "print each definition's linear program");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  opts.cost_model =
      cost_model == "stack" ? treebound::CostModel::Stack : treebound::CostModel::Tick;
  if (worldview_cap > 0) opts.worldview_cap = worldview_cap;
  opts.want_stats = stats;
  opts.want_lp_dump = dump_lp;
  for (const std::string& p : pins) {
    if (!parse_pin(p, opts)) {
      std::cerr << "error: malformed --pin '" << p << "', expected name:index=value\n";
      return 2;
    }
  }

  try {
    treebound::AnalysisReport rep = treebound::analyze_file(file, opts);
    if (json) {
      std::cout << treebound::json_report(rep, stats);
    } else {
      treebound::write_text_report(std::cout, rep, stats);
    }
    return rep.all_ok() ? 0 : 1;
  } catch (const treebound::SourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const treebound::InternalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
