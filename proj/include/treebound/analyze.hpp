#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treebound/basetypes.hpp"
#include "treebound/congen.hpp"
#include "treebound/simplex.hpp"
#include "treebound/soundness.hpp"

namespace treebound {

enum class CostModel { Tick, Stack };
const char* cost_model_str(CostModel m);

struct AnalyzerOptions {
  CostModel cost_model = CostModel::Tick;
  int check = 0;  // input tuples per definition; 0 disables the bound check
  std::uint64_t seed = 1;
  std::optional<int> worldview_cap;
  // per-definition pinned signature entries, raw index spelling ("ae*")
  std::map<std::string, std::vector<std::pair<Index, Rational>>> pins;
  bool want_stats = false;
  bool want_lp_dump = false;
};

struct FunctionStats {
  std::map<Category, std::size_t> categories;
  std::size_t constraints = 0;
  int variables = 0;
  std::size_t presolve_eliminated = 0;
  std::size_t solver_rows = 0;
  std::size_t solver_cols = 0;
  long long pivots = 0;
};

struct FunctionReport {
  std::string name;
  std::string type_text;
  LpStatus status = LpStatus::Infeasible;
  bool skipped = false;
  std::string skip_reason;
  int worldviews = 1;
  int worldviews_required = 1;
  bool worldviews_clamped = false;
  Retention retention = Retention::Full;
  std::map<Index, Rational> signature;  // every location index, filled when solved
  std::string bound_text;
  std::string returned_text;
  std::string conflict_text;
  FunctionStats stats;
  std::string lp_dump;
  SoundnessReport check;  // populated when options.check > 0 and solved
  std::vector<std::string> warnings;

  bool solved() const { return !skipped && status == LpStatus::Optimal; }
};

struct AnalysisReport {
  std::string filename;
  CostModel cost_model = CostModel::Tick;
  std::vector<std::string> warnings;
  std::vector<FunctionReport> functions;

  // true when every definition has a certificate and no run contradicted one
  bool all_ok() const;
};

AnalysisReport analyze_program(Program prog, std::string filename, const AnalyzerOptions& opts);

// Reads, parses, and analyzes one source file. Throws SourceError on
// unreadable input or any frontend failure.
AnalysisReport analyze_file(const std::string& path, const AnalyzerOptions& opts);

// Bound rendering, exposed for tests: the entry bound and the exit promise
// of a solved signature, written over depth/size tokens of the parameters.
std::string render_bound(const BaseType& fn_type, const std::map<Index, Rational>& sig);
std::string render_returned(const BaseType& fn_type, const std::map<Index, Rational>& sig);

}  // namespace treebound
