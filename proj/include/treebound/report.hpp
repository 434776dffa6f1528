#pragma once

#include <ostream>
#include <string>

#include "treebound/analyze.hpp"

namespace treebound {

// Human-readable report, one block per definition.
void write_text_report(std::ostream& out, const AnalysisReport& rep, bool with_stats);

// Machine-readable report, schema "treebound-report/1". Deterministic for a
// fixed input, seed, and option set.
std::string json_report(const AnalysisReport& rep, bool with_stats);

}  // namespace treebound
