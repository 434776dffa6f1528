#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treebound/annotation.hpp"
#include "treebound/basetypes.hpp"
#include "treebound/constraint.hpp"

namespace treebound {

// Signature of an already-analyzed definition, substituted as constants.
struct SolvedSig {
  TypePtr type;
  std::map<Index, Rational> coeffs;
};

// How branch arms keep worldview rows. Full retention threads every active
// row through both arms; split retention gives each arm the rows its own
// applications designate (at least one). Witness designation is identical
// under both, so the two systems describe the same derivation skeleton.
enum class Retention { Full, Split };
const char* retention_str(Retention r);

struct GenOptions {
  Retention retention = Retention::Full;
  std::optional<int> worldview_cap;
  // Extra equalities sig(index) = value for this definition's signature.
  std::vector<std::pair<Index, Rational>> pins;
};

struct GenOutput {
  ConstraintSystem sys;
  FnSigPtr sig;
  int worldviews = 1;      // largest row count across the nested derivations
  int budget_required = 1;
  bool budget_clamped = false;
  std::vector<std::string> warnings;
};

// Emits the full constraint system for one definition, with earlier
// definitions' signatures fixed to their solved values.
GenOutput gen_constraints(const TypedProgram& tp, const Def& def,
                          const std::map<std::string, SolvedSig>& solved,
                          const GenOptions& opts);

}  // namespace treebound
