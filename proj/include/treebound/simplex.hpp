#pragma once

#include <optional>
#include <vector>

#include "treebound/constraint.hpp"

namespace treebound {

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* lp_status_str(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational objective;
  std::vector<Rational> values;  // by VarId; filled only when Optimal
  long long pivots = 0;
  std::size_t presolve_eliminated = 0;  // variables merged away before the simplex
  std::size_t solver_rows = 0;
  std::size_t solver_cols = 0;
  // Infeasible: indices into ConstraintSystem::constraints() that witness
  // the contradiction (presolve conflict or phase-1 stuck rows).
  std::vector<std::size_t> conflict;
  // Unbounded: improving direction by variable (a constraint-generation bug).
  std::vector<std::pair<VarId, Rational>> ray;
};

// Exact rational LP: union-find presolve over variable identities and
// constant offsets, then two-phase primal simplex with Bland's rule.
// Deterministic for a given system. On Optimal the solution is verified
// against every original constraint exactly; failure is an InternalError.
LpResult solve_lp(const ConstraintSystem& sys);

}  // namespace treebound
