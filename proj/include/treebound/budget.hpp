#pragma once

#include <map>
#include <optional>
#include <string>

#include "treebound/ast.hpp"
#include "treebound/basetypes.hpp"

namespace treebound {

// Number of worldview rows an expression's witness designations can diverge
// over: one per saturated application, summed across sequencing and across
// branch arms. Partial applications (arrow-typed results) only build a
// closure and count for nothing; inner function literals budget separately
// and contribute nothing here.
int worldview_demand(const Expr& e, const TypedProgram& tp);

// Whether the expression matches on or constructs a tree (again not looking
// inside inner function literals).
bool has_tree_ops(const Expr& e);

// Acyclic control-flow paths through a definition's body with calls to
// non-recursive earlier definitions inlined; recursive calls count once.
// Saturates at a large cap so pathological programs stay finite.
long long path_count(const Program& prog, const std::string& def_name);

struct WorldviewBudget {
  int demand = 0;
  bool tree_ops = false;
  int required = 1;       // max(demand, tree_ops ? 2 : 1)
  long long default_cap = 2;
  int worldviews = 1;     // chosen row count
  bool clamped = false;   // default cap cut the count below the requirement
};

// Chooses the worldview count for one function body. With an explicit cap the
// choice min(required, cap) must not lose rows; a shortfall is a hard error
// naming the function. The default cap (max of 2 and the path count) only
// clamps with a warning.
WorldviewBudget budget_worldviews(const Expr& body, const TypedProgram& tp,
                                  const std::string& fn_name, Span span,
                                  std::optional<int> explicit_cap);

}  // namespace treebound
