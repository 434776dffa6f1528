#pragma once

#include "treebound/ast.hpp"

namespace treebound {

// Rewrites every definition into let-normal form: operands of applications,
// node construction, primitives, conditionals, and match scrutinees are
// plain variables, with evaluation order pinned by administrative lets
// (left to right in surface order). Also alpha-renames binders so every
// binder in the output is unique; wildcards get synthetic names.
// Idempotent up to structural equality.
Program to_let_normal(Program p);

// True when every redex operand position holds a variable and binders obey
// the conventions above (used as a postcondition check and in tests).
bool is_let_normal(const Program& p);
bool is_let_normal(const Expr& e);

}  // namespace treebound
