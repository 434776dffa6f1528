#pragma once

#include <memory>
#include <string>
#include <vector>

#include "treebound/diag.hpp"
#include "treebound/rational.hpp"

namespace treebound {

enum class ExprKind {
  Var,
  IntLit,
  BoolLit,
  UnitLit,
  Leaf,
  MakeNode,  // Node(payload, left, right)
  Tick,      // tick{r}
  App,
  Prim,
  If,
  Match,  // match scrutinee with Leaf -> e | Node(payload, left, right) -> e
  Let,
  Fun,  // fun param -> body, optionally self-named for recursion
};

enum class PrimOp { Eq, Lt, Le, Gt, Ge, Add, Sub };

const char* prim_op_str(PrimOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

// One node kind per constructor; field use by kind:
//   Var:      name
//   IntLit:   ival            BoolLit: bval
//   Tick:     amount
//   MakeNode: k0 payload, k1 left, k2 right
//   App:      k0 fn, k1 arg
//   Prim:     prim, k0, k1
//   If:       k0 cond, k1 then, k2 else
//   Match:    k0 scrutinee, k1 leaf arm, k2 node arm,
//             name/name2/name3 = payload/left/right binders
//   Let:      name binder, k0 rhs, k1 body
//   Fun:      name self ("" when not recursive), name2 param, k0 body
struct Expr {
  ExprKind kind;
  Span span;
  std::string name, name2, name3;
  ExprPtr k0, k1, k2;
  PrimOp prim = PrimOp::Eq;
  long long ival = 0;
  bool bval = false;
  Rational amount;

  static ExprPtr var(Span s, std::string n);
  static ExprPtr int_lit(Span s, long long v);
  static ExprPtr bool_lit(Span s, bool v);
  static ExprPtr unit_lit(Span s);
  static ExprPtr leaf(Span s);
  static ExprPtr make_node(Span s, ExprPtr payload, ExprPtr left, ExprPtr right);
  static ExprPtr tick(Span s, Rational amount);
  static ExprPtr app(Span s, ExprPtr fn, ExprPtr arg);
  static ExprPtr prim_op(Span s, PrimOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr if_(Span s, ExprPtr c, ExprPtr t, ExprPtr e);
  static ExprPtr match(Span s, ExprPtr scrut, ExprPtr leaf_arm, std::string payload,
                       std::string left, std::string right, ExprPtr node_arm);
  static ExprPtr let(Span s, std::string binder, ExprPtr rhs, ExprPtr body);
  static ExprPtr fun(Span s, std::string self, std::string param, ExprPtr body);
};

ExprPtr clone(const Expr& e);

// Structural equality modulo spans.
bool expr_equal(const Expr& a, const Expr& b);

// Round-trippable source rendering (single line).
std::string to_source(const Expr& e);

struct Def {
  std::string name;
  bool is_rec = false;
  Span span;
  ExprPtr fn;  // Fun chain, one level per parameter
};

struct Program {
  std::string filename;
  std::vector<Def> defs;
};

std::string to_source(const Program& p);

// Parameter names of a definition, outermost first.
std::vector<std::string> def_params(const Def& d);

}  // namespace treebound
