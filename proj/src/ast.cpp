#include "treebound/ast.hpp"

#include <sstream>

namespace treebound {

const char* prim_op_str(PrimOp op) {
  switch (op) {
    case PrimOp::Eq: return "=";
    case PrimOp::Lt: return "<";
    case PrimOp::Le: return "<=";
    case PrimOp::Gt: return ">";
    case PrimOp::Ge: return ">=";
    case PrimOp::Add: return "+";
    case PrimOp::Sub: return "-";
  }
  return "?";
}

namespace {
ExprPtr mk(ExprKind k, Span s) {
  auto e = std::make_unique<Expr>();
  e->kind = k;
  e->span = s;
  return e;
}
}  // namespace

ExprPtr Expr::var(Span s, std::string n) {
  auto e = mk(ExprKind::Var, s);
  e->name = std::move(n);
  return e;
}

ExprPtr Expr::int_lit(Span s, long long v) {
  auto e = mk(ExprKind::IntLit, s);
  e->ival = v;
  return e;
}

ExprPtr Expr::bool_lit(Span s, bool v) {
  auto e = mk(ExprKind::BoolLit, s);
  e->bval = v;
  return e;
}

ExprPtr Expr::unit_lit(Span s) { return mk(ExprKind::UnitLit, s); }

ExprPtr Expr::leaf(Span s) { return mk(ExprKind::Leaf, s); }

ExprPtr Expr::make_node(Span s, ExprPtr payload, ExprPtr left, ExprPtr right) {
  auto e = mk(ExprKind::MakeNode, s);
  e->k0 = std::move(payload);
  e->k1 = std::move(left);
  e->k2 = std::move(right);
  return e;
}

ExprPtr Expr::tick(Span s, Rational amount) {
  auto e = mk(ExprKind::Tick, s);
  e->amount = std::move(amount);
  return e;
}

ExprPtr Expr::app(Span s, ExprPtr fn, ExprPtr arg) {
  auto e = mk(ExprKind::App, s);
  e->k0 = std::move(fn);
  e->k1 = std::move(arg);
  return e;
}

ExprPtr Expr::prim_op(Span s, PrimOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = mk(ExprKind::Prim, s);
  e->prim = op;
  e->k0 = std::move(lhs);
  e->k1 = std::move(rhs);
  return e;
}

ExprPtr Expr::if_(Span s, ExprPtr c, ExprPtr t, ExprPtr els) {
  auto e = mk(ExprKind::If, s);
  e->k0 = std::move(c);
  e->k1 = std::move(t);
  e->k2 = std::move(els);
  return e;
}

ExprPtr Expr::match(Span s, ExprPtr scrut, ExprPtr leaf_arm, std::string payload,
                    std::string left, std::string right, ExprPtr node_arm) {
  auto e = mk(ExprKind::Match, s);
  e->k0 = std::move(scrut);
  e->k1 = std::move(leaf_arm);
  e->k2 = std::move(node_arm);
  e->name = std::move(payload);
  e->name2 = std::move(left);
  e->name3 = std::move(right);
  return e;
}

ExprPtr Expr::let(Span s, std::string binder, ExprPtr rhs, ExprPtr body) {
  auto e = mk(ExprKind::Let, s);
  e->name = std::move(binder);
  e->k0 = std::move(rhs);
  e->k1 = std::move(body);
  return e;
}

ExprPtr Expr::fun(Span s, std::string self, std::string param, ExprPtr body) {
  auto e = mk(ExprKind::Fun, s);
  e->name = std::move(self);
  e->name2 = std::move(param);
  e->k0 = std::move(body);
  return e;
}

ExprPtr clone(const Expr& e) {
  auto c = std::make_unique<Expr>();
  c->kind = e.kind;
  c->span = e.span;
  c->name = e.name;
  c->name2 = e.name2;
  c->name3 = e.name3;
  c->prim = e.prim;
  c->ival = e.ival;
  c->bval = e.bval;
  c->amount = e.amount;
  if (e.k0) c->k0 = clone(*e.k0);
  if (e.k1) c->k1 = clone(*e.k1);
  if (e.k2) c->k2 = clone(*e.k2);
  return c;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.name2 != b.name2 || a.name3 != b.name3 ||
      a.prim != b.prim || a.ival != b.ival || a.bval != b.bval || a.amount != b.amount)
    return false;
  auto kids_equal = [](const ExprPtr& x, const ExprPtr& y) {
    if (!x != !y) return false;
    return !x || expr_equal(*x, *y);
  };
  return kids_equal(a.k0, b.k0) && kids_equal(a.k1, b.k1) && kids_equal(a.k2, b.k2);
}

namespace {

// Precedence levels: atoms bind tightest, then application, then +/-,
// then comparisons, then the statement-like forms.
void print(std::ostringstream& out, const Expr& e);

void print_wrapped(std::ostringstream& out, const Expr& e, int level, int min_level) {
  if (level < min_level) {
    out << '(';
    print(out, e);
    out << ')';
  } else {
    print(out, e);
  }
}

int level_of(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Let:
    case ExprKind::Fun:
    case ExprKind::If:
    case ExprKind::Match: return 0;
    case ExprKind::Prim:
      return (e.prim == PrimOp::Add || e.prim == PrimOp::Sub) ? 2 : 1;
    case ExprKind::App: return 3;
    default: return 4;
  }
}

void print(std::ostringstream& out, const Expr& e) {
  switch (e.kind) {
    case ExprKind::Var: out << e.name; return;
    case ExprKind::IntLit: out << e.ival; return;
    case ExprKind::BoolLit: out << (e.bval ? "true" : "false"); return;
    case ExprKind::UnitLit: out << "()"; return;
    case ExprKind::Leaf: out << "Leaf"; return;
    case ExprKind::Tick: out << "tick{" << rational_str(e.amount) << "}"; return;
    case ExprKind::MakeNode:
      out << "Node(";
      print(out, *e.k0);
      out << ", ";
      print(out, *e.k1);
      out << ", ";
      print(out, *e.k2);
      out << ')';
      return;
    case ExprKind::App:
      print_wrapped(out, *e.k0, level_of(*e.k0), 3);
      out << ' ';
      print_wrapped(out, *e.k1, level_of(*e.k1), 4);
      return;
    case ExprKind::Prim: {
      int lv = level_of(e);
      print_wrapped(out, *e.k0, level_of(*e.k0), lv);
      out << ' ' << prim_op_str(e.prim) << ' ';
      print_wrapped(out, *e.k1, level_of(*e.k1), lv + 1);
      return;
    }
    case ExprKind::If:
      out << "if ";
      print(out, *e.k0);
      out << " then ";
      print(out, *e.k1);
      out << " else ";
      print(out, *e.k2);
      return;
    case ExprKind::Match:
      out << "match ";
      print(out, *e.k0);
      out << " with Leaf -> ";
      print(out, *e.k1);
      out << " | Node(" << e.name << ", " << e.name2 << ", " << e.name3 << ") -> ";
      print(out, *e.k2);
      return;
    case ExprKind::Let:
      out << "let " << e.name << " = ";
      print(out, *e.k0);
      out << " in ";
      print(out, *e.k1);
      return;
    case ExprKind::Fun:
      out << "fun ";
      if (!e.name.empty()) out << e.name << ' ';
      out << e.name2 << " -> ";
      print(out, *e.k0);
      return;
  }
}

}  // namespace

std::string to_source(const Expr& e) {
  std::ostringstream out;
  print(out, e);
  return out.str();
}

std::string to_source(const Program& p) {
  std::ostringstream out;
  for (const auto& d : p.defs) {
    out << "let ";
    if (d.is_rec) out << "rec ";
    out << d.name;
    const Expr* e = d.fn.get();
    while (e && e->kind == ExprKind::Fun) {
      out << ' ' << e->name2;
      e = e->k0.get();
    }
    out << " = ";
    if (e) out << to_source(*e);
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> def_params(const Def& d) {
  std::vector<std::string> params;
  const Expr* e = d.fn.get();
  while (e && e->kind == ExprKind::Fun) {
    params.push_back(e->name2);
    e = e->k0.get();
  }
  return params;
}

}  // namespace treebound
