#include "treebound/basetypes.hpp"

#include <set>

#include "treebound/diag.hpp"

namespace treebound {

namespace {
TypePtr make(TypeKind k, TypePtr a = nullptr, TypePtr b = nullptr, int var = -1) {
  auto t = std::make_shared<BaseType>();
  t->kind = k;
  t->a = std::move(a);
  t->b = std::move(b);
  t->var = var;
  return t;
}
}  // namespace

TypePtr BaseType::unit() {
  static TypePtr t = make(TypeKind::Unit);
  return t;
}
TypePtr BaseType::boolean() {
  static TypePtr t = make(TypeKind::Bool);
  return t;
}
TypePtr BaseType::integer() {
  static TypePtr t = make(TypeKind::Int);
  return t;
}
TypePtr BaseType::tree(TypePtr elem) { return make(TypeKind::Tree, std::move(elem)); }
TypePtr BaseType::arrow(TypePtr arg, TypePtr res) {
  return make(TypeKind::Arrow, std::move(arg), std::move(res));
}

bool type_equal(const TypePtr& x, const TypePtr& y) {
  if (x.get() == y.get()) return true;
  if (!x || !y || x->kind != y->kind) return false;
  switch (x->kind) {
    case TypeKind::Unit:
    case TypeKind::Bool:
    case TypeKind::Int: return true;
    case TypeKind::Tree: return type_equal(x->a, y->a);
    case TypeKind::Arrow: return type_equal(x->a, y->a) && type_equal(x->b, y->b);
    case TypeKind::Var: return x->var == y->var;
  }
  return false;
}

std::string type_str(const TypePtr& t) {
  if (!t) return "?";
  switch (t->kind) {
    case TypeKind::Unit: return "unit";
    case TypeKind::Bool: return "bool";
    case TypeKind::Int: return "int";
    case TypeKind::Tree: return "tree(" + type_str(t->a) + ")";
    case TypeKind::Arrow: {
      std::string lhs = type_str(t->a);
      if (t->a && t->a->kind == TypeKind::Arrow) lhs = "(" + lhs + ")";
      return lhs + " -> " + type_str(t->b);
    }
    case TypeKind::Var: return "'t" + std::to_string(t->var);
  }
  return "?";
}

TypePtr TypedProgram::type_of(const Expr& e) const {
  auto it = expr_types.find(&e);
  internal_check(it != expr_types.end(), "expression has no inferred type");
  return it->second;
}

TypePtr TypedProgram::def_type(const std::string& name) const {
  for (const auto& [n, t] : def_types)
    if (n == name) return t;
  internal_fail("no signature for definition '" + name + "'");
}

namespace {

class Infer {
 public:
  explicit Infer(const std::string& file) : file_(file) {}

  TypePtr fresh() { return make(TypeKind::Var, nullptr, nullptr, next_var_++); }

  TypePtr resolve(TypePtr t) const {
    while (t && t->kind == TypeKind::Var) {
      auto it = bindings_.find(t->var);
      if (it == bindings_.end()) break;
      t = it->second;
    }
    return t;
  }

  bool occurs(int var, const TypePtr& t0) const {
    TypePtr t = resolve(t0);
    switch (t->kind) {
      case TypeKind::Var: return t->var == var;
      case TypeKind::Tree: return occurs(var, t->a);
      case TypeKind::Arrow: return occurs(var, t->a) || occurs(var, t->b);
      default: return false;
    }
  }

  void unify(const TypePtr& x0, const TypePtr& y0, Span span) {
    TypePtr x = resolve(x0), y = resolve(y0);
    if (x->kind == TypeKind::Var && y->kind == TypeKind::Var && x->var == y->var) return;
    if (x->kind == TypeKind::Var) {
      if (occurs(x->var, y))
        throw SourceError(file_, span, "occurs check: cannot construct the infinite type " +
                                           type_str(x) + " = " + type_str(zonk(y)));
      bindings_[x->var] = y;
      return;
    }
    if (y->kind == TypeKind::Var) {
      unify(y, x, span);
      return;
    }
    if (x->kind != y->kind)
      throw SourceError(file_, span, "type mismatch: expected " + type_str(zonk(x)) + ", found " +
                                         type_str(zonk(y)));
    if (x->kind == TypeKind::Tree) {
      unify(x->a, y->a, span);
    } else if (x->kind == TypeKind::Arrow) {
      unify(x->a, y->a, span);
      unify(x->b, y->b, span);
    }
  }

  // Fully substitutes bindings; leftover variables stay as Var for the
  // defaulting pass.
  TypePtr zonk(const TypePtr& t0) const {
    TypePtr t = resolve(t0);
    switch (t->kind) {
      case TypeKind::Tree: return BaseType::tree(zonk(t->a));
      case TypeKind::Arrow: return BaseType::arrow(zonk(t->a), zonk(t->b));
      default: return t;
    }
  }

  static TypePtr default_units(const TypePtr& t, bool* changed) {
    switch (t->kind) {
      case TypeKind::Var:
        *changed = true;
        return BaseType::unit();
      case TypeKind::Tree: return BaseType::tree(default_units(t->a, changed));
      case TypeKind::Arrow:
        return BaseType::arrow(default_units(t->a, changed), default_units(t->b, changed));
      default: return t;
    }
  }

  std::string file_;
  std::map<int, TypePtr> bindings_;
  int next_var_ = 0;
};

using TypeEnv = std::map<std::string, TypePtr>;

class Checker {
 public:
  Checker(const Program& p, TypedProgram& out) : prog_(p), out_(out), inf_(p.filename) {}

  void run() {
    std::set<std::string> seen;
    TypeEnv globals;
    for (const auto& d : prog_.defs) {
      if (!seen.insert(d.name).second)
        throw SourceError(prog_.filename, d.span, "duplicate definition of '" + d.name + "'");
      TypePtr t = check(*d.fn, globals);
      globals[d.name] = t;
    }
    finalize(globals);
  }

 private:
  TypePtr record(const Expr& e, TypePtr t) {
    out_.expr_types[&e] = t;
    return t;
  }

  TypePtr check(const Expr& e, const TypeEnv& env) {
    switch (e.kind) {
      case ExprKind::Var: {
        auto it = env.find(e.name);
        if (it == env.end())
          throw SourceError(prog_.filename, e.span, "unbound variable '" + e.name + "'");
        return record(e, it->second);
      }
      case ExprKind::IntLit: return record(e, BaseType::integer());
      case ExprKind::BoolLit: return record(e, BaseType::boolean());
      case ExprKind::UnitLit: return record(e, BaseType::unit());
      case ExprKind::Tick: return record(e, BaseType::unit());
      case ExprKind::Leaf: return record(e, BaseType::tree(inf_.fresh()));
      case ExprKind::MakeNode: {
        TypePtr elem = check(*e.k0, env);
        TypePtr t = BaseType::tree(elem);
        inf_.unify(check(*e.k1, env), t, e.k1->span);
        inf_.unify(check(*e.k2, env), t, e.k2->span);
        return record(e, t);
      }
      case ExprKind::App: {
        TypePtr fn = check(*e.k0, env);
        TypePtr arg = check(*e.k1, env);
        TypePtr res = inf_.fresh();
        inf_.unify(fn, BaseType::arrow(arg, res), e.span);
        return record(e, res);
      }
      case ExprKind::Prim: {
        inf_.unify(check(*e.k0, env), BaseType::integer(), e.k0->span);
        inf_.unify(check(*e.k1, env), BaseType::integer(), e.k1->span);
        bool arith = e.prim == PrimOp::Add || e.prim == PrimOp::Sub;
        return record(e, arith ? BaseType::integer() : BaseType::boolean());
      }
      case ExprKind::If: {
        inf_.unify(check(*e.k0, env), BaseType::boolean(), e.k0->span);
        TypePtr t = check(*e.k1, env);
        inf_.unify(t, check(*e.k2, env), e.k2->span);
        return record(e, t);
      }
      case ExprKind::Match: {
        TypePtr elem = inf_.fresh();
        TypePtr scrut = BaseType::tree(elem);
        inf_.unify(check(*e.k0, env), scrut, e.k0->span);
        TypePtr result = check(*e.k1, env);
        TypeEnv arm = env;
        arm[e.name] = elem;
        arm[e.name2] = scrut;
        arm[e.name3] = scrut;
        inf_.unify(result, check(*e.k2, arm), e.k2->span);
        return record(e, result);
      }
      case ExprKind::Let: {
        TypePtr rhs = check(*e.k0, env);
        TypeEnv inner = env;
        inner[e.name] = rhs;
        return record(e, check(*e.k1, inner));
      }
      case ExprKind::Fun: {
        TypePtr arg = inf_.fresh();
        TypePtr res = inf_.fresh();
        TypePtr self = BaseType::arrow(arg, res);
        TypeEnv inner = env;
        if (!e.name.empty()) inner[e.name] = self;
        inner[e.name2] = arg;
        inf_.unify(res, check(*e.k0, inner), e.k0->span);
        return record(e, self);
      }
    }
    internal_fail("unreachable expression kind");
  }

  void finalize(const TypeEnv& globals) {
    for (auto& [expr, t] : out_.expr_types) {
      bool defaulted = false;
      t = Infer::default_units(inf_.zonk(t), &defaulted);
      (void)defaulted;  // per-def warning below is enough
    }
    for (const auto& d : prog_.defs) {
      bool defaulted = false;
      TypePtr t = Infer::default_units(inf_.zonk(globals.at(d.name)), &defaulted);
      if (defaulted)
        out_.warnings.push_back(prog_.filename + ": '" + d.name +
                                "' has unconstrained type variables; defaulted to unit (" +
                                type_str(t) + ")");
      check_first_order(t, d);
      out_.def_types.emplace_back(d.name, t);
    }
    for (const auto& d : prog_.defs) check_expr_types(*d.fn, d);
  }

  void check_expr_types(const Expr& e, const Def& d) {
    check_first_order(out_.type_of(e), d, e.span);
    if (e.k0) check_expr_types(*e.k0, d);
    if (e.k1) check_expr_types(*e.k1, d);
    if (e.k2) check_expr_types(*e.k2, d);
  }

  // Arrows may only appear along the result spine of a signature: never as
  // an argument, never inside a tree element.
  void check_first_order(const TypePtr& t, const Def& d) { check_first_order(t, d, d.span); }
  void check_first_order(const TypePtr& t, const Def& d, Span span) {
    switch (t->kind) {
      case TypeKind::Arrow:
        if (contains_arrow(t->a))
          throw SourceError(prog_.filename, span,
                            "first-order restriction: '" + d.name +
                                "' takes a function-typed argument (" + type_str(t->a) + ")");
        check_first_order(t->a, d, span);
        check_first_order(t->b, d, span);
        break;
      case TypeKind::Tree:
        if (contains_arrow(t->a))
          throw SourceError(prog_.filename, span,
                            "first-order restriction: tree elements cannot be functions (" +
                                type_str(t) + ") in '" + d.name + "'");
        check_first_order(t->a, d, span);
        break;
      default: break;
    }
  }

  static bool contains_arrow(const TypePtr& t) {
    switch (t->kind) {
      case TypeKind::Arrow: return true;
      case TypeKind::Tree: return contains_arrow(t->a);
      default: return false;
    }
  }

  const Program& prog_;
  TypedProgram& out_;
  Infer inf_;
};

}  // namespace

TypedProgram infer_base_types(Program p) {
  TypedProgram out;
  out.prog = std::move(p);
  Checker(out.prog, out).run();
  return out;
}

}  // namespace treebound
