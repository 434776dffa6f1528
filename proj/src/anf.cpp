#include "treebound/anf.hpp"

#include <map>
#include <set>

#include "treebound/diag.hpp"

namespace treebound {

namespace {

class Normalizer {
 public:
  explicit Normalizer(const std::set<std::string>& toplevel) {
    for (const auto& n : toplevel) used_.insert(n);
  }

  ExprPtr normalize_fun(Expr& fn, std::map<std::string, std::string> env) {
    internal_check(fn.kind == ExprKind::Fun, "normalize_fun needs a Fun node");
    if (!fn.name.empty()) env[fn.name] = fn.name;  // self name, already unique
    std::string param = fresh(fn.name2);
    env[fn.name2] = param;
    ExprPtr body = fn.k0->kind == ExprKind::Fun ? normalize_fun(*fn.k0, env)
                                                : norm(std::move(fn.k0), env);
    return Expr::fun(fn.span, fn.name, std::move(param), std::move(body));
  }

 private:
  using Env = std::map<std::string, std::string>;
  using Binds = std::vector<std::pair<std::string, ExprPtr>>;

  std::string fresh(const std::string& base) {
    if (base != "_" && !base.empty() && used_.insert(base).second) return base;
    std::string name;
    do {
      name = (base == "_" || base.empty() ? "%" : base + "%") + std::to_string(counter_++);
    } while (!used_.insert(name).second);
    return name;
  }

  static ExprPtr wrap(Binds binds, ExprPtr core) {
    for (std::size_t i = binds.size(); i-- > 0;) {
      Span s = core->span;
      core = Expr::let(s, std::move(binds[i].first), std::move(binds[i].second), std::move(core));
    }
    return core;
  }

  // Normalizes e and, unless it is already a variable, binds it to a fresh
  // temporary appended to binds. Returns the variable.
  ExprPtr atom(ExprPtr e, const Env& env, Binds& binds) {
    Span s = e->span;
    ExprPtr n = norm(std::move(e), env);
    if (n->kind == ExprKind::Var) return n;
    std::string tmp = fresh("_");
    binds.emplace_back(tmp, std::move(n));
    return Expr::var(s, tmp);
  }

  ExprPtr norm(ExprPtr e, Env env) {
    switch (e->kind) {
      case ExprKind::Var: {
        auto it = env.find(e->name);
        if (it != env.end()) e->name = it->second;
        return e;
      }
      case ExprKind::IntLit:
      case ExprKind::BoolLit:
      case ExprKind::UnitLit:
      case ExprKind::Leaf:
      case ExprKind::Tick: return e;
      case ExprKind::MakeNode: {
        Binds binds;
        ExprPtr p = atom(std::move(e->k0), env, binds);
        ExprPtr l = atom(std::move(e->k1), env, binds);
        ExprPtr r = atom(std::move(e->k2), env, binds);
        // Distinct subtree operands keep the annotation bookkeeping per
        // variable; alias the right one when both name the same variable.
        if (l->name == r->name) {
          std::string tmp = fresh("_");
          binds.emplace_back(tmp, std::move(r));
          r = Expr::var(e->span, tmp);
        }
        return wrap(std::move(binds),
                    Expr::make_node(e->span, std::move(p), std::move(l), std::move(r)));
      }
      case ExprKind::App: {
        Binds binds;
        ExprPtr f = atom(std::move(e->k0), env, binds);
        ExprPtr x = atom(std::move(e->k1), env, binds);
        return wrap(std::move(binds), Expr::app(e->span, std::move(f), std::move(x)));
      }
      case ExprKind::Prim: {
        Binds binds;
        ExprPtr a = atom(std::move(e->k0), env, binds);
        ExprPtr b = atom(std::move(e->k1), env, binds);
        return wrap(std::move(binds), Expr::prim_op(e->span, e->prim, std::move(a), std::move(b)));
      }
      case ExprKind::If: {
        Binds binds;
        ExprPtr c = atom(std::move(e->k0), env, binds);
        ExprPtr t = norm(std::move(e->k1), env);
        ExprPtr el = norm(std::move(e->k2), env);
        return wrap(std::move(binds), Expr::if_(e->span, std::move(c), std::move(t), std::move(el)));
      }
      case ExprKind::Match: {
        Binds binds;
        ExprPtr scrut = atom(std::move(e->k0), env, binds);
        ExprPtr leaf_arm = norm(std::move(e->k1), env);
        Env arm_env = env;
        std::string pay = fresh(e->name);
        std::string left = fresh(e->name2);
        std::string right = fresh(e->name3);
        arm_env[e->name] = pay;
        arm_env[e->name2] = left;
        arm_env[e->name3] = right;
        ExprPtr node_arm = norm(std::move(e->k2), arm_env);
        return wrap(std::move(binds),
                    Expr::match(e->span, std::move(scrut), std::move(leaf_arm), std::move(pay),
                                std::move(left), std::move(right), std::move(node_arm)));
      }
      case ExprKind::Let: {
        ExprPtr rhs = e->k0->kind == ExprKind::Fun ? normalize_fun(*e->k0, env)
                                                   : norm(std::move(e->k0), env);
        std::string binder = fresh(e->name);
        env[e->name] = binder;
        ExprPtr body = norm(std::move(e->k1), env);
        return Expr::let(e->span, std::move(binder), std::move(rhs), std::move(body));
      }
      case ExprKind::Fun: return normalize_fun(*e, env);
    }
    internal_fail("unreachable expression kind");
  }

  std::set<std::string> used_;
  int counter_ = 0;
};

bool let_normal_operand(const Expr& e) { return e.kind == ExprKind::Var; }

}  // namespace

bool is_let_normal(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Var:
    case ExprKind::IntLit:
    case ExprKind::BoolLit:
    case ExprKind::UnitLit:
    case ExprKind::Leaf:
    case ExprKind::Tick: return true;
    case ExprKind::MakeNode:
      return let_normal_operand(*e.k0) && let_normal_operand(*e.k1) && let_normal_operand(*e.k2) &&
             e.k1->name != e.k2->name;
    case ExprKind::App: return let_normal_operand(*e.k0) && let_normal_operand(*e.k1);
    case ExprKind::Prim: return let_normal_operand(*e.k0) && let_normal_operand(*e.k1);
    case ExprKind::If:
      return let_normal_operand(*e.k0) && is_let_normal(*e.k1) && is_let_normal(*e.k2);
    case ExprKind::Match:
      return let_normal_operand(*e.k0) && is_let_normal(*e.k1) && is_let_normal(*e.k2);
    case ExprKind::Let: return is_let_normal(*e.k0) && is_let_normal(*e.k1);
    case ExprKind::Fun: return is_let_normal(*e.k0);
  }
  return false;
}

bool is_let_normal(const Program& p) {
  for (const auto& d : p.defs)
    if (!is_let_normal(*d.fn)) return false;
  return true;
}

Program to_let_normal(Program p) {
  std::set<std::string> toplevel;
  for (const auto& d : p.defs) toplevel.insert(d.name);
  Normalizer n(toplevel);
  for (auto& d : p.defs) {
    std::map<std::string, std::string> env;
    for (const auto& name : toplevel) env[name] = name;
    d.fn = n.normalize_fun(*d.fn, std::move(env));
  }
  internal_check(is_let_normal(p), "let-normalization postcondition");
  return p;
}

}  // namespace treebound
