#include "treebound/budget.hpp"

#include <algorithm>

#include "treebound/diag.hpp"

namespace treebound {

int worldview_demand(const Expr& e, const TypedProgram& tp) {
  switch (e.kind) {
    case ExprKind::App:
      return tp.type_of(e)->kind == TypeKind::Arrow ? 0 : 1;
    case ExprKind::Let:
      return worldview_demand(*e.k0, tp) + worldview_demand(*e.k1, tp);
    case ExprKind::If:
    case ExprKind::Match:
      return worldview_demand(*e.k1, tp) + worldview_demand(*e.k2, tp);
    default:
      return 0;
  }
}

bool has_tree_ops(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Match:
    case ExprKind::MakeNode:
      return true;
    case ExprKind::Fun:
      return false;
    case ExprKind::Let:
    case ExprKind::App:
    case ExprKind::Prim:
      return has_tree_ops(*e.k0) || (e.k1 && has_tree_ops(*e.k1));
    case ExprKind::If:
      return has_tree_ops(*e.k0) || has_tree_ops(*e.k1) || has_tree_ops(*e.k2);
    case ExprKind::Tick:
      return e.k0 ? has_tree_ops(*e.k0) : false;
    default:
      return false;
  }
}

namespace {

constexpr long long kPathCap = 1000000;

long long saturating_mul(long long a, long long b) {
  if (b != 0 && a > kPathCap / b) return kPathCap;
  return std::min(a * b, kPathCap);
}

long long saturating_add(long long a, long long b) { return std::min(a + b, kPathCap); }

class PathCounter {
 public:
  explicit PathCounter(const Program& prog) : prog_(prog) {}

  long long of_def(const std::string& name) {
    auto it = memo_.find(name);
    if (it != memo_.end()) return it->second;
    // A cycle through this definition is a recursive edge: count it once.
    memo_[name] = 1;
    const Def* def = find_def(name);
    if (!def) return 1;
    long long n = of_expr(strip_params(*def->fn), name);
    memo_[name] = n;
    return n;
  }

 private:
  const Program& prog_;
  std::map<std::string, long long> memo_;

  const Def* find_def(const std::string& name) const {
    for (const auto& d : prog_.defs) {
      if (d.name == name) return &d;
    }
    return nullptr;
  }

  static const Expr& strip_params(const Expr& fn) {
    const Expr* e = &fn;
    while (e->kind == ExprKind::Fun) e = e->k0.get();
    return *e;
  }

  long long of_expr(const Expr& e, const std::string& self) {
    switch (e.kind) {
      case ExprKind::Let:
        return saturating_mul(of_expr(*e.k0, self), of_expr(*e.k1, self));
      case ExprKind::If:
      case ExprKind::Match:
        return saturating_add(of_expr(*e.k1, self), of_expr(*e.k2, self));
      case ExprKind::App: {
        const Expr& fn = *e.k0;
        long long arg = of_expr(*e.k1, self);
        long long callee = 1;
        if (fn.kind == ExprKind::Var && fn.name != self && find_def(fn.name)) {
          callee = of_def(fn.name);
        }
        return saturating_mul(arg, callee);
      }
      case ExprKind::Fun:
        return 1;
      case ExprKind::MakeNode:
        return saturating_mul(of_expr(*e.k0, self),
                              saturating_mul(of_expr(*e.k1, self), of_expr(*e.k2, self)));
      case ExprKind::Prim:
        return saturating_mul(of_expr(*e.k0, self), of_expr(*e.k1, self));
      default:
        return 1;
    }
  }
};

}  // namespace

long long path_count(const Program& prog, const std::string& def_name) {
  PathCounter counter(prog);
  return counter.of_def(def_name);
}

WorldviewBudget budget_worldviews(const Expr& body, const TypedProgram& tp,
                                  const std::string& fn_name, Span span,
                                  std::optional<int> explicit_cap) {
  const Program& prog = tp.prog;
  WorldviewBudget b;
  b.demand = worldview_demand(body, tp);
  b.tree_ops = has_tree_ops(body);
  b.required = std::max(b.demand, b.tree_ops ? 2 : 1);
  b.default_cap = std::max<long long>(2, path_count(prog, fn_name));
  if (explicit_cap) {
    if (*explicit_cap < b.required) {
      throw SourceError(prog.filename, span,
                        "worldview cap " + std::to_string(*explicit_cap) +
                            " is below the " + std::to_string(b.required) +
                            " worldviews required by '" + fn_name + "'");
    }
    b.worldviews = b.required;
  } else {
    b.worldviews = static_cast<int>(std::min<long long>(b.required, b.default_cap));
    b.clamped = b.worldviews < b.required;
  }
  return b;
}

}  // namespace treebound
