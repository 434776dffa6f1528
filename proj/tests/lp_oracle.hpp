#pragma once

#include <optional>
#include <random>
#include <vector>

#include "treebound/constraint.hpp"
#include "treebound/simplex.hpp"

// Brute-force LP oracle for systems with at most a handful of variables:
// vertex enumeration over the system intersected with a huge coordinate box.
// Coefficients in the generated systems are small (numerators <= 8,
// denominators <= 3), so every minimal face of the true feasible region
// holds a point whose coordinates are Cramer-bounded far below the box; the
// box therefore never changes feasibility or a finite optimum. Unboundedness
// is decided by growing the box: a bounded optimum is box-independent, an
// unbounded one strictly improves along an extreme ray.
namespace lp_oracle {

using treebound::Category;
using treebound::ConstraintSystem;
using treebound::LinExpr;
using treebound::LpStatus;
using treebound::Rational;
using treebound::Rel;
using treebound::VarId;

struct Row {
  std::vector<Rational> a;
  Rational rhs;  // a·x REL rhs
  Rel rel;
};

struct OracleOut {
  LpStatus status = LpStatus::Infeasible;
  Rational objective;
};

// Solves the square system rows(active)·x = rhs by exact Gaussian
// elimination; nullopt when singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> m,
                                                         std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
  return x;
}

inline bool feasible(const std::vector<Row>& rows, const std::vector<Rational>& x) {
  for (const Row& r : rows) {
    Rational lhs;
    for (std::size_t i = 0; i < x.size(); ++i) lhs += r.a[i] * x[i];
    bool ok = r.rel == Rel::Eq ? lhs == r.rhs : r.rel == Rel::Ge ? lhs >= r.rhs : lhs <= r.rhs;
    if (!ok) return false;
  }
  return true;
}

// Minimum of the objective over the boxed polytope, or nullopt when empty.
inline std::optional<Rational> boxed_min(std::vector<Row> rows, const std::vector<Rational>& obj,
                                         const Rational& box) {
  const std::size_t n = obj.size();
  for (std::size_t i = 0; i < n; ++i) {
    Row lo, hi;
    lo.a.assign(n, Rational(0));
    hi.a.assign(n, Rational(0));
    lo.a[i] = 1;
    lo.rhs = -box;
    lo.rel = Rel::Ge;
    hi.a[i] = 1;
    hi.rhs = box;
    hi.rel = Rel::Le;
    rows.push_back(lo);
    rows.push_back(hi);
  }
  std::optional<Rational> best;
  std::vector<std::size_t> pick(n);
  const std::size_t m = rows.size();
  auto visit = [&](auto&& self, std::size_t depth, std::size_t from) -> void {
    if (depth == n) {
      std::vector<std::vector<Rational>> a(n);
      std::vector<Rational> b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = rows[pick[i]].a;
        b[i] = rows[pick[i]].rhs;
      }
      auto x = solve_square(std::move(a), std::move(b));
      if (!x || !feasible(rows, *x)) return;
      Rational v;
      for (std::size_t i = 0; i < n; ++i) v += obj[i] * (*x)[i];
      if (!best || v < *best) best = v;
      return;
    }
    for (std::size_t r = from; r < m; ++r) {
      pick[depth] = r;
      self(self, depth + 1, r + 1);
    }
  };
  visit(visit, 0, 0);
  return best;
}

inline OracleOut solve(const ConstraintSystem& sys) {
  const std::size_t n = static_cast<std::size_t>(sys.var_count());
  std::vector<Row> rows;
  for (const auto& c : sys.constraints()) {
    Row r;
    r.a.assign(n, Rational(0));
    for (const auto& [v, w] : c.expr.terms) r.a[static_cast<std::size_t>(v)] = w;
    r.rhs = -c.expr.constant;  // expr REL 0  ==  terms REL -constant
    r.rel = c.rel;
    rows.push_back(std::move(r));
  }
  std::vector<Rational> obj(n, Rational(0));
  for (const auto& [v, w] : sys.objective()) obj[static_cast<std::size_t>(v)] = w;

  const Rational box = Rational(1000000000);
  OracleOut out;
  auto v1 = boxed_min(rows, obj, box);
  if (!v1) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  auto v2 = boxed_min(rows, obj, box * 4);
  if (*v2 < *v1) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.objective = *v1;
  return out;
}

// Random system over one to three variables: general rows mixed with
// identity- and offset-shaped rows so the presolve path is exercised, small
// rational coefficients throughout.
inline ConstraintSystem random_system(std::uint64_t seed) {
  std::mt19937_64 g(seed * 0x9E3779B97F4A7C15ULL + 0xBF58476D1CE4E5B9ULL);
  auto below = [&](int k) { return static_cast<int>(g() % static_cast<std::uint64_t>(k)); };
  auto small = [&]() { return Rational(below(9) - 4, 1 + below(3)); };

  ConstraintSystem sys;
  const int n = 1 + below(3);
  std::vector<VarId> vars;
  for (int i = 0; i < n; ++i) vars.push_back(sys.new_var("x" + std::to_string(i)));

  const int m = 1 + below(6);
  for (int r = 0; r < m; ++r) {
    int shape = below(100);
    LinExpr e;
    if (shape < 12 && n >= 2) {  // identity shape: x - y + k = 0
      int i = below(n), j = (i + 1 + below(n - 1)) % n;
      e.add(vars[static_cast<std::size_t>(i)], Rational(1));
      e.add(vars[static_cast<std::size_t>(j)], Rational(-1));
      e.add_const(small());
      sys.add_eq(std::move(e), "fuzz identity", {1, 1});
      continue;
    }
    if (shape < 22) {  // offset shape: ±x + k = 0
      e.add(vars[static_cast<std::size_t>(below(n))], Rational(below(2) == 0 ? 1 : -1));
      e.add_const(small());
      sys.add_eq(std::move(e), "fuzz offset", {1, 1});
      continue;
    }
    bool any = false;
    for (int i = 0; i < n; ++i) {
      if (below(100) < 40) continue;
      Rational c = small();
      if (c == 0) continue;
      e.add(vars[static_cast<std::size_t>(i)], c);
      any = true;
    }
    if (!any) e.add(vars[static_cast<std::size_t>(below(n))], Rational(1 + below(3)));
    e.add_const(Rational(below(17) - 8, 1 + below(3)));
    int rel = below(10);
    sys.add(std::move(e), rel < 5 ? Rel::Ge : rel < 9 ? Rel::Le : Rel::Eq, "fuzz row", {1, 1});
  }
  for (int i = 0; i < n; ++i)
    if (below(100) < 55) sys.set_objective(vars[static_cast<std::size_t>(i)], small());
  return sys;
}

}  // namespace lp_oracle
