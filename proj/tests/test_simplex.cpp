#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <map>

#include "lp_oracle.hpp"
#include "treebound/constraint.hpp"
#include "treebound/simplex.hpp"

using namespace treebound;

namespace {

// Independent recheck of an Optimal result: every constraint holds at the
// reported point and the objective value matches.
void check_solution(const ConstraintSystem& sys, const LpResult& res) {
  REQUIRE(res.status == LpStatus::Optimal);
  REQUIRE(res.values.size() == static_cast<std::size_t>(sys.var_count()));
  for (const auto& c : sys.constraints()) {
    Rational lhs = c.expr.constant;
    for (const auto& [v, w] : c.expr.terms) lhs += w * res.values[static_cast<std::size_t>(v)];
    bool ok = c.rel == Rel::Eq ? lhs == 0 : c.rel == Rel::Ge ? lhs >= 0 : lhs <= 0;
    CHECK(ok);
  }
  Rational obj;
  for (const auto& [v, w] : sys.objective()) obj += w * res.values[static_cast<std::size_t>(v)];
  CHECK(obj == res.objective);
}

// An Unbounded ray must be a feasible direction that strictly improves the
// objective. Only valid on systems whose variables survive presolve intact.
void validate_ray(const ConstraintSystem& sys, const LpResult& res) {
  REQUIRE(res.status == LpStatus::Unbounded);
  REQUIRE(!res.ray.empty());
  std::map<VarId, Rational> d(res.ray.begin(), res.ray.end());
  auto dval = [&](VarId v) {
    auto it = d.find(v);
    return it == d.end() ? Rational(0) : it->second;
  };
  for (const auto& c : sys.constraints()) {
    Rational slope;
    for (const auto& [v, w] : c.expr.terms) slope += w * dval(v);
    bool ok = c.rel == Rel::Eq ? slope == 0 : c.rel == Rel::Ge ? slope >= 0 : slope <= 0;
    CHECK(ok);
  }
  Rational dir;
  for (const auto& [v, w] : sys.objective()) dir += w * dval(v);
  CHECK(dir < 0);
}

}  // namespace

TEST_CASE("single lower bound pins the optimum") {
  ConstraintSystem sys;
  VarId x = sys.new_var("x");
  sys.add_ge(LinExpr{}.add(x, Rational(1)).add_const(Rational(-3)), "test", {1, 1});
  sys.set_objective(x, Rational(1));
  LpResult res = solve_lp(sys);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == 3);
  CHECK(res.values[0] == 3);
  check_solution(sys, res);
}

TEST_CASE("equality chain collapses in presolve") {
  ConstraintSystem sys;
  VarId x = sys.new_var("x");
  VarId y = sys.new_var("y");
  // x = y + 2, y = 5
  sys.add_eq(LinExpr{}.add(x, Rational(1)).add(y, Rational(-1)).add_const(Rational(-2)), "test",
             {1, 1});
  sys.add_eq(LinExpr{}.add(y, Rational(1)).add_const(Rational(-5)), "test", {1, 1});
  sys.set_objective(x, Rational(1));
  LpResult res = solve_lp(sys);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == 7);
  CHECK(res.values[0] == 7);
  CHECK(res.values[1] == 5);
  CHECK(res.presolve_eliminated == 2);
  CHECK(res.solver_rows == 0);
  check_solution(sys, res);
}

TEST_CASE("contradictory offsets conflict in presolve") {
  ConstraintSystem sys;
  VarId x = sys.new_var("x");
  sys.add_eq(LinExpr{}.add(x, Rational(1)).add_const(Rational(-2)), "test", {1, 1});
  sys.add_eq(LinExpr{}.add(x, Rational(1)).add_const(Rational(-3)), "test", {2, 1});
  LpResult res = solve_lp(sys);
  REQUIRE(res.status == LpStatus::Infeasible);
  REQUIRE(res.conflict.size() == 1);
  CHECK(res.conflict[0] == 1);
}

TEST_CASE("substitution exposes an impossible row") {
  ConstraintSystem sys;
  VarId x = sys.new_var("x");
  sys.add_eq(LinExpr{}.add(x, Rational(1)).add_const(Rational(-2)), "test", {1, 1});
  sys.add_ge(LinExpr{}.add(x, Rational(1)).add_const(Rational(-5)), "test", {2, 1});
  LpResult res = solve_lp(sys);
  REQUIRE(res.status == LpStatus::Infeasible);
  REQUIRE(res.conflict.size() == 1);
  CHECK(res.conflict[0] == 1);
}

TEST_CASE("two-sided contradiction reports witness rows") {
  ConstraintSystem sys;
  VarId x = sys.new_var("x");
  sys.add_ge(LinExpr{}.add(x, Rational(1)).add_const(Rational(-3)), "test", {1, 1});
  sys.add(LinExpr{}.add(x, Rational(1)).add_const(Rational(-2)), Rel::Le, "test", {2, 1});
  LpResult res = solve_lp(sys);
  REQUIRE(res.status == LpStatus::Infeasible);
  REQUIRE(!res.conflict.empty());
  for (std::size_t i : res.conflict) CHECK(i < sys.constraints().size());
}

TEST_CASE("unbounded objective yields an improving ray") {
  SUBCASE("one variable pushed below") {
    ConstraintSystem sys;
    VarId x = sys.new_var("x");
    sys.add(LinExpr{}.add(x, Rational(1)), Rel::Le, "test", {1, 1});
    sys.set_objective(x, Rational(1));
    LpResult res = solve_lp(sys);
    validate_ray(sys, res);
  }
  SUBCASE("difference slides along a half-space") {
    ConstraintSystem sys;
    VarId x = sys.new_var("x");
    VarId y = sys.new_var("y");
    sys.add(LinExpr{}.add(x, Rational(1)).add(y, Rational(-1)).add_const(Rational(-3)), Rel::Le,
            "test", {1, 1});
    sys.set_objective(x, Rational(1));
    sys.set_objective(y, Rational(-1));
    LpResult res = solve_lp(sys);
    validate_ray(sys, res);
  }
  SUBCASE("variable missing from every row") {
    ConstraintSystem sys;
    VarId x = sys.new_var("x");
    VarId y = sys.new_var("y");
    sys.add_ge(LinExpr{}.add(x, Rational(1)), "test", {1, 1});
    sys.set_objective(y, Rational(1));
    LpResult res = solve_lp(sys);
    REQUIRE(res.status == LpStatus::Unbounded);
    REQUIRE(res.ray.size() == 1);
    CHECK(res.ray[0].first == y);
    CHECK(res.ray[0].second < 0);
  }
}

TEST_CASE("free variables reach negative optima") {
  ConstraintSystem sys;
  VarId x = sys.new_var("x");
  VarId y = sys.new_var("y");
  sys.add_ge(LinExpr{}.add(x, Rational(1)).add(y, Rational(1)).add_const(Rational(5)), "test",
             {1, 1});
  sys.set_objective(x, Rational(1));
  sys.set_objective(y, Rational(1));
  LpResult res = solve_lp(sys);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == -5);
  check_solution(sys, res);
}

TEST_CASE("rational pivots stay exact") {
  ConstraintSystem sys;
  VarId x = sys.new_var("x");
  VarId y = sys.new_var("y");
  sys.add_ge(LinExpr{}.add(x, Rational(3)).add_const(Rational(-1)), "test", {1, 1});
  sys.add_eq(LinExpr{}.add(y, Rational(7)).add_const(Rational(-3)), "test", {2, 1});
  sys.set_objective(x, Rational(1));
  sys.set_objective(y, Rational(2));
  LpResult res = solve_lp(sys);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == Rational(1, 3) + Rational(6, 7));
  CHECK(res.values[0] == Rational(1, 3));
  CHECK(res.values[1] == Rational(3, 7));
  check_solution(sys, res);
}

TEST_CASE("duplicate rows keep degenerate ties stable") {
  ConstraintSystem sys;
  VarId x = sys.new_var("x");
  sys.add_ge(LinExpr{}.add(x, Rational(1)).add_const(Rational(-2)), "test", {1, 1});
  sys.add_ge(LinExpr{}.add(x, Rational(1)).add_const(Rational(-2)), "test", {2, 1});
  sys.add(LinExpr{}.add(x, Rational(1)).add_const(Rational(-2)), Rel::Le, "test", {3, 1});
  sys.set_objective(x, Rational(1));
  LpResult a = solve_lp(sys);
  LpResult b = solve_lp(sys);
  REQUIRE(a.status == LpStatus::Optimal);
  CHECK(a.objective == 2);
  CHECK(b.status == a.status);
  CHECK(b.objective == a.objective);
  CHECK(b.values == a.values);
  CHECK(b.pivots == a.pivots);
}

TEST_CASE("objective weights accumulate per variable") {
  ConstraintSystem sys;
  VarId x = sys.new_var("x");
  sys.add_ge(LinExpr{}.add(x, Rational(2)).add_const(Rational(-3)), "test", {1, 1});
  sys.set_objective(x, Rational(1));
  sys.set_objective(x, Rational(1));
  LpResult res = solve_lp(sys);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == 3);
}

TEST_CASE("zero objective still reports feasibility") {
  ConstraintSystem sys;
  VarId x = sys.new_var("x");
  sys.add_ge(LinExpr{}.add(x, Rational(1)).add_const(Rational(-1)), "test", {1, 1});
  LpResult res = solve_lp(sys);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == 0);
  check_solution(sys, res);
}

TEST_CASE("fuzzed systems agree with vertex enumeration") {
  int optimal = 0, infeasible = 0, unbounded = 0, presolved = 0;
  for (std::uint64_t seed = 0; seed < 1200; ++seed) {
    CAPTURE(seed);
    ConstraintSystem sys = lp_oracle::random_system(seed);
    LpResult res = solve_lp(sys);
    lp_oracle::OracleOut want = lp_oracle::solve(sys);
    REQUIRE(res.status == want.status);
    if (res.status == LpStatus::Optimal) {
      ++optimal;
      REQUIRE(res.objective == want.objective);
      check_solution(sys, res);
    } else if (res.status == LpStatus::Infeasible) {
      ++infeasible;
      REQUIRE(!res.conflict.empty());
      for (std::size_t i : res.conflict) CHECK(i < sys.constraints().size());
    } else {
      ++unbounded;
      CHECK(!res.ray.empty());
    }
    if (res.presolve_eliminated > 0) ++presolved;
  }
  // The generator must actually exercise all three outcomes and the presolve.
  CHECK(optimal > 100);
  CHECK(infeasible > 100);
  CHECK(unbounded > 100);
  CHECK(presolved > 100);
}

TEST_CASE("solver output is deterministic") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CAPTURE(seed);
    ConstraintSystem sys = lp_oracle::random_system(seed);
    LpResult a = solve_lp(sys);
    LpResult b = solve_lp(sys);
    REQUIRE(a.status == b.status);
    CHECK(a.objective == b.objective);
    CHECK(a.values == b.values);
    CHECK(a.pivots == b.pivots);
    CHECK(a.conflict == b.conflict);
    CHECK(a.ray == b.ray);
  }
}
