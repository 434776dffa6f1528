#include "treebound/simplex.hpp"

#include <algorithm>
#include <map>

namespace treebound {

const char* lp_status_str(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

// Union-find over x = root + offset equations; roots may be pinned to a
// constant. Smaller index wins root-hood so runs are deterministic.
class OffsetUF {
 public:
  explicit OffsetUF(int n) : parent_(n), off_(n, Rational(0)), fixed_(n) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }

  std::pair<int, Rational> find(int x) {
    if (parent_[x] == x) return {x, Rational(0)};
    auto [root, above] = find(parent_[x]);
    parent_[x] = root;
    off_[x] += above;
    return {root, off_[x]};
  }

  // x = y + k. False on contradiction.
  bool merge(int x, int y, const Rational& k) {
    auto [rx, ox] = find(x);
    auto [ry, oy] = find(y);
    Rational d = oy + k - ox;  // rx = ry + d
    if (rx == ry) return d == 0;
    if (fixed_[rx] && fixed_[ry]) return *fixed_[rx] == *fixed_[ry] + d;
    // A fixed root must stay the representative so its value survives.
    bool keep_rx = fixed_[rx].has_value() || (!fixed_[ry].has_value() && rx < ry);
    if (keep_rx) {
      parent_[ry] = rx;
      off_[ry] = -d;  // ry = rx − d
    } else {
      parent_[rx] = ry;
      off_[rx] = d;
    }
    return true;
  }

  // x = v. False on contradiction.
  bool fix(int x, const Rational& v) {
    auto [r, o] = find(x);
    Rational rv = v - o;
    if (fixed_[r]) return *fixed_[r] == rv;
    fixed_[r] = rv;
    return true;
  }

  bool is_root_fixed(int root) const { return fixed_[root].has_value(); }
  const Rational& root_value(int root) const { return *fixed_[root]; }

 private:
  std::vector<int> parent_;
  std::vector<Rational> off_;
  std::vector<std::optional<Rational>> fixed_;
};

struct ReducedRow {
  std::map<int, Rational> terms;  // key: root id
  Rational rhs;                   // terms = / >= / <= rhs
  Rel rel;
  std::size_t orig;
};

constexpr long long kPivotCap = 1000000;

class Tableau {
 public:
  int m = 0, n = 0;
  std::vector<std::vector<Rational>> a;  // m rows × (n + 1); last column = rhs
  std::vector<int> basis;
  std::vector<Rational> cost;  // n + 1; cost[n] = −objective
  long long pivots = 0;

  void install_cost(const std::vector<Rational>& c) {
    cost.assign(n + 1, Rational(0));
    for (int j = 0; j < n && j < static_cast<int>(c.size()); ++j) cost[j] = c[j];
    for (int r = 0; r < m; ++r) {
      int b = basis[r];
      if (b < static_cast<int>(c.size()) && c[b] != 0) {
        const Rational w = c[b];
        for (int j = 0; j <= n; ++j)
          if (a[r][j] != 0) cost[j] -= w * a[r][j];
      }
    }
  }

  void pivot(int row, int col) {
    ++pivots;
    internal_check(pivots <= kPivotCap, "simplex pivot cap exceeded");
    const Rational p = a[row][col];
    internal_check(p != 0, "pivot on zero element");
    for (int j = 0; j <= n; ++j) a[row][j] /= p;
    for (int r = 0; r < m; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (int j = 0; j <= n; ++j)
        if (a[row][j] != 0) a[r][j] -= f * a[row][j];
    }
    if (cost[col] != 0) {
      const Rational f = cost[col];
      for (int j = 0; j <= n; ++j)
        if (a[row][j] != 0) cost[j] -= f * a[row][j];
    }
    basis[row] = col;
  }

  // Bland's rule; allowed[j] masks out columns that may not enter
  // (artificials in phase 2). Returns entering column on unboundedness.
  std::optional<int> run(const std::vector<bool>& allowed) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < n; ++j) {
        if (allowed[j] && cost[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return std::nullopt;
      int leave = -1;
      Rational best;
      for (int r = 0; r < m; ++r) {
        if (a[r][enter] <= 0) continue;
        Rational ratio = a[r][n] / a[r][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return enter;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_lp(const ConstraintSystem& sys) {
  LpResult res;
  const auto& cons = sys.constraints();
  const int nvars = sys.var_count();
  OffsetUF uf(nvars);

  // ---- presolve: swallow identities and offsets --------------------------
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const Constraint& c = cons[i];
    if (c.cat != Category::VarIdentity && c.cat != Category::ConstOffset) continue;
    bool ok = true;
    if (c.expr.terms.size() == 2) {
      auto it = c.expr.terms.begin();
      VarId x = it->first, y = std::next(it)->first;
      if (it->second == -1) std::swap(x, y);  // normalize to x − y + k = 0
      ok = uf.merge(x, y, -c.expr.constant);
    } else {
      auto it = c.expr.terms.begin();
      // a·x + k = 0, a = ±1
      ok = uf.fix(it->first, -c.expr.constant / it->second);
    }
    if (!ok) {
      res.status = LpStatus::Infeasible;
      res.conflict = {i};
      return res;
    }
  }

  // ---- substitute roots into the remaining constraints -------------------
  std::vector<ReducedRow> rows;
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const Constraint& c = cons[i];
    if (c.cat == Category::VarIdentity || c.cat == Category::ConstOffset) continue;
    ReducedRow row;
    row.rel = c.rel;
    row.orig = i;
    Rational constant = c.expr.constant;
    for (const auto& [v, w] : c.expr.terms) {
      auto [root, off] = uf.find(v);
      constant += w * off;
      if (uf.is_root_fixed(root)) {
        constant += w * uf.root_value(root);
      } else {
        auto [it, fresh] = row.terms.emplace(root, w);
        if (!fresh && (it->second += w) == 0) row.terms.erase(it);
      }
    }
    if (row.terms.empty()) {
      bool ok = c.rel == Rel::Eq   ? constant == 0
                : c.rel == Rel::Ge ? constant >= 0
                                   : constant <= 0;
      if (!ok) {
        res.status = LpStatus::Infeasible;
        res.conflict = {i};
        return res;
      }
      continue;
    }
    row.rhs = -constant;
    rows.push_back(std::move(row));
  }

  // ---- reduced objective --------------------------------------------------
  std::map<int, Rational> obj;
  Rational obj_const;
  for (const auto& [v, w] : sys.objective()) {
    auto [root, off] = uf.find(v);
    obj_const += w * off;
    if (uf.is_root_fixed(root))
      obj_const += w * uf.root_value(root);
    else
      obj[root] += w;
  }

  // Columns: one (plus, minus) pair per live root, then slacks/surpluses,
  // then artificials.
  std::map<int, int> col_of_root;  // root -> plus column
  auto root_col = [&](int root) {
    auto it = col_of_root.find(root);
    if (it != col_of_root.end()) return it->second;
    int c = static_cast<int>(col_of_root.size()) * 2;
    col_of_root.emplace(root, c);
    return c;
  };
  for (const auto& row : rows)
    for (const auto& [root, w] : row.terms) {
      (void)w;
      root_col(root);
    }
  for (const auto& [root, w] : obj) {
    (void)w;
    root_col(root);
  }
  int live_roots = static_cast<int>(col_of_root.size());
  res.presolve_eliminated = static_cast<std::size_t>(nvars - live_roots);

  const int m = static_cast<int>(rows.size());
  int n_slack = 0;
  for (const auto& r : rows)
    if (r.rel != Rel::Eq) ++n_slack;

  Tableau t;
  t.m = m;
  t.n = live_roots * 2 + n_slack + m;  // worst case: artificial per row
  t.a.assign(m, std::vector<Rational>(t.n + 1, Rational(0)));
  t.basis.assign(m, -1);

  const int slack_base = live_roots * 2;
  const int art_base = slack_base + n_slack;
  std::vector<std::size_t> row_orig(m);
  std::vector<bool> is_artificial(t.n, false);
  int next_slack = 0, next_art = 0;

  for (int r = 0; r < m; ++r) {
    const ReducedRow& src = rows[r];
    row_orig[r] = src.orig;
    Rational rhs = src.rhs;
    Rational sign{1};
    Rel rel = src.rel;
    if (rhs < 0) {  // normalize rhs ≥ 0, flipping the inequality sense
      sign = -1;
      rhs = -rhs;
      if (rel == Rel::Ge)
        rel = Rel::Le;
      else if (rel == Rel::Le)
        rel = Rel::Ge;
    }
    for (const auto& [root, w] : src.terms) {
      int c = col_of_root.at(root);
      t.a[r][c] += sign * w;
      t.a[r][c + 1] -= sign * w;
    }
    t.a[r][t.n] = rhs;
    if (rel == Rel::Le) {
      int sc = slack_base + next_slack++;
      t.a[r][sc] = 1;
      t.basis[r] = sc;  // slack is a ready-made basic variable
    } else {
      if (rel == Rel::Ge) {
        int sc = slack_base + next_slack++;
        t.a[r][sc] = -1;
      }
      int ac = art_base + next_art++;
      t.a[r][ac] = 1;
      is_artificial[ac] = true;
      t.basis[r] = ac;
    }
  }

  res.solver_rows = static_cast<std::size_t>(m);
  res.solver_cols = static_cast<std::size_t>(t.n);

  std::vector<bool> all_allowed(t.n, true);

  // ---- phase 1 -------------------------------------------------------------
  if (next_art > 0) {
    std::vector<Rational> phase1(t.n, Rational(0));
    for (int j = 0; j < t.n; ++j)
      if (is_artificial[j]) phase1[j] = 1;
    t.install_cost(phase1);
    auto unb = t.run(all_allowed);
    internal_check(!unb.has_value(), "phase-1 objective cannot be unbounded");
    Rational art_sum = -t.cost[t.n];
    if (art_sum != 0) {
      res.status = LpStatus::Infeasible;
      for (int r = 0; r < m; ++r)
        if (is_artificial[t.basis[r]] && t.a[r][t.n] != 0) res.conflict.push_back(row_orig[r]);
      res.pivots = t.pivots;
      return res;
    }
    // Drive artificials out of the basis; a row where that is impossible is
    // linearly dependent and must be removed, otherwise a later pivot could
    // push its artificial positive again.
    for (int r = 0; r < t.m; ++r) {
      if (!is_artificial[t.basis[r]]) continue;
      int col = -1;
      for (int j = 0; j < art_base; ++j)
        if (t.a[r][j] != 0) {
          col = j;
          break;
        }
      if (col >= 0) t.pivot(r, col);
    }
    for (int r = t.m - 1; r >= 0; --r) {
      if (!is_artificial[t.basis[r]]) continue;
      internal_check(t.a[r][t.n] == 0, "stuck artificial with nonzero value after phase 1");
      t.a.erase(t.a.begin() + r);
      t.basis.erase(t.basis.begin() + r);
      row_orig.erase(row_orig.begin() + r);
      --t.m;
    }
  }

  // ---- phase 2 -------------------------------------------------------------
  std::vector<Rational> phase2(t.n, Rational(0));
  for (const auto& [root, w] : obj) {
    int c = col_of_root.at(root);
    phase2[c] = w;
    phase2[c + 1] = -w;
  }
  t.install_cost(phase2);
  std::vector<bool> allowed(t.n, true);
  for (int j = 0; j < t.n; ++j)
    if (is_artificial[j]) allowed[j] = false;
  auto unb = t.run(allowed);
  res.pivots = t.pivots;
  if (unb.has_value()) {
    res.status = LpStatus::Unbounded;
    int e = *unb;
    // Translate the improving direction back to root variables.
    std::map<int, Rational> dir;
    for (const auto& [root, c] : col_of_root) {
      if (e == c) dir[root] += 1;
      if (e == c + 1) dir[root] -= 1;
    }
    for (int r = 0; r < t.m; ++r) {
      if (t.a[r][e] == 0) continue;
      for (const auto& [root, c] : col_of_root) {
        if (t.basis[r] == c) dir[root] -= t.a[r][e];
        if (t.basis[r] == c + 1) dir[root] += t.a[r][e];
      }
    }
    for (const auto& [root, w] : dir)
      if (w != 0) res.ray.emplace_back(root, w);
    return res;
  }

  // ---- extract & verify -----------------------------------------------------
  std::vector<Rational> colval(t.n, Rational(0));
  for (int r = 0; r < t.m; ++r) colval[t.basis[r]] = t.a[r][t.n];
  std::vector<Rational> rootval(nvars, Rational(0));
  for (const auto& [root, c] : col_of_root) rootval[root] = colval[c] - colval[c + 1];

  res.values.assign(nvars, Rational(0));
  for (int v = 0; v < nvars; ++v) {
    auto [root, off] = uf.find(v);
    res.values[v] = (uf.is_root_fixed(root) ? uf.root_value(root) : rootval[root]) + off;
  }

  for (const auto& c : cons) {
    Rational lhs = c.expr.constant;
    for (const auto& [v, w] : c.expr.terms) lhs += w * res.values[v];
    bool ok = c.rel == Rel::Eq ? lhs == 0 : c.rel == Rel::Ge ? lhs >= 0 : lhs <= 0;
    internal_check(ok, "solution violates constraint (" + c.rule + "): exactness assertion");
  }
  Rational objective;
  for (const auto& [v, w] : sys.objective()) objective += w * res.values[v];
  internal_check(objective == -t.cost[t.n] + obj_const,
                 "objective mismatch between tableau and recomputation");

  res.status = LpStatus::Optimal;
  res.objective = objective;
  return res;
}

}  // namespace treebound
