#include "treebound/congen.hpp"

#include <algorithm>
#include <set>

#include "treebound/budget.hpp"
#include "treebound/diag.hpp"
#include "treebound/location.hpp"

namespace treebound {

const char* retention_str(Retention r) { return r == Retention::Full ? "full" : "split"; }

namespace {

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

class Gen {
 public:
  Gen(const TypedProgram& tp, const Def& def, const std::map<std::string, SolvedSig>& solved,
      const GenOptions& opts, GenOutput& out)
      : tp_(tp), def_(def), opts_(opts), out_(out), sys_(out.sys) {
    for (const auto& [name, s] : solved) fn_env_[name] = const_sig(name, s);
  }

  void run() {
    FnSigPtr sig = alloc_sig(def_.name, tp_.def_type(def_.name), def_.span);
    for (const auto& [idx, val] : opts_.pins) {
      LinExpr ex;
      ex.add(sig->at(idx), Rational(1));
      ex.add_const(-val);
      sys_.add_eq(std::move(ex), "pinned signature", def_.span);
    }
    fn_env_[def_.name] = sig;
    derive_function(*def_.fn, sig, {}, def_.span);
    build_objective(*sig);
    out_.sig = sig;
  }

 private:
  // Exit state of one judgment: the remaining context (with the result slice
  // for first-order values), the signature when the value is a function, the
  // witness row, and the advanced designation counter.
  struct Out {
    AnnotationContext ctx;
    FnSigPtr fn;
    int witness = 0;
    int counter = 0;
  };

  const TypedProgram& tp_;
  const Def& def_;
  const GenOptions& opts_;
  GenOutput& out_;
  ConstraintSystem& sys_;
  std::map<std::string, FnSigPtr> fn_env_;
  int point_ = 0;
  int lambda_ = 0;
  int W_ = 1;  // rows of the derivation currently being generated

  // ---- signatures -------------------------------------------------------

  static FnSigPtr const_sig(const std::string& name, const SolvedSig& s) {
    auto sig = std::make_shared<FnSig>();
    sig->name = name;
    sig->type = s.type;
    for (const Index& i : location_indices(s.type)) {
      auto it = s.coeffs.find(i);
      sig->coeffs[i] = Coeff::constant(it == s.coeffs.end() ? Rational(0) : it->second);
    }
    return sig;
  }

  FnSigPtr alloc_sig(const std::string& name, const TypePtr& t, Span span) {
    internal_check(t && t->kind == TypeKind::Arrow, "signature requested for non-arrow " + name);
    auto sig = std::make_shared<FnSig>();
    sig->name = name;
    sig->type = t;
    for (const Index& i : location_indices(t)) {
      if (sig_index_is_zero(i)) {
        sig->coeffs[i] = Coeff::zero();
        continue;
      }
      VarId v = sys_.new_var(name + ".sig." + index_str(i));
      sig->coeffs[i] = Coeff::of(v);
      sys_.ensure_nonneg(Coeff::of(v), "signature nonneg", span);
    }
    return sig;
  }

  void build_objective(const FnSig& sig) {
    for (const auto& [idx, c] : sig.coeffs) {
      if (!c.is_var()) continue;
      size_t k = 0;
      while (k < idx.size() && idx[k] == 'b') ++k;
      if (k >= idx.size()) continue;
      if (idx[k] == 'a') {
        // entry coefficients dominate the objective; structural ones price far
        // above the constants so bounds prefer flat cost, and wider carriers
        // (element potential counts every node, depth only one per level)
        // price above narrower ones so ties resolve toward the tighter bound
        Rational w(1);
        for (size_t j = k + 1; j < idx.size(); ++j) {
          if (idx[j] == 'd') w *= 2;
          if (idx[j] == 'e') w *= 5;
        }
        sys_.set_objective(c.var, idx.substr(k) == "a*" ? Rational(1) : Rational(1000) * w);
      } else if (idx[k] == 'c') {
        // a whisper of reward for handing potential back, small enough to
        // never trade against any entry coefficient
        sys_.set_objective(c.var, Rational(-1) / Rational(1048576));
      }
    }
  }

  // ---- matrix allocation -------------------------------------------------

  std::string fresh_tag() { return def_.name + ".p" + std::to_string(point_++); }

  VarSlot fresh_slot(const std::string& tag, const std::string& var, const TypePtr& t,
                     const std::vector<int>& active, Span span) {
    VarSlot s;
    s.name = var;
    s.type = t;
    s.indices = context_indices(t);
    s.rows.resize(static_cast<size_t>(W_));
    for (const Index& i : s.indices) {
      for (int r : active) {
        VarId v = sys_.new_var(tag + ".w" + std::to_string(r) + "." + var + "." + index_str(i));
        s.rows[static_cast<size_t>(r)][i] = Coeff::of(v);
        if (i.back() == 'd') sys_.ensure_nonneg(Coeff::of(v), "depth nonneg", span);
      }
    }
    for (int r = 0; r < W_; ++r) {
      if (!contains(active, r)) s.rows[static_cast<size_t>(r)] = s.rows[static_cast<size_t>(active.front())];
    }
    return s;
  }

  std::vector<Coeff> fresh_ambient(const std::string& tag, const std::vector<int>& active) {
    std::vector<Coeff> amb(static_cast<size_t>(W_));
    for (int r : active) {
      amb[static_cast<size_t>(r)] =
          Coeff::of(sys_.new_var(tag + ".w" + std::to_string(r) + ".amb"));
    }
    for (int r = 0; r < W_; ++r) {
      if (!contains(active, r)) amb[static_cast<size_t>(r)] = amb[static_cast<size_t>(active.front())];
    }
    return amb;
  }

  void witness_nonneg(const AnnotationContext& ctx, int row, const char* rule, Span span) {
    sys_.ensure_nonneg(ctx.ambient[static_cast<size_t>(row)], rule, span);
    for (const VarSlot& s : ctx.vars) {
      if (s.is_fn()) continue;
      for (const Index& i : s.indices) sys_.ensure_nonneg(s.at(row, i), rule, span);
    }
    if (ctx.result) {
      for (const Index& i : ctx.result->indices) sys_.ensure_nonneg(ctx.result->at(row, i), rule, span);
    }
  }

  // ---- witness designation and retention ---------------------------------

  int designation(int counter) const { return counter % W_; }

  std::optional<int> first_app_row(const Expr& e, int counter) const {
    switch (e.kind) {
      case ExprKind::App:
        if (tp_.type_of(e)->kind == TypeKind::Arrow) return std::nullopt;
        return designation(counter);
      case ExprKind::Let:
        if (auto r = first_app_row(*e.k0, counter)) return r;
        return first_app_row(*e.k1, counter + worldview_demand(*e.k0, tp_));
      case ExprKind::If:
      case ExprKind::Match:
        if (auto r = first_app_row(*e.k1, counter)) return r;
        return first_app_row(*e.k2, counter + worldview_demand(*e.k1, tp_));
      default:
        return std::nullopt;
    }
  }

  void collect_app_rows(const Expr& e, int counter, std::set<int>& rows) const {
    switch (e.kind) {
      case ExprKind::App:
        if (tp_.type_of(e)->kind != TypeKind::Arrow) rows.insert(designation(counter));
        return;
      case ExprKind::Let:
        collect_app_rows(*e.k0, counter, rows);
        collect_app_rows(*e.k1, counter + worldview_demand(*e.k0, tp_), rows);
        return;
      case ExprKind::If:
      case ExprKind::Match:
        collect_app_rows(*e.k1, counter, rows);
        collect_app_rows(*e.k2, counter + worldview_demand(*e.k1, tp_), rows);
        return;
      default:
        return;
    }
  }

  // Rows an arm threads and the witness it starts on. Designations are fixed
  // by the global counter, so full and split retention pick identical
  // witnesses; split merely narrows which rows get their own entries.
  std::pair<std::vector<int>, int> arm_plan(const Expr& arm, int start, int encl_witness,
                                            const std::vector<int>& active, bool force_full) {
    int w = first_app_row(arm, start).value_or(encl_witness);
    if (opts_.retention == Retention::Full || force_full) return {active, w};
    std::set<int> rows;
    collect_app_rows(arm, start, rows);
    if (rows.empty()) rows.insert(encl_witness);
    std::vector<int> out(rows.begin(), rows.end());
    for (int r : out) internal_check(contains(active, r), "retained row escapes the active set");
    return {out, w};
  }

  // ---- the construct relation ---------------------------------------------

  struct ConstructOut {
    AnnotationContext ctx;  // sources replaced by leftovers; skipped slots pass through
    VarSlot built;          // the new tree's slice
  };

  // Rebuilds a tree from payload sv and subtrees lv/rv. Rows v and w of the
  // source context merge into every exit row: v donates the left depth, w the
  // right, both pay the new node's unit potentials from their ambient.
  // Merging is only allowed when no other tree-typed variable tells the rows
  // apart; otherwise each row pairs with itself and the depth entry of the
  // built slice is forced to zero.
  ConstructOut construct(const AnnotationContext& S, const std::string& sv, const std::string& lv,
                         const std::string& rv, const std::vector<std::string>& skip,
                         const TypePtr& tt, const std::vector<int>& active, const char* rule,
                         Span span) {
    TypePtr te = tt->a;
    bool blocked = false;
    for (const VarSlot& x : S.vars) {
      if (x.is_fn() || x.name == sv || x.name == lv || x.name == rv) continue;
      if (std::find(skip.begin(), skip.end(), x.name) != skip.end()) continue;
      if (x.type->kind == TypeKind::Tree) blocked = true;
    }
    int v0 = active.front();
    int w0 = active.size() > 1 ? active[1] : active.front();

    const std::string tag = fresh_tag();
    ConstructOut out;
    out.built = fresh_slot(tag, "built", tt, active, span);
    AnnotationContext& Q = out.ctx;
    Q.worldviews = W_;
    Q.ambient = fresh_ambient(tag, active);

    VarSlot svq = fresh_slot(tag, sv, S.slot(sv).type, active, span);
    VarSlot lvq = fresh_slot(tag, lv, tt, active, span);
    VarSlot rvq = fresh_slot(tag, rv, tt, active, span);

    auto merge_slot = [&](const VarSlot& x) {
      if (blocked) return x;  // rows pair with themselves, entries carry over
      if (v0 != w0) {
        for (const Index& i : x.indices) sys_.eq(x.at(v0, i), x.at(w0, i), rule, span);
      }
      VarSlot nx = x;
      for (int r = 0; r < W_; ++r) nx.rows[static_cast<size_t>(r)] = x.rows[static_cast<size_t>(v0)];
      return nx;
    };

    for (const VarSlot& x : S.vars) {
      if (x.name == sv) {
        Q.vars.push_back(svq);
      } else if (x.name == lv) {
        Q.vars.push_back(lvq);
      } else if (x.name == rv) {
        Q.vars.push_back(rvq);
      } else if (x.is_fn() ||
                 std::find(skip.begin(), skip.end(), x.name) != skip.end()) {
        Q.vars.push_back(x);
      } else {
        Q.vars.push_back(merge_slot(x));
      }
    }
    if (S.result) Q.result = merge_slot(*S.result);

    const VarSlot& ss = S.slot(sv);
    const VarSlot& ls = S.slot(lv);
    const VarSlot& rs = S.slot(rv);
    auto line = [&](const Coeff& src, const Coeff& leftover, const Coeff* into) {
      LinExpr ex;
      ex.add(src, Rational(1)).add(leftover, Rational(-1));
      if (into) ex.add(*into, Rational(-1));
      sys_.add_eq(std::move(ex), rule, span);
    };

    for (int u : active) {
      int pv = blocked ? u : v0;
      int pw = blocked ? u : w0;
      for (const Index& j : context_indices(te)) {
        Index ej = "e" + j;
        const Coeff& b = out.built.at(u, ej);
        line(ss.at(pv, j), svq.at(u, j), &b);
        line(ls.at(pv, ej), lvq.at(u, ej), &b);
        line(rs.at(pv, ej), rvq.at(u, ej), &b);
        if (pw != pv) {
          line(ss.at(pw, j), svq.at(u, j), &b);
          line(ls.at(pw, ej), lvq.at(u, ej), &b);
          line(rs.at(pw, ej), rvq.at(u, ej), &b);
        }
      }
      {
        const Coeff& b = out.built.at(u, "e*");
        line(ls.at(pv, "e*"), lvq.at(u, "e*"), &b);
        line(rs.at(pv, "e*"), rvq.at(u, "e*"), &b);
        if (pw != pv) {
          line(ls.at(pw, "e*"), lvq.at(u, "e*"), &b);
          line(rs.at(pw, "e*"), rvq.at(u, "e*"), &b);
        }
      }
      {
        const Coeff& b = out.built.at(u, "d");
        line(ls.at(pv, "d"), lvq.at(u, "d"), &b);      // v donates the left depth
        line(rs.at(pw, "d"), rvq.at(u, "d"), &b);      // w donates the right depth
        line(rs.at(pv, "d"), rvq.at(u, "d"), nullptr); // v's right passes through
        line(ls.at(pw, "d"), lvq.at(u, "d"), nullptr); // w's left passes through
      }
      {
        LinExpr ex;
        ex.add(S.ambient[static_cast<size_t>(pv)], Rational(1));
        ex.add(Q.ambient[static_cast<size_t>(u)], Rational(-1));
        ex.add(out.built.at(u, "d"), Rational(-1));
        ex.add(out.built.at(u, "e*"), Rational(-1));
        sys_.add_eq(std::move(ex), rule, span);
      }
      if (pw != pv) {
        LinExpr ex;
        ex.add(S.ambient[static_cast<size_t>(pw)], Rational(1));
        ex.add(Q.ambient[static_cast<size_t>(u)], Rational(-1));
        ex.add(out.built.at(u, "d"), Rational(-1));
        ex.add(out.built.at(u, "e*"), Rational(-1));
        sys_.add_eq(std::move(ex), rule, span);
      }
    }
    return out;
  }

  // ---- expression walk ----------------------------------------------------

  Out walk(const Expr& e, AnnotationContext P, const std::vector<int>& active, int witness,
           int counter) {
    internal_check(!active.empty() && contains(active, witness), "witness row not active");
    internal_check(!P.result.has_value(), "entry context carries a result slice");
    witness_nonneg(P, witness, "witness nonneg", e.span);
    switch (e.kind) {
      case ExprKind::Var:
        return walk_var(e, std::move(P), active, witness, counter);
      case ExprKind::IntLit:
      case ExprKind::BoolLit:
      case ExprKind::UnitLit:
      case ExprKind::Leaf:
      case ExprKind::Prim:
        // literals, primitives on basic values, and a fresh leaf move no
        // potential; a leaf's own slice is minted free of charge
        P.result = fresh_slot(fresh_tag(), "res", tp_.type_of(e), active, e.span);
        return Out{std::move(P), nullptr, witness, counter};
      case ExprKind::Tick:
        return walk_tick(e, std::move(P), active, witness, counter);
      case ExprKind::MakeNode:
        return walk_node(e, std::move(P), active, witness, counter);
      case ExprKind::App:
        return walk_app(e, std::move(P), active, witness, counter);
      case ExprKind::If:
        return walk_if(e, std::move(P), active, witness, counter);
      case ExprKind::Match:
        return walk_match(e, std::move(P), active, witness, counter);
      case ExprKind::Let:
        return walk_let(e, std::move(P), active, witness, counter);
      case ExprKind::Fun:
        return walk_fun(e, std::move(P), active, witness, counter);
    }
    internal_fail("unknown expression kind");
  }

  Out walk_var(const Expr& e, AnnotationContext P, const std::vector<int>& active, int witness,
               int counter) {
    TypePtr t = tp_.type_of(e);
    if (t->kind == TypeKind::Arrow) {
      auto it = fn_env_.find(e.name);
      internal_check(it != fn_env_.end(), "arrow variable without a signature: " + e.name);
      return Out{std::move(P), it->second, witness, counter};
    }
    // the slice splits between what stays on the variable and what the
    // occurrence carries away
    const std::string tag = fresh_tag();
    VarSlot xq = fresh_slot(tag, e.name, t, active, e.span);
    VarSlot oq = fresh_slot(tag, "res", t, active, e.span);
    VarSlot& cur = P.slot(e.name);
    for (int r : active) {
      for (const Index& i : xq.indices) {
        LinExpr ex;
        ex.add(cur.at(r, i), Rational(1));
        ex.add(xq.at(r, i), Rational(-1));
        ex.add(oq.at(r, i), Rational(-1));
        sys_.add_eq(std::move(ex), "T-Var split", e.span);
      }
    }
    cur.rows = std::move(xq.rows);
    P.result = std::move(oq);
    return Out{std::move(P), nullptr, witness, counter};
  }

  Out walk_tick(const Expr& e, AnnotationContext P, const std::vector<int>& active, int witness,
                int counter) {
    const std::string tag = fresh_tag();
    std::vector<Coeff> amb = fresh_ambient(tag, active);
    for (int r : active) {
      LinExpr ex;
      ex.add(P.ambient[static_cast<size_t>(r)], Rational(1));
      ex.add(amb[static_cast<size_t>(r)], Rational(-1));
      ex.add_const(-e.amount);
      sys_.add_eq(std::move(ex), "T-Tick", e.span);
    }
    P.ambient = std::move(amb);
    P.result = fresh_slot(tag, "res", tp_.type_of(e), active, e.span);
    return Out{std::move(P), nullptr, witness, counter};
  }

  Out walk_node(const Expr& e, AnnotationContext P, const std::vector<int>& active, int witness,
                int counter) {
    internal_check(e.k0->kind == ExprKind::Var && e.k1->kind == ExprKind::Var &&
                       e.k2->kind == ExprKind::Var,
                   "construction not in let-normal form");
    ConstructOut c = construct(P, e.k0->name, e.k1->name, e.k2->name, {}, tp_.type_of(e), active,
                               "T-Node", e.span);
    c.built.name = "res";
    c.ctx.result = std::move(c.built);
    return Out{std::move(c.ctx), nullptr, witness, counter};
  }

  Out walk_app(const Expr& e, AnnotationContext P, const std::vector<int>& active, int witness,
               int counter) {
    internal_check(e.k0->kind == ExprKind::Var && e.k1->kind == ExprKind::Var,
                   "application not in let-normal form");
    auto it = fn_env_.find(e.k0->name);
    internal_check(it != fn_env_.end(), "arrow variable without a signature: " + e.k0->name);
    const FnSig& sig = *it->second;
    const std::string& x = e.k1->name;
    TypePtr tx = tp_.type_of(*e.k1);
    internal_check(tx->kind != TypeKind::Arrow, "function-typed argument survived type checking");
    TypePtr tr = tp_.type_of(e);

    // a saturated call designates the next witness row; a partial one only
    // builds a closure and stays on the current row
    int w = witness;
    if (tr->kind != TypeKind::Arrow) {
      w = designation(counter);
      ++counter;
      internal_check(contains(active, w), "designated row not active");
    }
    witness_nonneg(P, w, "T-App witness", e.span);

    // the designated row alone must cover the callee's entry demand
    {
      LinExpr ex;
      ex.add(P.ambient[static_cast<size_t>(w)], Rational(1));
      ex.add(sig.at("a*"), Rational(-1));
      sys_.add_ge(std::move(ex), "T-App subtype", e.span);
    }
    {
      const VarSlot& xs = P.slot(x);
      for (const Index& i : xs.indices) {
        LinExpr ex;
        ex.add(xs.at(w, i), Rational(1));
        ex.add(sig.at("a" + i), Rational(-1));
        sys_.add_ge(std::move(ex), "T-App subtype", e.span);
      }
    }

    // every row nets entry against remainder
    const std::string tag = fresh_tag();
    VarSlot xq = fresh_slot(tag, x, tx, active, e.span);
    std::vector<Coeff> amb = fresh_ambient(tag, active);
    {
      const VarSlot& xs = P.slot(x);
      for (int r : active) {
        LinExpr ex;
        ex.add(P.ambient[static_cast<size_t>(r)], Rational(1));
        ex.add(sig.at("a*"), Rational(-1));
        ex.add(sig.at("c*"), Rational(1));
        ex.add(amb[static_cast<size_t>(r)], Rational(-1));
        sys_.add_eq(std::move(ex), "T-App net", e.span);
        for (const Index& i : xq.indices) {
          LinExpr exi;
          exi.add(xs.at(r, i), Rational(1));
          exi.add(sig.at("a" + i), Rational(-1));
          exi.add(sig.at("c" + i), Rational(1));
          exi.add(xq.at(r, i), Rational(-1));
          sys_.add_eq(std::move(exi), "T-App net", e.span);
        }
      }
    }
    P.slot(x).rows = std::move(xq.rows);
    P.ambient = std::move(amb);

    Out o;
    o.witness = w;
    o.counter = counter;
    if (tr->kind == TypeKind::Arrow) {
      auto part = std::make_shared<FnSig>();
      part->name = sig.name + ".res";
      part->type = tr;
      for (const Index& i : location_indices(tr)) part->coeffs[i] = sig.at("b" + i);
      o.fn = std::move(part);
    } else {
      VarSlot res;
      res.name = "res";
      res.type = tr;
      res.indices = context_indices(tr);
      std::map<Index, Coeff> row;
      for (const Index& i : res.indices) row[i] = sig.at("b" + i);
      res.rows.assign(static_cast<size_t>(W_), row);
      P.result = std::move(res);
    }
    o.ctx = std::move(P);
    return o;
  }

  Out walk_let(const Expr& e, AnnotationContext P, const std::vector<int>& active, int witness,
               int counter) {
    Out g1 = walk(*e.k0, std::move(P), active, witness, counter);
    TypePtr tb = tp_.type_of(*e.k0);
    if (tb->kind == TypeKind::Arrow) {
      internal_check(g1.fn != nullptr, "arrow binding without a signature");
      fn_env_[e.name] = g1.fn;
      Out g2 = walk(*e.k1, std::move(g1.ctx), active, g1.witness, g1.counter);
      fn_env_.erase(e.name);
      return g2;
    }
    internal_check(g1.ctx.result.has_value(), "binding without a result slice");
    AnnotationContext ctx = std::move(g1.ctx);
    VarSlot bound = std::move(*ctx.result);
    ctx.result.reset();
    bound.name = e.name;
    ctx.vars.push_back(std::move(bound));
    Out g2 = walk(*e.k1, std::move(ctx), active, g1.witness, g1.counter);
    // leftover potential on the binder is discarded; the witness row must
    // not go negative doing so
    {
      const VarSlot& bs = g2.ctx.slot(e.name);
      for (const Index& i : bs.indices) {
        sys_.ensure_nonneg(bs.at(g2.witness, i), "T-Let drop", e.span);
      }
    }
    auto& vars = g2.ctx.vars;
    vars.erase(std::remove_if(vars.begin(), vars.end(),
                              [&](const VarSlot& s) { return s.name == e.name; }),
               vars.end());
    return g2;
  }

  Out walk_if(const Expr& e, AnnotationContext P, const std::vector<int>& active, int witness,
              int counter) {
    TypePtr t = tp_.type_of(e);
    if (t->kind == TypeKind::Arrow) {
      throw SourceError(tp_.prog.filename, e.span, "a conditional cannot produce a function");
    }
    int d1 = worldview_demand(*e.k1, tp_);
    int d2 = worldview_demand(*e.k2, tp_);
    auto [r1, w1] = arm_plan(*e.k1, counter, witness, active, false);
    auto [r2, w2] = arm_plan(*e.k2, counter + d1, witness, active, false);
    AnnotationContext P2 = P;
    Out g1 = walk(*e.k1, std::move(P), r1, w1, counter);
    Out g2 = walk(*e.k2, std::move(P2), r2, w2, counter + d1);
    internal_check(g1.counter == counter + d1 && g2.counter == counter + d1 + d2,
                   "designation counter out of step");
    witness_nonneg(g1.ctx, g1.witness, "arm exit nonneg", e.span);
    witness_nonneg(g2.ctx, g2.witness, "arm exit nonneg", e.span);
    AnnotationContext Q = join({&g1.ctx, &g2.ctx}, t, active, "T-Cond join", e.span);
    return Out{std::move(Q), nullptr, witness, counter + d1 + d2};
  }

  // Pointwise meet of arm exits: a fresh claim every arm must dominate.
  AnnotationContext join(std::vector<const AnnotationContext*> arms, const TypePtr& t,
                         const std::vector<int>& active, const char* rule, Span span) {
    const AnnotationContext& first = *arms.front();
    const std::string tag = fresh_tag();
    AnnotationContext Q;
    Q.worldviews = W_;
    Q.ambient = fresh_ambient(tag, active);
    for (const VarSlot& s : first.vars) {
      if (s.is_fn()) {
        Q.vars.push_back(s);
        continue;
      }
      Q.vars.push_back(fresh_slot(tag, s.name, s.type, active, span));
    }
    Q.result = fresh_slot(tag, "res", t, active, span);
    for (const AnnotationContext* armp : arms) {
      const AnnotationContext& A = *armp;
      internal_check(A.result.has_value(), "arm without a result slice");
      for (int r : active) {
        {
          LinExpr ex;
          ex.add(A.ambient[static_cast<size_t>(r)], Rational(1));
          ex.add(Q.ambient[static_cast<size_t>(r)], Rational(-1));
          sys_.add_ge(std::move(ex), rule, span);
        }
        for (const VarSlot& qs : Q.vars) {
          if (qs.is_fn()) continue;
          const VarSlot& as = A.slot(qs.name);
          for (const Index& i : qs.indices) {
            LinExpr ex;
            ex.add(as.at(r, i), Rational(1));
            ex.add(qs.at(r, i), Rational(-1));
            sys_.add_ge(std::move(ex), rule, span);
          }
        }
        for (const Index& i : Q.result->indices) {
          LinExpr ex;
          ex.add(A.result->at(r, i), Rational(1));
          ex.add(Q.result->at(r, i), Rational(-1));
          sys_.add_ge(std::move(ex), rule, span);
        }
      }
    }
    return Q;
  }

  Out walk_match(const Expr& e, AnnotationContext P, const std::vector<int>& active, int witness,
                 int counter) {
    TypePtr t = tp_.type_of(e);
    if (t->kind == TypeKind::Arrow) {
      throw SourceError(tp_.prog.filename, e.span, "a match cannot produce a function");
    }
    internal_check(e.k0->kind == ExprKind::Var, "match scrutinee not in let-normal form");
    const std::string& scrut = e.k0->name;
    TypePtr tt = tp_.type_of(*e.k0);
    internal_check(tt->kind == TypeKind::Tree, "match on a non-tree");
    TypePtr te = tt->a;
    int d_leaf = worldview_demand(*e.k1, tp_);
    int d_node = worldview_demand(*e.k2, tp_);
    int node_start = counter + d_leaf;

    auto [r_leaf, w_leaf] = arm_plan(*e.k1, counter, witness, active, false);
    // the repack needs every row in play, so the node arm always keeps them
    auto [r_node, w_node] = arm_plan(*e.k2, node_start, witness, active, true);

    AnnotationContext P2 = P;
    Out g1 = walk(*e.k1, std::move(P2), r_leaf, w_leaf, counter);
    internal_check(g1.counter == counter + d_leaf, "designation counter out of step");
    witness_nonneg(g1.ctx, g1.witness, "arm exit nonneg", e.span);

    // node arm entry: the scrutinee slice splits into a kept part and the
    // parts handed to the binders; element locations are copied, depth splits
    // convexly, and the root's own units drop into the ambient
    const std::string tag = fresh_tag();
    VarSlot kept = fresh_slot(tag, scrut, tt, active, e.span);
    VarSlot sp = fresh_slot(tag, e.name, te, active, e.span);
    VarSlot lp = fresh_slot(tag, e.name2, tt, active, e.span);
    VarSlot rp = fresh_slot(tag, e.name3, tt, active, e.span);
    std::vector<Coeff> amb = fresh_ambient(tag, active);
    {
      const VarSlot& ts = P.slot(scrut);
      for (int r : active) {
        for (const Index& j : sp.indices) {
          Index ej = "e" + j;
          const Coeff targets[3] = {sp.at(r, j), lp.at(r, ej), rp.at(r, ej)};
          for (const Coeff& target : targets) {
            LinExpr ex;
            ex.add(ts.at(r, ej), Rational(1));
            ex.add(kept.at(r, ej), Rational(-1));
            ex.add(target, Rational(-1));
            sys_.add_eq(std::move(ex), "destructure", e.span);
          }
        }
        {
          const Coeff targets[2] = {lp.at(r, "e*"), rp.at(r, "e*")};
          for (const Coeff& target : targets) {
            LinExpr ex;
            ex.add(ts.at(r, "e*"), Rational(1));
            ex.add(kept.at(r, "e*"), Rational(-1));
            ex.add(target, Rational(-1));
            sys_.add_eq(std::move(ex), "destructure", e.span);
          }
        }
        {
          LinExpr ex;
          ex.add(ts.at(r, "d"), Rational(1));
          ex.add(kept.at(r, "d"), Rational(-1));
          ex.add(lp.at(r, "d"), Rational(-1));
          ex.add(rp.at(r, "d"), Rational(-1));
          sys_.add_eq(std::move(ex), "destructure", e.span);
        }
        {
          LinExpr ex;
          ex.add(amb[static_cast<size_t>(r)], Rational(-1));
          ex.add(P.ambient[static_cast<size_t>(r)], Rational(1));
          ex.add(ts.at(r, "e*"), Rational(1));
          ex.add(kept.at(r, "e*"), Rational(-1));
          ex.add(ts.at(r, "d"), Rational(1));
          ex.add(kept.at(r, "d"), Rational(-1));
          sys_.add_eq(std::move(ex), "destructure pickup", e.span);
        }
      }
    }
    AnnotationContext R = std::move(P);
    R.slot(scrut).rows = std::move(kept.rows);
    R.ambient = std::move(amb);
    R.vars.push_back(std::move(sp));
    R.vars.push_back(std::move(lp));
    R.vars.push_back(std::move(rp));

    Out g2 = walk(*e.k2, std::move(R), r_node, w_node, node_start);
    internal_check(g2.counter == node_start + d_node, "designation counter out of step");
    witness_nonneg(g2.ctx, g2.witness, "arm exit nonneg", e.span);
    const AnnotationContext& S = g2.ctx;

    // the binders' leftovers rebuild one node's worth of the scrutinee
    ConstructOut c = construct(S, e.name, e.name2, e.name3, {scrut}, tt, active, "repack", e.span);
    AnnotationContext& Qp = c.ctx;

    // fold both arms into a fresh claim; on the node side the scrutinee
    // offers its kept slice plus the rebuilt one
    const std::string jtag = fresh_tag();
    AnnotationContext M;
    M.worldviews = W_;
    M.ambient = fresh_ambient(jtag, active);
    for (const VarSlot& x : Qp.vars) {
      if (x.name == e.name || x.name == e.name2 || x.name == e.name3) continue;
      if (x.is_fn()) {
        M.vars.push_back(x);
        continue;
      }
      M.vars.push_back(fresh_slot(jtag, x.name, x.type, active, e.span));
    }
    M.result = fresh_slot(jtag, "res", t, active, e.span);
    internal_check(Qp.result.has_value(), "arm without a result slice");
    for (int u : active) {
      {
        LinExpr ex;
        ex.add(Qp.ambient[static_cast<size_t>(u)], Rational(1));
        ex.add(M.ambient[static_cast<size_t>(u)], Rational(-1));
        sys_.add_ge(std::move(ex), "T-Match join", e.span);
      }
      for (const VarSlot& m : M.vars) {
        if (m.is_fn()) continue;
        const VarSlot& src = Qp.slot(m.name);
        for (const Index& i : m.indices) {
          LinExpr ex;
          ex.add(src.at(u, i), Rational(1));
          if (m.name == scrut) ex.add(c.built.at(u, i), Rational(1));
          ex.add(m.at(u, i), Rational(-1));
          sys_.add_ge(std::move(ex), "T-Match join", e.span);
        }
      }
      for (const Index& i : M.result->indices) {
        LinExpr ex;
        ex.add(Qp.result->at(u, i), Rational(1));
        ex.add(M.result->at(u, i), Rational(-1));
        sys_.add_ge(std::move(ex), "T-Match join", e.span);
      }
      {
        LinExpr ex;
        ex.add(g1.ctx.ambient[static_cast<size_t>(u)], Rational(1));
        ex.add(M.ambient[static_cast<size_t>(u)], Rational(-1));
        sys_.add_ge(std::move(ex), "T-Match join", e.span);
      }
      for (const VarSlot& m : M.vars) {
        if (m.is_fn()) continue;
        const VarSlot& src = g1.ctx.slot(m.name);
        for (const Index& i : m.indices) {
          LinExpr ex;
          ex.add(src.at(u, i), Rational(1));
          ex.add(m.at(u, i), Rational(-1));
          sys_.add_ge(std::move(ex), "T-Match join", e.span);
        }
      }
      internal_check(g1.ctx.result.has_value(), "arm without a result slice");
      for (const Index& i : M.result->indices) {
        LinExpr ex;
        ex.add(g1.ctx.result->at(u, i), Rational(1));
        ex.add(M.result->at(u, i), Rational(-1));
        sys_.add_ge(std::move(ex), "T-Match join", e.span);
      }
    }
    // the binders die with the match; the witness row must not go negative
    const std::string drop_names[3] = {e.name, e.name2, e.name3};
    for (const std::string& nm : drop_names) {
      const VarSlot& x = Qp.slot(nm);
      for (const Index& i : x.indices) {
        sys_.ensure_nonneg(x.at(witness, i), "T-Match drop", e.span);
      }
    }
    return Out{std::move(M), nullptr, witness, node_start + d_node};
  }

  Out walk_fun(const Expr& e, AnnotationContext P, const std::vector<int>& /*active*/, int witness,
               int counter) {
    TypePtr tf = tp_.type_of(e);
    std::string nm = def_.name + ".fn" + std::to_string(lambda_++);
    FnSigPtr sig = alloc_sig(nm, tf, e.span);
    bool named = !e.name.empty();
    if (named) fn_env_[e.name] = sig;
    // the closure captures nothing: every enclosing variable enters the body
    // with an empty slice and must leave with one
    std::vector<std::pair<std::string, TypePtr>> captured;
    for (const VarSlot& s : P.vars) {
      if (!s.is_fn()) captured.emplace_back(s.name, s.type);
    }
    derive_function(e, sig, captured, e.span);
    if (named) fn_env_.erase(e.name);
    return Out{std::move(P), sig, witness, counter};
  }

  void derive_function(const Expr& fn, FnSigPtr sig,
                       const std::vector<std::pair<std::string, TypePtr>>& captured, Span span) {
    internal_check(fn.kind == ExprKind::Fun, "definition without parameters");
    const Expr& body = *fn.k0;
    TypePtr targ = sig->type->a;
    TypePtr tres = sig->type->b;
    internal_check(targ->kind != TypeKind::Arrow, "function-typed parameter survived type checking");

    WorldviewBudget budget =
        budget_worldviews(body, tp_, sig->name, span, opts_.worldview_cap);
    if (budget.clamped) {
      out_.warnings.push_back("'" + sig->name + "' wants " + std::to_string(budget.required) +
                              " worldviews but the default cap allows " +
                              std::to_string(budget.worldviews) + "; proceeding clamped");
    }
    out_.worldviews = std::max(out_.worldviews, budget.worldviews);
    out_.budget_required = std::max(out_.budget_required, budget.required);
    out_.budget_clamped = out_.budget_clamped || budget.clamped;

    int saved_w = W_;
    auto saved_env = fn_env_;
    W_ = budget.worldviews;

    AnnotationContext ctx;
    ctx.worldviews = W_;
    ctx.ambient.assign(static_cast<size_t>(W_), sig->at("a*"));
    for (const auto& [nm, t] : captured) {
      VarSlot z;
      z.name = nm;
      z.type = t;
      z.indices = context_indices(t);
      std::map<Index, Coeff> zr;
      for (const Index& i : z.indices) zr[i] = Coeff::zero();
      z.rows.assign(static_cast<size_t>(W_), zr);
      ctx.vars.push_back(std::move(z));
    }
    {
      VarSlot param;
      param.name = fn.name2;
      param.type = targ;
      param.indices = context_indices(targ);
      std::map<Index, Coeff> row;
      for (const Index& i : param.indices) row[i] = sig->at("a" + i);
      param.rows.assign(static_cast<size_t>(W_), row);
      ctx.vars.push_back(std::move(param));
    }

    std::vector<int> active(static_cast<size_t>(W_));
    for (int r = 0; r < W_; ++r) active[static_cast<size_t>(r)] = r;
    Out out = walk(body, std::move(ctx), active, 0, 0);
    witness_nonneg(out.ctx, out.witness, "exit nonneg", span);

    // every exit row ties to the signature: the remainder to c, the result
    // to b, captures back to nothing
    for (int r = 0; r < W_; ++r) {
      sys_.eq(out.ctx.ambient[static_cast<size_t>(r)], sig->at("c*"), "signature exit", span);
      const VarSlot& px = out.ctx.slot(fn.name2);
      for (const Index& i : px.indices) {
        sys_.eq(px.at(r, i), sig->at("c" + i), "signature exit", span);
      }
      for (const auto& [nm, t] : captured) {
        (void)t;
        const VarSlot& z = out.ctx.slot(nm);
        for (const Index& i : z.indices) {
          LinExpr ex;
          ex.add(z.at(r, i), Rational(1));
          sys_.add_eq(std::move(ex), "capture exit", span);
        }
      }
      if (tres->kind == TypeKind::Arrow) {
        internal_check(out.fn != nullptr, "arrow-typed body without a signature");
        if (r == 0) {
          for (const Index& i : location_indices(tres)) {
            sys_.eq(sig->at("b" + i), out.fn->at(i), "curried result", span);
          }
        }
      } else {
        internal_check(out.ctx.result.has_value(), "body without a result slice");
        for (const Index& i : out.ctx.result->indices) {
          sys_.eq(out.ctx.result->at(r, i), sig->at("b" + i), "signature exit", span);
        }
      }
    }

    W_ = saved_w;
    fn_env_ = std::move(saved_env);
  }
};

}  // namespace

GenOutput gen_constraints(const TypedProgram& tp, const Def& def,
                          const std::map<std::string, SolvedSig>& solved, const GenOptions& opts) {
  GenOutput out;
  Gen g(tp, def, solved, opts, out);
  g.run();
  return out;
}

}  // namespace treebound
