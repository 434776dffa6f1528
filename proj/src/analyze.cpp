#include "treebound/analyze.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "treebound/anf.hpp"
#include "treebound/diag.hpp"
#include "treebound/inputs.hpp"
#include "treebound/instrument.hpp"
#include "treebound/location.hpp"
#include "treebound/parser.hpp"

namespace treebound {

const char* cost_model_str(CostModel m) { return m == CostModel::Tick ? "tick" : "stack"; }

namespace {

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::Var) out.insert(e.name);
  if (e.k0) collect_vars(*e.k0, out);
  if (e.k1) collect_vars(*e.k1, out);
  if (e.k2) collect_vars(*e.k2, out);
}

// Argument types of a definition, in application order.
std::vector<TypePtr> param_types(const TypedProgram& tp, const Def& def) {
  std::vector<TypePtr> out;
  TypePtr t = tp.def_type(def.name);
  for (std::size_t k = def_params(def).size(); k > 0; --k) {
    internal_check(t && t->kind == TypeKind::Arrow, "definition type narrower than its parameters");
    out.push_back(t->a);
    t = t->b;
  }
  return out;
}

std::string conflict_text(const ConstraintSystem& sys, const std::vector<std::size_t>& rows) {
  std::string out;
  std::set<std::string> seen;
  for (std::size_t r : rows) {
    const Constraint& c = sys.constraints()[r];
    std::string tag = c.rule + " at " + std::to_string(c.span.line) + ":" +
                      std::to_string(c.span.col);
    if (!seen.insert(tag).second) continue;
    if (!out.empty()) out += "; ";
    out += tag;
    if (seen.size() >= 4) break;
  }
  return out.empty() ? "empty conflict set" : out;
}

struct Attempt {
  Retention mode = Retention::Full;
  GenOutput gen;
  LpResult lp;
};

// Token for a structural location of one argument (or the result when
// primed): depth is "d", the root element count "n", anything deeper keeps
// its spelled index.
std::string index_token(const Index& i, const std::string& suffix) {
  std::string base;
  if (i == "d") {
    base = "d";
  } else if (i == "e*") {
    base = "n";
  } else {
    base = "[" + index_str(i) + "]";
  }
  return base + suffix;
}

void append_term(std::string& out, const Rational& c, const std::string& tok) {
  if (c == 0) return;
  if (!out.empty()) out += " + ";
  if (c == 1 && !tok.empty()) {
    out += tok;
    return;
  }
  out += rational_str(c);
  if (!tok.empty()) out += "·" + tok;
}

Rational sig_at(const std::map<Index, Rational>& sig, const Index& i) {
  auto it = sig.find(i);
  return it == sig.end() ? Rational(0) : it->second;
}

std::string render_gate(const BaseType& fn_type, const std::map<Index, Rational>& sig, char gate,
                        bool with_result) {
  std::vector<TypePtr> args;
  TypePtr t = std::make_shared<BaseType>(fn_type);
  while (t->kind == TypeKind::Arrow) {
    args.push_back(t->a);
    t = t->b;
  }
  int carriers = 0;
  for (const TypePtr& a : args) {
    if (!context_indices(a).empty()) ++carriers;
  }
  std::string out;
  Rational constant{0};
  std::string prefix;
  for (std::size_t k = 0; k < args.size(); ++k) {
    std::string suffix = carriers > 1 ? "_" + std::to_string(k + 1) : "";
    constant += sig_at(sig, prefix + gate + "*");
    for (const Index& i : context_indices(args[k])) {
      append_term(out, sig_at(sig, prefix + gate + i), index_token(i, suffix));
    }
    prefix += 'b';
  }
  if (with_result) {
    for (const Index& i : context_indices(t)) {
      append_term(out, sig_at(sig, prefix + i), index_token(i, "'"));
    }
  }
  append_term(out, constant, "");
  return out.empty() ? "0" : out;
}

}  // namespace

std::string render_bound(const BaseType& fn_type, const std::map<Index, Rational>& sig) {
  return render_gate(fn_type, sig, 'a', false);
}

std::string render_returned(const BaseType& fn_type, const std::map<Index, Rational>& sig) {
  return render_gate(fn_type, sig, 'c', true);
}

bool AnalysisReport::all_ok() const {
  for (const FunctionReport& f : functions) {
    if (!f.solved() || !f.check.violations.empty()) return false;
  }
  return true;
}

AnalysisReport analyze_program(Program prog, std::string filename, const AnalyzerOptions& opts) {
  prog.filename = std::move(filename);
  if (opts.cost_model == CostModel::Stack) prog = instrument_stack_cost(std::move(prog));
  prog = to_let_normal(std::move(prog));
  TypedProgram tp = infer_base_types(std::move(prog));

  AnalysisReport rep;
  rep.filename = tp.prog.filename;
  rep.cost_model = opts.cost_model;
  rep.warnings = tp.warnings;

  std::map<std::string, SolvedSig> solved;
  std::map<std::string, std::string> failed;
  int def_index = 0;
  for (const Def& def : tp.prog.defs) {
    ++def_index;
    FunctionReport fr;
    fr.name = def.name;
    fr.type_text = type_str(tp.def_type(def.name));

    std::set<std::string> refs;
    collect_vars(*def.fn, refs);
    bool blocked = false;
    for (const auto& [fname, reason] : failed) {
      (void)reason;
      if (fname != def.name && refs.count(fname)) {
        fr.skipped = true;
        fr.skip_reason = "depends on '" + fname + "', which has no certificate";
        blocked = true;
        break;
      }
    }
    if (blocked) {
      failed.emplace(def.name, fr.skip_reason);
      rep.functions.push_back(std::move(fr));
      continue;
    }

    GenOptions base;
    base.worldview_cap = opts.worldview_cap;
    if (auto it = opts.pins.find(def.name); it != opts.pins.end()) base.pins = it->second;

    std::vector<Attempt> attempts;
    for (Retention mode : {Retention::Full, Retention::Split}) {
      Attempt at;
      at.mode = mode;
      base.retention = mode;
      at.gen = gen_constraints(tp, def, solved, base);
      at.lp = solve_lp(at.gen.sys);
      attempts.push_back(std::move(at));
    }
    // prefer a certificate; among certificates the cheaper bound; ties keep
    // every row everywhere
    const Attempt* pick = &attempts[0];
    if (attempts[0].lp.status != LpStatus::Optimal) {
      if (attempts[1].lp.status == LpStatus::Optimal) pick = &attempts[1];
    } else if (attempts[1].lp.status == LpStatus::Optimal &&
               attempts[1].lp.objective < attempts[0].lp.objective) {
      pick = &attempts[1];
    }

    const GenOutput& gen = pick->gen;
    const LpResult& lp = pick->lp;
    fr.retention = pick->mode;
    fr.status = lp.status;
    fr.worldviews = gen.worldviews;
    fr.worldviews_required = gen.budget_required;
    fr.worldviews_clamped = gen.budget_clamped;
    fr.warnings = gen.warnings;
    fr.stats.categories = gen.sys.category_counts();
    fr.stats.constraints = gen.sys.constraints().size();
    fr.stats.variables = gen.sys.var_count();
    fr.stats.presolve_eliminated = lp.presolve_eliminated;
    fr.stats.solver_rows = lp.solver_rows;
    fr.stats.solver_cols = lp.solver_cols;
    fr.stats.pivots = lp.pivots;
    if (opts.want_lp_dump) {
      std::ostringstream dump;
      gen.sys.dump_lp(dump, def.name + " (" + retention_str(pick->mode) + " retention)");
      fr.lp_dump = dump.str();
    }

    if (lp.status == LpStatus::Optimal) {
      SolvedSig ss;
      ss.type = tp.def_type(def.name);
      for (const Index& i : location_indices(ss.type)) {
        const Coeff& c = gen.sig->at(i);
        ss.coeffs[i] = c.is_var() ? lp.values[static_cast<std::size_t>(c.var)] : c.k;
      }
      fr.signature = ss.coeffs;
      fr.bound_text = render_bound(*ss.type, ss.coeffs);
      fr.returned_text = render_returned(*ss.type, ss.coeffs);
      if (opts.check > 0) {
        std::vector<TypePtr> ptypes = param_types(tp, def);
        std::vector<std::vector<ValuePtr>> streams;
        for (std::size_t k = 0; k < ptypes.size(); ++k) {
          std::uint64_t seed =
              opts.seed * 1000003ULL + static_cast<std::uint64_t>(def_index) * 257ULL + k;
          streams.push_back(generate_inputs(seed, ptypes[k], opts.check));
        }
        std::vector<std::vector<ValuePtr>> tuples;
        for (int j = 0; j < opts.check; ++j) {
          std::vector<ValuePtr> tuple;
          for (auto& s : streams) tuple.push_back(s[static_cast<std::size_t>(j)]);
          tuples.push_back(std::move(tuple));
        }
        fr.check = check_soundness(tp.prog, def.name, ss, tuples);
        if (!fr.check.violations.empty()) {
          throw InternalError("internal invariant violated: certificate for '" + def.name +
                              "' contradicted by execution: " + fr.check.violations.front());
        }
      }
      solved.emplace(def.name, std::move(ss));
    } else if (lp.status == LpStatus::Infeasible) {
      fr.conflict_text = conflict_text(gen.sys, lp.conflict);
      failed.emplace(def.name, "no certificate (infeasible)");
    } else {
      fr.conflict_text = "objective unbounded";
      failed.emplace(def.name, "no certificate (unbounded)");
    }
    rep.functions.push_back(std::move(fr));
  }
  return rep;
}

AnalysisReport analyze_file(const std::string& path, const AnalyzerOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SourceError(path, Span{0, 0}, "cannot read file");
  std::ostringstream buf;
  buf << in.rdbuf();
  Program prog = parse(path, buf.str());
  return analyze_program(std::move(prog), path, opts);
}

}  // namespace treebound
