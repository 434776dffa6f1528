// Acceptance gate: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lp_oracle.hpp"
#include "progen.hpp"
#include "treebound/analyze.hpp"
#include "treebound/anf.hpp"
#include "treebound/annotation.hpp"
#include "treebound/ast.hpp"
#include "treebound/basetypes.hpp"
#include "treebound/congen.hpp"
#include "treebound/diag.hpp"
#include "treebound/eval.hpp"
#include "treebound/inputs.hpp"
#include "treebound/instrument.hpp"
#include "treebound/location.hpp"
#include "treebound/parser.hpp"
#include "treebound/simplex.hpp"
#include "treebound/soundness.hpp"
#include "treebound/value.hpp"

using namespace treebound;

namespace {

struct Check {
  bool pass = true;
  std::string summary;
  std::ostringstream problems;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!problems.str().empty()) problems << "; ";
    problems << what;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw SourceError(path, {0, 0}, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string corpus_path(const std::string& name) {
  return std::string(TB_CORPUS_DIR) + "/" + name;
}

AnalysisReport analyze_corpus(const std::string& name, const AnalyzerOptions& opts) {
  return analyze_file(corpus_path(name), opts);
}

const FunctionReport& fn(const AnalysisReport& rep, const std::string& name) {
  for (const FunctionReport& f : rep.functions)
    if (f.name == name) return f;
  throw InternalError("no function '" + name + "' in report");
}

Rational sig_at(const FunctionReport& f, const Index& i) {
  auto it = f.signature.find(i);
  return it == f.signature.end() ? Rational(0) : it->second;
}

ValuePtr complete(int depth) {
  if (depth == 0) return Value::leaf();
  ValuePtr sub = complete(depth - 1);
  return Value::node(Value::integer(1), sub, sub);
}

long long height_oracle(const Value& v) {
  if (v.kind != ValueKind::Node) return 0;
  long long l = height_oracle(*v.left), r = height_oracle(*v.right);
  return 1 + (l > r ? l : r);
}

long long count_oracle(const Value& v) {
  if (v.kind != ValueKind::Node) return 0;
  return 1 + count_oracle(*v.left) + count_oracle(*v.right);
}

// ---------------------------------------------------------------------------

Check criterion1() {
  Check c;
  AnalyzerOptions opts;
  opts.check = 50;
  AnalysisReport rep = analyze_corpus("bin0.src", opts);
  const FunctionReport& f = fn(rep, "bin0");
  c.expect(f.solved(), "bin0 has no certificate");
  c.expect(f.bound_text == "d + 1", "bound is " + f.bound_text + ", want d + 1");
  c.expect(sig_at(f, "ad") == 1 && sig_at(f, "a*") == 1 && sig_at(f, "ae*") == 0,
           "bound coefficients are not exactly 1·d + 1");
  c.expect(f.returned_text == "d + 1", "returned is " + f.returned_text + ", want d + 1");
  c.expect(f.check.violations.empty(), "bound contradicted at runtime");
  c.summary = "bin0 tick bound " + f.bound_text + ", returned " + f.returned_text;
  return c;
}

Check criterion2() {
  Check c;
  AnalyzerOptions opts;
  opts.cost_model = CostModel::Stack;
  opts.check = 50;
  AnalysisReport rep = analyze_corpus("size.src", opts);
  const FunctionReport& f = fn(rep, "size");
  c.expect(f.solved(), "size has no certificate");
  c.expect(sig_at(f, "ad") == 1, "depth coefficient is " + rational_str(sig_at(f, "ad")));
  c.expect(sig_at(f, "ae*") == 0, "bound is not linear in depth alone");
  c.expect(sig_at(f, "a*") <= 1, "constant exceeds 1");
  c.expect(f.returned_text == f.bound_text,
           "returned " + f.returned_text + " differs from bound " + f.bound_text);
  c.expect(f.check.violations.empty(), "bound contradicted at runtime");
  c.summary = "size stack bound " + f.bound_text + " with all frames returned";
  return c;
}

Check criterion3() {
  Check c;
  AnalyzerOptions good;
  good.pins["caramel"] = {{"ae*", Rational(5)}, {"ad", Rational(0)}};
  good.pins["buyCandy"] = {{"ae*", Rational(5)}, {"ad", Rational(0)}, {"a*", Rational(0)}};
  AnalysisReport candy = analyze_corpus("candy.src", good);
  const FunctionReport& buy = fn(candy, "buyCandy");
  c.expect(buy.solved(), "buyCandy has no certificate at 5 per node");
  c.expect(sig_at(buy, "ae*") == 5 && sig_at(buy, "a*") == 0 && sig_at(buy, "ad") == 0,
           "buyCandy signature is not 5 per node with zero ambient");

  AnalyzerOptions bad5;
  bad5.pins["caramel"] = good.pins["caramel"];
  bad5.pins["badBuy"] = {{"ae*", Rational(5)}, {"ad", Rational(0)}, {"a*", Rational(0)}};
  AnalysisReport at5 = analyze_corpus("badbuy.src", bad5);
  c.expect(fn(at5, "badBuy").status == LpStatus::Infeasible, "badBuy certified at 5 per node");

  AnalyzerOptions bad7 = bad5;
  bad7.pins["badBuy"] = {{"ae*", Rational(7)}, {"ad", Rational(0)}, {"a*", Rational(0)}};
  AnalysisReport at7 = analyze_corpus("badbuy.src", bad7);
  c.expect(fn(at7, "badBuy").status == LpStatus::Optimal, "badBuy not certified at 7 per node");

  c.summary = "buyCandy certifies at 5/node, badBuy infeasible at 5 and feasible at 7";
  return c;
}

Check criterion4() {
  Check c;
  AnalyzerOptions opts;
  opts.cost_model = CostModel::Stack;
  opts.check = 50;
  AnalysisReport rep = analyze_corpus("twice.src", opts);
  const FunctionReport& f = fn(rep, "twice");
  c.expect(f.solved(), "twice has no certificate");
  c.expect(sig_at(f, "ad") == 1,
           "depth coefficient is " + rational_str(sig_at(f, "ad")) + ", want 1");
  c.expect(f.check.violations.empty(), "bound contradicted at runtime");

  // The measured high-water mark on complete trees equals the bound, so the
  // single depth coefficient is not just sound but tight.
  Program prog = to_let_normal(
      instrument_stack_cost(parse("twice.src", read_file(corpus_path("twice.src")))));
  EnvPtr env = program_env(prog);
  for (int d = 0; d <= 4; ++d) {
    long long applications = 0;
    EvalResult r = eval_call("twice", env, {complete(d)}, {}, applications);
    c.expect(r.cost.peak == Rational(d + 1),
             "measured peak " + rational_str(r.cost.peak) + " at depth " + std::to_string(d));
  }
  c.summary = "sequential reuse keeps depth coefficient 1 (bound " + f.bound_text +
              "), peak on complete trees is exactly d + 1";
  return c;
}

Check criterion5() {
  Check c;
  AnalyzerOptions opts;
  opts.cost_model = CostModel::Stack;
  opts.check = 50;
  AnalysisReport rep = analyze_corpus("set.src", opts);
  for (const char* name : {"mem0", "min_elt"}) {
    const FunctionReport& f = fn(rep, name);
    c.expect(f.solved(), std::string(name) + " has no certificate");
    c.expect(f.bound_text == "d", std::string(name) + " bound is " + f.bound_text);
    c.expect(f.returned_text == "d", std::string(name) + " returned is " + f.returned_text);
    c.expect(f.check.violations.empty(), std::string(name) + " contradicted at runtime");
  }
  c.summary = "set module: mem0 and min_elt both bound d with d returned";
  return c;
}

Check criterion6() {
  Check c;
  long long corpus_checked = 0, random_checked = 0, violations = 0;

  auto sweep = [&](const std::string& name, CostModel model) {
    AnalyzerOptions opts;
    opts.cost_model = model;
    opts.check = 40;
    try {
      AnalysisReport rep = analyze_corpus(name, opts);
      for (const FunctionReport& f : rep.functions) {
        corpus_checked += f.check.checked;
        violations += static_cast<long long>(f.check.violations.size());
      }
    } catch (const InternalError& e) {
      ++violations;
      c.expect(false, name + ": " + e.what());
    }
  };
  sweep("bin0.src", CostModel::Tick);
  sweep("bin.src", CostModel::Stack);
  sweep("size.src", CostModel::Stack);
  sweep("twice.src", CostModel::Stack);
  sweep("set.src", CostModel::Stack);
  sweep("candy.src", CostModel::Tick);
  sweep("badbuy.src", CostModel::Tick);

  // Random programs get one full-retention certificate per definition and a
  // batch of fresh inputs against it; a definition without a certificate only
  // shrinks the pair count, it can never hide a violation.
  for (std::uint64_t seed = 0; random_checked < 1000; ++seed) {
    bool ticks = seed % 2 == 0;
    Program prog = progen::random_program(seed, ticks);
    if (!ticks) prog = instrument_stack_cost(std::move(prog));
    TypedProgram tp = infer_base_types(to_let_normal(std::move(prog)));
    std::map<std::string, SolvedSig> solved;
    for (const Def& def : tp.prog.defs) {
      GenOutput gen = gen_constraints(tp, def, solved, GenOptions{});
      LpResult lp = solve_lp(gen.sys);
      if (lp.status != LpStatus::Optimal) break;  // later defs lack a fixed callee signature

      SolvedSig ss;
      ss.type = tp.def_type(def.name);
      for (const Index& i : location_indices(ss.type)) {
        const Coeff& co = gen.sig->at(i);
        ss.coeffs[i] = co.is_var() ? lp.values[static_cast<std::size_t>(co.var)] : co.k;
      }

      std::vector<TypePtr> ptypes;
      TypePtr t = ss.type;
      for (std::size_t k = def_params(def).size(); k > 0; --k) {
        ptypes.push_back(t->a);
        t = t->b;
      }
      std::vector<std::vector<ValuePtr>> streams;
      for (std::size_t k = 0; k < ptypes.size(); ++k)
        streams.push_back(generate_inputs(seed * 7 + 1 + k, ptypes[k], 25));
      std::vector<std::vector<ValuePtr>> tuples;
      for (std::size_t j = 0; j < 25; ++j) {
        std::vector<ValuePtr> tuple;
        for (auto& s : streams) tuple.push_back(s[j]);
        tuples.push_back(std::move(tuple));
      }

      SoundnessReport r = check_soundness(tp.prog, def.name, ss, tuples);
      random_checked += r.checked;
      for (const std::string& v : r.violations) {
        ++violations;
        c.expect(false, "seed " + std::to_string(seed) + ": " + v);
      }
      solved.emplace(def.name, std::move(ss));
    }
    if (seed > 2000) break;  // generator failure guard, never hit
  }

  c.expect(random_checked >= 1000, "only " + std::to_string(random_checked) + " random pairs");
  c.expect(violations == 0, std::to_string(violations) + " soundness violations");
  c.summary = "corpus plus " + std::to_string(random_checked) +
              " random program/input pairs, zero violations (corpus pairs: " +
              std::to_string(corpus_checked) + ")";
  return c;
}

Check criterion7() {
  Check c;
  TypePtr ttree = BaseType::tree(BaseType::integer());
  std::vector<ValuePtr> trees = generate_inputs(11, ttree, 10000);
  c.expect(trees.size() >= 10000, "input stream too short");

  long long phi_cases = 0;
  for (const ValuePtr& t : trees) {
    if (phi(*t, "d") != Rational(height_oracle(*t)) ||
        phi(*t, "e*") != Rational(count_oracle(*t))) {
      c.expect(false, "phi disagrees with the oracle on " + value_str(*t));
      break;
    }
    ++phi_cases;
  }

  std::mt19937_64 rng(0xACCE5701ULL);
  auto coeff = [&]() {
    return Rational(static_cast<long long>(rng() % 6), 1 + static_cast<long long>(rng() % 3));
  };
  long long nonneg_cases = 0, subtype_cases = 0;
  for (const ValuePtr& t : trees) {
    Slice q{{"d", coeff()}, {"e*", coeff()}};
    Rational pq = potential(*t, q);
    if (pq < 0) {
      c.expect(false, "negative potential on " + value_str(*t));
      break;
    }
    ++nonneg_cases;

    Slice p = q;
    p["d"] += coeff();
    p["e*"] += coeff();
    if (potential(*t, p) < pq) {
      c.expect(false, "pointwise larger slice lost potential on " + value_str(*t));
      break;
    }
    ++subtype_cases;
  }
  c.expect(phi_cases >= 10000 && nonneg_cases >= 10000 && subtype_cases >= 10000,
           "fewer than 10000 cases in some suite");
  c.summary = "potential lemmas hold on " + std::to_string(phi_cases) + "/" +
              std::to_string(nonneg_cases) + "/" + std::to_string(subtype_cases) +
              " oracle/nonnegativity/subtype cases";
  return c;
}

Check criterion8() {
  Check c;
  AnalyzerOptions opts;
  opts.worldview_cap = 2;
  AnalysisReport rep = analyze_corpus("bin0.src", opts);
  const FunctionReport& f = fn(rep, "bin0");
  c.expect(f.solved(), "bin0 has no certificate under cap 2");
  c.expect(f.worldviews == 2, "used " + std::to_string(f.worldviews) + " worldviews");
  c.expect(f.bound_text == "d + 1", "bound is " + f.bound_text);
  c.summary = "bin0 analysis succeeds with the worldview cap at 2";
  return c;
}

Check criterion9() {
  Check c;
  int agreed = 0;
  for (std::uint64_t seed = 500000; seed < 501000; ++seed) {
    ConstraintSystem sys = lp_oracle::random_system(seed);
    LpResult got = solve_lp(sys);
    lp_oracle::OracleOut want = lp_oracle::solve(sys);
    bool ok = got.status == want.status &&
              (got.status != LpStatus::Optimal || got.objective == want.objective);
    if (!ok) {
      c.expect(false, "seed " + std::to_string(seed) + ": solver " +
                          lp_status_str(got.status) + " vs oracle " +
                          lp_status_str(want.status));
      break;
    }
    ++agreed;
  }
  c.expect(agreed >= 1000, "only " + std::to_string(agreed) + " systems compared");
  c.summary = "simplex matches vertex enumeration on " + std::to_string(agreed) +
              " random systems";
  return c;
}

int run(int n, const std::function<Check()>& body, long long budget_ms) {
  auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    c = body();
  } catch (const std::exception& e) {
    c.pass = false;
    c.problems << e.what();
    c.summary = "crashed";
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  if (budget_ms > 0 && ms > budget_ms) {
    c.pass = false;
    c.problems << (c.problems.str().empty() ? "" : "; ") << "took " << ms << " ms, budget "
               << budget_ms;
  }
  std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << n << ": "
            << (c.pass ? c.summary : c.problems.str()) << " (" << ms << " ms)\n";
  return c.pass ? 0 : 1;
}

}  // namespace

int main() {
  int failures = 0;
  failures += run(1, criterion1, 5000);
  failures += run(2, criterion2, 5000);
  failures += run(3, criterion3, 0);
  failures += run(4, criterion4, 0);
  failures += run(5, criterion5, 0);
  failures += run(6, criterion6, 60000);
  failures += run(7, criterion7, 0);
  failures += run(8, criterion8, 0);
  failures += run(9, criterion9, 0);
  std::cout << (9 - failures) << " of 9 criteria pass\n";
  return failures == 0 ? 0 : 1;
}
