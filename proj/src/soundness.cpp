#include "treebound/soundness.hpp"

#include "treebound/annotation.hpp"
#include "treebound/diag.hpp"
#include "treebound/location.hpp"

namespace treebound {

namespace {

Rational coeff_at(const SolvedSig& sig, const Index& i) {
  auto it = sig.coeffs.find(i);
  return it == sig.coeffs.end() ? Rational(0) : it->second;
}

// Sums one gate ('a' on entry, 'c' on exit) across the curried argument
// positions: the k-th argument reads its slice under a prefix of k 'b's.
Rational gate_potential(const SolvedSig& sig, const std::vector<ValuePtr>& args, char gate) {
  Rational total{0};
  std::string prefix;
  TypePtr t = sig.type;
  for (const ValuePtr& v : args) {
    internal_check(t && t->kind == TypeKind::Arrow, "more arguments than the type allows");
    total += coeff_at(sig, prefix + gate + "*");
    Slice s;
    for (const Index& i : context_indices(t->a)) s[i] = coeff_at(sig, prefix + gate + i);
    total += potential(*v, s);
    prefix += 'b';
    t = t->b;
  }
  return total;
}

std::string args_str(const std::vector<ValuePtr>& args) {
  std::string out;
  for (const ValuePtr& v : args) {
    if (!out.empty()) out += ", ";
    out += value_str(*v);
  }
  return out;
}

}  // namespace

Rational entry_potential(const SolvedSig& sig, const std::vector<ValuePtr>& args) {
  return gate_potential(sig, args, 'a');
}

Rational exit_potential(const SolvedSig& sig, const std::vector<ValuePtr>& args,
                        const ValuePtr& result) {
  Rational total = gate_potential(sig, args, 'c');
  std::string prefix(args.size(), 'b');
  TypePtr t = sig.type;
  for (std::size_t k = 0; k < args.size(); ++k) {
    internal_check(t && t->kind == TypeKind::Arrow, "more arguments than the type allows");
    t = t->b;
  }
  internal_check(t->kind != TypeKind::Arrow, "bound check on a partial application");
  Slice s;
  for (const Index& i : context_indices(t)) s[i] = coeff_at(sig, prefix + i);
  total += potential(*result, s);
  return total;
}

SoundnessReport check_soundness(const Program& prog, const std::string& def_name,
                                const SolvedSig& sig,
                                const std::vector<std::vector<ValuePtr>>& inputs,
                                const EvalLimits& limits) {
  SoundnessReport rep;
  EnvPtr env = program_env(prog);
  for (const auto& args : inputs) {
    long long applications = 0;
    EvalResult res;
    try {
      res = eval_call(def_name, env, args, limits, applications);
    } catch (const GuardExceeded&) {
      ++rep.guarded;
      continue;
    }
    Rational entry = entry_potential(sig, args);
    Rational exit = exit_potential(sig, args, res.value);
    Rational net = res.cost.peak - res.cost.residual;
    if (res.cost.peak > entry) {
      rep.violations.push_back(def_name + ": peak cost " + rational_str(res.cost.peak) +
                               " exceeds entry potential " + rational_str(entry) + " on (" +
                               args_str(args) + ")");
    }
    if (net > entry - exit) {
      rep.violations.push_back(def_name + ": net cost " + rational_str(net) +
                               " exceeds potential drop " + rational_str(entry - exit) +
                               " on (" + args_str(args) + ")");
    }
    ++rep.checked;
  }
  return rep;
}

}  // namespace treebound
