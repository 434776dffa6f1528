#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "treebound/diag.hpp"
#include "treebound/rational.hpp"

namespace treebound {

using VarId = int;

// One annotation-matrix entry: either a solver variable or an already-known
// rational (solved callee signatures, minted zeros).
struct Coeff {
  VarId var = -1;
  Rational k;

  bool is_var() const { return var >= 0; }
  static Coeff of(VarId v) {
    Coeff c;
    c.var = v;
    return c;
  }
  static Coeff constant(Rational r) {
    Coeff c;
    c.k = std::move(r);
    return c;
  }
  static Coeff zero() { return constant(Rational(0)); }
};

inline bool coeff_equal(const Coeff& a, const Coeff& b) {
  return a.is_var() ? b.is_var() && a.var == b.var : !b.is_var() && a.k == b.k;
}

// Sparse linear expression Σ coeff·var + constant.
struct LinExpr {
  std::map<VarId, Rational> terms;
  Rational constant;

  LinExpr& add(VarId v, const Rational& c) {
    auto [it, fresh] = terms.emplace(v, c);
    if (!fresh && (it->second += c) == 0) terms.erase(it);
    return *this;
  }
  LinExpr& add(const Coeff& c, const Rational& mult) {
    if (c.is_var())
      add(c.var, mult);
    else
      constant += c.k * mult;
    return *this;
  }
  LinExpr& add_const(const Rational& c) {
    constant += c;
    return *this;
  }
  static LinExpr diff(const Coeff& a, const Coeff& b) {
    LinExpr e;
    e.add(a, Rational(1));
    e.add(b, Rational(-1));
    return e;
  }
};

enum class Rel { Eq, Ge, Le };  // expr REL 0

// Reporting buckets: plain variable identities and constant offsets are
// eliminated by presolve; the rest reach the simplex.
enum class Category { VarIdentity, ConstOffset, LinearEq, Inequality };

struct Constraint {
  LinExpr expr;
  Rel rel;
  Category cat;
  std::string rule;  // emitting rule tag, e.g. "T-Let drop"
  Span span;
};

class ConstraintSystem {
 public:
  VarId new_var(std::string name);
  const std::string& var_name(VarId v) const { return names_[static_cast<std::size_t>(v)]; }
  int var_count() const { return static_cast<int>(names_.size()); }

  std::size_t add(LinExpr expr, Rel rel, std::string rule, Span span);
  void add_eq(LinExpr expr, std::string rule, Span span) { add(std::move(expr), Rel::Eq, std::move(rule), span); }
  void add_ge(LinExpr expr, std::string rule, Span span) { add(std::move(expr), Rel::Ge, std::move(rule), span); }

  // a = b
  void eq(const Coeff& a, const Coeff& b, const std::string& rule, Span span);
  // c >= 0, deduplicated per variable; constant entries are checked
  // immediately (a negative constant here is an analyzer bug).
  void ensure_nonneg(const Coeff& c, const std::string& rule, Span span);

  void set_objective(VarId v, const Rational& weight) { objective_[v] += weight; }
  const std::map<VarId, Rational>& objective() const { return objective_; }

  const std::vector<Constraint>& constraints() const { return constraints_; }
  std::map<Category, std::size_t> category_counts() const;

  void dump_lp(std::ostream& out, const std::string& label) const;

 private:
  static Category classify(const LinExpr& e, Rel rel);

  std::vector<std::string> names_;
  std::vector<Constraint> constraints_;
  std::map<VarId, Rational> objective_;
  std::set<VarId> nonneg_emitted_;
};

const char* category_str(Category c);

}  // namespace treebound
