#include "treebound/constraint.hpp"

#include <ostream>

namespace treebound {

const char* category_str(Category c) {
  switch (c) {
    case Category::VarIdentity: return "variable identities";
    case Category::ConstOffset: return "constant offsets";
    case Category::LinearEq: return "general equalities";
    case Category::Inequality: return "inequalities";
  }
  return "?";
}

VarId ConstraintSystem::new_var(std::string name) {
  names_.push_back(std::move(name));
  return static_cast<VarId>(names_.size() - 1);
}

Category ConstraintSystem::classify(const LinExpr& e, Rel rel) {
  if (rel != Rel::Eq) return Category::Inequality;
  if (e.terms.size() == 2) {
    auto it = e.terms.begin();
    const Rational& c0 = it->second;
    const Rational& c1 = std::next(it)->second;
    bool unit_pair = (c0 == 1 && c1 == -1) || (c0 == -1 && c1 == 1);
    if (unit_pair) return e.constant == 0 ? Category::VarIdentity : Category::ConstOffset;
  } else if (e.terms.size() == 1) {
    const Rational& c0 = e.terms.begin()->second;
    if (c0 == 1 || c0 == -1) return Category::ConstOffset;
  }
  return Category::LinearEq;
}

std::size_t ConstraintSystem::add(LinExpr expr, Rel rel, std::string rule, Span span) {
  // Constant-only rows are decided here; recording them would only bloat
  // the solver input. A false one is still kept so the solver reports it.
  if (expr.terms.empty()) {
    bool ok = rel == Rel::Eq   ? expr.constant == 0
              : rel == Rel::Ge ? expr.constant >= 0
                               : expr.constant <= 0;
    if (ok) return constraints_.size();
  }
  Category cat = classify(expr, rel);
  constraints_.push_back(Constraint{std::move(expr), rel, cat, std::move(rule), span});
  return constraints_.size() - 1;
}

void ConstraintSystem::eq(const Coeff& a, const Coeff& b, const std::string& rule, Span span) {
  if (coeff_equal(a, b)) return;
  add(LinExpr::diff(a, b), Rel::Eq, rule, span);
}

void ConstraintSystem::ensure_nonneg(const Coeff& c, const std::string& rule, Span span) {
  if (!c.is_var()) {
    internal_check(c.k >= 0, "constant annotation " + rational_str(c.k) +
                                 " required non-negative by " + rule);
    return;
  }
  if (!nonneg_emitted_.insert(c.var).second) return;
  LinExpr e;
  e.add(c.var, Rational(1));
  add(std::move(e), Rel::Ge, rule, span);
}

std::map<Category, std::size_t> ConstraintSystem::category_counts() const {
  std::map<Category, std::size_t> counts{{Category::VarIdentity, 0},
                                         {Category::ConstOffset, 0},
                                         {Category::LinearEq, 0},
                                         {Category::Inequality, 0}};
  for (const auto& c : constraints_) ++counts[c.cat];
  return counts;
}

void ConstraintSystem::dump_lp(std::ostream& out, const std::string& label) const {
  out << "\\ " << label << "\n";
  out << "Minimize\n obj:";
  bool first = true;
  for (const auto& [v, w] : objective_) {
    if (w == 0) continue;
    out << (first ? " " : w > 0 ? " + " : " - ");
    if (!first && w < 0)
      out << rational_str(-w);
    else
      out << rational_str(w);
    out << ' ' << var_name(v);
    first = false;
  }
  if (first) out << " 0";
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const Constraint& c = constraints_[i];
    out << " c" << i << " (" << c.rule << " @" << c.span.line << ":" << c.span.col << "):";
    for (auto it = c.expr.terms.begin(); it != c.expr.terms.end(); ++it) {
      const Rational& w = it->second;
      bool lead = it == c.expr.terms.begin();
      out << (lead ? " " : w > 0 ? " + " : " - ");
      Rational mag = (!lead && w < 0) ? Rational(-w) : w;
      if (mag != 1) out << rational_str(mag) << ' ';
      out << var_name(it->first);
    }
    const char* rel = c.rel == Rel::Eq ? "=" : c.rel == Rel::Ge ? ">=" : "<=";
    out << ' ' << rel << ' ' << rational_str(-c.expr.constant) << "\n";
  }
  out << "Bounds\n";
  for (int v = 0; v < var_count(); ++v) out << ' ' << var_name(VarId(v)) << " free\n";
  out << "End\n";
}

}  // namespace treebound
