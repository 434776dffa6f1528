#include "treebound/annotation.hpp"

#include <algorithm>

#include "treebound/diag.hpp"

namespace treebound {

Rational phi(const Value& v, const Index& i) {
  internal_check(!i.empty(), "empty location index");
  if (i == "*") return Rational(1);
  if (v.kind != ValueKind::Node) return Rational(0);
  if (i[0] == 'd') {
    Rational l = phi(*v.left, i);
    Rational r = phi(*v.right, i);
    return Rational(1) + std::max(l, r);
  }
  if (i[0] == 'e') {
    Index rest = i.substr(1);
    return phi(*v.payload, rest) + phi(*v.left, i) + phi(*v.right, i);
  }
  // Arrow indices (a/b/c) address signature slots, not stored potential.
  return Rational(0);
}

Rational potential(const Value& v, const Slice& slice) {
  Rational total(0);
  for (const auto& [idx, k] : slice) {
    if (k == 0) continue;
    total += k * phi(v, idx);
  }
  return total;
}

Rational context_potential(const ConcreteContext& ctx,
                           const std::map<std::string, ValuePtr>& values) {
  internal_check(ctx.worldviews() >= 1, "context with no worldviews");
  Rational best(0);
  bool first = true;
  for (int w = 0; w < ctx.worldviews(); ++w) {
    Rational row = ctx.ambient[w];
    for (const auto& [name, slices] : ctx.vars) {
      auto it = values.find(name);
      internal_check(it != values.end(), "context variable without a value: " + name);
      row += potential(*it->second, slices[w]);
    }
    if (first || row > best) best = row;
    first = false;
  }
  return best;
}

const Coeff& FnSig::at(const Index& i) const {
  auto it = coeffs.find(i);
  internal_check(it != coeffs.end(), "signature of " + name + " lacks index " + index_str(i));
  return it->second;
}

bool sig_index_is_zero(const Index& i) {
  // The bare '*' and every all-b-prefixed '*' address a closure or result
  // unit slot whose coefficient is redundant with the ambient constants.
  if (i.empty() || i.back() != '*') return false;
  for (size_t k = 0; k + 1 < i.size(); ++k) {
    if (i[k] != 'b') return false;
  }
  return true;
}

const Coeff& VarSlot::at(int row, const Index& i) const {
  internal_check(!is_fn(), "per-row entry requested for arrow variable " + name);
  internal_check(row >= 0 && row < static_cast<int>(rows.size()),
                 "worldview out of range for " + name);
  auto it = rows[row].find(i);
  internal_check(it != rows[row].end(),
                 "slice of " + name + " lacks index " + index_str(i));
  return it->second;
}

const VarSlot& AnnotationContext::slot(const std::string& name) const {
  const VarSlot* s = find(name);
  internal_check(s != nullptr, "free variable not in annotation context: " + name);
  return *s;
}

VarSlot& AnnotationContext::slot(const std::string& name) {
  for (auto& v : vars) {
    if (v.name == name) return v;
  }
  internal_fail("free variable not in annotation context: " + name);
}

const VarSlot* AnnotationContext::find(const std::string& name) const {
  for (const auto& v : vars) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

AnnotationContext AnnotationContext::project_without(const std::vector<std::string>& names) const {
  AnnotationContext out;
  out.worldviews = worldviews;
  out.ambient = ambient;
  out.result = result;
  for (const auto& v : vars) {
    if (std::find(names.begin(), names.end(), v.name) == names.end()) out.vars.push_back(v);
  }
  return out;
}

std::vector<Index> context_indices(const TypePtr& t) {
  std::vector<Index> out;
  for (const Index& i : location_indices(t)) {
    if (i != "*") out.push_back(i);
  }
  return out;
}

void slice_subtype_constraints(ConstraintSystem& sys, const std::map<Index, Coeff>& lhs,
                               const std::map<Index, Coeff>& rhs, const std::string& rule,
                               Span span) {
  internal_check(lhs.size() == rhs.size(), "subtype between unequal index sets");
  for (const auto& [idx, lc] : lhs) {
    auto it = rhs.find(idx);
    internal_check(it != rhs.end(), "subtype between unequal index sets at " + index_str(idx));
    LinExpr e = LinExpr::diff(lc, it->second);
    sys.add(std::move(e), Rel::Ge, rule, span);
  }
}

}  // namespace treebound
