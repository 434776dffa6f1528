#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "treebound/constraint.hpp"
#include "treebound/location.hpp"
#include "treebound/value.hpp"

namespace treebound {

// ---------------------------------------------------------------------------
// Concrete side: rational coefficients against runtime values. Used by the
// soundness checker and the property tests.
// ---------------------------------------------------------------------------

// Coefficients over location indices of one type.
using Slice = std::map<Index, Rational>;

// The base potential of a value at one location index:
//   φ_*(v) = 1 for every value;
//   on a node, φ_d = 1 + max of the subtrees' φ_d (depth),
//   φ_{e·i} = φ_i(payload) + φ_{e·i}(left) + φ_{e·i}(right);
//   everything else (leaves, basic values, closures at structural indices)
//   carries none.
Rational phi(const Value& v, const Index& i);

// Σ_i slice[i] · φ_i(v)
Rational potential(const Value& v, const Slice& slice);

// Worldview-indexed concrete annotation context. The potential of a context
// is the maximum over worldviews of ambient + Σ variables.
struct ConcreteContext {
  std::vector<Rational> ambient;  // one entry per worldview
  std::vector<std::pair<std::string, std::vector<Slice>>> vars;  // name -> per-worldview slices

  int worldviews() const { return static_cast<int>(ambient.size()); }
};

Rational context_potential(const ConcreteContext& ctx,
                           const std::map<std::string, ValuePtr>& values);

// ---------------------------------------------------------------------------
// Symbolic side: annotation matrices over LP coefficients, consumed by
// constraint generation.
// ---------------------------------------------------------------------------

// Worldview-invariant coefficient vector of an arrow-typed binding, indexed
// by the arrow's location indices. The '*' entries that address a closure's
// own unit slot (the bare '*' and every all-b-prefixed '*') are constant 0
// by convention.
struct FnSig {
  std::string name;
  TypePtr type;  // arrow
  std::map<Index, Coeff> coeffs;

  const Coeff& at(const Index& i) const;
};
using FnSigPtr = std::shared_ptr<FnSig>;

// Whether an index addresses a unit slot fixed to zero in signatures.
bool sig_index_is_zero(const Index& i);

// One typed variable inside an annotation matrix. Context variables carry no
// '*' entry (fixed to zero by convention), so `indices` excludes it; basic
// variables have no indices at all. Arrow variables are represented by their
// shared signature instead of per-row entries.
struct VarSlot {
  std::string name;
  TypePtr type;
  std::vector<Index> indices;                // structural indices of type
  std::vector<std::map<Index, Coeff>> rows;  // per worldview; dead rows alias a live one
  FnSigPtr fn;

  bool is_fn() const { return fn != nullptr; }
  const Coeff& at(int row, const Index& i) const;
};

// The annotation matrix of one typing judgment: per worldview an ambient
// coefficient plus a slice per variable, and optionally a slice for the
// expression's own result.
struct AnnotationContext {
  int worldviews = 1;
  std::vector<Coeff> ambient;
  std::vector<VarSlot> vars;
  std::optional<VarSlot> result;

  const VarSlot& slot(const std::string& name) const;
  VarSlot& slot(const std::string& name);
  const VarSlot* find(const std::string& name) const;
  bool has(const std::string& name) const { return find(name) != nullptr; }

  // π projections from the specification of contexts: a single variable's
  // slice, and the context without a set of variables.
  const VarSlot& project(const std::string& name) const { return slot(name); }
  AnnotationContext project_without(const std::vector<std::string>& names) const;
};

// Structural indices of a type as used for context variables
// (location_indices minus the '*' entry).
std::vector<Index> context_indices(const TypePtr& t);

// Emits pointwise subtype constraints lhs(i) >= rhs(i) for two slices over
// the same index set (every tree/basic location is covariant).
void slice_subtype_constraints(ConstraintSystem& sys, const std::map<Index, Coeff>& lhs,
                               const std::map<Index, Coeff>& rhs, const std::string& rule,
                               Span span);

}  // namespace treebound
