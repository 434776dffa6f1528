#pragma once

#include <string>
#include <vector>

#include "treebound/basetypes.hpp"

namespace treebound {

// A location index addresses one coefficient of a type's potential
// annotation: a path over segments {*, d, e, a, b, c} stored one character
// per segment, always ending in '*' or 'd'.
//   basic types:  *                      (the ambient/constant slot)
//   tree(T):      *, d, e·i for i in I(T)
//   A -> R:       *, a·i and c·i for i in I(A), b·j for j in I(R)
using Index = std::string;

// Deterministic enumeration order: *, d, element slices; for arrows
// *, argument, remainder, result.
std::vector<Index> location_indices(const TypePtr& t);

// "ae*" -> "a·e·*"
std::string index_str(const Index& i);

// The type addressed by following index path i into t (the payload type of
// an e segment, argument/result/remainder side of an arrow).
inline bool index_is_structural(const Index& i) { return i != "*"; }

}  // namespace treebound
