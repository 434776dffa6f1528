#pragma once

#include <cstdint>
#include <vector>

#include "treebound/basetypes.hpp"
#include "treebound/value.hpp"

namespace treebound {

// Deterministic stream of values of the given base type. Trees cycle through
// shape families (empty, single, complete, left and right spines, zigzag,
// random splits) so bound checks see both depth and size extremes.
std::vector<ValuePtr> generate_inputs(std::uint64_t seed, const TypePtr& type, int count);

}  // namespace treebound
