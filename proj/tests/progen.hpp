#pragma once

#include <cstdint>

#include "treebound/ast.hpp"

namespace treebound::progen {

// Deterministic random first-order program over int trees: one to three
// unary definitions, later ones free to call earlier ones. Recursive calls
// only ever take a binder of the definition's top-level match, so every
// generated program terminates on every input. with_ticks controls whether
// bodies contain tick expressions; tick-free programs are valid subjects
// for the stack cost model.
Program random_program(std::uint64_t seed, bool with_ticks);

}  // namespace treebound::progen
