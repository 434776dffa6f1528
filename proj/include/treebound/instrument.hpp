#pragma once

#include "treebound/ast.hpp"

namespace treebound {

// Stack cost model: wraps every application in a push/pop pair,
//   f x  ~~>  let _ = tick{1} in let r = f x in let _ = tick{-1} in r
// so the high-water cost of the instrumented program is the peak number of
// live frames. Runs on the surface program, before let-normalization.
// Refuses programs that already contain tick expressions (mixing the two
// cost models would double-count).
Program instrument_stack_cost(Program p);

}  // namespace treebound
