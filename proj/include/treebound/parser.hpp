#pragma once

#include "treebound/ast.hpp"

namespace treebound {

// Parses a whole source file into top-level definitions. Multi-parameter
// definitions are curried into nested Fun nodes at parse time; `let rec`
// names the outermost Fun for self-reference. Throws SourceError.
Program parse(const std::string& filename, const std::string& source);

}  // namespace treebound
