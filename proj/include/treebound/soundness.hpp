#pragma once

#include <string>
#include <vector>

#include "treebound/ast.hpp"
#include "treebound/congen.hpp"
#include "treebound/eval.hpp"
#include "treebound/value.hpp"

namespace treebound {

struct SoundnessReport {
  int checked = 0;    // runs that completed and were compared
  int guarded = 0;    // runs cut off by the application guard, not compared
  std::vector<std::string> violations;
};

// Entry potential a solved signature assigns to an argument tuple, and the
// exit potential it promises back (argument leftovers plus the result).
Rational entry_potential(const SolvedSig& sig, const std::vector<ValuePtr>& args);
Rational exit_potential(const SolvedSig& sig, const std::vector<ValuePtr>& args,
                        const ValuePtr& result);

// Runs `def_name` on every input tuple and checks the signature's two
// guarantees exactly: peak cost never exceeds the entry potential, and net
// cost never exceeds entry minus exit potential.
SoundnessReport check_soundness(const Program& prog, const std::string& def_name,
                                const SolvedSig& sig,
                                const std::vector<std::vector<ValuePtr>>& inputs,
                                const EvalLimits& limits = {});

}  // namespace treebound
