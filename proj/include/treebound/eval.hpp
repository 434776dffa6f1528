#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "treebound/ast.hpp"
#include "treebound/rational.hpp"
#include "treebound/value.hpp"

namespace treebound {

// Resource usage of one evaluation: `peak` is the high-water mark of net
// consumption, `residual` is what is handed back afterwards. Both are
// nonnegative; net consumption is peak - residual.
struct CostPair {
  Rational peak{0};
  Rational residual{0};
};

// tick{r}: consumes r when positive, frees -r when negative.
CostPair cost_tick(const Rational& r);

// Sequential composition: the second computation runs against the residual
// of the first.
CostPair cost_seq(const CostPair& a, const CostPair& b);

// Thrown when an evaluation exceeds a guard; the analysis treats such runs
// as inconclusive rather than as failures.
class GuardExceeded : public std::runtime_error {
 public:
  explicit GuardExceeded(std::string why) : std::runtime_error(std::move(why)) {}

  static GuardExceeded applications(long long limit) {
    return GuardExceeded("evaluation exceeded the guard of " + std::to_string(limit) +
                         " function applications");
  }
  static GuardExceeded depth(long long limit) {
    return GuardExceeded("evaluation exceeded the guard of " + std::to_string(limit) +
                         " nested application frames");
  }
};

// max_depth stays far below the native stack budget of the recursive
// interpreter; legitimate inputs nest two orders of magnitude shallower.
struct EvalLimits {
  long long max_applications = 100000;
  long long max_depth = 1200;
};

struct EvalResult {
  ValuePtr value;
  CostPair cost;
};

// Environment with a closure for every top-level definition, later ones
// seeing earlier ones.
EnvPtr program_env(const Program& prog);

EvalResult eval_expr(const Expr& e, const EnvPtr& env, const EvalLimits& limits,
                     long long& applications);

// Applies the closure bound to `name` in `env` to the arguments in order.
EvalResult eval_call(const std::string& name, const EnvPtr& env,
                     const std::vector<ValuePtr>& args, const EvalLimits& limits,
                     long long& applications);

}  // namespace treebound
