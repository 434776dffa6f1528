#include "treebound/eval.hpp"

#include <algorithm>

#include "treebound/diag.hpp"

namespace treebound {

namespace {

Rational clamp0(Rational x) { return x < 0 ? Rational(0) : x; }

std::string pos_str(Span s) {
  return "line " + std::to_string(s.line) + ", column " + std::to_string(s.col);
}

}  // namespace

CostPair cost_tick(const Rational& r) {
  CostPair c;
  c.peak = clamp0(r);
  c.residual = clamp0(-r);
  return c;
}

CostPair cost_seq(const CostPair& a, const CostPair& b) {
  CostPair c;
  c.peak = a.peak + clamp0(b.peak - a.residual);
  c.residual = b.residual + clamp0(a.residual - b.peak);
  return c;
}

namespace {

ValuePtr lookup(const EnvPtr& env, const std::string& name, Span span) {
  ValuePtr v = env_lookup(env, name);
  if (!v) internal_fail("unbound variable at " + pos_str(span) + ": " + name);
  return v;
}

ValuePtr apply_prim(const Expr& e, const ValuePtr& a, const ValuePtr& b) {
  internal_check(a->kind == ValueKind::Int && b->kind == ValueKind::Int,
                 "primitive applied to non-integers at " + pos_str(e.span));
  switch (e.prim) {
    case PrimOp::Eq: return Value::boolean(a->i == b->i);
    case PrimOp::Lt: return Value::boolean(a->i < b->i);
    case PrimOp::Le: return Value::boolean(a->i <= b->i);
    case PrimOp::Gt: return Value::boolean(a->i > b->i);
    case PrimOp::Ge: return Value::boolean(a->i >= b->i);
    case PrimOp::Add: return Value::integer(a->i + b->i);
    case PrimOp::Sub: return Value::integer(a->i - b->i);
  }
  internal_fail("unknown primitive");
}

thread_local long long live_frames = 0;

struct FrameGuard {
  ~FrameGuard() { --live_frames; }
};

EvalResult apply_closure(const ValuePtr& fn, const ValuePtr& arg, const EvalLimits& limits,
                         long long& applications, Span span) {
  internal_check(fn->kind == ValueKind::Closure,
                 "application of a non-function at " + pos_str(span));
  if (++applications > limits.max_applications)
    throw GuardExceeded::applications(limits.max_applications);
  if (live_frames >= limits.max_depth) throw GuardExceeded::depth(limits.max_depth);
  ++live_frames;
  FrameGuard guard;
  const Expr& f = *fn->fn;
  EnvPtr env = fn->env;
  if (!f.name.empty()) env = env_bind(env, f.name, fn);
  env = env_bind(env, f.name2, arg);
  return eval_expr(*f.k0, env, limits, applications);
}

}  // namespace

EvalResult eval_expr(const Expr& e, const EnvPtr& env, const EvalLimits& limits,
                     long long& applications) {
  switch (e.kind) {
    case ExprKind::Var:
      return {lookup(env, e.name, e.span), {}};
    case ExprKind::IntLit:
      return {Value::integer(e.ival), {}};
    case ExprKind::BoolLit:
      return {Value::boolean(e.bval), {}};
    case ExprKind::UnitLit:
      return {Value::unit(), {}};
    case ExprKind::Leaf:
      return {Value::leaf(), {}};
    case ExprKind::MakeNode: {
      EvalResult s = eval_expr(*e.k0, env, limits, applications);
      EvalResult l = eval_expr(*e.k1, env, limits, applications);
      EvalResult r = eval_expr(*e.k2, env, limits, applications);
      return {Value::node(s.value, l.value, r.value),
              cost_seq(s.cost, cost_seq(l.cost, r.cost))};
    }
    case ExprKind::Tick:
      return {Value::unit(), cost_tick(e.amount)};
    case ExprKind::Prim: {
      EvalResult a = eval_expr(*e.k0, env, limits, applications);
      EvalResult b = eval_expr(*e.k1, env, limits, applications);
      return {apply_prim(e, a.value, b.value), cost_seq(a.cost, b.cost)};
    }
    case ExprKind::If: {
      EvalResult cond = eval_expr(*e.k0, env, limits, applications);
      internal_check(cond.value->kind == ValueKind::Bool,
                     "conditional on a non-boolean at " + pos_str(e.span));
      EvalResult arm = eval_expr(cond.value->b ? *e.k1 : *e.k2, env, limits, applications);
      return {arm.value, cost_seq(cond.cost, arm.cost)};
    }
    case ExprKind::Match: {
      EvalResult scrut = eval_expr(*e.k0, env, limits, applications);
      internal_check(scrut.value->kind == ValueKind::Leaf || scrut.value->kind == ValueKind::Node,
                     "match on a non-tree at " + pos_str(e.span));
      EvalResult arm;
      if (scrut.value->kind == ValueKind::Leaf) {
        arm = eval_expr(*e.k1, env, limits, applications);
      } else {
        EnvPtr inner = env_bind(env, e.name, scrut.value->payload);
        inner = env_bind(inner, e.name2, scrut.value->left);
        inner = env_bind(inner, e.name3, scrut.value->right);
        arm = eval_expr(*e.k2, inner, limits, applications);
      }
      return {arm.value, cost_seq(scrut.cost, arm.cost)};
    }
    case ExprKind::Let: {
      EvalResult bound = eval_expr(*e.k0, env, limits, applications);
      EvalResult body =
          eval_expr(*e.k1, env_bind(env, e.name, bound.value), limits, applications);
      return {body.value, cost_seq(bound.cost, body.cost)};
    }
    case ExprKind::Fun: {
      auto v = std::make_shared<Value>();
      v->kind = ValueKind::Closure;
      v->fn = &e;
      v->env = env;
      return {v, {}};
    }
    case ExprKind::App: {
      EvalResult fn = eval_expr(*e.k0, env, limits, applications);
      EvalResult arg = eval_expr(*e.k1, env, limits, applications);
      EvalResult body = apply_closure(fn.value, arg.value, limits, applications, e.span);
      return {body.value, cost_seq(fn.cost, cost_seq(arg.cost, body.cost))};
    }
  }
  internal_fail("unknown expression kind");
}

EnvPtr program_env(const Program& prog) {
  EnvPtr env = nullptr;
  long long applications = 0;
  EvalLimits limits;
  for (const auto& def : prog.defs) {
    EvalResult fn = eval_expr(*def.fn, env, limits, applications);
    env = env_bind(env, def.name, fn.value);
  }
  return env;
}

EvalResult eval_call(const std::string& name, const EnvPtr& env,
                     const std::vector<ValuePtr>& args, const EvalLimits& limits,
                     long long& applications) {
  ValuePtr fn = env_lookup(env, name);
  internal_check(fn != nullptr, "no such definition: " + name);
  internal_check(!args.empty(), "call with no arguments: " + name);
  CostPair total;
  ValuePtr cur = fn;
  for (const ValuePtr& arg : args) {
    EvalResult step = apply_closure(cur, arg, limits, applications, Span{0, 0});
    total = cost_seq(total, step.cost);
    cur = step.value;
  }
  return {cur, total};
}

}  // namespace treebound
