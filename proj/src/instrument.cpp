#include "treebound/instrument.hpp"

#include "treebound/diag.hpp"

namespace treebound {

namespace {

class Instrumenter {
 public:
  explicit Instrumenter(std::string file) : file_(std::move(file)) {}

  ExprPtr walk(ExprPtr e) {
    if (e->kind == ExprKind::Tick)
      throw SourceError(file_, e->span,
                        "cost model 'stack' requires an un-instrumented program; found tick{" +
                            rational_str(e->amount) + "}");
    if (e->k0) e->k0 = walk(std::move(e->k0));
    if (e->k1) e->k1 = walk(std::move(e->k1));
    if (e->k2) e->k2 = walk(std::move(e->k2));
    if (e->kind != ExprKind::App) return e;

    Span s = e->span;
    std::string result = "%frame" + std::to_string(counter_++);
    ExprPtr pop = Expr::let(s, "_", Expr::tick(s, Rational(-1)), Expr::var(s, result));
    ExprPtr call = Expr::let(s, result, std::move(e), std::move(pop));
    return Expr::let(s, "_", Expr::tick(s, Rational(1)), std::move(call));
  }

 private:
  std::string file_;
  int counter_ = 0;
};

}  // namespace

Program instrument_stack_cost(Program p) {
  Instrumenter ins(p.filename);
  for (auto& d : p.defs) d.fn = ins.walk(std::move(d.fn));
  return p;
}

}  // namespace treebound
