#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "progen.hpp"
#include "treebound/anf.hpp"
#include "treebound/ast.hpp"
#include "treebound/diag.hpp"
#include "treebound/instrument.hpp"
#include "treebound/parser.hpp"

using namespace treebound;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string corpus(const std::string& name) { return std::string(TB_CORPUS_DIR) + "/" + name; }

Program parse_corpus(const std::string& name) { return parse(name, read_file(corpus(name))); }

Program prog_clone(const Program& p) {
  Program out;
  out.filename = p.filename;
  for (const auto& d : p.defs) {
    Def c;
    c.name = d.name;
    c.is_rec = d.is_rec;
    c.span = d.span;
    c.fn = clone(*d.fn);
    out.defs.push_back(std::move(c));
  }
  return out;
}

bool prog_equal(const Program& a, const Program& b) {
  if (a.defs.size() != b.defs.size()) return false;
  for (std::size_t i = 0; i < a.defs.size(); ++i) {
    if (a.defs[i].name != b.defs[i].name) return false;
    if (a.defs[i].is_rec != b.defs[i].is_rec) return false;
    if (!expr_equal(*a.defs[i].fn, *b.defs[i].fn)) return false;
  }
  return true;
}

int count_kind(const Expr& e, ExprKind k) {
  int n = e.kind == k ? 1 : 0;
  if (e.k0) n += count_kind(*e.k0, k);
  if (e.k1) n += count_kind(*e.k1, k);
  if (e.k2) n += count_kind(*e.k2, k);
  return n;
}

const Expr* find_kind(const Expr& e, ExprKind k) {
  if (e.kind == k) return &e;
  for (const Expr* c : {e.k0.get(), e.k1.get(), e.k2.get()})
    if (c)
      if (const Expr* hit = find_kind(*c, k)) return hit;
  return nullptr;
}

Rational tick_sum(const Expr& e) {
  Rational n = e.kind == ExprKind::Tick ? e.amount : Rational(0);
  if (e.k0) n += tick_sum(*e.k0);
  if (e.k1) n += tick_sum(*e.k1);
  if (e.k2) n += tick_sum(*e.k2);
  return n;
}

}  // namespace

TEST_CASE("parser: definition shapes") {
  Program p = parse_corpus("size.src");
  REQUIRE(p.defs.size() == 1);
  const Def& d = p.defs[0];
  CHECK(d.name == "size");
  CHECK(d.is_rec);
  CHECK(def_params(d) == std::vector<std::string>{"t"});
  REQUIRE(d.fn->kind == ExprKind::Fun);
  CHECK(d.fn->name == "size");  // self-name for recursion
  CHECK(d.fn->name2 == "t");
  CHECK(d.fn->k0->kind == ExprKind::Match);
}

TEST_CASE("parser: curried multi-parameter definitions") {
  Program p = parse_corpus("bin.src");
  REQUIRE(p.defs.size() == 1);
  CHECK(def_params(p.defs[0]) == std::vector<std::string>{"x", "t"});
  const Expr& outer = *p.defs[0].fn;
  REQUIRE(outer.kind == ExprKind::Fun);
  CHECK(outer.name == "bin");
  REQUIRE(outer.k0->kind == ExprKind::Fun);
  CHECK(outer.k0->name.empty());  // only the outermost layer carries the self-name
  CHECK(outer.k0->name2 == "t");
}

TEST_CASE("parser: literals, ticks, and operators") {
  Program p = parse("x", "let f t = if 1 < 2 then tick{1.5} else tick{-3}");
  const Expr& body = *p.defs[0].fn->k0;
  REQUIRE(body.kind == ExprKind::If);
  CHECK(body.k0->kind == ExprKind::Prim);
  CHECK(body.k0->prim == PrimOp::Lt);
  CHECK(body.k1->amount == Rational(3) / 2);
  CHECK(body.k2->amount == Rational(-3));
}

TEST_CASE("parser: unit binders and wildcards") {
  Program p = parse("x", "let f t = let () = t in let _ = t in 0");
  const Expr& l1 = *p.defs[0].fn->k0;
  REQUIRE(l1.kind == ExprKind::Let);
  CHECK(l1.name == "_");
  CHECK(l1.k1->name == "_");
}

TEST_CASE("parser: rejects malformed programs with positions") {
  CHECK_THROWS_AS(parse("x", "let f = 3"), SourceError);        // no parameters
  CHECK_THROWS_AS(parse("x", "let f t = (1 + 2"), SourceError); // unbalanced
  CHECK_THROWS_AS(parse("x", "let f t = match t with Leaf -> 1"), SourceError);
  CHECK_THROWS_AS(parse("x", "let match t = 3"), SourceError);  // keyword binder
  CHECK_THROWS_AS(parse("x", "let f t = tick{x}"), SourceError);
  CHECK_THROWS_AS(parse("x", "let f t = 1.5"), SourceError);    // decimals only in tick
  try {
    parse("x", "let f t =\n  t +");
    FAIL("expected a parse error");
  } catch (const SourceError& e) {
    CHECK(e.span().line == 2);
  }
}

TEST_CASE("parser: corpus round-trips through to_source") {
  for (const char* name : {"bin0.src", "size.src", "candy.src", "badbuy.src", "twice.src",
                           "set.src", "bin.src", "reject_hof.src"}) {
    CAPTURE(name);
    Program p1 = parse_corpus(name);
    std::string s1 = to_source(p1);
    Program p2 = parse("rt", s1);
    CHECK(prog_equal(p1, p2));
    CHECK(to_source(p2) == s1);
  }
}

TEST_CASE("anf: normal form and idempotence on the corpus") {
  for (const char* name : {"bin0.src", "size.src", "candy.src", "twice.src", "set.src",
                           "bin.src"}) {
    CAPTURE(name);
    Program p = to_let_normal(parse_corpus(name));
    CHECK(is_let_normal(p));
    Program again = to_let_normal(prog_clone(p));
    CHECK(prog_equal(p, again));
  }
}

TEST_CASE("anf: operands become variables, order pinned by lets") {
  Program p = to_let_normal(parse("x", "let f t = size (Node(1, t, t)) + 2\nlet rec size t = 0"));
  const Expr* e = p.defs[0].fn->k0.get();
  // Node payload, the shared subtree alias, the construction, and the call
  // each get their own binding before the primitive.
  int lets = count_kind(*e, ExprKind::Let);
  CHECK(lets >= 4);
  CHECK(is_let_normal(*e));
  // the two identical operands of Node were split into distinct variables
  const Expr* node = find_kind(*e, ExprKind::MakeNode);
  REQUIRE(node != nullptr);
  CHECK(node->k1->kind == ExprKind::Var);
  CHECK(node->k2->kind == ExprKind::Var);
  CHECK(node->k1->name != node->k2->name);
}

TEST_CASE("anf: binders are unique after normalization") {
  Program p = to_let_normal(
      parse("x", "let f t = let a = 1 in let a = a + 1 in let a = a + a in a"));
  std::vector<std::string> binders;
  const Expr* e = p.defs[0].fn->k0.get();
  while (e->kind == ExprKind::Let) {
    binders.push_back(e->name);
    e = e->k1.get();
  }
  for (std::size_t i = 0; i < binders.size(); ++i)
    for (std::size_t j = i + 1; j < binders.size(); ++j) CHECK(binders[i] != binders[j]);
}

TEST_CASE("instrument: one push/pop pair per application") {
  Program p = parse_corpus("twice.src");
  int apps = 0;
  for (const auto& d : p.defs) apps += count_kind(*d.fn, ExprKind::App);
  Program q = instrument_stack_cost(prog_clone(p));
  int ticks = 0, qapps = 0;
  Rational sum;
  for (const auto& d : q.defs) {
    ticks += count_kind(*d.fn, ExprKind::Tick);
    qapps += count_kind(*d.fn, ExprKind::App);
    sum += tick_sum(*d.fn);
  }
  CHECK(qapps == apps);
  CHECK(ticks == 2 * apps);
  CHECK(sum == 0);
}

TEST_CASE("instrument: refuses programs that already tick") {
  Program p = parse_corpus("bin0.src");
  CHECK_THROWS_AS(instrument_stack_cost(std::move(p)), SourceError);
}

TEST_CASE("generated programs round-trip and normalize") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    CAPTURE(seed);
    Program p = progen::random_program(seed, seed % 2 == 0);
    std::string s = to_source(p);
    Program back = parse("gen", s);
    REQUIRE(prog_equal(p, back));
    Program n = to_let_normal(std::move(back));
    REQUIRE(is_let_normal(n));
    Program n2 = to_let_normal(prog_clone(n));
    REQUIRE(prog_equal(n, n2));
  }
}
