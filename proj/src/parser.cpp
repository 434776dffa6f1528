#include "treebound/parser.hpp"

#include "treebound/lexer.hpp"

namespace treebound {

namespace {

class Parser {
 public:
  Parser(std::string filename, const std::string& source)
      : file_(std::move(filename)), toks_(lex(file_, source)) {}

  Program parse_program() {
    Program p;
    p.filename = file_;
    while (!at(Tok::Eof)) {
      p.defs.push_back(parse_def());
    }
    return p;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok t) const { return cur().kind == t; }

  Token eat(Tok t) {
    if (!at(t))
      throw SourceError(file_, cur().span,
                        std::string("expected ") + tok_str(t) + ", found " + tok_str(cur().kind) +
                            (cur().text.empty() ? "" : " '" + cur().text + "'"));
    return toks_[pos_++];
  }

  [[noreturn]] void fail(const std::string& msg) { throw SourceError(file_, cur().span, msg); }

  bool starts_binder() const {
    return at(Tok::Ident) || at(Tok::Underscore) || at(Tok::LParen);
  }

  // ident | _ | () — wildcard and unit patterns both become "_" and are
  // freshly renamed during let-normalization.
  std::string parse_binder() {
    if (at(Tok::Ident)) return eat(Tok::Ident).text;
    if (at(Tok::Underscore)) {
      eat(Tok::Underscore);
      return "_";
    }
    eat(Tok::LParen);
    eat(Tok::RParen);
    return "_";
  }

  Def parse_def() {
    Span s = cur().span;
    eat(Tok::KwLet);
    bool is_rec = false;
    if (at(Tok::KwRec)) {
      eat(Tok::KwRec);
      is_rec = true;
    }
    Token name = eat(Tok::Ident);
    std::vector<std::string> params;
    while (starts_binder()) params.push_back(parse_binder());
    if (params.empty())
      throw SourceError(file_, name.span,
                        "top-level definition '" + name.text + "' needs at least one parameter");
    eat(Tok::Eq);
    ExprPtr body = parse_expr();
    Def d;
    d.name = name.text;
    d.is_rec = is_rec;
    d.span = s;
    d.fn = curry(s, is_rec ? name.text : "", params, std::move(body));
    return d;
  }

  static ExprPtr curry(Span s, const std::string& self, const std::vector<std::string>& params,
                       ExprPtr body) {
    for (std::size_t i = params.size(); i-- > 1;)
      body = Expr::fun(s, "", params[i], std::move(body));
    return Expr::fun(s, self, params[0], std::move(body));
  }

  ExprPtr parse_expr() {
    switch (cur().kind) {
      case Tok::KwLet: return parse_let();
      case Tok::KwFun: return parse_fun();
      case Tok::KwIf: return parse_if();
      case Tok::KwMatch: return parse_match();
      default: return parse_cmp();
    }
  }

  ExprPtr parse_let() {
    Span s = cur().span;
    eat(Tok::KwLet);
    bool is_rec = false;
    if (at(Tok::KwRec)) {
      eat(Tok::KwRec);
      is_rec = true;
    }
    std::string binder = parse_binder();
    std::vector<std::string> params;
    while (starts_binder()) params.push_back(parse_binder());
    eat(Tok::Eq);
    ExprPtr rhs = parse_expr();
    if (!params.empty()) {
      rhs = curry(s, is_rec ? binder : "", params, std::move(rhs));
    } else if (is_rec) {
      fail("'let rec' needs at least one parameter");
    }
    eat(Tok::KwIn);
    ExprPtr body = parse_expr();
    return Expr::let(s, binder, std::move(rhs), std::move(body));
  }

  ExprPtr parse_fun() {
    Span s = cur().span;
    eat(Tok::KwFun);
    std::vector<std::string> params;
    while (starts_binder()) params.push_back(parse_binder());
    if (params.empty()) fail("'fun' needs at least one parameter");
    eat(Tok::Arrow);
    ExprPtr body = parse_expr();
    return curry(s, "", params, std::move(body));
  }

  ExprPtr parse_if() {
    Span s = cur().span;
    eat(Tok::KwIf);
    ExprPtr c = parse_expr();
    eat(Tok::KwThen);
    ExprPtr t = parse_expr();
    eat(Tok::KwElse);
    ExprPtr e = parse_expr();
    return Expr::if_(s, std::move(c), std::move(t), std::move(e));
  }

  ExprPtr parse_match() {
    Span s = cur().span;
    eat(Tok::KwMatch);
    ExprPtr scrut = parse_expr();
    eat(Tok::KwWith);
    if (at(Tok::Bar)) eat(Tok::Bar);

    ExprPtr leaf_arm, node_arm;
    std::string pay, left, right;
    for (int arm = 0; arm < 2; ++arm) {
      if (arm == 1) eat(Tok::Bar);
      if (at(Tok::KwLeaf)) {
        if (leaf_arm) fail("duplicate Leaf arm");
        eat(Tok::KwLeaf);
        eat(Tok::Arrow);
        leaf_arm = parse_expr();
      } else {
        if (node_arm) fail("duplicate Node arm");
        eat(Tok::KwNode);
        eat(Tok::LParen);
        pay = parse_match_binder();
        eat(Tok::Comma);
        left = parse_match_binder();
        eat(Tok::Comma);
        right = parse_match_binder();
        eat(Tok::RParen);
        eat(Tok::Arrow);
        node_arm = parse_expr();
      }
    }
    return Expr::match(s, std::move(scrut), std::move(leaf_arm), std::move(pay), std::move(left),
                       std::move(right), std::move(node_arm));
  }

  std::string parse_match_binder() {
    if (at(Tok::Ident)) return eat(Tok::Ident).text;
    eat(Tok::Underscore);
    return "_";
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_add();
    PrimOp op;
    switch (cur().kind) {
      case Tok::Eq: op = PrimOp::Eq; break;
      case Tok::Lt: op = PrimOp::Lt; break;
      case Tok::Le: op = PrimOp::Le; break;
      case Tok::Gt: op = PrimOp::Gt; break;
      case Tok::Ge: op = PrimOp::Ge; break;
      default: return lhs;
    }
    Span s = cur().span;
    ++pos_;
    ExprPtr rhs = parse_add();
    return Expr::prim_op(s, op, std::move(lhs), std::move(rhs));
  }

  ExprPtr parse_add() {
    ExprPtr lhs = parse_app();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      PrimOp op = at(Tok::Plus) ? PrimOp::Add : PrimOp::Sub;
      Span s = cur().span;
      ++pos_;
      ExprPtr rhs = parse_app();
      lhs = Expr::prim_op(s, op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  bool starts_atom() const {
    switch (cur().kind) {
      case Tok::Ident:
      case Tok::Number:
      case Tok::KwTrue:
      case Tok::KwFalse:
      case Tok::LParen:
      case Tok::KwLeaf:
      case Tok::KwNode:
      case Tok::KwTick: return true;
      default: return false;
    }
  }

  ExprPtr parse_app() {
    ExprPtr e = parse_atom();
    while (starts_atom()) {
      Span s = cur().span;
      ExprPtr arg = parse_atom();
      e = Expr::app(s, std::move(e), std::move(arg));
    }
    return e;
  }

  ExprPtr parse_atom() {
    Span s = cur().span;
    switch (cur().kind) {
      case Tok::Ident: return Expr::var(s, eat(Tok::Ident).text);
      case Tok::Number: {
        Token t = eat(Tok::Number);
        if (t.text.find('.') != std::string::npos)
          throw SourceError(file_, t.span, "decimal literals are only allowed inside tick{...}");
        return Expr::int_lit(s, std::stoll(t.text));
      }
      case Tok::KwTrue: eat(Tok::KwTrue); return Expr::bool_lit(s, true);
      case Tok::KwFalse: eat(Tok::KwFalse); return Expr::bool_lit(s, false);
      case Tok::KwLeaf: eat(Tok::KwLeaf); return Expr::leaf(s);
      case Tok::KwNode: {
        eat(Tok::KwNode);
        eat(Tok::LParen);
        ExprPtr payload = parse_expr();
        eat(Tok::Comma);
        ExprPtr left = parse_expr();
        eat(Tok::Comma);
        ExprPtr right = parse_expr();
        eat(Tok::RParen);
        return Expr::make_node(s, std::move(payload), std::move(left), std::move(right));
      }
      case Tok::KwTick: {
        eat(Tok::KwTick);
        eat(Tok::LBrace);
        bool neg = false;
        if (at(Tok::Minus)) {
          eat(Tok::Minus);
          neg = true;
        }
        Token num = eat(Tok::Number);
        auto r = parse_rational(num.text);
        if (!r) throw SourceError(file_, num.span, "malformed tick amount '" + num.text + "'");
        eat(Tok::RBrace);
        return Expr::tick(s, neg ? Rational(-*r) : *r);
      }
      case Tok::LParen: {
        eat(Tok::LParen);
        if (at(Tok::RParen)) {
          eat(Tok::RParen);
          return Expr::unit_lit(s);
        }
        ExprPtr e = parse_expr();
        eat(Tok::RParen);
        return e;
      }
      default: fail(std::string("expected an expression, found ") + tok_str(cur().kind));
    }
  }

  std::string file_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse(const std::string& filename, const std::string& source) {
  return Parser(filename, source).parse_program();
}

}  // namespace treebound
