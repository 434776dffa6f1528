#pragma once

#include <string>
#include <vector>

#include "treebound/diag.hpp"

namespace treebound {

enum class Tok {
  Ident,
  Number,  // integer or decimal digits, sign handled by the parser
  KwLet,
  KwRec,
  KwIn,
  KwIf,
  KwThen,
  KwElse,
  KwMatch,
  KwWith,
  KwFun,
  KwTrue,
  KwFalse,
  KwTick,
  KwLeaf,
  KwNode,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Arrow,
  Bar,
  Eq,
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Underscore,
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

const char* tok_str(Tok t);

// Whole-input tokenizer; (* ... *) comments nest. Throws SourceError on
// stray characters and unterminated comments.
std::vector<Token> lex(const std::string& filename, const std::string& source);

}  // namespace treebound
