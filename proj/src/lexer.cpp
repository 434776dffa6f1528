#include "treebound/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace treebound {

const char* tok_str(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::KwLet: return "'let'";
    case Tok::KwRec: return "'rec'";
    case Tok::KwIn: return "'in'";
    case Tok::KwIf: return "'if'";
    case Tok::KwThen: return "'then'";
    case Tok::KwElse: return "'else'";
    case Tok::KwMatch: return "'match'";
    case Tok::KwWith: return "'with'";
    case Tok::KwFun: return "'fun'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwTick: return "'tick'";
    case Tok::KwLeaf: return "'Leaf'";
    case Tok::KwNode: return "'Node'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Arrow: return "'->'";
    case Tok::Bar: return "'|'";
    case Tok::Eq: return "'='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Underscore: return "'_'";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

namespace {
const std::unordered_map<std::string, Tok> kKeywords = {
    {"let", Tok::KwLet},     {"rec", Tok::KwRec},   {"in", Tok::KwIn},
    {"if", Tok::KwIf},       {"then", Tok::KwThen}, {"else", Tok::KwElse},
    {"match", Tok::KwMatch}, {"with", Tok::KwWith}, {"fun", Tok::KwFun},
    {"true", Tok::KwTrue},   {"false", Tok::KwFalse}, {"tick", Tok::KwTick},
    {"Leaf", Tok::KwLeaf},   {"Node", Tok::KwNode},
};

bool ident_start(char c) { return std::islower(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}
}  // namespace

std::vector<Token> lex(const std::string& filename, const std::string& source) {
  std::vector<Token> out;
  uint32_t line = 1, col = 1;
  std::size_t i = 0;
  const std::size_t n = source.size();

  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count; ++k, ++i) {
      if (source[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto push = [&](Tok kind, Span s, std::string text) {
    out.push_back(Token{kind, std::move(text), s});
  };

  while (i < n) {
    char c = source[i];
    Span here{line, col};
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '(' && i + 1 < n && source[i + 1] == '*') {
      int depth = 1;
      advance(2);
      while (i < n && depth > 0) {
        if (source[i] == '(' && i + 1 < n && source[i + 1] == '*') {
          ++depth;
          advance(2);
        } else if (source[i] == '*' && i + 1 < n && source[i + 1] == ')') {
          --depth;
          advance(2);
        } else {
          advance(1);
        }
      }
      if (depth > 0) throw SourceError(filename, here, "unterminated comment");
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string text;
      while (i < n && std::isdigit(static_cast<unsigned char>(source[i]))) {
        text += source[i];
        advance(1);
      }
      if (i + 1 < n && source[i] == '.' && std::isdigit(static_cast<unsigned char>(source[i + 1]))) {
        text += '.';
        advance(1);
        while (i < n && std::isdigit(static_cast<unsigned char>(source[i]))) {
          text += source[i];
          advance(1);
        }
      }
      push(Tok::Number, here, std::move(text));
      continue;
    }
    if (ident_start(c) || std::isupper(static_cast<unsigned char>(c))) {
      std::string text;
      while (i < n && ident_char(source[i])) {
        text += source[i];
        advance(1);
      }
      auto kw = kKeywords.find(text);
      if (kw != kKeywords.end()) {
        push(kw->second, here, std::move(text));
      } else if (text == "_") {
        push(Tok::Underscore, here, std::move(text));
      } else if (std::isupper(static_cast<unsigned char>(text[0]))) {
        throw SourceError(filename, here, "unknown constructor '" + text + "'");
      } else {
        push(Tok::Ident, here, std::move(text));
      }
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, here, "("); advance(1); break;
      case ')': push(Tok::RParen, here, ")"); advance(1); break;
      case '{': push(Tok::LBrace, here, "{"); advance(1); break;
      case '}': push(Tok::RBrace, here, "}"); advance(1); break;
      case ',': push(Tok::Comma, here, ","); advance(1); break;
      case '|': push(Tok::Bar, here, "|"); advance(1); break;
      case '=': push(Tok::Eq, here, "="); advance(1); break;
      case '+': push(Tok::Plus, here, "+"); advance(1); break;
      case '-':
        if (i + 1 < n && source[i + 1] == '>') {
          push(Tok::Arrow, here, "->");
          advance(2);
        } else {
          push(Tok::Minus, here, "-");
          advance(1);
        }
        break;
      case '<':
        if (i + 1 < n && source[i + 1] == '=') {
          push(Tok::Le, here, "<=");
          advance(2);
        } else {
          push(Tok::Lt, here, "<");
          advance(1);
        }
        break;
      case '>':
        if (i + 1 < n && source[i + 1] == '=') {
          push(Tok::Ge, here, ">=");
          advance(2);
        } else {
          push(Tok::Gt, here, ">");
          advance(1);
        }
        break;
      default:
        throw SourceError(filename, here, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back(Token{Tok::Eof, "", Span{line, col}});
  return out;
}

}  // namespace treebound
