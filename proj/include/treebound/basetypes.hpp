#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "treebound/ast.hpp"

namespace treebound {

enum class TypeKind { Unit, Bool, Int, Tree, Arrow, Var };

struct BaseType;
using TypePtr = std::shared_ptr<const BaseType>;

struct BaseType {
  TypeKind kind;
  TypePtr a, b;  // Tree: a = element; Arrow: a = argument, b = result
  int var = -1;

  static TypePtr unit();
  static TypePtr boolean();
  static TypePtr integer();
  static TypePtr tree(TypePtr elem);
  static TypePtr arrow(TypePtr arg, TypePtr res);
};

bool type_equal(const TypePtr& x, const TypePtr& y);
std::string type_str(const TypePtr& t);

struct TypedProgram {
  Program prog;
  // Fully resolved type of every expression node in prog.
  std::map<const Expr*, TypePtr> expr_types;
  // Definition signatures in program order.
  std::vector<std::pair<std::string, TypePtr>> def_types;
  std::vector<std::string> warnings;

  TypePtr type_of(const Expr& e) const;
  TypePtr def_type(const std::string& name) const;
};

// Hindley-Milner unification without generalization (the language is
// monomorphic). Unconstrained leftovers default to unit with a warning.
// Enforces the first-order restriction: no arrow inside a tree element or
// in an argument position. Throws SourceError on type errors; expects a
// let-normal program.
TypedProgram infer_base_types(Program p);

}  // namespace treebound
