#pragma once

#include <memory>
#include <string>

#include "treebound/ast.hpp"

namespace treebound {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

// Persistent environment: extension never mutates the parent chain, so
// closures capture by pointer for free.
struct EnvNode {
  std::shared_ptr<const EnvNode> parent;
  std::string name;
  ValuePtr value;
};
using EnvPtr = std::shared_ptr<const EnvNode>;

EnvPtr env_bind(EnvPtr env, std::string name, ValuePtr v);
ValuePtr env_lookup(const EnvPtr& env, const std::string& name);  // null when absent

enum class ValueKind { Unit, Bool, Int, Leaf, Node, Closure };

struct Value {
  ValueKind kind;
  bool b = false;
  long long i = 0;
  ValuePtr payload, left, right;  // Node
  const Expr* fn = nullptr;       // Closure: the Fun node (owned by the program AST)
  EnvPtr env;                     // Closure: captured environment

  static ValuePtr unit();
  static ValuePtr boolean(bool b);
  static ValuePtr integer(long long i);
  static ValuePtr leaf();
  static ValuePtr node(ValuePtr payload, ValuePtr left, ValuePtr right);
  static ValuePtr closure(const Expr* fn, EnvPtr env);
};

bool value_equal(const Value& a, const Value& b);  // closures compare by identity
std::string value_str(const Value& v);

// Tree metrics used as independent oracles for the potential function:
// height counts nodes on the longest root-to-leaf path.
long long tree_height(const Value& v);
long long tree_node_count(const Value& v);

}  // namespace treebound
