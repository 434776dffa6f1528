#include "treebound/value.hpp"

#include <algorithm>
#include <sstream>

namespace treebound {

EnvPtr env_bind(EnvPtr env, std::string name, ValuePtr v) {
  auto node = std::make_shared<EnvNode>();
  node->parent = std::move(env);
  node->name = std::move(name);
  node->value = std::move(v);
  return node;
}

ValuePtr env_lookup(const EnvPtr& env, const std::string& name) {
  for (const EnvNode* n = env.get(); n; n = n->parent.get())
    if (n->name == name) return n->value;
  return nullptr;
}

namespace {
ValuePtr mk(ValueKind k) {
  auto v = std::make_shared<Value>();
  v->kind = k;
  return std::const_pointer_cast<const Value>(std::shared_ptr<Value>(std::move(v)));
}
}  // namespace

ValuePtr Value::unit() {
  static ValuePtr v = mk(ValueKind::Unit);
  return v;
}

ValuePtr Value::boolean(bool b) {
  auto v = std::make_shared<Value>();
  v->kind = ValueKind::Bool;
  v->b = b;
  return v;
}

ValuePtr Value::integer(long long i) {
  auto v = std::make_shared<Value>();
  v->kind = ValueKind::Int;
  v->i = i;
  return v;
}

ValuePtr Value::leaf() {
  static ValuePtr v = mk(ValueKind::Leaf);
  return v;
}

ValuePtr Value::node(ValuePtr payload, ValuePtr left, ValuePtr right) {
  auto v = std::make_shared<Value>();
  v->kind = ValueKind::Node;
  v->payload = std::move(payload);
  v->left = std::move(left);
  v->right = std::move(right);
  return v;
}

ValuePtr Value::closure(const Expr* fn, EnvPtr env) {
  auto v = std::make_shared<Value>();
  v->kind = ValueKind::Closure;
  v->fn = fn;
  v->env = std::move(env);
  return v;
}

bool value_equal(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ValueKind::Unit:
    case ValueKind::Leaf: return true;
    case ValueKind::Bool: return a.b == b.b;
    case ValueKind::Int: return a.i == b.i;
    case ValueKind::Node:
      return value_equal(*a.payload, *b.payload) && value_equal(*a.left, *b.left) &&
             value_equal(*a.right, *b.right);
    case ValueKind::Closure: return a.fn == b.fn && a.env == b.env;
  }
  return false;
}

std::string value_str(const Value& v) {
  switch (v.kind) {
    case ValueKind::Unit: return "()";
    case ValueKind::Bool: return v.b ? "true" : "false";
    case ValueKind::Int: return std::to_string(v.i);
    case ValueKind::Leaf: return "Leaf";
    case ValueKind::Node: {
      std::ostringstream out;
      out << "Node(" << value_str(*v.payload) << ", " << value_str(*v.left) << ", "
          << value_str(*v.right) << ")";
      return out.str();
    }
    case ValueKind::Closure: return "<fun>";
  }
  return "?";
}

long long tree_height(const Value& v) {
  if (v.kind != ValueKind::Node) return 0;
  return 1 + std::max(tree_height(*v.left), tree_height(*v.right));
}

long long tree_node_count(const Value& v) {
  if (v.kind != ValueKind::Node) return 0;
  return 1 + tree_node_count(*v.left) + tree_node_count(*v.right);
}

}  // namespace treebound
