#include "treebound/inputs.hpp"

#include <random>

#include "treebound/diag.hpp"

namespace treebound {

namespace {

class InputGen {
 public:
  explicit InputGen(std::uint64_t seed) : rng_(seed) {}

  ValuePtr value(const TypePtr& t, int serial) {
    switch (t->kind) {
      case TypeKind::Unit: return Value::unit();
      case TypeKind::Bool: return Value::boolean(pick(0, 1) == 1);
      case TypeKind::Int: return Value::integer(pick(-5, 20));
      case TypeKind::Tree: return tree(t->a, serial);
      default: internal_fail("cannot generate inputs of type " + type_str(t));
    }
  }

 private:
  std::mt19937_64 rng_;

  int pick(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng_);
  }

  ValuePtr tree(const TypePtr& elem, int serial) {
    switch (serial % 7) {
      case 0: return Value::leaf();
      case 1: return node(elem, Value::leaf(), Value::leaf());
      case 2: return complete(elem, pick(1, 4));
      case 3: return spine(elem, pick(1, 12), true);
      case 4: return spine(elem, pick(1, 12), false);
      case 5: return zigzag(elem, pick(1, 14));
      default: return random_split(elem, pick(0, 40), 0);
    }
  }

  ValuePtr node(const TypePtr& elem, ValuePtr l, ValuePtr r) {
    return Value::node(value(elem, pick(0, 6)), std::move(l), std::move(r));
  }

  ValuePtr complete(const TypePtr& elem, int depth) {
    if (depth == 0) return Value::leaf();
    return node(elem, complete(elem, depth - 1), complete(elem, depth - 1));
  }

  ValuePtr spine(const TypePtr& elem, int len, bool left) {
    ValuePtr t = Value::leaf();
    for (int k = 0; k < len; ++k) {
      t = left ? node(elem, t, Value::leaf()) : node(elem, Value::leaf(), t);
    }
    return t;
  }

  ValuePtr zigzag(const TypePtr& elem, int len) {
    ValuePtr t = Value::leaf();
    for (int k = 0; k < len; ++k) {
      t = (k % 2 == 0) ? node(elem, t, Value::leaf()) : node(elem, Value::leaf(), t);
    }
    return t;
  }

  ValuePtr random_split(const TypePtr& elem, int nodes, int depth) {
    if (nodes == 0 || depth > 28) return Value::leaf();
    int left = pick(0, nodes - 1);
    return node(elem, random_split(elem, left, depth + 1),
                random_split(elem, nodes - 1 - left, depth + 1));
  }
};

}  // namespace

std::vector<ValuePtr> generate_inputs(std::uint64_t seed, const TypePtr& type, int count) {
  InputGen gen(seed);
  std::vector<ValuePtr> out;
  out.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(gen.value(type, k));
  return out;
}

}  // namespace treebound
