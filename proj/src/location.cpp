#include "treebound/location.hpp"

#include "treebound/diag.hpp"

namespace treebound {

std::vector<Index> location_indices(const TypePtr& t) {
  internal_check(t != nullptr, "location_indices on null type");
  switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::Bool:
    case TypeKind::Int: return {"*"};
    case TypeKind::Tree: {
      std::vector<Index> out = {"*", "d"};
      for (const Index& i : location_indices(t->a)) out.push_back("e" + i);
      return out;
    }
    case TypeKind::Arrow: {
      std::vector<Index> out = {"*"};
      for (const Index& i : location_indices(t->a)) out.push_back("a" + i);
      for (const Index& i : location_indices(t->a)) out.push_back("c" + i);
      for (const Index& i : location_indices(t->b)) out.push_back("b" + i);
      return out;
    }
    case TypeKind::Var: internal_fail("location_indices on unresolved type variable");
  }
  internal_fail("unreachable type kind");
}

std::string index_str(const Index& i) {
  std::string out;
  for (std::size_t k = 0; k < i.size(); ++k) {
    if (k) out += "\xc2\xb7";  // '·'
    out += i[k];
  }
  return out;
}

}  // namespace treebound
