#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace aeromix {

// Maps (field, node, component) triples to global dof indices.  Fields are
// laid out in contiguous blocks in registration order; within a field, dofs
// are node-major: index = offset + node*components + component.
class DofMap {
 public:
  explicit DofMap(int n_nodes) : n_nodes_(n_nodes) {
    if (n_nodes < 1)
      throw std::invalid_argument("DofMap: need at least one node");
  }

  int add_field(std::string name, int components) {
    if (components < 1)
      throw std::invalid_argument("DofMap: field '" + name +
                                  "' needs at least one component");
    fields_.push_back({std::move(name), components, total_});
    total_ += n_nodes_ * components;
    return static_cast<int>(fields_.size()) - 1;
  }

  int index(int field, int node, int component = 0) const {
    const Field& f = at(field);
    if (node < 0 || node >= n_nodes_)
      throw std::out_of_range("DofMap: node " + std::to_string(node) +
                              " out of range");
    if (component < 0 || component >= f.components)
      throw std::out_of_range("DofMap: component " + std::to_string(component) +
                              " out of range for field '" + f.name + "'");
    return f.offset + node * f.components + component;
  }

  int size() const { return total_; }
  int n_nodes() const { return n_nodes_; }
  int n_fields() const { return static_cast<int>(fields_.size()); }
  int components(int field) const { return at(field).components; }
  int offset(int field) const { return at(field).offset; }
  const std::string& name(int field) const { return at(field).name; }

 private:
  struct Field {
    std::string name;
    int components;
    int offset;
  };

  const Field& at(int field) const {
    if (field < 0 || field >= n_fields())
      throw std::out_of_range("DofMap: field id " + std::to_string(field) +
                              " out of range");
    return fields_[static_cast<std::size_t>(field)];
  }

  int n_nodes_;
  int total_ = 0;
  std::vector<Field> fields_;
};

}  // namespace aeromix
