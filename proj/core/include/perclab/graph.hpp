#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perclab/vertex.hpp"

namespace perclab {

enum class SymmetryKind { transitive, quasi_transitive, none_declared };

// Declared (not inferred) automorphism metadata. `orbit_reps` lists one
// representative per declared orbit; `cycle_bound` is an upper bound K on the
// shortest cycle through any vertex when one is known.
struct SymmetryDecl {
  SymmetryKind kind = SymmetryKind::none_declared;
  std::vector<VertexRef> orbit_reps;
  std::optional<int> cycle_bound;
};

std::string to_string(SymmetryKind kind);

// A rooted, locally finite, simple graph presented lazily by a neighbor
// generator. Implementations are immutable and safe to share across threads.
class GraphModel {
 public:
  virtual ~GraphModel() = default;

  virtual std::string name() const = 0;
  virtual VertexRef root() const = 0;

  // Appends the neighbors of `v` to `out` in a fixed, deterministic order.
  virtual void neighbors(const VertexRef& v, std::vector<VertexRef>& out) const = 0;

  virtual int degree_bound() const = 0;
  // True when every vertex has exactly degree_bound() neighbors.
  virtual bool is_regular() const = 0;
  virtual SymmetryDecl symmetry() const = 0;

  // Closed-form graph distance to root() when the family has one.
  virtual std::optional<int> distance_from_root(const VertexRef& v) const;

  // Declared shape class of the subtree of descendants of `v`, for tree
  // families with finitely many shapes: equal classes promise isomorphic
  // descendant subtrees. Lets tree recursions run per class instead of per
  // vertex. Like SymmetryDecl this is metadata, checked only on finite depths.
  virtual std::optional<int> subtree_class(const VertexRef& v) const;

  // Whether `v` is a well-formed vertex encoding for this family.
  virtual bool contains(const VertexRef& v) const = 0;

  std::vector<VertexRef> neighbors(const VertexRef& v) const {
    std::vector<VertexRef> out;
    neighbors(v, out);
    return out;
  }
};

using GraphPtr = std::shared_ptr<const GraphModel>;

// Instance zoo.
GraphPtr regular_tree(int d);
GraphPtr fig1_tree(int d);
GraphPtr fig1_graph(int d);
GraphPtr square_lattice();
GraphPtr hexagonal_lattice();
GraphPtr ladder();
GraphPtr triangle_cactus();

// Structured-text graph selection, e.g. "family=fig1_graph, d=3" or
// "family=cover, base=hexagonal_lattice". Keys: family, d, base, base_d.
struct GraphSpec {
  std::string family;
  std::map<std::string, std::string> params;

  static GraphSpec parse(std::string_view text);
  std::string to_string() const;
};

GraphPtr make_graph(const GraphSpec& spec);
GraphPtr make_graph(std::string_view spec_text);
std::vector<std::string> family_names();

}  // namespace perclab
