#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "perclab/cover.hpp"
#include "perclab/errors.hpp"
#include "perclab/graph.hpp"

namespace perclab {

std::string to_string(SymmetryKind kind) {
  switch (kind) {
    case SymmetryKind::transitive:
      return "transitive";
    case SymmetryKind::quasi_transitive:
      return "quasi_transitive";
    case SymmetryKind::none_declared:
      return "none_declared";
  }
  return "unknown";
}

std::optional<int> GraphModel::distance_from_root(const VertexRef&) const { return std::nullopt; }
std::optional<int> GraphModel::subtree_class(const VertexRef&) const { return std::nullopt; }

namespace {

SymmetryDecl transitive_at(VertexRef root, std::optional<int> cycle_bound) {
  return SymmetryDecl{SymmetryKind::transitive, {std::move(root)}, cycle_bound};
}

// Trees rooted at the empty path; a vertex is the list of child indices taken
// from the root. The parent is always listed first among the neighbors.
class PathTree : public GraphModel {
 public:
  VertexRef root() const override { return {}; }

  std::optional<int> distance_from_root(const VertexRef& v) const override {
    return static_cast<int>(v.size());
  }

  bool contains(const VertexRef& v) const override {
    VertexRef prefix;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 0 || v[i] >= child_count(prefix)) return false;
      prefix = prefix.with_appended(v[i]);
    }
    return true;
  }

  void neighbors(const VertexRef& v, std::vector<VertexRef>& out) const override {
    if (!v.empty()) out.push_back(v.truncated(v.size() - 1));
    const int children = child_count(v);
    for (int c = 0; c < children; ++c) out.push_back(v.with_appended(c));
  }

 protected:
  virtual int child_count(const VertexRef& v) const = 0;
};

class RegularTree final : public PathTree {
 public:
  explicit RegularTree(int d) : d_(d) {}
  std::string name() const override { return "family=regular_tree, d=" + std::to_string(d_); }
  int degree_bound() const override { return d_; }
  bool is_regular() const override { return true; }
  SymmetryDecl symmetry() const override { return transitive_at(root(), std::nullopt); }
  std::optional<int> subtree_class(const VertexRef& v) const override { return v.empty() ? 0 : 1; }

 private:
  int child_count(const VertexRef& v) const override { return v.empty() ? d_ : d_ - 1; }
  int d_;
};

// Root O of degree d; its children X = [0] and Y = [1] have degree d - 1.
class Fig1Tree : public PathTree {
 public:
  explicit Fig1Tree(int d) : d_(d) {}
  std::string name() const override { return "family=fig1_tree, d=" + std::to_string(d_); }
  int degree_bound() const override { return d_; }
  bool is_regular() const override { return false; }
  SymmetryDecl symmetry() const override { return {}; }
  std::optional<int> subtree_class(const VertexRef& v) const override {
    if (v.empty()) return 0;
    return is_deficient(v) ? 1 : 2;
  }

 protected:
  static bool is_deficient(const VertexRef& v) { return v.size() == 1 && v[0] <= 1; }
  int child_count(const VertexRef& v) const override {
    if (v.empty()) return d_;
    return is_deficient(v) ? d_ - 2 : d_ - 1;
  }
  int d_;
};

// Fig1Tree plus the edge X--Y, which restores d-regularity.
class Fig1Graph final : public Fig1Tree {
 public:
  using Fig1Tree::Fig1Tree;
  std::string name() const override { return "family=fig1_graph, d=" + std::to_string(d_); }
  bool is_regular() const override { return true; }
  std::optional<int> subtree_class(const VertexRef&) const override { return std::nullopt; }

  void neighbors(const VertexRef& v, std::vector<VertexRef>& out) const override {
    PathTree::neighbors(v, out);
    if (is_deficient(v)) out.push_back(VertexRef{1 - v[0]});
  }
};

class SquareLattice final : public GraphModel {
 public:
  std::string name() const override { return "family=square_lattice"; }
  VertexRef root() const override { return {0, 0}; }
  int degree_bound() const override { return 4; }
  bool is_regular() const override { return true; }
  SymmetryDecl symmetry() const override { return transitive_at(root(), 4); }
  bool contains(const VertexRef& v) const override { return v.size() == 2; }

  void neighbors(const VertexRef& v, std::vector<VertexRef>& out) const override {
    const std::int64_t x = v[0], y = v[1];
    out.push_back({x - 1, y});
    out.push_back({x + 1, y});
    out.push_back({x, y - 1});
    out.push_back({x, y + 1});
  }

  std::optional<int> distance_from_root(const VertexRef& v) const override {
    return static_cast<int>(std::llabs(v[0]) + std::llabs(v[1]));
  }
};

// Honeycomb in brick-wall coordinates: (x, y) joins (x +- 1, y), plus
// (x, y + 1) when x + y is even or (x, y - 1) when it is odd.
class HexagonalLattice final : public GraphModel {
 public:
  std::string name() const override { return "family=hexagonal_lattice"; }
  VertexRef root() const override { return {0, 0}; }
  int degree_bound() const override { return 3; }
  bool is_regular() const override { return true; }
  SymmetryDecl symmetry() const override { return transitive_at(root(), 6); }
  bool contains(const VertexRef& v) const override { return v.size() == 2; }

  void neighbors(const VertexRef& v, std::vector<VertexRef>& out) const override {
    const std::int64_t x = v[0], y = v[1];
    out.push_back({x - 1, y});
    out.push_back({x + 1, y});
    if (((x + y) & 1) == 0)
      out.push_back({x, y + 1});
    else
      out.push_back({x, y - 1});
  }

  // Vertical steps alternate with horizontal ones; rising from the even root
  // needs |y| - 1 horizontal steps, descending needs |y|.
  std::optional<int> distance_from_root(const VertexRef& v) const override {
    const std::int64_t ax = std::llabs(v[0]), ay = std::llabs(v[1]);
    const std::int64_t needed = v[1] > 0 ? ay - 1 : ay;
    std::int64_t horizontal = std::max(ax, needed);
    if ((horizontal - ax) % 2 != 0) ++horizontal;
    return static_cast<int>(ay + horizontal);
  }
};

class Ladder final : public GraphModel {
 public:
  std::string name() const override { return "family=ladder"; }
  VertexRef root() const override { return {0, 0}; }
  int degree_bound() const override { return 3; }
  bool is_regular() const override { return true; }
  SymmetryDecl symmetry() const override { return transitive_at(root(), 4); }
  bool contains(const VertexRef& v) const override {
    return v.size() == 2 && (v[1] == 0 || v[1] == 1);
  }

  void neighbors(const VertexRef& v, std::vector<VertexRef>& out) const override {
    const std::int64_t x = v[0], y = v[1];
    out.push_back({x - 1, y});
    out.push_back({x + 1, y});
    out.push_back({x, 1 - y});
  }

  std::optional<int> distance_from_root(const VertexRef& v) const override {
    return static_cast<int>(std::llabs(v[0]) + v[1]);
  }
};

// Vertices are half-edges of the 3-regular "triangle tree": payload
// [corner, t_1, ..., t_n] where t is a regular_tree(3) path naming the
// triangle. Corner c of triangle t carries the bridge to t's c-th neighbor
// (index 0 is the parent for non-root triangles).
class TriangleCactus final : public GraphModel {
 public:
  std::string name() const override { return "family=triangle_cactus"; }
  VertexRef root() const override { return {0}; }
  int degree_bound() const override { return 3; }
  bool is_regular() const override { return true; }
  SymmetryDecl symmetry() const override { return transitive_at(root(), 3); }

  bool contains(const VertexRef& v) const override {
    if (v.empty() || v[0] < 0 || v[0] > 2) return false;
    for (std::size_t i = 1; i < v.size(); ++i) {
      const std::int64_t limit = i == 1 ? 2 : 1;
      if (v[i] < 0 || v[i] > limit) return false;
    }
    return true;
  }

  void neighbors(const VertexRef& v, std::vector<VertexRef>& out) const override {
    const std::int64_t corner = v[0];
    for (std::int64_t c = 0; c < 3; ++c) {
      if (c == corner) continue;
      VertexRef mate = v;
      mate.payload()[0] = c;
      out.push_back(std::move(mate));
    }
    out.push_back(bridge_partner(v));
  }

  std::optional<int> distance_from_root(const VertexRef& v) const override {
    const int depth = static_cast<int>(v.size()) - 1;
    const int last = v[0] != 0 ? 1 : 0;
    if (depth == 0) return last;
    return (v[1] != 0 ? 1 : 0) + 1 + 2 * (depth - 1) + last;
  }

 private:
  static VertexRef bridge_partner(const VertexRef& v) {
    const std::int64_t corner = v[0];
    const std::size_t depth = v.size() - 1;
    if (depth == 0) return VertexRef{0, corner};
    if (corner == 0) {
      // Up to the parent triangle, arriving at the corner that points back.
      const std::int64_t last = v[depth];
      const std::int64_t back = depth == 1 ? last : last + 1;
      VertexRef parent = v.truncated(depth);
      parent.payload()[0] = back;
      return parent;
    }
    VertexRef child = v.with_appended(corner - 1);
    child.payload()[0] = 0;
    return child;
  }
};

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidParameter(message);
}

}  // namespace

GraphPtr regular_tree(int d) {
  require(d >= 2, "regular_tree requires d >= 2");
  return std::make_shared<RegularTree>(d);
}

GraphPtr fig1_tree(int d) {
  require(d >= 3, "fig1_tree requires d >= 3");
  return std::make_shared<Fig1Tree>(d);
}

GraphPtr fig1_graph(int d) {
  require(d >= 3, "fig1_graph requires d >= 3");
  return std::make_shared<Fig1Graph>(d);
}

GraphPtr square_lattice() { return std::make_shared<SquareLattice>(); }
GraphPtr hexagonal_lattice() { return std::make_shared<HexagonalLattice>(); }
GraphPtr ladder() { return std::make_shared<Ladder>(); }
GraphPtr triangle_cactus() { return std::make_shared<TriangleCactus>(); }

GraphSpec GraphSpec::parse(std::string_view text) {
  GraphSpec spec;
  std::string normalized(text);
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      require(spec.family.empty(), "graph spec has two family names: " + std::string(text));
      spec.family = token;
      continue;
    }
    std::string key = token.substr(0, eq), value = token.substr(eq + 1);
    require(!key.empty() && !value.empty(), "malformed graph spec entry: " + token);
    if (key == "family")
      spec.family = value;
    else
      spec.params[key] = value;
  }
  require(!spec.family.empty(), "graph spec without family: " + std::string(text));
  return spec;
}

std::string GraphSpec::to_string() const {
  std::string out = "family=" + family;
  for (const auto& [k, v] : params) out += ", " + k + "=" + v;
  return out;
}

namespace {

int int_param(const GraphSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  require(it != spec.params.end(), spec.family + " requires parameter " + key);
  char* end = nullptr;
  long value = std::strtol(it->second.c_str(), &end, 10);
  require(end && *end == '\0', "parameter " + key + " must be an integer");
  return static_cast<int>(value);
}

}  // namespace

GraphPtr make_graph(const GraphSpec& spec) {
  const std::string& f = spec.family;
  if (f == "regular_tree") return regular_tree(int_param(spec, "d"));
  if (f == "fig1_tree") return fig1_tree(int_param(spec, "d"));
  if (f == "fig1_graph") return fig1_graph(int_param(spec, "d"));
  if (f == "square_lattice") return square_lattice();
  if (f == "hexagonal_lattice") return hexagonal_lattice();
  if (f == "ladder") return ladder();
  if (f == "triangle_cactus") return triangle_cactus();
  if (f == "cover") {
    auto base = spec.params.find("base");
    require(base != spec.params.end(), "cover requires parameter base");
    GraphSpec base_spec{base->second, {}};
    if (auto bd = spec.params.find("base_d"); bd != spec.params.end())
      base_spec.params["d"] = bd->second;
    return universal_cover(make_graph(base_spec));
  }
  throw InvalidParameter("unknown graph family: " + f);
}

GraphPtr make_graph(std::string_view spec_text) { return make_graph(GraphSpec::parse(spec_text)); }

std::vector<std::string> family_names() {
  return {"regular_tree",    "fig1_tree",      "fig1_graph", "square_lattice",
          "hexagonal_lattice", "ladder", "triangle_cactus", "cover"};
}

}  // namespace perclab
