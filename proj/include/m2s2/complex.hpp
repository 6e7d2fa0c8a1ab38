#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "m2s2/point_cloud.hpp"

namespace m2s2 {

using Index = std::uint32_t;
using ColorMask = std::uint64_t;

inline constexpr std::size_t kMaxLabels = 64;

struct Simplex {
  std::vector<Index> vertices;  // strictly increasing
  double value = 0.0;

  int dim() const noexcept { return static_cast<int>(vertices.size()) - 1; }
};

/// (value, dimension, lexicographic vertices). Faces precede cofaces whenever
/// values are monotone.
bool filtration_less(const Simplex& a, const Simplex& b);

struct VertexListHash {
  std::size_t operator()(const std::vector<Index>& v) const noexcept;
};

/// Simplicial complex with monotone filtration values, stored in the
/// deterministic total order. Immutable once built.
class FilteredComplex {
 public:
  FilteredComplex() = default;

  /// Sorts `simplices` into filtration order and checks face closure and
  /// monotonicity; throws InputError on violation. `vertex_labels[v]` is the
  /// species of vertex v; every vertex index used must be < its size.
  /// `label_count` is the size of the label universe (at least one more than
  /// the largest vertex label; inferred when 0).
  static FilteredComplex build(std::vector<Simplex> simplices, std::vector<Label> vertex_labels,
                               std::size_t label_count = 0);

  std::size_t size() const noexcept { return simplices_.size(); }
  bool empty() const noexcept { return simplices_.empty(); }
  const Simplex& operator[](std::size_t i) const { return simplices_[i]; }
  const std::vector<Simplex>& simplices() const noexcept { return simplices_; }
  auto begin() const noexcept { return simplices_.begin(); }
  auto end() const noexcept { return simplices_.end(); }

  std::size_t vertex_count() const noexcept { return vertex_labels_.size(); }
  const std::vector<Label>& vertex_labels() const noexcept { return vertex_labels_; }
  std::size_t label_count() const noexcept { return label_count_; }
  int dimension() const noexcept;

  std::optional<Index> find(const std::vector<Index>& vertices) const;
  ColorMask colors(std::size_t i) const;

  /// Largest filtration value, 0 for an empty complex.
  double max_value() const noexcept;

  /// Positions of the codimension-1 faces of simplex i, ascending.
  std::vector<Index> facet_indices(std::size_t i) const;

 private:
  std::vector<Simplex> simplices_;
  std::vector<Label> vertex_labels_;
  std::size_t label_count_ = 0;
  std::unordered_map<std::vector<Index>, Index, VertexListHash> lookup_;
};

/// Simplex-level map between filtered complexes. `assignment[i]` is the
/// codomain position of domain simplex i.
struct FilteredChainMap {
  std::shared_ptr<const FilteredComplex> domain;
  std::shared_ptr<const FilteredComplex> codomain;
  std::vector<Index> assignment;

  /// Dimension preserving, vertexwise face commuting, and
  /// value_codomain(f(s)) <= value_domain(s). Throws InputError otherwise.
  void validate() const;

  /// Injective on simplices with equal filtration values, i.e. the domain is
  /// a filtered subcomplex of the codomain.
  bool is_filtered_inclusion() const;

  /// Image of each domain vertex (indexed by domain vertex id).
  std::vector<Index> vertex_map() const;
};

struct Subcomplex {
  FilteredComplex complex;
  std::vector<Index> vertex_map;   // new vertex id -> parent vertex id
  std::vector<Index> simplex_map;  // new simplex position -> parent position
};

/// Induced subcomplex on the vertices whose label lies in `colors`.
Subcomplex subcomplex_by_colors(const FilteredComplex& k, std::span<const Label> colors);

/// Simplices of `k` with at most `max_colors` distinct labels; vertex ids kept.
Subcomplex subcomplex_by_color_count(const FilteredComplex& k, std::size_t max_colors);

struct DisjointUnion {
  std::shared_ptr<const FilteredComplex> complex;
  std::vector<FilteredChainMap> injections;  // part i -> union
  std::vector<Index> vertex_offsets;         // first union vertex id of part i
};

DisjointUnion disjoint_union(std::span<const std::shared_ptr<const FilteredComplex>> parts);

struct MappingCylinder {
  std::shared_ptr<const FilteredComplex> complex;
  FilteredChainMap domain_inclusion;  // f.domain -> cylinder
  Index codomain_vertex_offset = 0;   // codomain vertex v sits at offset + v
};

/// Simplicial mapping cylinder of `f`, truncated to simplices of dimension
/// at most `max_dim` (all simplices when negative). Domain vertices come
/// first, then codomain vertices.
MappingCylinder mapping_cylinder(const FilteredChainMap& f, int max_dim = -1);

}  // namespace m2s2
