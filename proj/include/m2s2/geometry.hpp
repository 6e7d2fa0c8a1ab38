#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "m2s2/complex.hpp"
#include "m2s2/point_cloud.hpp"

namespace m2s2 {

struct Ball {
  std::vector<double> center;
  double radius = 0.0;

  /// Enclosure up to the slack 1e-9 * (1 + radius).
  bool encloses(std::span<const double> p) const;
};

/// Smallest enclosing ball of `count` points in R^dim (row-major `coords`),
/// dim <= 8. Welzl's recursion with move-to-front; deterministic.
Ball min_enclosing_ball(std::span<const double> coords, int dim);

/// Radius of the smallest ball enclosing the given vertices of `cloud`.
double enclosing_radius(const LabelledPointCloud& cloud, std::span<const Index> vertices);

/// Maximal simplices of a Delaunay triangulation, plus the dimension of the
/// affine hull they triangulate.
struct DelaunayComplex {
  int hull_dimension = -1;
  std::vector<std::vector<Index>> cells;  // sorted vertex ids, sorted lexicographically

  /// All faces of dimension <= max_dim (vertices included only if they lie in
  /// some cell). Sorted by (size, lexicographic).
  std::vector<std::vector<Index>> faces(int max_dim) const;
};

inline constexpr int kMaxDelaunayDim = 7;

/// Delaunay triangulation of `coords` (row-major, dimension `dim` <= 7) by
/// incremental insertion. Degenerate (co-spherical) configurations are
/// resolved by a symbolic perturbation keyed on point index, so the result
/// does not depend on insertion order. Points spanning a lower-dimensional
/// affine hull are triangulated within that hull. Exact duplicates after the
/// first occurrence are skipped.
DelaunayComplex delaunay(std::span<const double> coords, int dim);

/// Same triangulation by testing every candidate simplex against every point.
/// Meant for checking, n <= 30.
DelaunayComplex delaunay_brute_force(std::span<const double> coords, int dim);

/// One-hot lift: a point of color c > 0 gains `scale` on extra axis c-1; color
/// 0 maps to the zero vector. Output is row-major with dimension
/// cloud.dimension() + species_count - 1.
std::vector<double> lift(const LabelledPointCloud& cloud, double scale);

inline constexpr std::size_t kCechOracleLimit = 16;
inline constexpr std::size_t kChromaticSpeciesCap = 4;

/// Every subset of at most max_dim+1 points, valued by its enclosing radius.
/// Refuses clouds larger than `limit`.
FilteredComplex cech_filtration(const LabelledPointCloud& cloud, int max_dim,
                                std::size_t limit = kCechOracleLimit);

/// Delaunay complex of the lifted points truncated to dimension max_dim, with
/// filtration values the enclosing radii of the unlifted vertices.
FilteredComplex chromatic_delcech(const LabelledPointCloud& cloud, int max_dim,
                                  double lift_scale = 1.0,
                                  std::size_t species_cap = kChromaticSpeciesCap);

}  // namespace m2s2
