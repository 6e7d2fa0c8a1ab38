#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "m2s2/complex.hpp"

namespace m2s2 {

/// Z/2 boundary matrix in the complex's total order.
struct BoundaryMatrix {
  std::vector<std::vector<Index>> columns;  // ascending facet positions
  std::vector<int> dims;
  std::vector<double> values;

  std::size_t size() const noexcept { return columns.size(); }
};

BoundaryMatrix boundary_matrix(const FilteredComplex& k);

inline constexpr Index kUnpaired = std::numeric_limits<Index>::max();

/// Result of the standard column reduction R = D V.
struct Pairing {
  std::vector<Index> partner;  // kUnpaired for essential columns
  std::vector<char> negative;  // column destroys a class (nonzero after reduction)

  bool essential(std::size_t j) const { return partner[j] == kUnpaired; }
};

/// Left-to-right reduction. With clearing, dimensions are processed from the
/// top down and columns known to be cycles are skipped. Both variants give the
/// same pairing.
Pairing reduce(const BoundaryMatrix& m, bool use_clearing = true);

struct DiagramPoint {
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();

  bool essential() const noexcept { return death == std::numeric_limits<double>::infinity(); }
  double persistence() const noexcept { return death - birth; }
  friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

struct PersistenceDiagram {
  int degree = 0;
  std::vector<DiagramPoint> points;  // sorted by (birth, death)
  std::size_t zero_persistence = 0;  // pairs with birth == death, not in `points`
  bool truncated = false;            // complex lacks the cells needed to kill classes

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }

  /// Number of points with birth <= s and death > t.
  std::size_t persisting(double s, double t) const;
  std::size_t alive(double t) const { return persisting(t, t); }
};

/// Diagrams in degrees 0..max_degree.
std::vector<PersistenceDiagram> diagrams(const FilteredComplex& k, int max_degree);

/// Builds a diagram from raw (birth, death) pairs, dropping zero-length ones.
PersistenceDiagram make_diagram(int degree, std::vector<DiagramPoint> raw);

}  // namespace m2s2
