#pragma once

// Robust orientation / in-sphere predicates for points in R^k (k <= 7).
//
// Points live in a "frame": a subset of m coordinate axes onto which the
// points' affine hull projects bijectively. Orientation uses only the frame
// axes; sphere tests use the full squared norm, which gives the metric answer
// inside the hull even though the projection is not orthogonal.
//
// Signs are computed with a floating point filter and fall back to exact
// integer arithmetic. Co-spherical ties are broken by perturbing the lifted
// height of point i by eps^(i+1): lower indices are perturbed more.

#include <cstdint>
#include <span>
#include <vector>

namespace m2s2::detail {

inline constexpr int kMaxPredicateDim = 7;

struct PointView {
  const double* data = nullptr;
  int dim = 0;
  const double* operator[](std::uint32_t i) const { return data + static_cast<std::size_t>(i) * dim; }
};

/// Sign of det [1, x_axes(p)] over the m+1 points `pts` (rows in the given order).
int orientation(const PointView& pv, std::span<const std::uint32_t> pts, std::span<const int> axes);

/// Sign of det [1, x_axes(p), |p|^2 + eps_p] over the m+2 points `pts`, with the
/// symbolic perturbation applied. Nonzero whenever some m+1 of the points are
/// affinely independent in the frame.
int lifted_sign(const PointView& pv, std::span<const std::uint32_t> pts, std::span<const int> axes);

/// True when q lies strictly inside the (perturbed) circumsphere of the
/// nondegenerate m-simplex `simplex` (m+1 points) in the frame `axes`.
bool in_sphere(const PointView& pv, std::span<const std::uint32_t> simplex, std::uint32_t q,
               std::span<const int> axes);
/// Same, with orientation(simplex) already known.
bool in_sphere(const PointView& pv, std::span<const std::uint32_t> simplex, std::uint32_t q,
               std::span<const int> axes, int orient);

/// Exact affine rank test: is `candidate` affinely independent of `basis`?
bool affinely_independent(const PointView& pv, std::span<const std::uint32_t> basis,
                          std::uint32_t candidate);

/// Counters for tests and diagnostics (thread local).
struct PredicateStats {
  std::uint64_t filtered = 0;
  std::uint64_t exact = 0;
};
PredicateStats& predicate_stats();

}  // namespace m2s2::detail
