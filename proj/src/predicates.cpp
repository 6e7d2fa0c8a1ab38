#include "predicates.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <cmath>
#include <limits>

namespace m2s2::detail {

PredicateStats& predicate_stats() {
  thread_local PredicateStats stats;
  return stats;
}

namespace {

constexpr int kMaxN = kMaxPredicateDim + 2;

// Determinant by expansion over column subsets (rows consumed top down),
// alongside the same expansion in absolute values for the error bound.
constexpr auto kRowOf = [] {
  std::array<std::int8_t, 1 << kMaxN> row{};
  for (int s = 1; s < (1 << kMaxN); ++s) row[s] = static_cast<std::int8_t>(row[s & (s - 1)] + 1);
  for (int s = 1; s < (1 << kMaxN); ++s) --row[s];
  return row;
}();

double det_with_bound(const double* m, int n, double& magnitude) {
  const int full = 1 << n;
  std::array<double, 1 << kMaxN> det;
  std::array<double, 1 << kMaxN> mag;
  det[0] = 1.0;
  mag[0] = 1.0;
  for (int s = 1; s < full; ++s) {
    const int row = kRowOf[s];
    const double* mr = m + row * n;
    double acc = 0.0;
    double acc_mag = 0.0;
    // Expanded along the last row; sign alternates with the column's position in s.
    bool negative = (row & 1) != 0;
    for (int bits = s; bits; bits &= bits - 1) {
      const int j = std::countr_zero(static_cast<unsigned>(bits));
      const int rest = s & ~(1 << j);
      const double term = mr[j] * det[rest];
      acc += negative ? -term : term;
      acc_mag += std::fabs(mr[j]) * mag[rest];
      negative = !negative;
    }
    det[s] = acc;
    mag[s] = acc_mag;
  }
  magnitude = mag[full - 1];
  return det[full - 1];
}

// x * 2^-shift, exact because shift <= exponent of every nonzero input.
void set_exact_integer(mpz_t z, double x, long shift) {
  if (x == 0.0) {
    mpz_set_ui(z, 0);
    return;
  }
  int e = 0;
  const double f = std::frexp(x, &e);
  mpz_set_si(z, static_cast<long>(std::ldexp(f, 53)));
  const long k = static_cast<long>(e) - 53 - shift;
  assert(k >= 0);
  mpz_mul_2exp(z, z, static_cast<mp_bitcnt_t>(k));
}

mpz_class exact_integer(double x, long shift) {
  mpz_class z;
  set_exact_integer(z.get_mpz_t(), x, shift);
  return z;
}

long min_exponent(const PointView& pv, std::span<const std::uint32_t> pts) {
  long lo = std::numeric_limits<long>::max();
  for (auto p : pts)
    for (int c = 0; c < pv.dim; ++c) {
      double x = pv[p][c];
      if (x == 0.0) continue;
      int e = 0;
      std::frexp(x, &e);
      lo = std::min(lo, static_cast<long>(e) - 53);
    }
  return lo == std::numeric_limits<long>::max() ? 0 : lo;
}

struct ExactScratch {
  std::array<mpz_class, kMaxN * kMaxN> a;
  mpz_class prev, t;
};

ExactScratch& scratch() {
  thread_local ExactScratch s;
  return s;
}

int bareiss_sign(ExactScratch& s, int n) {
  auto* a = s.a.data();
  int sign = 1;
  mpz_set_ui(s.prev.get_mpz_t(), 1);
  for (int k = 0; k < n; ++k) {
    int pivot = -1;
    for (int r = k; r < n; ++r)
      if (sgn(a[r * n + k]) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != k) {
      for (int c = 0; c < n; ++c) mpz_swap(a[k * n + c].get_mpz_t(), a[pivot * n + c].get_mpz_t());
      sign = -sign;
    }
    mpz_srcptr piv = a[k * n + k].get_mpz_t();
    for (int r = k + 1; r < n; ++r) {
      mpz_srcptr lead = a[r * n + k].get_mpz_t();
      for (int c = k + 1; c < n; ++c) {
        mpz_ptr x = a[r * n + c].get_mpz_t();
        mpz_mul(s.t.get_mpz_t(), x, piv);
        mpz_submul(s.t.get_mpz_t(), lead, a[k * n + c].get_mpz_t());
        mpz_divexact(x, s.t.get_mpz_t(), s.prev.get_mpz_t());
      }
    }
    mpz_set(s.prev.get_mpz_t(), piv);
  }
  return sign * sgn(a[(n - 1) * n + (n - 1)]);
}

// Matrix rows: [1, x_axes, (|x|^2)?] for each point.
int matrix_sign(const PointView& pv, std::span<const std::uint32_t> pts, std::span<const int> axes,
                bool with_height) {
  const int n = static_cast<int>(pts.size());
  assert(n == static_cast<int>(axes.size()) + 1 + (with_height ? 1 : 0));
  assert(n <= kMaxN);

  std::array<double, kMaxN * kMaxN> m{};
  for (int r = 0; r < n; ++r) {
    const double* x = pv[pts[r]];
    m[r * n] = 1.0;
    for (std::size_t c = 0; c < axes.size(); ++c) m[r * n + 1 + static_cast<int>(c)] = x[axes[c]];
    if (with_height) {
      double h = 0.0;
      for (int c = 0; c < pv.dim; ++c) h += x[c] * x[c];
      m[r * n + n - 1] = h;
    }
  }
  double magnitude = 0.0;
  const double det = det_with_bound(m.data(), n, magnitude);
  const double bound = (n * (pv.dim + 4) + 4) * std::ldexp(magnitude, -52);
  if (std::fabs(det) > bound && std::isfinite(det)) {
    ++predicate_stats().filtered;
    return det > 0 ? 1 : -1;
  }

  ++predicate_stats().exact;
  const long shift = min_exponent(pv, pts);
  ExactScratch& s = scratch();
  for (int r = 0; r < n; ++r) {
    const double* x = pv[pts[r]];
    // The all-ones column scaled by a positive power of two keeps the sign.
    mpz_set_ui(s.a[r * n].get_mpz_t(), 1);
    for (std::size_t c = 0; c < axes.size(); ++c)
      set_exact_integer(s.a[r * n + 1 + static_cast<int>(c)].get_mpz_t(), x[axes[c]], shift);
    if (with_height) {
      mpz_ptr h = s.a[r * n + n - 1].get_mpz_t();
      mpz_set_ui(h, 0);
      for (int c = 0; c < pv.dim; ++c) {
        set_exact_integer(s.t.get_mpz_t(), x[c], shift);
        mpz_addmul(h, s.t.get_mpz_t(), s.t.get_mpz_t());
      }
    }
  }
  return bareiss_sign(s, n);
}

}  // namespace

int orientation(const PointView& pv, std::span<const std::uint32_t> pts, std::span<const int> axes) {
  return matrix_sign(pv, pts, axes, false);
}

int lifted_sign(const PointView& pv, std::span<const std::uint32_t> pts, std::span<const int> axes) {
  const int s = matrix_sign(pv, pts, axes, true);
  if (s != 0) return s;

  // det(M + sum_i eps_i e_i e_h^T) = det(M) + sum_i eps_i * cofactor(i, h).
  // The largest perturbation with a nonzero cofactor decides.
  const int n = static_cast<int>(pts.size());
  std::array<int, kMaxN> order{};
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.begin() + n, [&](int a, int b) { return pts[a] < pts[b]; });
  std::array<std::uint32_t, kMaxN> rest{};
  for (int k = 0; k < n; ++k) {
    const int row = order[k];
    int w = 0;
    for (int r = 0; r < n; ++r)
      if (r != row) rest[w++] = pts[r];
    const int minor = orientation(pv, std::span<const std::uint32_t>(rest.data(), n - 1), axes);
    if (minor == 0) continue;
    const bool negative = ((row + (n - 1)) & 1) != 0;
    return negative ? -minor : minor;
  }
  return 0;
}

bool in_sphere(const PointView& pv, std::span<const std::uint32_t> simplex, std::uint32_t q,
               std::span<const int> axes) {
  return in_sphere(pv, simplex, q, axes, orientation(pv, simplex, axes));
}

bool in_sphere(const PointView& pv, std::span<const std::uint32_t> simplex, std::uint32_t q,
               std::span<const int> axes, int orient) {
  assert(orient != 0);
  std::array<std::uint32_t, kMaxN> pts{};
  const int n = static_cast<int>(simplex.size());
  for (int i = 0; i < n; ++i) pts[i] = simplex[i];
  pts[n] = q;
  const int lifted = lifted_sign(pv, std::span<const std::uint32_t>(pts.data(), n + 1), axes);
  return lifted * orient < 0;
}

bool affinely_independent(const PointView& pv, std::span<const std::uint32_t> basis,
                          std::uint32_t candidate) {
  // Rank of the difference vectors over Q by fraction-free elimination.
  const int rows = static_cast<int>(basis.size());  // basis[0] is the origin
  const int cols = pv.dim;
  std::vector<std::uint32_t> all(basis.begin(), basis.end());
  all.push_back(candidate);
  const long shift = min_exponent(pv, all);
  std::vector<mpz_class> a(static_cast<std::size_t>(rows) * cols);
  for (int r = 1; r <= rows; ++r) {
    const std::uint32_t p = r < rows ? basis[r] : candidate;
    for (int c = 0; c < cols; ++c)
      a[(r - 1) * cols + c] = exact_integer(pv[p][c], shift) - exact_integer(pv[basis[0]][c], shift);
  }
  // Row echelon; independent iff rank == rows.
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (sgn(a[r * cols + c]) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    for (int k = 0; k < cols; ++k) std::swap(a[rank * cols + k], a[pivot * cols + k]);
    for (int r = rank + 1; r < rows; ++r) {
      if (sgn(a[r * cols + c]) == 0) continue;
      mpz_class f = a[r * cols + c];
      mpz_class g = a[rank * cols + c];
      for (int k = 0; k < cols; ++k) a[r * cols + k] = a[r * cols + k] * g - a[rank * cols + k] * f;
    }
    ++rank;
  }
  return rank == rows;
}

}  // namespace m2s2::detail
