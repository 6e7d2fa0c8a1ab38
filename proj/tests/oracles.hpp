#pragma once
// Reference implementations for tests: small, dense and slow on purpose.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "m2s2/complex.hpp"
#include "m2s2/point_cloud.hpp"
#include "m2s2/reduction.hpp"

namespace oracle {

using m2s2::Index;

// Row of a dense Z/2 matrix.
struct BitRow {
  std::vector<std::uint64_t> w;
  explicit BitRow(std::size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(std::size_t i) { w[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool get(std::size_t i) const { return (w[i / 64] >> (i % 64)) & 1; }
  void flip(std::size_t i) { w[i / 64] ^= std::uint64_t{1} << (i % 64); }
  void operator^=(const BitRow& o) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
  }
  bool zero() const {
    return std::all_of(w.begin(), w.end(), [](std::uint64_t x) { return x == 0; });
  }
  long highest() const {
    for (std::size_t i = w.size(); i-- > 0;)
      if (w[i]) return static_cast<long>(i * 64 + 63 - static_cast<std::size_t>(__builtin_clzll(w[i])));
    return -1;
  }
};

// Plain Gaussian elimination over Z/2.
inline std::size_t rank(std::vector<BitRow> rows) {
  std::map<long, std::size_t> pivots;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (long h = rows[i].highest(); h >= 0; h = rows[i].highest()) {
      auto it = pivots.find(h);
      if (it == pivots.end()) {
        pivots[h] = i;
        break;
      }
      rows[i] ^= rows[it->second];
    }
  }
  return pivots.size();
}

// Simplices of K with value <= t, split by dimension, and the boundary map
// from dimension d to d-1 as rows over the (d-1)-simplices.
inline std::size_t boundary_rank(const m2s2::FilteredComplex& k, double t, int d) {
  if (d <= 0) return 0;
  std::map<std::vector<Index>, std::size_t> lower;
  for (const auto& s : k)
    if (s.value <= t && s.dim() == d - 1) lower.emplace(s.vertices, lower.size());
  std::vector<BitRow> rows;
  for (const auto& s : k) {
    if (s.value > t || s.dim() != d) continue;
    BitRow row(lower.size());
    for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
      auto face = s.vertices;
      face.erase(face.begin() + static_cast<long>(drop));
      row.set(lower.at(face));
    }
    rows.push_back(std::move(row));
  }
  return rank(std::move(rows));
}

inline std::size_t betti(const m2s2::FilteredComplex& k, double t, int d) {
  std::size_t n = 0;
  for (const auto& s : k)
    if (s.value <= t && s.dim() == d) ++n;
  return n - boundary_rank(k, t, d) - boundary_rank(k, t, d + 1);
}

// Unoptimized left-to-right reduction on dense columns; returns low(j) or -1.
inline std::vector<long> lows(const m2s2::BoundaryMatrix& m) {
  const std::size_t n = m.size();
  std::vector<BitRow> cols(n, BitRow(n));
  for (std::size_t j = 0; j < n; ++j)
    for (auto i : m.columns[j]) cols[j].set(i);
  std::vector<long> low(n, -1);
  std::map<long, std::size_t> owner;
  for (std::size_t j = 0; j < n; ++j) {
    for (long h = cols[j].highest(); h >= 0; h = cols[j].highest()) {
      auto it = owner.find(h);
      if (it == owner.end()) {
        owner[h] = j;
        low[j] = h;
        break;
      }
      cols[j] ^= cols[it->second];
    }
  }
  return low;
}

// Smallest enclosing ball by trying every support set of up to dim+1 points.
// Long double circumcenters in the affine hull of the support.
inline double brute_force_radius(const std::vector<std::vector<double>>& pts) {
  const std::size_t n = pts.size();
  const std::size_t dim = pts.front().size();
  double best = INFINITY;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> sup;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) sup.push_back(i);
    if (sup.size() > dim + 1) continue;
    const std::size_t m = sup.size() - 1;
    // center = p0 + sum a_j (p_j - p0), equidistant from the support.
    std::vector<std::vector<long double>> a(m, std::vector<long double>(m + 1, 0));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t x = 0; x < dim; ++x)
          a[r][c] += 2.0L * ((long double)pts[sup[r + 1]][x] - pts[sup[0]][x]) *
                     ((long double)pts[sup[c + 1]][x] - pts[sup[0]][x]);
      for (std::size_t x = 0; x < dim; ++x) {
        const long double v = (long double)pts[sup[r + 1]][x] - pts[sup[0]][x];
        a[r][m] += v * v;
      }
    }
    bool singular = false;
    for (std::size_t c = 0; c < m && !singular; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < m; ++r)
        if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
      if (std::fabs(a[p][c]) < 1e-18L) {
        singular = true;
        break;
      }
      std::swap(a[p], a[c]);
      for (std::size_t r = 0; r < m; ++r) {
        if (r == c) continue;
        const long double f = a[r][c] / a[c][c];
        for (std::size_t k = c; k <= m; ++k) a[r][k] -= f * a[c][k];
      }
    }
    if (singular) continue;
    std::vector<long double> center(pts[sup[0]].begin(), pts[sup[0]].end());
    for (std::size_t c = 0; c < m; ++c) {
      const long double coef = a[c][m] / a[c][c];
      for (std::size_t x = 0; x < dim; ++x) center[x] += coef * ((long double)pts[sup[c + 1]][x] - pts[sup[0]][x]);
    }
    long double r2 = 0;
    for (std::size_t x = 0; x < dim; ++x) r2 += (center[x] - pts[sup[0]][x]) * (center[x] - pts[sup[0]][x]);
    bool ok = true;
    for (const auto& p : pts) {
      long double q = 0;
      for (std::size_t x = 0; x < dim; ++x) q += (center[x] - p[x]) * (center[x] - p[x]);
      if (q > r2 * (1 + 1e-12L) + 1e-24L) {
        ok = false;
        break;
      }
    }
    if (ok) best = std::min(best, static_cast<double>(std::sqrt(r2)));
  }
  return best;
}

inline m2s2::LabelledPointCloud random_cloud(std::uint64_t seed, std::size_t n, int colors, int dim = 2,
                                             double side = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, side);
  std::vector<double> c(n * static_cast<std::size_t>(dim));
  for (auto& x : c) x = u(rng);
  std::vector<m2s2::Label> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = static_cast<m2s2::Label>(i % static_cast<std::size_t>(colors));
  std::shuffle(l.begin(), l.end(), rng);
  return m2s2::LabelledPointCloud(dim, std::move(c), l);
}

// Random complex closed under faces with monotone values; values are
// quantized so that ties occur.
inline m2s2::FilteredComplex random_complex(std::uint64_t seed, std::size_t max_simplices) {
  std::mt19937_64 rng(seed);
  const Index n = 4 + static_cast<Index>(rng() % 6);
  std::uniform_int_distribution<int> step(0, 3);
  std::map<std::vector<Index>, double> val;
  for (Index v = 0; v < n; ++v) val[{v}] = step(rng);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  for (int attempt = 0; attempt < 400 && val.size() < max_simplices; ++attempt) {
    const std::size_t size = 2 + rng() % 3;
    std::set<Index> s;
    while (s.size() < size) s.insert(pick(rng));
    std::vector<Index> simplex(s.begin(), s.end());
    // every face, smallest first
    std::vector<std::vector<Index>> faces;
    for (std::uint32_t mask = 1; mask < (1u << simplex.size()); ++mask) {
      std::vector<Index> f;
      for (std::size_t i = 0; i < simplex.size(); ++i)
        if (mask >> i & 1) f.push_back(simplex[i]);
      faces.push_back(f);
    }
    std::stable_sort(faces.begin(), faces.end(), [](auto& a, auto& b) { return a.size() < b.size(); });
    std::size_t added = 0;
    for (const auto& f : faces)
      if (!val.count(f)) ++added;
    if (val.size() + added > max_simplices) continue;
    for (const auto& f : faces) {
      if (val.count(f)) continue;
      double top = 0;
      for (std::size_t drop = 0; drop < f.size(); ++drop) {
        auto g = f;
        g.erase(g.begin() + static_cast<long>(drop));
        top = std::max(top, val.at(g));
      }
      val[f] = top + step(rng);
    }
  }
  std::vector<m2s2::Simplex> simplices;
  for (const auto& [v, x] : val) simplices.push_back({v, x});
  return m2s2::FilteredComplex::build(std::move(simplices), std::vector<m2s2::Label>(n, 0));
}

// Critical values of K plus midpoints between consecutive ones and a point
// past the end.
inline std::vector<double> sample_scales(const m2s2::FilteredComplex& k) {
  std::set<double> vals;
  for (const auto& s : k) vals.insert(s.value);
  std::vector<double> out;
  double prev = NAN;
  for (double v : vals) {
    if (!std::isnan(prev)) out.push_back(0.5 * (prev + v));
    out.push_back(v);
    prev = v;
  }
  if (!vals.empty()) out.push_back(*vals.rbegin() + 1.0);
  return out;
}

inline bool same_diagram(const m2s2::PersistenceDiagram& a, const m2s2::PersistenceDiagram& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& p = a.points[i];
    const auto& q = b.points[i];
    if (std::fabs(p.birth - q.birth) > tol) return false;
    if (p.essential() != q.essential()) return false;
    if (!p.essential() && std::fabs(p.death - q.death) > tol) return false;
  }
  return true;
}

}  // namespace oracle
