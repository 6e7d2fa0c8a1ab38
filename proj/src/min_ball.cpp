#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "m2s2/error.hpp"
#include "m2s2/geometry.hpp"

namespace m2s2 {

bool Ball::encloses(std::span<const double> p) const {
  double d2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d2 += (p[i] - center[i]) * (p[i] - center[i]);
  return std::sqrt(d2) <= radius + 1e-9 * (1.0 + radius);
}

namespace {

constexpr int kMaxBallDim = 8;

class WelzlSolver {
 public:
  WelzlSolver(std::span<const double> coords, int dim)
      : coords_(coords), dim_(dim), n_(coords.size() / static_cast<std::size_t>(dim)) {
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (n_ > 16) {
      // Fixed seed keeps the result reproducible.
      std::mt19937_64 rng(0x5eedULL);
      std::shuffle(order_.begin(), order_.end(), rng);
    }
  }

  Ball solve() {
    support_.clear();
    Ball b = mtf(n_);
    // Final radius from the farthest point, so the ball certainly encloses.
    double r2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) r2 = std::max(r2, dist2(point(i), b.center));
    b.radius = std::sqrt(r2);
    return b;
  }

 private:
  const double* point(std::size_t i) const { return coords_.data() + i * static_cast<std::size_t>(dim_); }

  double dist2(const double* p, const std::vector<double>& c) const {
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) s += (p[k] - c[k]) * (p[k] - c[k]);
    return s;
  }

  bool outside(const double* p, const Ball& b) const {
    if (b.center.empty()) return true;
    const double tol = 1e-12 * (1.0 + b.radius);
    return std::sqrt(dist2(p, b.center)) > b.radius + tol;
  }

  // Smallest ball with every support point on its boundary: the circumcenter
  // within the support's affine hull.
  Ball ball_from_support(std::size_t count) const {
    Ball b;
    if (count == 0) return b;
    const double* p0 = support_[0];
    b.center.assign(p0, p0 + dim_);
    if (count == 1) return b;
    const std::size_t r = count - 1;
    std::vector<double> diff(r * dim_);
    for (std::size_t i = 0; i < r; ++i)
      for (int k = 0; k < dim_; ++k) diff[i * dim_ + k] = support_[i + 1][k] - p0[k];
    // 2 (q_i . q_j) lambda_j = |q_i|^2
    std::vector<double> a(r * (r + 1));
    for (std::size_t i = 0; i < r; ++i) {
      double sq = 0.0;
      for (std::size_t j = 0; j < r; ++j) {
        double dot = 0.0;
        for (int k = 0; k < dim_; ++k) dot += diff[i * dim_ + k] * diff[j * dim_ + k];
        a[i * (r + 1) + j] = 2.0 * dot;
        if (i == j) sq = dot;
      }
      a[i * (r + 1) + r] = sq;
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < r; ++i) scale = std::max(scale, std::fabs(a[i * (r + 1) + i]));
    for (std::size_t c = 0; c < r; ++c) {
      std::size_t piv = c;
      for (std::size_t i = c + 1; i < r; ++i)
        if (std::fabs(a[i * (r + 1) + c]) > std::fabs(a[piv * (r + 1) + c])) piv = i;
      if (std::fabs(a[piv * (r + 1) + c]) <= 1e-14 * scale) {
        // Affinely dependent support: keep the ball of the earlier points and
        // stretch it over the rest.
        Ball fallback = ball_from_support(count - 1);
        double r2 = fallback.radius * fallback.radius;
        r2 = std::max(r2, dist2(support_[count - 1], fallback.center));
        fallback.radius = std::sqrt(r2);
        return fallback;
      }
      if (piv != c)
        for (std::size_t k = 0; k <= r; ++k) std::swap(a[c * (r + 1) + k], a[piv * (r + 1) + k]);
      for (std::size_t i = 0; i < r; ++i) {
        if (i == c) continue;
        const double f = a[i * (r + 1) + c] / a[c * (r + 1) + c];
        if (f == 0.0) continue;
        for (std::size_t k = c; k <= r; ++k) a[i * (r + 1) + k] -= f * a[c * (r + 1) + k];
      }
    }
    for (std::size_t i = 0; i < r; ++i) {
      const double lambda = a[i * (r + 1) + r] / a[i * (r + 1) + i];
      for (int k = 0; k < dim_; ++k) b.center[k] += lambda * diff[i * dim_ + k];
    }
    double r2 = 0.0;
    for (std::size_t i = 0; i < count; ++i) r2 = std::max(r2, dist2(support_[i], b.center));
    b.radius = std::sqrt(r2);
    return b;
  }

  Ball mtf(std::size_t end) {
    Ball b = ball_from_support(support_.size());
    if (support_.size() == static_cast<std::size_t>(dim_) + 1) return b;
    for (std::size_t i = 0; i < end; ++i) {
      const double* p = point(order_[i]);
      if (!outside(p, b)) continue;
      support_.push_back(p);
      b = mtf(i);
      support_.pop_back();
      // Move to front.
      std::rotate(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(i),
                  order_.begin() + static_cast<std::ptrdiff_t>(i + 1));
    }
    return b;
  }

  std::span<const double> coords_;
  int dim_;
  std::size_t n_;
  std::vector<std::size_t> order_;
  std::vector<const double*> support_;
};

}  // namespace

Ball min_enclosing_ball(std::span<const double> coords, int dim) {
  if (dim < 1 || dim > kMaxBallDim) throw InputError("ball dimension must be in 1..8");
  if (coords.empty() || coords.size() % static_cast<std::size_t>(dim) != 0)
    throw InputError("min_enclosing_ball needs at least one point");
  return WelzlSolver(coords, dim).solve();
}

double enclosing_radius(const LabelledPointCloud& cloud, std::span<const Index> vertices) {
  const int d = cloud.dimension();
  if (vertices.size() == 1) return 0.0;
  if (vertices.size() == 2) {
    auto a = cloud.point(vertices[0]);
    auto b = cloud.point(vertices[1]);
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return 0.5 * std::sqrt(s);
  }
  std::vector<double> pts;
  pts.reserve(vertices.size() * static_cast<std::size_t>(d));
  for (Index v : vertices) {
    auto p = cloud.point(v);
    pts.insert(pts.end(), p.begin(), p.end());
  }
  return min_enclosing_ball(pts, d).radius;
}

}  // namespace m2s2
