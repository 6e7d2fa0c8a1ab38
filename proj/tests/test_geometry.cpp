#include <cmath>
#include <random>

#include "doctest.h"
#include "m2s2/error.hpp"
#include "m2s2/geometry.hpp"
#include "m2s2/reduction.hpp"
#include "oracles.hpp"

using namespace m2s2;

namespace {

std::vector<double> random_coords(std::uint64_t seed, std::size_t n, int dim) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(n * static_cast<std::size_t>(dim));
  for (auto& x : c) x = u(rng);
  return c;
}

// Circumsphere of a tetrahedron in long double.
bool strictly_inside_circumsphere(const std::vector<double>& c, const std::vector<Index>& cell, Index q) {
  long double a[3][4];
  const double* p0 = &c[cell[0] * 3];
  for (int r = 0; r < 3; ++r) {
    const double* p = &c[cell[r + 1] * 3];
    long double n2 = 0;
    for (int x = 0; x < 3; ++x) {
      a[r][x] = 2.0L * ((long double)p[x] - p0[x]);
      n2 += ((long double)p[x] - p0[x]) * ((long double)p[x] - p0[x]);
    }
    a[r][3] = n2;
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    for (int k = 0; k < 4; ++k) std::swap(a[col][k], a[piv][k]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const long double f = a[r][col] / a[col][col];
      for (int k = col; k < 4; ++k) a[r][k] -= f * a[col][k];
    }
  }
  long double r2 = 0, d2 = 0;
  for (int x = 0; x < 3; ++x) {
    const long double off = a[x][3] / a[x][x];
    r2 += off * off;
    const long double y = p0[x] + off - c[q * 3 + x];
    d2 += y * y;
  }
  return d2 < r2 * (1 - 1e-9L);
}

}  // namespace

TEST_CASE("enclosing ball agrees with exhaustive support search") {
  for (int dim = 2; dim <= 3; ++dim) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const std::size_t n = 1 + seed % 7;
      const auto c = random_coords(seed * 31 + static_cast<std::uint64_t>(dim), n, dim);
      std::vector<std::vector<double>> pts;
      for (std::size_t i = 0; i < n; ++i)
        pts.emplace_back(c.begin() + static_cast<long>(i) * dim, c.begin() + static_cast<long>(i + 1) * dim);
      const Ball b = min_enclosing_ball(c, dim);
      CHECK(b.radius == doctest::Approx(oracle::brute_force_radius(pts)).epsilon(1e-9));
      for (const auto& p : pts) CHECK(b.encloses(p));
    }
  }
}

TEST_CASE("enclosing ball of collinear and repeated points") {
  const std::vector<double> c = {0, 0, 1, 1, 2, 2, 1, 1};
  CHECK(min_enclosing_ball(c, 2).radius == doctest::Approx(std::sqrt(2.0)));
  const std::vector<double> one = {3, 4};
  CHECK(min_enclosing_ball(one, 2).radius == 0.0);
}

TEST_CASE("unit square triangulates into two triangles") {
  const std::vector<double> sq = {0, 0, 1, 0, 1, 1, 0, 1};
  const auto dt = delaunay(sq, 2);
  CHECK(dt.hull_dimension == 2);
  CHECK(dt.cells.size() == 2);
  CHECK(dt.faces(1).size() == 4 + 5);
  CHECK(dt.faces(2).size() == 4 + 5 + 2);
}

TEST_CASE("delaunay matches brute force in dimensions 2 to 4") {
  for (int dim = 2; dim <= 4; ++dim) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      const std::size_t n = static_cast<std::size_t>(dim) + 2 + seed % 8;
      auto c = random_coords(seed + 100 * static_cast<std::uint64_t>(dim), n, dim);
      if (seed % 3 == 0)
        for (auto& x : c) x = std::round(x * 2.0);  // lattice points, many cospherical sets
      const auto fast = delaunay(c, dim);
      const auto slow = delaunay_brute_force(c, dim);
      CHECK(fast.hull_dimension == slow.hull_dimension);
      CHECK(fast.cells == slow.cells);
    }
  }
}

TEST_CASE("delaunay cells in R3 have empty circumspheres") {
  const auto c = random_coords(77, 25, 3);
  const auto dt = delaunay(c, 3);
  REQUIRE(dt.hull_dimension == 3);
  for (const auto& cell : dt.cells)
    for (Index q = 0; q < 25; ++q) {
      if (std::find(cell.begin(), cell.end(), q) != cell.end()) continue;
      CHECK_FALSE(strictly_inside_circumsphere(c, cell, q));
    }
}

TEST_CASE("delaunay of points in a lower dimensional hull") {
  const std::vector<double> line = {0, 0, 1, 1, 3, 3, 2, 2};
  const auto dt = delaunay(line, 2);
  CHECK(dt.hull_dimension == 1);
  CHECK(dt.cells == std::vector<std::vector<Index>>{{0, 1}, {1, 3}, {2, 3}});
  const std::vector<double> dup = {0, 0, 0, 0};
  CHECK(delaunay(dup, 2).hull_dimension == 0);
}

TEST_CASE("delaunay does not depend on point order up to relabelling") {
  auto c = random_coords(5, 15, 2);
  const auto a = delaunay(c, 2);
  std::vector<double> rev;
  for (std::size_t i = 15; i-- > 0;) rev.insert(rev.end(), c.begin() + static_cast<long>(2 * i), c.begin() + static_cast<long>(2 * i + 2));
  auto b = delaunay(rev, 2);
  for (auto& cell : b.cells) {
    for (auto& v : cell) v = 14 - v;
    std::sort(cell.begin(), cell.end());
  }
  std::sort(b.cells.begin(), b.cells.end());
  CHECK(a.cells == b.cells);
}

TEST_CASE("lift puts colors on extra axes") {
  const std::vector<double> c = {1, 2, 3, 4, 5, 6};
  const std::vector<Label> l = {0, 1, 2};
  const LabelledPointCloud cloud(2, c, l);
  const auto lifted = lift(cloud, 2.0);
  CHECK(lifted == std::vector<double>{1, 2, 0, 0, 3, 4, 2, 0, 5, 6, 0, 2});
}

TEST_CASE("cech and chromatic filtrations refuse oversized input") {
  const auto big = oracle::random_cloud(1, kCechOracleLimit + 1, 1);
  CHECK_THROWS_AS(cech_filtration(big, 1), RefusalError);
  const auto many = oracle::random_cloud(2, 20, 5);
  CHECK_THROWS_AS(chromatic_delcech(many, 2), RefusalError);
  CHECK(chromatic_delcech(LabelledPointCloud{}, 2).empty());
}

TEST_CASE("chromatic delaunay-cech diagrams equal cech diagrams") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto cloud = oracle::random_cloud(seed, 6 + seed % 5, 2 + static_cast<int>(seed % 2));
    const auto a = diagrams(chromatic_delcech(cloud, 2), 1);
    const auto b = diagrams(cech_filtration(cloud, 2), 1);
    for (int d = 0; d <= 1; ++d) CHECK(oracle::same_diagram(a[d], b[d], 1e-9));
  }
}

TEST_CASE("chromatic filtration values are enclosing radii") {
  const auto cloud = oracle::random_cloud(9, 12, 3);
  const auto k = chromatic_delcech(cloud, 2);
  for (const auto& s : k) {
    std::vector<std::vector<double>> pts;
    for (auto v : s.vertices) pts.emplace_back(cloud.point(v).begin(), cloud.point(v).end());
    double top = 0;
    for (auto f : k.facet_indices(static_cast<std::size_t>(&s - &k[0]))) top = std::max(top, k[f].value);
    CHECK(s.value == doctest::Approx(std::max(top, oracle::brute_force_radius(pts))).epsilon(1e-9));
  }
}
