#include <algorithm>
#include <bit>
#include <random>

#include "doctest.h"
#include "m2s2/geometry.hpp"
#include "m2s2/reduction.hpp"
#include "m2s2/sixpack.hpp"
#include "oracles.hpp"

using namespace m2s2;

namespace {

using Ptr = std::shared_ptr<const FilteredComplex>;

Ptr point(double value = 0.0) { return std::make_shared<const FilteredComplex>(FilteredComplex::build({{{0}, value}}, {0})); }

// f(dK) == d(f K) over Z/2, images of faces dropped when they collapse.
bool commutes_with_boundary(const FilteredChainMap& f) {
  const auto& a = *f.domain;
  const auto& b = *f.codomain;
  for (std::size_t i = 0; i < a.size(); ++i) {
    oracle::BitRow lhs(b.size()), rhs(b.size());
    for (auto face : a.facet_indices(i))
      if (b[f.assignment[face]].dim() == a[face].dim()) lhs.flip(f.assignment[face]);
    const auto& img = b[f.assignment[i]];
    if (img.dim() == a[i].dim())
      for (auto face : b.facet_indices(f.assignment[i])) rhs.flip(face);
    if (lhs.w != rhs.w) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("simplex order ignores listing order") {
  const auto k = chromatic_delcech(oracle::random_cloud(21, 10, 2), 2);
  auto shuffled = k.simplices();
  std::mt19937_64 rng(3);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto again = FilteredComplex::build(shuffled, k.vertex_labels());
  for (std::size_t i = 0; i < k.size(); ++i) {
    CHECK(k[i].vertices == again[i].vertices);
    CHECK(k[i].value == again[i].value);
  }
}

TEST_CASE("color restriction is an exhaustive filter and composes") {
  const auto k = chromatic_delcech(oracle::random_cloud(33, 8, 2), 2);
  const std::vector<Label> both = {0, 1}, zero = {0}, two = {2};
  CHECK(subcomplex_by_colors(k, both).complex.size() == k.size());
  CHECK(subcomplex_by_colors(k, two).complex.empty());
  const auto sub = subcomplex_by_colors(k, zero);
  std::size_t expect = 0;
  for (std::size_t i = 0; i < k.size(); ++i)
    if (k.colors(i) == 1) ++expect;
  CHECK(sub.complex.size() == expect);

  const auto k3 = chromatic_delcech(oracle::random_cloud(34, 12, 3), 2);
  const std::vector<Label> outer = {0, 2}, inner = {2};
  const auto step = subcomplex_by_colors(subcomplex_by_colors(k3, outer).complex, inner);
  const auto direct = subcomplex_by_colors(k3, inner);
  REQUIRE(step.complex.size() == direct.complex.size());
  for (std::size_t i = 0; i < direct.complex.size(); ++i) CHECK(step.complex[i].value == direct.complex[i].value);
}

TEST_CASE("disjoint union adds Betti numbers") {
  std::vector<Ptr> parts;
  std::vector<Label> c0 = {0}, c1 = {1}, c2 = {2};
  const auto k = chromatic_delcech(oracle::random_cloud(40, 15, 3), 2);
  for (const auto* c : {&c0, &c1, &c2})
    parts.push_back(std::make_shared<const FilteredComplex>(subcomplex_by_colors(k, *c).complex));
  const auto u = disjoint_union(parts);
  CHECK(u.complex->size() == parts[0]->size() + parts[1]->size() + parts[2]->size());
  for (double t : oracle::sample_scales(k))
    for (int d = 0; d <= 1; ++d) {
      std::size_t sum = 0;
      for (const auto& p : parts) sum += oracle::betti(*p, t, d);
      CHECK(oracle::betti(*u.complex, t, d) == sum);
    }
  const std::vector<Ptr> two_points = {point(), point()};
  const auto pts = disjoint_union(two_points);
  CHECK(pts.complex->size() == 2);
  CHECK(pts.complex->dimension() == 0);
}

TEST_CASE("cylinder of the identity on a point is an edge") {
  FilteredChainMap id{point(), point(), {0}};
  const auto cyl = mapping_cylinder(id);
  CHECK(cyl.complex->size() == 3);
  CHECK(oracle::betti(*cyl.complex, 0.0, 0) == 1);
}

TEST_CASE("cylinder of a two to one vertex map is contractible") {
  const std::vector<Ptr> two_points = {point(), point()};
  const auto u = disjoint_union(two_points);
  FilteredChainMap f{u.complex, point(), {0, 0}};
  f.validate();
  CHECK_FALSE(f.is_filtered_inclusion());
  const auto cyl = mapping_cylinder(f);
  CHECK(oracle::betti(*cyl.complex, 1.0, 0) == 1);
  CHECK(oracle::betti(*cyl.complex, 1.0, 1) == 0);
}

TEST_CASE("cylinder of an inclusion has the codomain diagrams") {
  const auto f = k_chromatic_inclusion_map(oracle::random_cloud(50, 11, 3), 1, 2);
  const auto cyl = mapping_cylinder(f.map, 3);
  const auto a = diagrams(*f.map.codomain, 1);
  const auto b = diagrams(*cyl.complex, 1);
  for (int d = 0; d <= 1; ++d) CHECK(oracle::same_diagram(a[d], b[d], 0.0));
}

TEST_CASE("constructed maps are chain maps") {
  const auto cloud = oracle::random_cloud(60, 9, 3);
  for (int k = 1; k <= 2; ++k) {
    const auto g = k_chromatic_gluing_map(cloud, k, 2);
    REQUIRE(g.map.codomain->size() <= 200);
    CHECK(commutes_with_boundary(g.map));
    const auto i = k_chromatic_inclusion_map(cloud, k, 2);
    CHECK(commutes_with_boundary(i.map));
    const auto cyl = mapping_cylinder(g.map, 3);
    CHECK(commutes_with_boundary(cyl.domain_inclusion));
  }
}
