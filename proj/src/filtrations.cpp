#include <algorithm>
#include <string>
#include <unordered_map>

#include "m2s2/error.hpp"
#include "m2s2/geometry.hpp"

namespace m2s2 {

std::vector<double> lift(const LabelledPointCloud& cloud, double scale) {
  const int d = cloud.dimension();
  const std::size_t extra = cloud.species_count() > 0 ? cloud.species_count() - 1 : 0;
  const std::size_t width = static_cast<std::size_t>(d) + extra;
  std::vector<double> out(cloud.size() * width, 0.0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto p = cloud.point(i);
    std::copy(p.begin(), p.end(), out.begin() + static_cast<std::ptrdiff_t>(i * width));
    const Label c = cloud.label(i);
    if (c > 0) out[i * width + static_cast<std::size_t>(d) + c - 1] = scale;
  }
  return out;
}

namespace {

constexpr double kSameBall = 1e-12;

// Values from enclosing radii, raised to the max over facets. A radius that
// matches the largest facet value up to rounding is the same ball (same
// support), so it takes that value exactly.
FilteredComplex valued_complex(const LabelledPointCloud& cloud,
                               std::vector<std::vector<Index>> faces) {
  std::sort(faces.begin(), faces.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::unordered_map<std::vector<Index>, double, VertexListHash> value;
  value.reserve(faces.size());
  std::vector<Simplex> simplices;
  simplices.reserve(faces.size());
  std::vector<Index> facet;
  for (auto& f : faces) {
    double v = enclosing_radius(cloud, f);
    if (f.size() > 1) {
      double top = 0.0;
      for (std::size_t drop = 0; drop < f.size(); ++drop) {
        facet.clear();
        for (std::size_t j = 0; j < f.size(); ++j)
          if (j != drop) facet.push_back(f[j]);
        top = std::max(top, value.at(facet));
      }
      if (v <= top * (1.0 + kSameBall)) v = top;
    }
    value.emplace(f, v);
    simplices.push_back({std::move(f), v});
  }
  return FilteredComplex::build(std::move(simplices), cloud.labels(), cloud.species_count());
}

}  // namespace

FilteredComplex cech_filtration(const LabelledPointCloud& cloud, int max_dim, std::size_t limit) {
  if (max_dim < 0) throw InputError("max_dim must be >= 0");
  if (cloud.size() > limit)
    throw RefusalError("Cech filtration refused: " + std::to_string(cloud.size()) +
                       " points exceeds the limit of " + std::to_string(limit));
  const std::size_t n = cloud.size();
  std::vector<std::vector<Index>> faces;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) > max_dim + 1) continue;
    std::vector<Index> f;
    for (Index i = 0; i < n; ++i)
      if (mask & (1u << i)) f.push_back(i);
    faces.push_back(std::move(f));
  }
  return valued_complex(cloud, std::move(faces));
}

FilteredComplex chromatic_delcech(const LabelledPointCloud& cloud, int max_dim, double lift_scale,
                                  std::size_t species_cap) {
  if (max_dim < 0) throw InputError("max_dim must be >= 0");
  if (!(lift_scale > 0.0)) throw InputError("lift scale must be positive");
  if (cloud.species_count() > species_cap)
    throw RefusalError("chromatic Delaunay refused: " + std::to_string(cloud.species_count()) +
                       " species exceeds the cap of " + std::to_string(species_cap));
  if (cloud.empty()) return FilteredComplex::build({}, {}, cloud.species_count());
  const auto lifted = lift(cloud, lift_scale);
  const int width = cloud.dimension() + static_cast<int>(cloud.species_count()) - 1;
  const DelaunayComplex del = delaunay(lifted, width);
  return valued_complex(cloud, del.faces(max_dim));
}

}  // namespace m2s2
