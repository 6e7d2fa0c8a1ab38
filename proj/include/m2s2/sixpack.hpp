#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "m2s2/complex.hpp"
#include "m2s2/point_cloud.hpp"
#include "m2s2/reduction.hpp"

namespace m2s2 {

/// Which k-subsets of species a map glues.
struct MapDescriptor {
  int k = 0;
  std::vector<std::vector<Label>> color_subsets;
};

/// Kernel, cokernel, image, domain and codomain diagrams of one chain map,
/// each indexed by degree 0..max_degree.
struct SixPack {
  std::vector<PersistenceDiagram> kernel;
  std::vector<PersistenceDiagram> cokernel;
  std::vector<PersistenceDiagram> image;
  std::vector<PersistenceDiagram> domain;
  std::vector<PersistenceDiagram> codomain;
  MapDescriptor map_descriptor;

  int max_degree() const noexcept { return static_cast<int>(domain.size()) - 1; }
};

struct ChromaticMap {
  FilteredChainMap map;
  MapDescriptor descriptor;
};

/// Gluing map from the disjoint union of the subcomplexes spanned by every
/// k-subset of species into the chromatic Delaunay-Cech complex of `cloud`.
ChromaticMap k_chromatic_gluing_map(const LabelledPointCloud& cloud, int k, int max_dim,
                                    double lift_scale = 1.0);

/// Inclusion of the simplices with at most k distinct colors.
ChromaticMap k_chromatic_inclusion_map(const LabelledPointCloud& cloud, int k, int max_dim,
                                       double lift_scale = 1.0);

/// Same constructions over an already built codomain complex.
ChromaticMap gluing_map_of(std::shared_ptr<const FilteredComplex> codomain, int k);
ChromaticMap inclusion_map_of(std::shared_ptr<const FilteredComplex> codomain, int k);

/// Diagrams of `f` in degrees 0..max_degree. Maps that are not filtered
/// inclusions go through the mapping cylinder.
SixPack six_pack(const FilteredChainMap& f, int max_degree);

struct RankTriple {
  std::size_t kernel = 0;
  std::size_t image = 0;
  std::size_t cokernel = 0;
  friend bool operator==(const RankTriple&, const RankTriple&) = default;
};

inline constexpr std::size_t kRankOracleLimit = 300;

/// Ranks of the maps s -> t (s <= t) of the kernel, image and cokernel
/// modules of f in one degree, by dense linear algebra over Z/2. Refuses
/// complexes with more than kRankOracleLimit simplices.
RankTriple rank_oracle(const FilteredChainMap& f, double s, double t, int degree);

/// Batch form that reuses per-scale work; same answers as rank_oracle.
class RankOracle {
 public:
  RankOracle(const FilteredChainMap& f, int degree);
  ~RankOracle();
  RankOracle(const RankOracle&) = delete;
  RankOracle& operator=(const RankOracle&) = delete;

  RankTriple ranks(double s, double t);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace m2s2
