#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "m2s2/point_cloud.hpp"
#include "m2s2/reduction.hpp"

namespace m2s2 {

enum class StatLayout { Full, Reduced };

inline constexpr std::size_t kFullStatsLength = 34;
inline constexpr std::size_t kReducedStatsLength = 10;
inline constexpr std::size_t kSingleSignatureLength = 44;
inline constexpr std::size_t kComboSignatureLength = 146;

/// -sum p ln p over lifetimes with deaths capped at `cap`.
double persistent_entropy(const PersistenceDiagram& d, double cap);

struct DiagramStatistics {
  StatLayout layout = StatLayout::Full;
  std::vector<std::string> names;
  std::vector<double> values;
};

std::vector<std::string> statistic_names(StatLayout layout);

/// Mean, population std, median, range and the 10/25/75/90th percentiles
/// (linear interpolation) of birth, death, lifespan and midlife, then count
/// and entropy. The reduced layout keeps the death block only. Infinite
/// deaths are replaced by `cap` first.
DiagramStatistics diagram_statistics(const PersistenceDiagram& d, StatLayout layout, double cap);

/// One block of a combination signature.
struct BlockSpec {
  std::string diagram;  // "domain", "kernel", "image", "cokernel"
  int degree = 0;
  StatLayout layout = StatLayout::Full;

  std::string name() const { return diagram + "_deg" + std::to_string(degree); }
  std::size_t length() const { return layout == StatLayout::Full ? kFullStatsLength : kReducedStatsLength; }
};

/// Block layouts for singles and for pairs/triples.
const std::vector<BlockSpec>& signature_blocks(std::size_t combo_size);
std::size_t signature_length(std::size_t combo_size);

struct SignatureOptions {
  double cap_factor = 1.25;
  double lift_scale = 1.0;
  std::size_t min_species_size = 3;
};

struct SignatureVector {
  std::vector<Label> combination;
  std::vector<double> values;
  double cap = 0.0;
};

/// Signature of one species combination (cloud labels, sorted, 1 to 3 of
/// them). Empty when a species is missing or has fewer than
/// min_species_size points. Deaths are capped at cap_factor times the largest
/// filtration value of the combination's complex.
std::optional<SignatureVector> signature_for_combination(const LabelledPointCloud& cloud,
                                                         std::span<const Label> combo,
                                                         const SignatureOptions& options = {});

/// All subsets of 0..n-1 of size 1..max_combo: singles, then pairs, then
/// triples, each in lexicographic order.
std::vector<std::vector<std::size_t>> enumerate_combinations(std::size_t n, int max_combo);

struct ManifestEntry {
  std::size_t column = 0;
  std::string combo;  // species names joined by '+'
  std::string diagram;
  std::string statistic;
};

std::vector<ManifestEntry> feature_manifest(std::span<const std::string> universe, int max_combo);
std::size_t feature_length(std::size_t universe_size, int max_combo);

struct FeatureVector {
  std::vector<double> values;
  std::vector<ManifestEntry> manifest;
  std::size_t absent_combinations = 0;
};

/// Concatenated signatures over every combination of `universe` (species
/// names); combinations not realized in `cloud` are zero filled.
FeatureVector assemble_feature_vector(const LabelledPointCloud& cloud,
                                      std::span<const std::string> universe, int max_combo,
                                      const SignatureOptions& options = {});

}  // namespace m2s2
