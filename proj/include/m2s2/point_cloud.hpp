#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace m2s2 {

using Label = std::uint32_t;

/// Points in R^d (d = 2 or 3), each tagged with a species label.
///
/// Labels are contiguous (0..species_count-1). The original label names are
/// kept in `species_names()` so outputs can be reported in the caller's
/// vocabulary. Points with identical coordinates *and* label are collapsed on
/// construction; identical coordinates with different labels are kept.
class LabelledPointCloud {
 public:
  LabelledPointCloud() = default;

  /// `coords` is row-major, `labels.size()` rows of `dimension` values.
  /// Labels may be sparse; they are remapped to a contiguous range in
  /// increasing order. `names`, when given, names each *input* label value.
  LabelledPointCloud(int dimension, std::vector<double> coords, std::span<const Label> labels,
                     std::vector<std::string> names = {});

  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t species_count() const noexcept { return names_.size(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dimension_),
            static_cast<std::size_t>(dimension_)};
  }
  Label label(std::size_t i) const { return labels_[i]; }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  const std::vector<double>& coords() const noexcept { return coords_; }
  const std::vector<std::string>& species_names() const noexcept { return names_; }

  std::size_t count_of(Label l) const;
  std::size_t duplicates_dropped() const noexcept { return duplicates_dropped_; }

  /// Points whose label is in `keep` (sorted, unique), relabelled 0..|keep|-1
  /// in the order of `keep`. Species names follow along.
  LabelledPointCloud restrict_to(std::span<const Label> keep) const;

  /// Drops species with fewer than `min_size` points and relabels the rest.
  LabelledPointCloud without_small_species(std::size_t min_size) const;

 private:
  int dimension_ = 2;
  std::vector<double> coords_;
  std::vector<Label> labels_;
  std::vector<std::string> names_;
  std::size_t duplicates_dropped_ = 0;
};

}  // namespace m2s2
