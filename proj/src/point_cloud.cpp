#include "m2s2/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "m2s2/error.hpp"

namespace m2s2 {

LabelledPointCloud::LabelledPointCloud(int dimension, std::vector<double> coords,
                                       std::span<const Label> labels,
                                       std::vector<std::string> names)
    : dimension_(dimension) {
  if (dimension != 2 && dimension != 3)
    throw InputError("point dimension must be 2 or 3, got " + std::to_string(dimension));
  const auto d = static_cast<std::size_t>(dimension);
  if (coords.size() != labels.size() * d)
    throw InputError("coordinate count does not match label count");
  for (double c : coords)
    if (!std::isfinite(c)) throw InputError("non-finite coordinate");

  std::vector<Label> distinct(labels.begin(), labels.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (!names.empty()) {
    Label max_label = distinct.empty() ? 0 : distinct.back();
    if (names.size() <= max_label) throw InputError("fewer species names than labels");
  }
  std::map<Label, Label> remap;
  for (Label l : distinct) {
    remap.emplace(l, static_cast<Label>(names_.size()));
    names_.push_back(names.empty() ? std::to_string(l) : names[l]);
  }

  // Exact duplicates in (coords, label) are collapsed, first occurrence wins.
  std::set<std::pair<std::vector<double>, Label>> seen;
  coords_.reserve(coords.size());
  labels_.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::vector<double> p(coords.begin() + static_cast<std::ptrdiff_t>(i * d),
                          coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
    for (double& c : p)
      if (c == 0.0) c = 0.0;  // fold -0.0
    if (!seen.emplace(p, labels[i]).second) {
      ++duplicates_dropped_;
      continue;
    }
    coords_.insert(coords_.end(), p.begin(), p.end());
    labels_.push_back(remap.at(labels[i]));
  }
}

std::size_t LabelledPointCloud::count_of(Label l) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), l));
}

LabelledPointCloud LabelledPointCloud::restrict_to(std::span<const Label> keep) const {
  std::vector<double> coords;
  std::vector<Label> labels;
  std::vector<std::string> names;
  std::map<Label, Label> remap;
  for (Label l : keep) {
    if (l >= species_count()) throw InputError("unknown label " + std::to_string(l));
    remap.emplace(l, static_cast<Label>(names.size()));
    names.push_back(names_[l]);
  }
  for (std::size_t i = 0; i < size(); ++i) {
    auto it = remap.find(labels_[i]);
    if (it == remap.end()) continue;
    auto p = point(i);
    coords.insert(coords.end(), p.begin(), p.end());
    labels.push_back(it->second);
  }
  // Input labels are already contiguous in `names` order, so names index directly.
  LabelledPointCloud out(dimension_, std::move(coords), labels, std::move(names));
  return out;
}

LabelledPointCloud LabelledPointCloud::without_small_species(std::size_t min_size) const {
  std::vector<Label> keep;
  for (Label l = 0; l < species_count(); ++l)
    if (count_of(l) >= min_size) keep.push_back(l);
  return restrict_to(keep);
}

}  // namespace m2s2
