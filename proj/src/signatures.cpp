#include "m2s2/signatures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>

#include "m2s2/error.hpp"
#include "m2s2/geometry.hpp"
#include "m2s2/sixpack.hpp"

namespace m2s2 {

namespace {

constexpr std::array<const char*, 8> kStatNames = {"mean", "std", "median", "range",
                                                   "p10",  "p25", "p75",    "p90"};
constexpr std::array<const char*, 4> kQuantities = {"birth", "death", "lifespan", "midlife"};

double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

void append_stats(std::vector<double> x, std::vector<double>& out) {
  if (x.empty()) {
    out.insert(out.end(), kStatNames.size(), 0.0);
    return;
  }
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= n;
  out.push_back(mean);
  out.push_back(std::sqrt(var));
  out.push_back(percentile(x, 0.5));
  out.push_back(x.back() - x.front());
  for (double q : {0.10, 0.25, 0.75, 0.90}) out.push_back(percentile(x, q));
}

double capped(double death, double cap) { return std::isinf(death) ? cap : std::min(death, cap); }

}  // namespace

double persistent_entropy(const PersistenceDiagram& d, double cap) {
  std::vector<double> life;
  double total = 0.0;
  for (const auto& p : d.points) {
    const double l = std::max(0.0, capped(p.death, cap) - p.birth);
    life.push_back(l);
    total += l;
  }
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double l : life) {
    if (l <= 0.0) continue;
    const double p = l / total;
    h -= p * std::log(p);
  }
  return h;
}

std::vector<std::string> statistic_names(StatLayout layout) {
  std::vector<std::string> names;
  for (const char* q : kQuantities) {
    if (layout == StatLayout::Reduced && std::string(q) != "death") continue;
    for (const char* s : kStatNames) names.push_back(std::string(q) + "_" + s);
  }
  names.push_back("count");
  names.push_back("entropy");
  return names;
}

DiagramStatistics diagram_statistics(const PersistenceDiagram& d, StatLayout layout, double cap) {
  if (!(cap > 0.0)) throw InputError("cap must be positive");
  DiagramStatistics st;
  st.layout = layout;
  st.names = statistic_names(layout);
  std::vector<double> birth, death, life, mid;
  for (const auto& p : d.points) {
    const double dd = capped(p.death, cap);
    birth.push_back(p.birth);
    death.push_back(dd);
    life.push_back(dd - p.birth);
    mid.push_back(0.5 * (p.birth + dd));
  }
  if (layout == StatLayout::Full) {
    append_stats(std::move(birth), st.values);
    append_stats(std::move(death), st.values);
    append_stats(std::move(life), st.values);
    append_stats(std::move(mid), st.values);
  } else {
    append_stats(std::move(death), st.values);
  }
  st.values.push_back(static_cast<double>(d.points.size()));
  st.values.push_back(persistent_entropy(d, cap));
  return st;
}

const std::vector<BlockSpec>& signature_blocks(std::size_t combo_size) {
  static const std::vector<BlockSpec> single = {
      {"domain", 0, StatLayout::Reduced},
      {"domain", 1, StatLayout::Full},
  };
  static const std::vector<BlockSpec> multi = {
      {"kernel", 0, StatLayout::Full},  {"kernel", 1, StatLayout::Full},
      {"image", 0, StatLayout::Reduced}, {"image", 1, StatLayout::Full},
      {"cokernel", 1, StatLayout::Full},
  };
  if (combo_size < 1 || combo_size > 3) throw InputError("combinations have 1 to 3 species");
  return combo_size == 1 ? single : multi;
}

std::size_t signature_length(std::size_t combo_size) {
  std::size_t n = 0;
  for (const auto& b : signature_blocks(combo_size)) n += b.length();
  return n;
}

std::optional<SignatureVector> signature_for_combination(const LabelledPointCloud& cloud,
                                                         std::span<const Label> combo,
                                                         const SignatureOptions& options) {
  const std::size_t size = combo.size();
  const auto& blocks = signature_blocks(size);
  if (!std::is_sorted(combo.begin(), combo.end()) ||
      std::adjacent_find(combo.begin(), combo.end()) != combo.end())
    throw InputError("combination labels must be sorted and distinct");
  for (Label l : combo)
    if (l >= cloud.species_count() || cloud.count_of(l) < std::max<std::size_t>(options.min_species_size, 1))
      return std::nullopt;

  const LabelledPointCloud sub = cloud.restrict_to(combo);
  auto codomain = std::make_shared<const FilteredComplex>(chromatic_delcech(sub, 2, options.lift_scale));
  const double top = codomain->max_value();
  SignatureVector sig;
  sig.combination.assign(combo.begin(), combo.end());
  sig.cap = top > 0.0 ? options.cap_factor * top : options.cap_factor;

  std::map<std::string, const PersistenceDiagram*> by_name;
  std::vector<PersistenceDiagram> domain;
  SixPack pack;
  if (size == 1) {
    domain = diagrams(*codomain, 1);
    for (const auto& d : domain) by_name["domain_deg" + std::to_string(d.degree)] = &d;
  } else {
    const ChromaticMap f = gluing_map_of(codomain, static_cast<int>(size) - 1);
    pack = six_pack(f.map, 1);
    for (int p = 0; p <= 1; ++p) {
      by_name["kernel_deg" + std::to_string(p)] = &pack.kernel[p];
      by_name["image_deg" + std::to_string(p)] = &pack.image[p];
      by_name["cokernel_deg" + std::to_string(p)] = &pack.cokernel[p];
    }
  }
  for (const auto& b : blocks) {
    const auto st = diagram_statistics(*by_name.at(b.name()), b.layout, sig.cap);
    sig.values.insert(sig.values.end(), st.values.begin(), st.values.end());
  }
  return sig;
}

std::vector<std::vector<std::size_t>> enumerate_combinations(std::size_t n, int max_combo) {
  if (max_combo < 1 || max_combo > 3) throw InputError("max_combo must be in 1..3");
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(max_combo) && k <= n; ++k) {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      out.push_back(pick);
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

std::size_t feature_length(std::size_t universe_size, int max_combo) {
  std::size_t n = 0;
  for (const auto& c : enumerate_combinations(universe_size, max_combo)) n += signature_length(c.size());
  return n;
}

std::vector<ManifestEntry> feature_manifest(std::span<const std::string> universe, int max_combo) {
  std::vector<ManifestEntry> out;
  for (const auto& c : enumerate_combinations(universe.size(), max_combo)) {
    std::string combo;
    for (std::size_t i : c) combo += (combo.empty() ? "" : "+") + universe[i];
    for (const auto& b : signature_blocks(c.size()))
      for (const auto& stat : statistic_names(b.layout))
        out.push_back({out.size(), combo, b.name(), stat});
  }
  return out;
}

FeatureVector assemble_feature_vector(const LabelledPointCloud& cloud,
                                      std::span<const std::string> universe, int max_combo,
                                      const SignatureOptions& options) {
  FeatureVector fv;
  fv.manifest = feature_manifest(universe, max_combo);
  const auto& names = cloud.species_names();
  for (const auto& c : enumerate_combinations(universe.size(), max_combo)) {
    std::vector<Label> labels;
    for (std::size_t i : c) {
      auto it = std::find(names.begin(), names.end(), universe[i]);
      if (it == names.end()) break;
      labels.push_back(static_cast<Label>(it - names.begin()));
    }
    std::optional<SignatureVector> sig;
    if (labels.size() == c.size()) {
      std::sort(labels.begin(), labels.end());
      sig = signature_for_combination(cloud, labels, options);
    }
    if (sig) {
      fv.values.insert(fv.values.end(), sig->values.begin(), sig->values.end());
    } else {
      ++fv.absent_combinations;
      fv.values.insert(fv.values.end(), signature_length(c.size()), 0.0);
    }
  }
  return fv;
}

}  // namespace m2s2
