#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "m2s2/point_cloud.hpp"
#include "m2s2/reduction.hpp"
#include "m2s2/signatures.hpp"

namespace m2s2 {

struct RunConfig {
  int max_combo = 3;
  int max_degree = 1;
  std::size_t min_species_size = 3;
  double cap_factor = 1.25;
  double plot_threshold = 0.05;
  double lift_scale = 1.0;
  int worker_count = 1;
  std::vector<std::string> species_universe;  // empty: union of the inputs' species
  bool all_degrees = false;

  /// Throws InputError on out-of-range fields.
  void validate() const;

  /// Stable JSON of every field that affects outputs (worker_count excluded).
  std::string canonical_json() const;
  std::string hash() const;

  SignatureOptions signature_options() const;
};

std::string sha256_hex(std::string_view data);

/// Sort order for species names: numeric when every name is an integer,
/// lexicographic otherwise.
void sort_species(std::vector<std::string>& names);

/// CSV with header x,y[,z],label. Labels are arbitrary strings.
LabelledPointCloud parse_csv(std::istream& in);
LabelledPointCloud ingest_csv(const std::string& path);
void write_csv(const LabelledPointCloud& cloud, std::ostream& out);

struct NamedDiagram {
  std::string name;  // e.g. "kernel_deg1"
  PersistenceDiagram diagram;
};

struct CombinationRecord {
  std::vector<Label> labels;
  std::vector<std::string> species;
  int k = 0;  // 0 for single species
  std::vector<std::vector<Label>> color_subsets;  // glued k-subsets, cloud labels
  std::vector<NamedDiagram> diagrams;
};

/// Combination records of one cloud, in canonical order, after dropping
/// species below min_species_size.
std::vector<CombinationRecord> combination_diagrams(const LabelledPointCloud& cloud,
                                                    const RunConfig& config);

/// One combination only; `labels` index the cloud's species.
CombinationRecord combination_record(const LabelledPointCloud& cloud, const std::vector<Label>& labels,
                                     const RunConfig& config);

/// Diagram document for one cloud.
std::string diagrams_json(const std::string& input_name, const std::string& input_hash,
                          const LabelledPointCloud& cloud, const std::vector<CombinationRecord>& records,
                          const RunConfig& config);

struct FileFailure {
  std::string input;
  std::string message;
};

struct BatchReport {
  std::vector<std::string> written;
  std::vector<FileFailure> failures;
};

/// Writes <out_dir>/<input stem>.json for each input.
BatchReport run_diagrams(const std::vector<std::string>& inputs, const std::string& out_dir,
                         const RunConfig& config);

/// Writes the feature matrix and its column manifest.
BatchReport run_signature(const std::vector<std::string>& inputs, const std::string& matrix_path,
                          const std::string& manifest_path, const RunConfig& config);

/// Reads a diagram document and writes one SVG per combination into out_dir.
BatchReport run_plot(const std::string& diagram_json_path, const std::string& out_dir,
                     const RunConfig& config);

/// Square persistence diagram panels, one per entry, with the diagonal and
/// essential points on the top border. Points with persistence below
/// `threshold` are omitted.
std::string render_svg(const std::string& title, const std::vector<NamedDiagram>& panels,
                       double threshold);

}  // namespace m2s2
