// m2s2 command line front end. Talks to the library only through m2s2.h.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "m2s2/m2s2.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Flags {
  int max_combo = 3;
  int max_degree = 1;
  int min_species_size = 3;
  double cap_factor = 1.25;
  double plot_threshold = 0.05;
  double lift_scale = 1.0;
  int worker_count = 1;
  std::vector<std::string> species_universe;
  bool all_degrees = false;
};

void add_config_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--max_combo", f.max_combo, "largest species combination (1-3)")->capture_default_str();
  cmd->add_option("--max_degree", f.max_degree, "highest homology degree (0-2)")->capture_default_str();
  cmd->add_option("--min_species_size", f.min_species_size, "drop species with fewer points")
      ->capture_default_str();
  cmd->add_option("--cap_factor", f.cap_factor, "essential deaths are capped at this multiple of the max value")
      ->capture_default_str();
  cmd->add_option("--plot_threshold", f.plot_threshold, "omit plotted points with smaller persistence")
      ->capture_default_str();
  cmd->add_option("--lift_scale", f.lift_scale, "length of the color lift vectors")->capture_default_str();
  cmd->add_option("--worker_count", f.worker_count, "parallel workers")->capture_default_str();
  cmd->add_option("--species_universe", f.species_universe, "species names, comma separated")->delimiter(',');
  cmd->add_flag("--all_degrees", f.all_degrees, "emit every diagram type for every degree");
}

void report(const char* what) { std::fprintf(stderr, "m2s2: %s: %s\n", what, m2s2_last_error()); }

int exit_for(m2s2_status s) {
  switch (s) {
    case M2S2_OK: return kExitOk;
    case M2S2_ERR_INPUT: return kExitUsage;
    default: return kExitFailed;
  }
}

// Owns an m2s2_config built from the flags.
struct Config {
  m2s2_config* handle = nullptr;
  ~Config() { m2s2_config_destroy(handle); }

  m2s2_status build(const Flags& f) {
    m2s2_status s = m2s2_config_create(&handle);
    if (s != M2S2_OK) return s;
    const std::pair<const char*, long long> ints[] = {{"max_combo", f.max_combo},
                                                      {"max_degree", f.max_degree},
                                                      {"min_species_size", f.min_species_size},
                                                      {"worker_count", f.worker_count},
                                                      {"all_degrees", f.all_degrees ? 1 : 0}};
    for (const auto& [name, v] : ints)
      if ((s = m2s2_config_set_int(handle, name, v)) != M2S2_OK) return s;
    const std::pair<const char*, double> reals[] = {
        {"cap_factor", f.cap_factor}, {"plot_threshold", f.plot_threshold}, {"lift_scale", f.lift_scale}};
    for (const auto& [name, v] : reals)
      if ((s = m2s2_config_set_double(handle, name, v)) != M2S2_OK) return s;
    std::vector<const char*> names;
    for (const auto& n : f.species_universe) names.push_back(n.c_str());
    if ((s = m2s2_config_set_species_universe(handle, names.data(), names.size())) != M2S2_OK) return s;
    return m2s2_config_validate(handle);
  }
};

void print_failure(const char* input, const char* message, void*) {
  std::fprintf(stderr, "m2s2: %s: %s\n", input, message);
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

int finish_batch(m2s2_status s, const char* what) {
  if (s == M2S2_OK) return kExitOk;
  if (s == M2S2_ERR_PARTIAL) {
    std::fprintf(stderr, "m2s2: %s: %s\n", what, m2s2_last_error());
    return kExitFailed;
  }
  report(what);
  return exit_for(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiscale multi-species spatial signatures of labelled point clouds"};
  app.set_version_flag("--version", std::string(m2s2_version()));
  app.require_subcommand(1);

  Flags flags;
  std::vector<std::string> inputs;

  auto* diagrams = app.add_subcommand("diagrams", "write one diagram JSON per input CSV");
  std::string diagrams_out = ".";
  diagrams->add_option("inputs", inputs, "input CSV files")->required();
  diagrams->add_option("-o,--out", diagrams_out, "output directory")->capture_default_str();
  add_config_flags(diagrams, flags);

  auto* signature = app.add_subcommand("signature", "write the feature matrix and its manifest");
  std::string matrix_out = "signatures.csv";
  std::string manifest_out;
  signature->add_option("inputs", inputs, "input CSV files")->required();
  signature->add_option("-o,--out", matrix_out, "feature matrix CSV")->capture_default_str();
  signature->add_option("--manifest", manifest_out, "manifest CSV (default: <out stem>_manifest.csv)");
  add_config_flags(signature, flags);

  auto* plot = app.add_subcommand("plot", "render a diagram JSON as SVG, one file per combination");
  std::string plot_input;
  std::string plot_out = ".";
  plot->add_option("diagram_json", plot_input, "diagram document")->required();
  plot->add_option("-o,--out", plot_out, "output directory")->capture_default_str();
  add_config_flags(plot, flags);

  auto* synth = app.add_subcommand("synth", "write a synthetic labelled point cloud");
  m2s2_synth_params params;
  m2s2_synth_defaults(&params);
  std::string fixture;
  std::string synth_out;
  std::vector<std::string> fixtures;
  for (size_t i = 0; i < m2s2_synth_fixture_count(); ++i) fixtures.emplace_back(m2s2_synth_fixture_name(i));
  synth->add_option("fixture", fixture, "fixture name")->required()->check(CLI::IsMember(fixtures));
  synth->add_option("-o,--out", synth_out, "output CSV")->required();
  synth->add_option("--radius", params.radius, "circle radius")->capture_default_str();
  synth->add_option("--points", params.points, "points per circle")->capture_default_str();
  synth->add_option("--noise", params.noise, "Gaussian jitter std")->capture_default_str();
  synth->add_option("--fill_points", params.fill_points, "disk points (filled_circle)")->capture_default_str();
  synth->add_option("--colors", params.colors, "color count, 0 for the fixture default")->capture_default_str();
  synth->add_option("--seed", params.seed, "generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (synth->parsed()) {
    m2s2_cloud* cloud = nullptr;
    m2s2_status s = m2s2_synth(fixture.c_str(), &params, &cloud);
    if (s != M2S2_OK) {
      report("synth");
      return exit_for(s);
    }
    s = m2s2_cloud_write_csv(cloud, synth_out.c_str());
    m2s2_cloud_destroy(cloud);
    if (s != M2S2_OK) {
      report(synth_out.c_str());
      return kExitFailed;
    }
    return kExitOk;
  }

  Config config;
  if (m2s2_status s = config.build(flags); s != M2S2_OK) {
    report("configuration");
    return kExitUsage;
  }

  if (diagrams->parsed()) {
    const auto paths = c_strings(inputs);
    return finish_batch(
        m2s2_run_diagrams(paths.data(), paths.size(), diagrams_out.c_str(), config.handle, print_failure, nullptr),
        "diagrams");
  }

  if (signature->parsed()) {
    if (manifest_out.empty()) {
      const auto dot = matrix_out.find_last_of('.');
      const auto slash = matrix_out.find_last_of('/');
      const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
      manifest_out = (has_ext ? matrix_out.substr(0, dot) : matrix_out) + "_manifest.csv";
    }
    const auto paths = c_strings(inputs);
    return finish_batch(m2s2_run_signature(paths.data(), paths.size(), matrix_out.c_str(), manifest_out.c_str(),
                                           config.handle, print_failure, nullptr),
                        "signature");
  }

  size_t written = 0;
  const m2s2_status s = m2s2_plot(plot_input.c_str(), plot_out.c_str(), config.handle, &written);
  if (s != M2S2_OK) {
    report(plot_input.c_str());
    return exit_for(s) == kExitUsage ? kExitUsage : kExitFailed;
  }
  return kExitOk;
}
