#include "m2s2/m2s2.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "m2s2/error.hpp"
#include "m2s2/pipeline.hpp"
#include "m2s2/signatures.hpp"
#include "m2s2/synth.hpp"

struct m2s2_cloud {
  m2s2::LabelledPointCloud cloud;
};

struct m2s2_config {
  m2s2::RunConfig config;
};

namespace {

thread_local std::string last_error;

m2s2_status fail(m2s2_status s, const char* what) {
  last_error = what;
  return s;
}

template <class F>
m2s2_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const m2s2::ParseError& e) {
    return fail(M2S2_ERR_PARSE, e.what());
  } catch (const m2s2::RefusalError& e) {
    return fail(M2S2_ERR_REFUSED, e.what());
  } catch (const m2s2::IoError& e) {
    return fail(M2S2_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(M2S2_ERR_IO, e.what());
  } catch (const m2s2::InputError& e) {
    return fail(M2S2_ERR_INPUT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(M2S2_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(M2S2_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(M2S2_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

m2s2_status null_arg() { return fail(M2S2_ERR_INPUT, "null argument"); }

std::vector<std::string> input_list(const char* const* inputs, size_t count) {
  std::vector<std::string> out;
  for (size_t i = 0; i < count; ++i) {
    if (!inputs[i]) throw m2s2::InputError("null input path");
    out.emplace_back(inputs[i]);
  }
  return out;
}

m2s2_status batch_status(const m2s2::BatchReport& report, m2s2_failure_fn on_failure, void* user) {
  if (on_failure)
    for (const auto& f : report.failures) on_failure(f.input.c_str(), f.message.c_str(), user);
  if (report.failures.empty()) return M2S2_OK;
  return fail(M2S2_ERR_PARTIAL, (std::to_string(report.failures.size()) + " input(s) failed").c_str());
}

}  // namespace

extern "C" {

const char* m2s2_last_error(void) { return last_error.c_str(); }

const char* m2s2_version(void) { return "0.1.0"; }

void m2s2_string_free(char* s) { std::free(s); }

void m2s2_doubles_free(double* v) { std::free(v); }

m2s2_status m2s2_config_create(m2s2_config** out) {
  if (!out) return null_arg();
  return guarded([&] {
    *out = new m2s2_config{};
    return M2S2_OK;
  });
}

void m2s2_config_destroy(m2s2_config* config) { delete config; }

m2s2_status m2s2_config_set_int(m2s2_config* config, const char* field, long long value) {
  if (!config || !field) return null_arg();
  return guarded([&] {
    auto& c = config->config;
    const std::string f = field;
    if (f == "max_combo") c.max_combo = static_cast<int>(value);
    else if (f == "max_degree") c.max_degree = static_cast<int>(value);
    else if (f == "min_species_size") {
      if (value < 1) throw m2s2::InputError("min_species_size must be positive");
      c.min_species_size = static_cast<std::size_t>(value);
    } else if (f == "worker_count") c.worker_count = static_cast<int>(value);
    else if (f == "all_degrees") c.all_degrees = value != 0;
    else throw m2s2::InputError("unknown integer field '" + f + "'");
    return M2S2_OK;
  });
}

m2s2_status m2s2_config_set_double(m2s2_config* config, const char* field, double value) {
  if (!config || !field) return null_arg();
  return guarded([&] {
    auto& c = config->config;
    const std::string f = field;
    if (f == "cap_factor") c.cap_factor = value;
    else if (f == "plot_threshold") c.plot_threshold = value;
    else if (f == "lift_scale") c.lift_scale = value;
    else throw m2s2::InputError("unknown real field '" + f + "'");
    return M2S2_OK;
  });
}

m2s2_status m2s2_config_set_species_universe(m2s2_config* config, const char* const* names, size_t count) {
  if (!config || (count && !names)) return null_arg();
  return guarded([&] {
    config->config.species_universe = input_list(names, count);
    return M2S2_OK;
  });
}

m2s2_status m2s2_config_validate(const m2s2_config* config) {
  if (!config) return null_arg();
  return guarded([&] {
    config->config.validate();
    return M2S2_OK;
  });
}

m2s2_status m2s2_config_hash(const m2s2_config* config, char** out) {
  if (!config || !out) return null_arg();
  return guarded([&] {
    *out = dup_string(config->config.hash());
    return M2S2_OK;
  });
}

m2s2_status m2s2_cloud_read_csv(const char* path, m2s2_cloud** out) {
  if (!path || !out) return null_arg();
  return guarded([&] {
    *out = new m2s2_cloud{m2s2::ingest_csv(path)};
    return M2S2_OK;
  });
}

m2s2_status m2s2_cloud_from_arrays(int dimension, const double* coords, const uint32_t* labels, size_t count,
                                   m2s2_cloud** out) {
  if (!out || (count && (!coords || !labels))) return null_arg();
  return guarded([&] {
    std::vector<double> c(coords, coords + count * static_cast<size_t>(dimension > 0 ? dimension : 0));
    *out = new m2s2_cloud{m2s2::LabelledPointCloud(dimension, std::move(c), std::span(labels, count))};
    return M2S2_OK;
  });
}

void m2s2_cloud_destroy(m2s2_cloud* cloud) { delete cloud; }

size_t m2s2_cloud_size(const m2s2_cloud* cloud) { return cloud ? cloud->cloud.size() : 0; }

int m2s2_cloud_dimension(const m2s2_cloud* cloud) { return cloud ? cloud->cloud.dimension() : 0; }

size_t m2s2_cloud_species_count(const m2s2_cloud* cloud) { return cloud ? cloud->cloud.species_count() : 0; }

const char* m2s2_cloud_species_name(const m2s2_cloud* cloud, size_t label) {
  if (!cloud || label >= cloud->cloud.species_count()) return nullptr;
  return cloud->cloud.species_names()[label].c_str();
}

m2s2_status m2s2_cloud_write_csv(const m2s2_cloud* cloud, const char* path) {
  if (!cloud || !path) return null_arg();
  return guarded([&] {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw m2s2::IoError(std::string("cannot write '") + path + "'");
    m2s2::write_csv(cloud->cloud, out);
    if (!out) throw m2s2::IoError(std::string("write failed for '") + path + "'");
    return M2S2_OK;
  });
}

void m2s2_synth_defaults(m2s2_synth_params* params) {
  if (!params) return;
  const m2s2::SynthParams d;
  params->radius = d.radius;
  params->points = d.points;
  params->noise = d.noise;
  params->fill_points = d.fill_points;
  params->colors = d.colors;
  params->seed = d.seed;
}

size_t m2s2_synth_fixture_count(void) { return m2s2::synth_fixture_names().size(); }

const char* m2s2_synth_fixture_name(size_t i) {
  const auto& names = m2s2::synth_fixture_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

m2s2_status m2s2_synth(const char* fixture, const m2s2_synth_params* params, m2s2_cloud** out) {
  if (!fixture || !out) return null_arg();
  return guarded([&] {
    m2s2::SynthParams p;
    if (params) {
      p.radius = params->radius;
      p.points = params->points;
      p.noise = params->noise;
      p.fill_points = params->fill_points;
      p.colors = params->colors;
      p.seed = params->seed;
    }
    *out = new m2s2_cloud{m2s2::synthesize(fixture, p)};
    return M2S2_OK;
  });
}

m2s2_status m2s2_signature_length(size_t universe_size, int max_combo, size_t* out) {
  if (!out) return null_arg();
  return guarded([&] {
    *out = m2s2::feature_length(universe_size, max_combo);
    return M2S2_OK;
  });
}

m2s2_status m2s2_feature_vector(const m2s2_cloud* cloud, const m2s2_config* config, double** values,
                                size_t* length) {
  if (!cloud || !config || !values || !length) return null_arg();
  return guarded([&] {
    const auto& c = config->config;
    c.validate();
    const auto& universe = c.species_universe.empty() ? cloud->cloud.species_names() : c.species_universe;
    const auto fv = m2s2::assemble_feature_vector(cloud->cloud, universe, c.max_combo, c.signature_options());
    auto* buf = static_cast<double*>(std::malloc(std::max<size_t>(fv.values.size(), 1) * sizeof(double)));
    if (!buf) throw std::bad_alloc();
    std::copy(fv.values.begin(), fv.values.end(), buf);
    *values = buf;
    *length = fv.values.size();
    return M2S2_OK;
  });
}

m2s2_status m2s2_diagrams_json(const m2s2_cloud* cloud, const m2s2_config* config, const char* input_name,
                               char** json) {
  if (!cloud || !config || !json) return null_arg();
  return guarded([&] {
    const auto records = m2s2::combination_diagrams(cloud->cloud, config->config);
    *json = dup_string(m2s2::diagrams_json(input_name ? input_name : "", "", cloud->cloud, records, config->config));
    return M2S2_OK;
  });
}

m2s2_status m2s2_run_diagrams(const char* const* inputs, size_t count, const char* out_dir,
                              const m2s2_config* config, m2s2_failure_fn on_failure, void* user) {
  if ((count && !inputs) || !out_dir || !config) return null_arg();
  return guarded([&] {
    const auto report = m2s2::run_diagrams(input_list(inputs, count), out_dir, config->config);
    return batch_status(report, on_failure, user);
  });
}

m2s2_status m2s2_run_signature(const char* const* inputs, size_t count, const char* matrix_path,
                               const char* manifest_path, const m2s2_config* config, m2s2_failure_fn on_failure,
                               void* user) {
  if ((count && !inputs) || !matrix_path || !manifest_path || !config) return null_arg();
  return guarded([&] {
    const auto report = m2s2::run_signature(input_list(inputs, count), matrix_path, manifest_path, config->config);
    return batch_status(report, on_failure, user);
  });
}

m2s2_status m2s2_plot(const char* diagram_json_path, const char* out_dir, const m2s2_config* config,
                      size_t* files_written) {
  if (!diagram_json_path || !out_dir || !config) return null_arg();
  return guarded([&] {
    const auto report = m2s2::run_plot(diagram_json_path, out_dir, config->config);
    if (files_written) *files_written = report.written.size();
    return M2S2_OK;
  });
}

}  // extern "C"
