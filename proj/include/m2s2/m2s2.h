/* C interface to the m2s2 library: labelled point clouds, diagram and
 * signature batches, plots and synthetic fixtures.
 *
 * Every function returns an m2s2_status; on failure m2s2_last_error() holds a
 * message for the calling thread. Objects are opaque handles released with
 * their *_destroy function. Strings and arrays handed out by the library are
 * released with m2s2_string_free / m2s2_doubles_free. */
#ifndef M2S2_H
#define M2S2_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(M2S2_BUILDING_LIBRARY)
#define M2S2_API __attribute__((visibility("default")))
#else
#define M2S2_API
#endif

typedef enum m2s2_status {
  M2S2_OK = 0,
  M2S2_ERR_INPUT = 1,    /* invalid argument or configuration */
  M2S2_ERR_PARSE = 2,    /* malformed file contents */
  M2S2_ERR_REFUSED = 3,  /* input exceeds a stated limit */
  M2S2_ERR_IO = 4,       /* file could not be read or written */
  M2S2_ERR_INTERNAL = 5,
  M2S2_ERR_PARTIAL = 6   /* batch finished, some inputs failed */
} m2s2_status;

typedef struct m2s2_cloud m2s2_cloud;
typedef struct m2s2_config m2s2_config;

/* Called once per failed input of a batch. */
typedef void (*m2s2_failure_fn)(const char* input, const char* message, void* user);

M2S2_API const char* m2s2_last_error(void);
M2S2_API const char* m2s2_version(void);
M2S2_API void m2s2_string_free(char* s);
M2S2_API void m2s2_doubles_free(double* v);

/* Configuration. Integer fields: max_combo, max_degree, min_species_size,
 * worker_count, all_degrees. Real fields: cap_factor, plot_threshold,
 * lift_scale. */
M2S2_API m2s2_status m2s2_config_create(m2s2_config** out);
M2S2_API void m2s2_config_destroy(m2s2_config* config);
M2S2_API m2s2_status m2s2_config_set_int(m2s2_config* config, const char* field, long long value);
M2S2_API m2s2_status m2s2_config_set_double(m2s2_config* config, const char* field, double value);
M2S2_API m2s2_status m2s2_config_set_species_universe(m2s2_config* config, const char* const* names,
                                                      size_t count);
M2S2_API m2s2_status m2s2_config_validate(const m2s2_config* config);
/* SHA-256 of the output-relevant configuration, 64 hex characters. */
M2S2_API m2s2_status m2s2_config_hash(const m2s2_config* config, char** out);

/* Point clouds. */
M2S2_API m2s2_status m2s2_cloud_read_csv(const char* path, m2s2_cloud** out);
M2S2_API m2s2_status m2s2_cloud_from_arrays(int dimension, const double* coords, const uint32_t* labels,
                                            size_t count, m2s2_cloud** out);
M2S2_API void m2s2_cloud_destroy(m2s2_cloud* cloud);
M2S2_API size_t m2s2_cloud_size(const m2s2_cloud* cloud);
M2S2_API int m2s2_cloud_dimension(const m2s2_cloud* cloud);
M2S2_API size_t m2s2_cloud_species_count(const m2s2_cloud* cloud);
/* Borrowed pointer, valid while the cloud lives. */
M2S2_API const char* m2s2_cloud_species_name(const m2s2_cloud* cloud, size_t label);
M2S2_API m2s2_status m2s2_cloud_write_csv(const m2s2_cloud* cloud, const char* path);

typedef struct m2s2_synth_params {
  double radius;
  int points;
  double noise;
  int fill_points;
  int colors; /* 0: fixture default */
  uint64_t seed;
} m2s2_synth_params;

M2S2_API void m2s2_synth_defaults(m2s2_synth_params* params);
M2S2_API size_t m2s2_synth_fixture_count(void);
M2S2_API const char* m2s2_synth_fixture_name(size_t i);
M2S2_API m2s2_status m2s2_synth(const char* fixture, const m2s2_synth_params* params, m2s2_cloud** out);

/* Length of an assembled feature vector. */
M2S2_API m2s2_status m2s2_signature_length(size_t universe_size, int max_combo, size_t* out);

/* Feature vector of one cloud over the configured species universe (the
 * cloud's own species when none is set). */
M2S2_API m2s2_status m2s2_feature_vector(const m2s2_cloud* cloud, const m2s2_config* config, double** values,
                                         size_t* length);

/* Diagram document (JSON) of one cloud. */
M2S2_API m2s2_status m2s2_diagrams_json(const m2s2_cloud* cloud, const m2s2_config* config,
                                        const char* input_name, char** json);

/* Batches over CSV files. */
M2S2_API m2s2_status m2s2_run_diagrams(const char* const* inputs, size_t count, const char* out_dir,
                                       const m2s2_config* config, m2s2_failure_fn on_failure, void* user);
M2S2_API m2s2_status m2s2_run_signature(const char* const* inputs, size_t count, const char* matrix_path,
                                        const char* manifest_path, const m2s2_config* config,
                                        m2s2_failure_fn on_failure, void* user);
M2S2_API m2s2_status m2s2_plot(const char* diagram_json_path, const char* out_dir, const m2s2_config* config,
                               size_t* files_written);

#ifdef __cplusplus
}
#endif

#endif
