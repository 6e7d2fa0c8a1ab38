// Exercises the shared library through its C header only.
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "m2s2/m2s2.h"

namespace fs = std::filesystem;

namespace {

void collect(const char* input, const char* message, void* user) {
  static_cast<std::vector<std::string>*>(user)->push_back(std::string(input) + ": " + message);
}

}  // namespace

TEST_CASE("config round trip and errors") {
  m2s2_config* c = nullptr;
  REQUIRE(m2s2_config_create(&c) == M2S2_OK);
  CHECK(m2s2_config_set_int(c, "max_combo", 2) == M2S2_OK);
  CHECK(m2s2_config_set_double(c, "cap_factor", 1.5) == M2S2_OK);
  CHECK(m2s2_config_set_int(c, "bogus", 1) == M2S2_ERR_INPUT);
  CHECK(std::strstr(m2s2_last_error(), "bogus") != nullptr);
  CHECK(m2s2_config_set_int(c, "max_degree", 5) == M2S2_OK);
  CHECK(m2s2_config_validate(c) == M2S2_ERR_INPUT);
  CHECK(m2s2_config_set_int(c, "max_degree", 1) == M2S2_OK);
  CHECK(m2s2_config_validate(c) == M2S2_OK);
  char* hash = nullptr;
  REQUIRE(m2s2_config_hash(c, &hash) == M2S2_OK);
  CHECK(std::strlen(hash) == 64);
  m2s2_string_free(hash);
  CHECK(m2s2_config_create(nullptr) == M2S2_ERR_INPUT);
  m2s2_config_destroy(c);
}

TEST_CASE("cloud from arrays and signature") {
  const double coords[] = {0, 0, 1, 0, 0, 1, 5, 5, 6, 5, 5, 6, 1, 1};
  const uint32_t labels[] = {0, 0, 0, 1, 1, 1, 0};
  m2s2_cloud* cloud = nullptr;
  REQUIRE(m2s2_cloud_from_arrays(2, coords, labels, 7, &cloud) == M2S2_OK);
  CHECK(m2s2_cloud_size(cloud) == 7);
  CHECK(m2s2_cloud_dimension(cloud) == 2);
  CHECK(m2s2_cloud_species_count(cloud) == 2);
  CHECK(std::string(m2s2_cloud_species_name(cloud, 1)) == "1");
  CHECK(m2s2_cloud_species_name(cloud, 2) == nullptr);

  m2s2_config* c = nullptr;
  REQUIRE(m2s2_config_create(&c) == M2S2_OK);
  double* values = nullptr;
  size_t n = 0;
  REQUIRE(m2s2_feature_vector(cloud, c, &values, &n) == M2S2_OK);
  size_t expect = 0;
  REQUIRE(m2s2_signature_length(2, 3, &expect) == M2S2_OK);
  CHECK(n == expect);
  CHECK(n == 2 * 44 + 146);
  m2s2_doubles_free(values);

  char* json = nullptr;
  REQUIRE(m2s2_diagrams_json(cloud, c, "mem", &json) == M2S2_OK);
  CHECK(std::strstr(json, "\"combinations\"") != nullptr);
  m2s2_string_free(json);
  m2s2_config_destroy(c);
  m2s2_cloud_destroy(cloud);
}

TEST_CASE("synth, csv and batches") {
  const auto dir = fs::temp_directory_path() / "m2s2_capi";
  fs::remove_all(dir);
  CHECK(m2s2_synth_fixture_count() == 6);
  m2s2_synth_params p;
  m2s2_synth_defaults(&p);
  CHECK(p.points == 40);
  m2s2_cloud* cloud = nullptr;
  REQUIRE(m2s2_synth("trichromatic_arcs", &p, &cloud) == M2S2_OK);
  const auto csv = (dir / "arcs.csv").string();
  REQUIRE(m2s2_cloud_write_csv(cloud, csv.c_str()) == M2S2_OK);
  m2s2_cloud_destroy(cloud);
  CHECK(m2s2_synth("unknown", &p, &cloud) == M2S2_ERR_INPUT);

  m2s2_cloud* back = nullptr;
  REQUIRE(m2s2_cloud_read_csv(csv.c_str(), &back) == M2S2_OK);
  CHECK(m2s2_cloud_species_count(back) == 3);
  m2s2_cloud_destroy(back);
  CHECK(m2s2_cloud_read_csv((dir / "none.csv").string().c_str(), &back) == M2S2_ERR_IO);

  m2s2_config* c = nullptr;
  REQUIRE(m2s2_config_create(&c) == M2S2_OK);
  const std::string missing = (dir / "none.csv").string();
  const char* inputs[] = {csv.c_str(), missing.c_str()};
  std::vector<std::string> failures;
  CHECK(m2s2_run_diagrams(inputs, 2, (dir / "out").string().c_str(), c, collect, &failures) == M2S2_ERR_PARTIAL);
  CHECK(failures.size() == 1);
  CHECK(m2s2_run_diagrams(inputs, 1, (dir / "out").string().c_str(), c, collect, &failures) == M2S2_OK);
  CHECK(m2s2_run_signature(inputs, 1, (dir / "m.csv").string().c_str(), (dir / "man.csv").string().c_str(), c,
                           nullptr, nullptr) == M2S2_OK);
  size_t written = 0;
  CHECK(m2s2_plot((dir / "out" / "arcs.json").string().c_str(), (dir / "svg").string().c_str(), c, &written) ==
        M2S2_OK);
  CHECK(written == 7);
  m2s2_config_destroy(c);
  fs::remove_all(dir);
}
