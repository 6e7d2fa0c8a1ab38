#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "m2s2/error.hpp"
#include "m2s2/pipeline.hpp"
#include "m2s2/synth.hpp"

using namespace m2s2;
namespace fs = std::filesystem;

namespace {

LabelledPointCloud parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("m2s2_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

}  // namespace

TEST_CASE("csv with labels A B A") {
  const auto c = parse("x,y,label\n0,0,A\n1,0,B\n0,1,A\n");
  CHECK(c.size() == 3);
  CHECK(c.dimension() == 2);
  CHECK(c.species_names() == std::vector<std::string>{"A", "B"});
  CHECK(c.count_of(0) == 2);
}

TEST_CASE("csv with z column and reordered header") {
  const auto c = parse("label,z,y,x\nq,3,2,1\n");
  CHECK(c.dimension() == 3);
  CHECK(c.point(0)[0] == 1.0);
  CHECK(c.point(0)[2] == 3.0);
}

TEST_CASE("csv errors") {
  CHECK_THROWS_AS(parse(""), InputError);
  CHECK_THROWS_AS(parse("x,y,label\n"), InputError);
  try {
    parse("x,label\n0,A\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  try {
    parse("x,y,label\n0,0,A\n1,nan,B\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("x,y,label\n0,abc,A\n"), ParseError);
  CHECK_THROWS_AS(parse("x,y,w,label\n0,0,0,A\n"), ParseError);
}

TEST_CASE("row order does not matter") {
  const auto a = parse("x,y,label\n0,0,A\n1,0,B\n0,1,A\n2,2,B\n");
  const auto b = parse("x,y,label\n2,2,B\n0,1,A\n0,0,A\n1,0,B\n");
  CHECK(a.coords() == b.coords());
  CHECK(a.labels() == b.labels());
}

TEST_CASE("numeric species names sort numerically") {
  std::vector<std::string> v = {"10", "9", "1"};
  sort_species(v);
  CHECK(v == std::vector<std::string>{"1", "9", "10"});
  std::vector<std::string> w = {"b", "10", "a"};
  sort_species(w);
  CHECK(w == std::vector<std::string>{"10", "a", "b"});
}

TEST_CASE("config validation and hash") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.hash().size() == 64);
  RunConfig d = c;
  d.worker_count = 8;
  CHECK(d.hash() == c.hash());
  d.cap_factor = 2.0;
  CHECK(d.hash() != c.hash());
  d = c;
  d.max_degree = 3;
  CHECK_THROWS_AS(d.validate(), InputError);
  d = c;
  d.max_combo = 0;
  CHECK_THROWS_AS(d.validate(), InputError);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("three species give seven combination records") {
  SynthParams p;
  p.colors = 3;
  p.seed = 4;
  const auto cloud = synthesize("uniform_noise", p);
  const auto recs = combination_diagrams(cloud, RunConfig{});
  REQUIRE(recs.size() == 7);
  CHECK(recs[0].k == 0);
  CHECK(recs[0].diagrams.size() == 2);
  CHECK(recs[0].diagrams[0].name == "domain_deg0");
  CHECK(recs[3].k == 1);
  CHECK(recs[6].k == 2);
  std::vector<std::string> names;
  for (const auto& d : recs[6].diagrams) names.push_back(d.name);
  CHECK(names == std::vector<std::string>{"kernel_deg0", "kernel_deg1", "image_deg0", "image_deg1", "cokernel_deg1"});
  CHECK(recs[6].color_subsets.size() == 3);
  RunConfig all;
  all.all_degrees = true;
  CHECK(combination_record(cloud, {0, 1}, all).diagrams.size() == 10);
}

TEST_CASE("single species file gives domain diagrams only") {
  const auto cloud = synthesize("circle", SynthParams{});
  const auto recs = combination_diagrams(cloud, RunConfig{});
  REQUIRE(recs.size() == 1);
  for (const auto& d : recs[0].diagrams) CHECK(d.name.rfind("domain_", 0) == 0);
  const auto doc = nlohmann::json::parse(diagrams_json("circle.csv", "h", cloud, recs, RunConfig{}));
  CHECK(doc["combinations"][0]["diagrams"]["domain_deg0"].back()[1] == "inf");
  CHECK(doc["config_hash"] == RunConfig{}.hash());
}

TEST_CASE("svg markers follow the threshold") {
  const auto empty = render_svg("t", {{"d", make_diagram(1, {})}}, 0.05);
  CHECK(count(empty, "class=\"diag\"") == 1);
  CHECK(count(empty, "class=\"point") == 0);
  const auto one = render_svg("t", {{"d", make_diagram(1, {{0, 1}})}}, 0.05);
  CHECK(count(one, "<circle class=\"point\"") == 1);
  const auto none = render_svg("t", {{"d", make_diagram(1, {{0, 0.01}})}}, 0.05);
  CHECK(count(none, "class=\"point") == 0);
  const auto ess = render_svg("t", {{"a", make_diagram(0, {{0, INFINITY}, {0, 1}})}, {"b", make_diagram(1, {})}}, 0.05);
  CHECK(count(ess, "class=\"point essential\"") == 1);
  CHECK(count(ess, "class=\"panel\"") == 2);
}

TEST_CASE("batch keeps going past a bad file and is repeatable") {
  const auto dir = scratch("batch");
  SynthParams p;
  p.colors = 2;
  std::ostringstream good;
  write_csv(synthesize("dichromatic_arcs", p), good);
  spit(dir / "good.csv", good.str());
  spit(dir / "bad.csv", "x,y,label\n0,oops,A\n");
  const std::vector<std::string> inputs = {(dir / "good.csv").string(), (dir / "bad.csv").string(),
                                           (dir / "missing.csv").string()};
  RunConfig c;
  const auto r1 = run_diagrams(inputs, (dir / "out1").string(), c);
  CHECK(r1.written.size() == 1);
  CHECK(r1.failures.size() == 2);
  c.worker_count = 3;
  const auto r2 = run_diagrams(inputs, (dir / "out2").string(), c);
  CHECK(slurp(dir / "out1" / "good.json") == slurp(dir / "out2" / "good.json"));

  const auto s = run_signature(inputs, (dir / "m.csv").string(), (dir / "man.csv").string(), c);
  CHECK(s.failures.size() == 2);
  const auto matrix = slurp(dir / "m.csv");
  const auto manifest = slurp(dir / "man.csv");
  CHECK(count(matrix, "\n") == 2);
  CHECK(count(manifest, "\n") == 1 + feature_length(2, 3));

  const auto plots = run_plot((dir / "out1" / "good.json").string(), (dir / "svg").string(), c);
  CHECK(plots.written.size() == 3);
  spit(dir / "broken.json", "{\"combinations\": [");
  CHECK_THROWS_AS(run_plot((dir / "broken.json").string(), (dir / "svg").string(), c), ParseError);
  fs::remove_all(dir);
}

TEST_CASE("synth fixtures are seeded") {
  SynthParams p;
  p.seed = 11;
  for (const auto& name : synth_fixture_names()) {
    const auto a = synthesize(name, p);
    const auto b = synthesize(name, p);
    CHECK(a.coords() == b.coords());
    CHECK(a.labels() == b.labels());
  }
  CHECK_THROWS_AS(synthesize("nope", p), InputError);
}
