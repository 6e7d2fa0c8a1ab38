#include "m2s2/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "m2s2/error.hpp"
#include "m2s2/geometry.hpp"
#include "m2s2/sixpack.hpp"

namespace m2s2 {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_integer(std::string_view s, long long& out) {
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << data;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// Runs task(i) for i in [0, count) on `workers` threads; exceptions are
// captured per task.
template <class Task>
std::vector<std::exception_ptr> parallel_for(std::size_t count, int workers, Task task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || count <= 1) {
    work();
    return errors;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(work);
  pool.clear();
  return errors;
}

std::string message_of(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return ex.what();
  } catch (...) {
    return "unknown error";
  }
}

struct LoadedInput {
  std::string path;
  std::string hash;
  LabelledPointCloud cloud;
  std::optional<std::string> error;
};

std::vector<LoadedInput> load_inputs(const std::vector<std::string>& inputs, int workers) {
  std::vector<LoadedInput> loaded(inputs.size());
  auto errors = parallel_for(inputs.size(), workers, [&](std::size_t i) {
    loaded[i].path = inputs[i];
    const std::string bytes = read_file(inputs[i]);
    loaded[i].hash = sha256_hex(bytes);
    std::istringstream in(bytes);
    loaded[i].cloud = parse_csv(in);
  });
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    loaded[i].path = inputs[i];
    if (errors[i]) loaded[i].error = message_of(errors[i]);
  }
  return loaded;
}

std::vector<Label> kept_species(const LabelledPointCloud& cloud, std::size_t min_size) {
  std::vector<Label> kept;
  for (Label l = 0; l < cloud.species_count(); ++l)
    if (cloud.count_of(l) >= std::max<std::size_t>(min_size, 1)) kept.push_back(l);
  return kept;
}

ojson diagram_points(const PersistenceDiagram& d) {
  ojson arr = ojson::array();
  for (const auto& p : d.points) {
    if (p.essential())
      arr.push_back(ojson::array({p.birth, "inf"}));
    else
      arr.push_back(ojson::array({p.birth, p.death}));
  }
  return arr;
}

}  // namespace

void RunConfig::validate() const {
  if (max_combo < 1 || max_combo > 3) throw InputError("max_combo must be in 1..3");
  if (max_degree < 0 || max_degree > 2) throw InputError("max_degree must be in 0..2");
  if (min_species_size < 1) throw InputError("min_species_size must be positive");
  if (!(cap_factor > 0.0) || !std::isfinite(cap_factor)) throw InputError("cap_factor must be positive");
  if (!(plot_threshold >= 0.0) || !std::isfinite(plot_threshold))
    throw InputError("plot_threshold must be >= 0");
  if (!(lift_scale > 0.0) || !std::isfinite(lift_scale)) throw InputError("lift_scale must be positive");
  if (worker_count < 1) throw InputError("worker_count must be positive");
  auto u = species_universe;
  std::sort(u.begin(), u.end());
  if (std::adjacent_find(u.begin(), u.end()) != u.end())
    throw InputError("species_universe has duplicate names");
}

std::string RunConfig::canonical_json() const {
  ojson j;
  j["max_combo"] = max_combo;
  j["max_degree"] = max_degree;
  j["min_species_size"] = min_species_size;
  j["cap_factor"] = cap_factor;
  j["plot_threshold"] = plot_threshold;
  j["lift_scale"] = lift_scale;
  j["species_universe"] = species_universe;
  j["all_degrees"] = all_degrees;
  return j.dump();
}

std::string RunConfig::hash() const { return sha256_hex(canonical_json()); }

SignatureOptions RunConfig::signature_options() const {
  SignatureOptions o;
  o.cap_factor = cap_factor;
  o.lift_scale = lift_scale;
  o.min_species_size = min_species_size;
  return o;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

void sort_species(std::vector<std::string>& names) {
  long long tmp = 0;
  const bool numeric =
      std::all_of(names.begin(), names.end(), [&](const std::string& s) { return parse_integer(s, tmp); });
  if (numeric) {
    std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
      long long x = 0, y = 0;
      parse_integer(a, x);
      parse_integer(b, y);
      return x != y ? x < y : a < b;
    });
  } else {
    std::sort(names.begin(), names.end());
  }
}

LabelledPointCloud parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  int cx = -1, cy = -1, cz = -1, cl = -1;
  std::size_t fields = 0;
  struct Row {
    double xyz[3];
    std::string label;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    auto cells = split(view);
    if (!have_header) {
      have_header = true;
      fields = cells.size();
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto c = cells[i];
        int* slot = c == "x" ? &cx : c == "y" ? &cy : c == "z" ? &cz : c == "label" ? &cl : nullptr;
        if (!slot) throw ParseError("unexpected column '" + std::string(c) + "'", line_no);
        if (*slot >= 0) throw ParseError("duplicate column '" + std::string(c) + "'", line_no);
        *slot = static_cast<int>(i);
      }
      if (cx < 0) throw ParseError("missing column 'x'", line_no);
      if (cy < 0) throw ParseError("missing column 'y'", line_no);
      if (cl < 0) throw ParseError("missing column 'label'", line_no);
      continue;
    }
    if (cells.size() != fields)
      throw ParseError("expected " + std::to_string(fields) + " fields, found " + std::to_string(cells.size()),
                       line_no);
    Row row{{0, 0, 0}, std::string(cells[static_cast<std::size_t>(cl)])};
    if (row.label.empty()) throw ParseError("empty label", line_no);
    const int cols[3] = {cx, cy, cz};
    for (int k = 0; k < 3; ++k) {
      if (cols[k] < 0) continue;
      const auto cell = cells[static_cast<std::size_t>(cols[k])];
      double v = 0.0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw ParseError("row " + std::to_string(line_no) + ": non-numeric coordinate '" + std::string(cell) + "'",
                         line_no);
      if (!std::isfinite(v))
        throw ParseError("row " + std::to_string(line_no) + ": non-finite coordinate '" + std::string(cell) + "'",
                         line_no);
      row.xyz[k] = v;
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw InputError("empty file");
  if (rows.empty()) throw InputError("file has a header but no points");

  std::vector<std::string> names;
  for (const auto& r : rows) names.push_back(r.label);
  sort_species(names);
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::map<std::string, Label> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<Label>(i);

  // Canonical point order, so row order never reaches the outputs.
  const int dim = cz >= 0 ? 3 : 2;
  std::sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
    const Label la = index[a.label], lb = index[b.label];
    if (la != lb) return la < lb;
    return std::lexicographical_compare(a.xyz, a.xyz + dim, b.xyz, b.xyz + dim);
  });
  std::vector<double> coords;
  std::vector<Label> labels;
  for (const auto& r : rows) {
    coords.insert(coords.end(), r.xyz, r.xyz + dim);
    labels.push_back(index[r.label]);
  }
  return LabelledPointCloud(dim, std::move(coords), labels, std::move(names));
}

LabelledPointCloud ingest_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_csv(in);
}

void write_csv(const LabelledPointCloud& cloud, std::ostream& out) {
  const int d = cloud.dimension();
  out << (d == 3 ? "x,y,z,label\n" : "x,y,label\n");
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto p = cloud.point(i);
    for (int k = 0; k < d; ++k) out << format_double(p[k]) << ',';
    out << cloud.species_names()[cloud.label(i)] << '\n';
  }
}

CombinationRecord combination_record(const LabelledPointCloud& cloud, const std::vector<Label>& labels,
                                     const RunConfig& config) {
  CombinationRecord rec;
  rec.labels = labels;
  for (Label l : labels) rec.species.push_back(cloud.species_names().at(l));
  const std::size_t size = labels.size();
  rec.k = size == 1 ? 0 : static_cast<int>(size) - 1;
  const LabelledPointCloud sub = cloud.restrict_to(labels);
  auto codomain =
      std::make_shared<const FilteredComplex>(chromatic_delcech(sub, config.max_degree + 1, config.lift_scale));
  const int top = config.max_degree;
  auto add = [&](const char* kind, const std::vector<PersistenceDiagram>& ds, int p) {
    rec.diagrams.push_back({std::string(kind) + "_deg" + std::to_string(p), ds[static_cast<std::size_t>(p)]});
  };
  if (size == 1) {
    const auto ds = diagrams(*codomain, top);
    for (int p = 0; p <= top; ++p) add("domain", ds, p);
    return rec;
  }
  const ChromaticMap f = gluing_map_of(codomain, rec.k);
  for (const auto& subset : f.descriptor.color_subsets) {
    auto& mapped = rec.color_subsets.emplace_back();
    for (Label l : subset) mapped.push_back(labels[l]);
  }
  const SixPack pack = six_pack(f.map, top);
  if (config.all_degrees) {
    for (int p = 0; p <= top; ++p) add("kernel", pack.kernel, p);
    for (int p = 0; p <= top; ++p) add("image", pack.image, p);
    for (int p = 0; p <= top; ++p) add("cokernel", pack.cokernel, p);
    for (int p = 0; p <= top; ++p) add("domain", pack.domain, p);
    for (int p = 0; p <= top; ++p) add("codomain", pack.codomain, p);
  } else {
    for (int p = 0; p <= std::min(top, 1); ++p) add("kernel", pack.kernel, p);
    for (int p = 0; p <= std::min(top, 1); ++p) add("image", pack.image, p);
    if (top >= 1) add("cokernel", pack.cokernel, 1);
  }
  return rec;
}

std::vector<CombinationRecord> combination_diagrams(const LabelledPointCloud& cloud, const RunConfig& config) {
  config.validate();
  const auto kept = kept_species(cloud, config.min_species_size);
  std::vector<CombinationRecord> out;
  for (const auto& c : enumerate_combinations(kept.size(), config.max_combo)) {
    std::vector<Label> labels;
    for (std::size_t i : c) labels.push_back(kept[i]);
    out.push_back(combination_record(cloud, labels, config));
  }
  return out;
}

std::string diagrams_json(const std::string& input_name, const std::string& input_hash,
                          const LabelledPointCloud& cloud, const std::vector<CombinationRecord>& records,
                          const RunConfig& config) {
  ojson doc;
  doc["input"] = input_name;
  doc["config_hash"] = config.hash();
  doc["input_hash"] = input_hash;
  doc["config"] = ojson::parse(config.canonical_json());
  doc["species"] = cloud.species_names();
  doc["points"] = cloud.size();
  doc["duplicates_dropped"] = cloud.duplicates_dropped();
  ojson dropped = ojson::array();
  for (Label l = 0; l < cloud.species_count(); ++l)
    if (cloud.count_of(l) < config.min_species_size) dropped.push_back(cloud.species_names()[l]);
  doc["dropped_species"] = dropped;
  ojson combos = ojson::array();
  for (const auto& rec : records) {
    ojson c;
    c["labels"] = rec.labels;
    c["species"] = rec.species;
    c["k"] = rec.k;
    c["color_subsets"] = rec.color_subsets;
    ojson ds = ojson::object();
    ojson zero = ojson::object();
    for (const auto& nd : rec.diagrams) {
      ds[nd.name] = diagram_points(nd.diagram);
      zero[nd.name] = nd.diagram.zero_persistence;
    }
    c["diagrams"] = ds;
    c["zero_persistence"] = zero;
    combos.push_back(std::move(c));
  }
  doc["combinations"] = combos;
  return doc.dump(1) + "\n";
}

BatchReport run_diagrams(const std::vector<std::string>& inputs, const std::string& out_dir,
                         const RunConfig& config) {
  config.validate();
  BatchReport report;
  auto loaded = load_inputs(inputs, config.worker_count);

  struct Task {
    std::size_t file;
    std::vector<Label> labels;
  };
  std::vector<Task> tasks;
  std::vector<std::size_t> first_task(loaded.size() + 1, 0);
  for (std::size_t f = 0; f < loaded.size(); ++f) {
    first_task[f] = tasks.size();
    if (loaded[f].error) continue;
    const auto kept = kept_species(loaded[f].cloud, config.min_species_size);
    for (const auto& c : enumerate_combinations(kept.size(), config.max_combo)) {
      std::vector<Label> labels;
      for (std::size_t i : c) labels.push_back(kept[i]);
      tasks.push_back({f, std::move(labels)});
    }
  }
  first_task[loaded.size()] = tasks.size();

  std::vector<CombinationRecord> results(tasks.size());
  auto errors = parallel_for(tasks.size(), config.worker_count, [&](std::size_t i) {
    results[i] = combination_record(loaded[tasks[i].file].cloud, tasks[i].labels, config);
  });

  fs::create_directories(out_dir);
  std::map<std::string, std::size_t> stems;
  for (std::size_t f = 0; f < loaded.size(); ++f) {
    auto& in = loaded[f];
    if (!in.error)
      for (std::size_t t = first_task[f]; t < first_task[f + 1]; ++t)
        if (errors[t]) {
          in.error = message_of(errors[t]);
          break;
        }
    if (in.error) {
      report.failures.push_back({in.path, *in.error});
      continue;
    }
    std::string stem = fs::path(in.path).stem().string();
    if (const auto n = stems[stem]++; n > 0) stem += "_" + std::to_string(n);
    std::vector<CombinationRecord> recs(std::make_move_iterator(results.begin() + static_cast<std::ptrdiff_t>(first_task[f])),
                                        std::make_move_iterator(results.begin() + static_cast<std::ptrdiff_t>(first_task[f + 1])));
    const fs::path target = fs::path(out_dir) / (stem + ".json");
    try {
      write_file(target, diagrams_json(in.path, in.hash, in.cloud, recs, config));
      report.written.push_back(target.string());
    } catch (const std::exception& e) {
      report.failures.push_back({in.path, e.what()});
    }
  }
  return report;
}

BatchReport run_signature(const std::vector<std::string>& inputs, const std::string& matrix_path,
                          const std::string& manifest_path, const RunConfig& config) {
  config.validate();
  BatchReport report;
  auto loaded = load_inputs(inputs, config.worker_count);

  std::vector<std::string> universe = config.species_universe;
  if (universe.empty()) {
    for (const auto& in : loaded)
      if (!in.error) universe.insert(universe.end(), in.cloud.species_names().begin(), in.cloud.species_names().end());
    sort_species(universe);
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  }
  const auto combos = enumerate_combinations(universe.size(), config.max_combo);
  const auto manifest = feature_manifest(universe, config.max_combo);
  const SignatureOptions options = config.signature_options();

  std::vector<std::size_t> offset(combos.size() + 1, 0);
  for (std::size_t c = 0; c < combos.size(); ++c) offset[c + 1] = offset[c] + signature_length(combos[c].size());

  std::vector<std::vector<double>> rows(loaded.size());
  for (std::size_t f = 0; f < loaded.size(); ++f)
    if (!loaded[f].error) rows[f].assign(offset.back(), 0.0);

  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t f = 0; f < loaded.size(); ++f)
    if (!loaded[f].error)
      for (std::size_t c = 0; c < combos.size(); ++c) tasks.emplace_back(f, c);

  auto errors = parallel_for(tasks.size(), config.worker_count, [&](std::size_t i) {
    const auto [f, c] = tasks[i];
    const auto& cloud = loaded[f].cloud;
    const auto& names = cloud.species_names();
    std::vector<Label> labels;
    for (std::size_t u : combos[c]) {
      auto it = std::find(names.begin(), names.end(), universe[u]);
      if (it == names.end()) return;
      labels.push_back(static_cast<Label>(it - names.begin()));
    }
    std::sort(labels.begin(), labels.end());
    auto sig = signature_for_combination(cloud, labels, options);
    if (sig) std::copy(sig->values.begin(), sig->values.end(), rows[f].begin() + static_cast<std::ptrdiff_t>(offset[c]));
  });
  for (std::size_t i = 0; i < tasks.size(); ++i)
    if (errors[i] && !loaded[tasks[i].first].error) loaded[tasks[i].first].error = message_of(errors[i]);

  std::ostringstream matrix;
  matrix << "input";
  for (const auto& m : manifest) matrix << ',' << m.combo << '/' << m.diagram << '/' << m.statistic;
  matrix << '\n';
  for (std::size_t f = 0; f < loaded.size(); ++f) {
    if (loaded[f].error) {
      report.failures.push_back({loaded[f].path, *loaded[f].error});
      continue;
    }
    matrix << loaded[f].path;
    for (double v : rows[f]) matrix << ',' << format_double(v);
    matrix << '\n';
  }
  std::ostringstream man;
  man << "column_index,combo,diagram,statistic\n";
  for (const auto& m : manifest) man << m.column << ',' << m.combo << ',' << m.diagram << ',' << m.statistic << '\n';

  for (const auto& path : {fs::path(matrix_path), fs::path(manifest_path)})
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file(matrix_path, matrix.str());
  write_file(manifest_path, man.str());
  report.written = {matrix_path, manifest_path};
  return report;
}

BatchReport run_plot(const std::string& diagram_json_path, const std::string& out_dir, const RunConfig& config) {
  config.validate();
  ojson doc;
  try {
    doc = ojson::parse(read_file(diagram_json_path));
  } catch (const ojson::parse_error& e) {
    throw ParseError(std::string("malformed diagram JSON: ") + e.what());
  }
  BatchReport report;
  try {
    fs::create_directories(out_dir);
    const std::string stem = fs::path(diagram_json_path).stem().string();
    for (const auto& combo : doc.at("combinations")) {
      std::vector<NamedDiagram> panels;
      for (const auto& [name, pts] : combo.at("diagrams").items()) {
        NamedDiagram nd{name, {}};
        for (const auto& pt : pts) {
          if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number()) throw ParseError("malformed point in " + name);
          DiagramPoint p;
          p.birth = pt[0].get<double>();
          if (pt[1].is_string()) {
            if (pt[1].get<std::string>() != "inf") throw ParseError("malformed death in " + name);
          } else if (pt[1].is_number()) {
            p.death = pt[1].get<double>();
          } else {
            throw ParseError("malformed death in " + name);
          }
          nd.diagram.points.push_back(p);
        }
        panels.push_back(std::move(nd));
      }
      std::string title, suffix;
      for (const auto& s : combo.at("species")) title += (title.empty() ? "" : "+") + s.get<std::string>();
      for (const auto& l : combo.at("labels"))
        suffix += (suffix.empty() ? "" : "-") + std::to_string(l.get<long long>());
      const fs::path target = fs::path(out_dir) / (stem + "_" + suffix + ".svg");
      write_file(target, render_svg(title, panels, config.plot_threshold));
      report.written.push_back(target.string());
    }
  } catch (const ojson::exception& e) {
    throw ParseError(std::string("malformed diagram JSON: ") + e.what());
  }
  return report;
}

}  // namespace m2s2
