#include "m2s2/complex.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "m2s2/error.hpp"

namespace m2s2 {

bool filtration_less(const Simplex& a, const Simplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
  return a.vertices < b.vertices;
}

std::size_t VertexListHash::operator()(const std::vector<Index>& v) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull ^ v.size();
  for (Index x : v) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

FilteredComplex FilteredComplex::build(std::vector<Simplex> simplices,
                                       std::vector<Label> vertex_labels,
                                       std::size_t label_count) {
  FilteredComplex k;
  Label max_label = 0;
  for (Label l : vertex_labels) max_label = std::max(max_label, l);
  k.label_count_ = std::max<std::size_t>(label_count, vertex_labels.empty() ? 0 : max_label + 1);
  if (k.label_count_ > kMaxLabels) throw InputError("too many labels for a complex");
  k.vertex_labels_ = std::move(vertex_labels);

  for (const Simplex& s : simplices) {
    if (s.vertices.empty()) throw InputError("empty simplex");
    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
      if (s.vertices[i] >= k.vertex_labels_.size()) throw InputError("vertex id out of range");
      if (i > 0 && s.vertices[i - 1] >= s.vertices[i])
        throw InputError("simplex vertices must be strictly increasing");
    }
    if (!(s.value >= 0.0)) throw InputError("filtration values must be >= 0");
  }
  std::sort(simplices.begin(), simplices.end(), filtration_less);
  k.simplices_ = std::move(simplices);
  k.lookup_.reserve(k.simplices_.size());
  for (std::size_t i = 0; i < k.simplices_.size(); ++i) {
    if (!k.lookup_.emplace(k.simplices_[i].vertices, static_cast<Index>(i)).second)
      throw InputError("duplicate simplex");
  }

  // Face closure and monotonicity, checked facet by facet.
  std::vector<Index> facet;
  for (const Simplex& s : k.simplices_) {
    if (s.vertices.size() < 2) continue;
    for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
      facet.clear();
      for (std::size_t j = 0; j < s.vertices.size(); ++j)
        if (j != drop) facet.push_back(s.vertices[j]);
      auto it = k.lookup_.find(facet);
      if (it == k.lookup_.end()) throw InputError("complex is not closed under faces");
      if (k.simplices_[it->second].value > s.value)
        throw InputError("filtration values are not monotone");
    }
  }
  return k;
}

int FilteredComplex::dimension() const noexcept {
  int d = -1;
  for (const Simplex& s : simplices_) d = std::max(d, s.dim());
  return d;
}

std::optional<Index> FilteredComplex::find(const std::vector<Index>& vertices) const {
  auto it = lookup_.find(vertices);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

ColorMask FilteredComplex::colors(std::size_t i) const {
  ColorMask m = 0;
  for (Index v : simplices_[i].vertices) m |= ColorMask{1} << vertex_labels_[v];
  return m;
}

double FilteredComplex::max_value() const noexcept {
  return simplices_.empty() ? 0.0 : simplices_.back().value;
}

std::vector<Index> FilteredComplex::facet_indices(std::size_t i) const {
  const auto& verts = simplices_[i].vertices;
  std::vector<Index> out;
  if (verts.size() < 2) return out;
  out.reserve(verts.size());
  std::vector<Index> facet(verts.size() - 1);
  for (std::size_t drop = 0; drop < verts.size(); ++drop) {
    std::size_t w = 0;
    for (std::size_t j = 0; j < verts.size(); ++j)
      if (j != drop) facet[w++] = verts[j];
    out.push_back(lookup_.at(facet));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Index> FilteredChainMap::vertex_map() const {
  std::vector<Index> vmap(domain->vertex_count(), Index(-1));
  for (std::size_t i = 0; i < domain->size(); ++i) {
    const Simplex& s = (*domain)[i];
    if (s.dim() != 0) continue;
    const Simplex& t = (*codomain)[assignment[i]];
    if (t.dim() == 0) vmap[s.vertices[0]] = t.vertices[0];
  }
  return vmap;
}

void FilteredChainMap::validate() const {
  if (!domain || !codomain) throw InputError("chain map is missing a complex");
  if (assignment.size() != domain->size())
    throw InputError("chain map assignment size does not match its domain");
  auto vmap = vertex_map();
  std::vector<Index> image;
  for (std::size_t i = 0; i < domain->size(); ++i) {
    if (assignment[i] >= codomain->size()) throw InputError("chain map target out of range");
    const Simplex& s = (*domain)[i];
    const Simplex& t = (*codomain)[assignment[i]];
    if (s.dim() != t.dim()) throw InputError("chain map is not dimension preserving");
    image.clear();
    for (Index v : s.vertices) {
      if (vmap[v] == Index(-1)) throw InputError("chain map leaves a vertex unmapped");
      image.push_back(vmap[v]);
    }
    std::sort(image.begin(), image.end());
    if (image != t.vertices) throw InputError("chain map does not commute with faces");
    if (t.value > s.value) throw InputError("chain map is not filtration compatible");
  }
}

bool FilteredChainMap::is_filtered_inclusion() const {
  std::vector<char> hit(codomain->size(), 0);
  for (std::size_t i = 0; i < domain->size(); ++i) {
    Index j = assignment[i];
    if (hit[j]) return false;
    hit[j] = 1;
    if ((*codomain)[j].value != (*domain)[i].value) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

Subcomplex induced(const FilteredComplex& k, const std::vector<char>& keep_vertex) {
  Subcomplex out;
  std::vector<Index> renumber(k.vertex_count(), Index(-1));
  std::vector<Label> labels;
  for (Index v = 0; v < k.vertex_count(); ++v) {
    if (!keep_vertex[v]) continue;
    renumber[v] = static_cast<Index>(out.vertex_map.size());
    out.vertex_map.push_back(v);
    labels.push_back(k.vertex_labels()[v]);
  }
  std::vector<Simplex> kept;
  std::vector<Index> parent;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const Simplex& s = k[i];
    bool inside = std::all_of(s.vertices.begin(), s.vertices.end(),
                              [&](Index v) { return keep_vertex[v] != 0; });
    if (!inside) continue;
    Simplex t{{}, s.value};
    for (Index v : s.vertices) t.vertices.push_back(renumber[v]);
    kept.push_back(std::move(t));
    parent.push_back(static_cast<Index>(i));
  }
  // Renumbering is monotone, so the parent's order is already the total order.
  out.complex = FilteredComplex::build(std::move(kept), std::move(labels), k.label_count());
  out.simplex_map.resize(out.complex.size());
  for (std::size_t i = 0; i < out.complex.size(); ++i) out.simplex_map[i] = parent[i];
  return out;
}

}  // namespace

Subcomplex subcomplex_by_colors(const FilteredComplex& k, std::span<const Label> colors) {
  if (colors.empty()) throw InputError("color set must be nonempty");
  ColorMask mask = 0;
  for (Label l : colors) {
    if (l >= kMaxLabels) throw InputError("label " + std::to_string(l) + " out of range");
    mask |= ColorMask{1} << l;
  }
  std::vector<char> keep(k.vertex_count());
  for (Index v = 0; v < k.vertex_count(); ++v)
    keep[v] = (mask >> k.vertex_labels()[v]) & 1u;
  return induced(k, keep);
}

Subcomplex subcomplex_by_color_count(const FilteredComplex& k, std::size_t max_colors) {
  Subcomplex out;
  out.vertex_map.resize(k.vertex_count());
  for (Index v = 0; v < k.vertex_count(); ++v) out.vertex_map[v] = v;
  std::vector<Simplex> kept;
  std::vector<Index> parent;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (static_cast<std::size_t>(std::popcount(k.colors(i))) > max_colors) continue;
    kept.push_back(k[i]);
    parent.push_back(static_cast<Index>(i));
  }
  out.complex = FilteredComplex::build(std::move(kept), k.vertex_labels(), k.label_count());
  out.simplex_map = std::move(parent);
  return out;
}

DisjointUnion disjoint_union(std::span<const std::shared_ptr<const FilteredComplex>> parts) {
  if (parts.empty()) throw InputError("disjoint union needs at least one part");
  DisjointUnion out;
  std::vector<Simplex> all;
  std::vector<Label> labels;
  std::size_t label_count = 0;
  Index offset = 0;
  for (const auto& part : parts) {
    out.vertex_offsets.push_back(offset);
    for (const Simplex& s : *part) {
      Simplex t{s.vertices, s.value};
      for (Index& v : t.vertices) v += offset;
      all.push_back(std::move(t));
    }
    labels.insert(labels.end(), part->vertex_labels().begin(), part->vertex_labels().end());
    label_count = std::max(label_count, part->label_count());
    offset += static_cast<Index>(part->vertex_count());
  }
  auto uni = std::make_shared<const FilteredComplex>(
      FilteredComplex::build(std::move(all), std::move(labels), label_count));
  out.complex = uni;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    FilteredChainMap inj{parts[p], uni, {}};
    inj.assignment.reserve(parts[p]->size());
    std::vector<Index> shifted;
    for (const Simplex& s : *parts[p]) {
      shifted = s.vertices;
      for (Index& v : shifted) v += out.vertex_offsets[p];
      inj.assignment.push_back(*uni->find(shifted));
    }
    out.injections.push_back(std::move(inj));
  }
  return out;
}

MappingCylinder mapping_cylinder(const FilteredChainMap& f, int max_dim) {
  f.validate();
  const FilteredComplex& dom = *f.domain;
  const FilteredComplex& cod = *f.codomain;
  const Index offset = static_cast<Index>(dom.vertex_count());
  const auto vmap = f.vertex_map();
  const auto fits = [&](std::size_t n_vertices) {
    return max_dim < 0 || static_cast<int>(n_vertices) - 1 <= max_dim;
  };

  std::unordered_map<std::vector<Index>, double, VertexListHash> values;
  const auto offer = [&](std::vector<Index> verts, double value) {
    auto [it, fresh] = values.emplace(std::move(verts), value);
    if (!fresh && value < it->second) it->second = value;
  };
  for (const Simplex& s : dom)
    if (fits(s.vertices.size())) offer(s.vertices, s.value);
  for (const Simplex& s : cod) {
    if (!fits(s.vertices.size())) continue;
    std::vector<Index> v = s.vertices;
    for (Index& x : v) x += offset;
    offer(std::move(v), s.value);
  }

  // Mixed simplices A u f(B) where A is a prefix and B a suffix of a domain
  // simplex s = A u B (sharing at most the split vertex); value(s) is the
  // earliest scale at which the cylinder of f_t contains them.
  std::vector<Index> verts;
  for (const Simplex& s : dom) {
    const std::size_t p = s.vertices.size();
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t suffix_start : {i, i + 1}) {
        if (suffix_start >= p) continue;
        const std::size_t n = (i + 1) + (p - suffix_start);
        if (!fits(n)) continue;
        verts.assign(s.vertices.begin(), s.vertices.begin() + static_cast<std::ptrdiff_t>(i + 1));
        const std::size_t mark = verts.size();
        for (std::size_t j = suffix_start; j < p; ++j) verts.push_back(vmap[s.vertices[j]] + offset);
        std::sort(verts.begin() + static_cast<std::ptrdiff_t>(mark), verts.end());
        offer(verts, s.value);
      }
    }
  }

  std::vector<Simplex> simplices;
  simplices.reserve(values.size());
  for (auto& [v, value] : values) simplices.push_back(Simplex{v, value});
  std::vector<Label> labels = dom.vertex_labels();
  labels.insert(labels.end(), cod.vertex_labels().begin(), cod.vertex_labels().end());
  auto cyl = std::make_shared<const FilteredComplex>(FilteredComplex::build(
      std::move(simplices), std::move(labels), std::max(dom.label_count(), cod.label_count())));

  MappingCylinder out;
  out.complex = cyl;
  out.codomain_vertex_offset = offset;
  out.domain_inclusion.domain = f.domain;
  out.domain_inclusion.codomain = cyl;
  out.domain_inclusion.assignment.reserve(dom.size());
  for (const Simplex& s : dom) {
    auto idx = cyl->find(s.vertices);
    // Truncation can drop high-dimensional domain simplices; those have no image.
    out.domain_inclusion.assignment.push_back(idx ? *idx : Index(-1));
  }
  return out;
}

}  // namespace m2s2
