#include "m2s2/sixpack.hpp"

#include <algorithm>
#include <limits>

#include "columns.hpp"
#include "m2s2/error.hpp"
#include "m2s2/geometry.hpp"

namespace m2s2 {

using detail::Column;

namespace {

std::vector<std::vector<Label>> k_subsets(std::size_t n, int k) {
  std::vector<std::vector<Label>> out;
  if (k < 1 || static_cast<std::size_t>(k) > n) return out;
  std::vector<Label> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[i] = static_cast<Label>(i);
  while (true) {
    out.push_back(pick);
    int i = k - 1;
    while (i >= 0 && pick[i] == n - static_cast<std::size_t>(k) + static_cast<std::size_t>(i)) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

void check_k(const FilteredComplex& codomain, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > codomain.label_count())
    throw InputError("k must be in 1.." + std::to_string(codomain.label_count()) + ", got " +
                     std::to_string(k));
}

}  // namespace

ChromaticMap gluing_map_of(std::shared_ptr<const FilteredComplex> codomain, int k) {
  check_k(*codomain, k);
  ChromaticMap out;
  out.descriptor.k = k;
  out.descriptor.color_subsets = k_subsets(codomain->label_count(), k);
  std::vector<std::shared_ptr<const FilteredComplex>> parts;
  std::vector<std::vector<Index>> parent_maps;
  for (const auto& colors : out.descriptor.color_subsets) {
    Subcomplex sub = subcomplex_by_colors(*codomain, colors);
    parent_maps.push_back(std::move(sub.simplex_map));
    parts.push_back(std::make_shared<const FilteredComplex>(std::move(sub.complex)));
  }
  DisjointUnion uni = disjoint_union(parts);
  out.map.domain = uni.complex;
  out.map.codomain = std::move(codomain);
  out.map.assignment.assign(uni.complex->size(), kUnpaired);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& inj = uni.injections[p].assignment;
    for (std::size_t i = 0; i < inj.size(); ++i) out.map.assignment[inj[i]] = parent_maps[p][i];
  }
  return out;
}

ChromaticMap inclusion_map_of(std::shared_ptr<const FilteredComplex> codomain, int k) {
  check_k(*codomain, k);
  ChromaticMap out;
  out.descriptor.k = k;
  out.descriptor.color_subsets = k_subsets(codomain->label_count(), k);
  Subcomplex sub = subcomplex_by_color_count(*codomain, static_cast<std::size_t>(k));
  out.map.domain = std::make_shared<const FilteredComplex>(std::move(sub.complex));
  out.map.codomain = std::move(codomain);
  out.map.assignment = std::move(sub.simplex_map);
  return out;
}

ChromaticMap k_chromatic_gluing_map(const LabelledPointCloud& cloud, int k, int max_dim,
                                    double lift_scale) {
  auto codomain = std::make_shared<const FilteredComplex>(chromatic_delcech(cloud, max_dim, lift_scale));
  return gluing_map_of(std::move(codomain), k);
}

ChromaticMap k_chromatic_inclusion_map(const LabelledPointCloud& cloud, int k, int max_dim,
                                       double lift_scale) {
  auto codomain = std::make_shared<const FilteredComplex>(chromatic_delcech(cloud, max_dim, lift_scale));
  return inclusion_map_of(std::move(codomain), k);
}

namespace {

// Persistence of the quotient A_t / B_t for a filtered space A with an
// adapted basis (element a born at column index a) and generators of a
// filtered subspace B. Generator coordinates are sets of basis births.
struct Generator {
  Index time;
  Column coords;
};

std::vector<DiagramPoint> quotient_bars(const std::vector<Index>& basis_births,
                                        std::vector<Generator> gens, const std::vector<double>& value,
                                        std::size_t row_count) {
  std::vector<Column> cols;
  cols.reserve(gens.size());
  for (auto& g : gens) cols.push_back(std::move(g.coords));
  const auto red = detail::reduce_columns(std::move(cols), row_count, false);
  std::vector<DiagramPoint> bars;
  for (std::size_t c = 0; c < red.r.size(); ++c)
    if (!red.r[c].empty()) bars.push_back({value[red.r[c].back()], value[gens[c].time]});
  for (Index a : basis_births)
    if (red.pivot_owner[a] == kUnpaired) bars.push_back({value[a], std::numeric_limits<double>::infinity()});
  return bars;
}

// Coordinates of x in a basis whose element with pivot r is basis[owner[r]];
// the reported coordinate is birth[owner].
Column coordinates(Column x, const std::vector<Index>& owner, const std::vector<Column>& basis,
                   const std::vector<Index>& birth) {
  Column coords;
  Column scratch;
  while (!x.empty()) {
    const Index o = owner[x.back()];
    if (o == kUnpaired) throw std::logic_error("chain outside the span of its basis");
    detail::add_column(x, basis[o], scratch);
    coords.push_back(birth[o]);
  }
  std::sort(coords.begin(), coords.end());
  return coords;
}

struct InclusionPack {
  std::vector<PersistenceDiagram> kernel, image, cokernel;
};

// K with the subcomplex L (mask) carrying the same values.
InclusionPack inclusion_pack(const FilteredComplex& k, const std::vector<char>& in_l, int max_degree) {
  const std::size_t n = k.size();
  const int top = max_degree + 1;
  std::vector<Column> d(n);
  std::vector<int> dim(n);
  std::vector<double> value(n);
  for (std::size_t j = 0; j < n; ++j) {
    dim[j] = k[j].dim();
    value[j] = k[j].value;
    if (dim[j] <= top) d[j] = k.facet_indices(j);
  }

  const auto rk = detail::reduce_columns(d, n, true);

  // L in its induced order, local indices.
  std::vector<Index> l_of_k(n, kUnpaired), k_of_l;
  for (std::size_t j = 0; j < n; ++j)
    if (in_l[j]) {
      l_of_k[j] = static_cast<Index>(k_of_l.size());
      k_of_l.push_back(static_cast<Index>(j));
    }
  std::vector<Column> dl(k_of_l.size());
  for (std::size_t a = 0; a < k_of_l.size(); ++a)
    for (Index r : d[k_of_l[a]]) dl[a].push_back(l_of_k[r]);
  auto rl = detail::reduce_columns(std::move(dl), k_of_l.size(), true);
  const auto to_k = [&](Column c) {
    for (Index& x : c) x = k_of_l[x];
    return c;
  };

  // Rows reordered with L first; a reduced column with its pivot in L lies in C(L).
  const Index l_size = static_cast<Index>(k_of_l.size());
  std::vector<Index> rank(n), unrank(n);
  Index next_l = 0, next_rest = l_size;
  for (std::size_t j = 0; j < n; ++j) {
    rank[j] = in_l[j] ? next_l++ : next_rest++;
    unrank[rank[j]] = static_cast<Index>(j);
  }
  for (auto& col : d) {
    for (Index& r : col) r = rank[r];
    std::sort(col.begin(), col.end());
  }
  const auto rim = detail::reduce_columns(std::move(d), n, false);
  const auto im_in_l = [&](std::size_t j) { return !rim.r[j].empty() && rim.r[j].back() < l_size; };

  // Cycle bases by pivot: z_i has largest entry i.
  std::vector<Column> zk(n), zl(n);
  std::vector<char> zk_has(n, 0), zl_has(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (dim[j] > max_degree) continue;
    if (rk.r[j].empty()) {
      const Index partner = rk.pivot_owner[j];
      zk[j] = partner == kUnpaired ? rk.v[j] : rk.r[partner];
      zk_has[j] = 1;
    }
  }
  for (std::size_t a = 0; a < k_of_l.size(); ++a) {
    const Index j = k_of_l[a];
    if (dim[j] > max_degree || !rl.r[a].empty()) continue;
    const Index partner = rl.pivot_owner[a];
    zl[j] = to_k(partner == kUnpaired ? rl.v[a] : rl.r[partner]);
    zl_has[j] = 1;
  }
  std::vector<Index> identity(n);
  for (std::size_t j = 0; j < n; ++j) identity[j] = static_cast<Index>(j);
  std::vector<Index> zk_owner(n, kUnpaired), zl_owner(n, kUnpaired);
  for (std::size_t j = 0; j < n; ++j) {
    if (zk_has[j]) zk_owner[j] = static_cast<Index>(j);
    if (zl_has[j]) zl_owner[j] = static_cast<Index>(j);
  }

  InclusionPack out;
  for (int p = 0; p <= max_degree; ++p) {
    // Kernel: (B(K) n C(L)) / B(L).
    {
      std::vector<Index> births;
      for (std::size_t j = 0; j < n; ++j)
        if (dim[j] == p + 1 && im_in_l(j)) births.push_back(static_cast<Index>(j));
      std::vector<Generator> gens;
      for (std::size_t a = 0; a < k_of_l.size(); ++a) {
        const Index j = k_of_l[a];
        if (dim[j] != p + 1 || rl.r[a].empty()) continue;
        Column x = to_k(rl.r[a]);
        for (Index& r : x) r = rank[r];
        std::sort(x.begin(), x.end());
        gens.push_back({j, coordinates(std::move(x), rim.pivot_owner, rim.r, identity)});
      }
      out.kernel.push_back(make_diagram(p, quotient_bars(births, std::move(gens), value, n)));
    }
    // Image: Z(L) / (B(K) n C(L)).
    {
      std::vector<Index> births;
      for (std::size_t j = 0; j < n; ++j)
        if (zl_has[j] && dim[j] == p) births.push_back(static_cast<Index>(j));
      std::vector<Generator> gens;
      for (std::size_t j = 0; j < n; ++j) {
        if (dim[j] != p + 1 || !im_in_l(j)) continue;
        Column x = rim.r[j];
        for (Index& r : x) r = unrank[r];
        std::sort(x.begin(), x.end());
        gens.push_back({static_cast<Index>(j), coordinates(std::move(x), zl_owner, zl, identity)});
      }
      out.image.push_back(make_diagram(p, quotient_bars(births, std::move(gens), value, n)));
    }
    // Cokernel: Z(K) / (B(K) + Z(L)).
    {
      std::vector<Index> births;
      for (std::size_t j = 0; j < n; ++j)
        if (zk_has[j] && dim[j] == p) births.push_back(static_cast<Index>(j));
      std::vector<Generator> gens;
      for (std::size_t j = 0; j < n; ++j) {
        if (dim[j] == p + 1 && !rk.r[j].empty())
          gens.push_back({static_cast<Index>(j), coordinates(rk.r[j], zk_owner, zk, identity)});
        else if (dim[j] == p && zl_has[j])
          gens.push_back({static_cast<Index>(j), coordinates(zl[j], zk_owner, zk, identity)});
      }
      out.cokernel.push_back(make_diagram(p, quotient_bars(births, std::move(gens), value, n)));
    }
  }
  return out;
}

}  // namespace

SixPack six_pack(const FilteredChainMap& f, int max_degree) {
  if (max_degree < 0) throw InputError("max_degree must be >= 0");
  f.validate();
  SixPack pack;
  pack.domain = diagrams(*f.domain, max_degree);
  pack.codomain = diagrams(*f.codomain, max_degree);

  std::shared_ptr<const FilteredComplex> k;
  std::vector<Index> assignment;
  if (f.is_filtered_inclusion()) {
    k = f.codomain;
    assignment = f.assignment;
  } else {
    MappingCylinder cyl = mapping_cylinder(f, max_degree + 1);
    k = cyl.complex;
    assignment = std::move(cyl.domain_inclusion.assignment);
  }
  std::vector<char> in_l(k->size(), 0);
  for (Index a : assignment)
    if (a != kUnpaired) in_l[a] = 1;
  InclusionPack ip = inclusion_pack(*k, in_l, max_degree);
  pack.kernel = std::move(ip.kernel);
  pack.image = std::move(ip.image);
  pack.cokernel = std::move(ip.cokernel);
  return pack;
}

}  // namespace m2s2
