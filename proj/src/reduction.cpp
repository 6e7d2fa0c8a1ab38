#include <algorithm>
#include <cmath>

#include "columns.hpp"
#include "m2s2/error.hpp"
#include "m2s2/reduction.hpp"

namespace m2s2 {

namespace detail {

void add_column(Column& target, const Column& source, Column& scratch) {
  scratch.clear();
  scratch.reserve(target.size() + source.size());
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

ReducedColumns reduce_columns(std::vector<Column> columns, std::size_t row_count, bool track_v) {
  ReducedColumns out;
  out.pivot_owner.assign(row_count, kUnpaired);
  if (track_v) {
    out.v.resize(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) out.v[j] = {static_cast<Index>(j)};
  }
  Column scratch;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    Column& col = columns[j];
    while (!col.empty()) {
      const Index owner = out.pivot_owner[col.back()];
      if (owner == kUnpaired) break;
      add_column(col, columns[owner], scratch);
      if (track_v) add_column(out.v[j], out.v[owner], scratch);
    }
    if (!col.empty()) out.pivot_owner[col.back()] = static_cast<Index>(j);
  }
  out.r = std::move(columns);
  return out;
}

}  // namespace detail

BoundaryMatrix boundary_matrix(const FilteredComplex& k) {
  BoundaryMatrix m;
  m.columns.resize(k.size());
  m.dims.resize(k.size());
  m.values.resize(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    m.columns[i] = k.facet_indices(i);
    m.dims[i] = k[i].dim();
    m.values[i] = k[i].value;
  }
  return m;
}

Pairing reduce(const BoundaryMatrix& m, bool use_clearing) {
  const std::size_t n = m.size();
  Pairing p;
  p.partner.assign(n, kUnpaired);
  p.negative.assign(n, 0);
  std::vector<detail::Column> cols(m.columns);
  std::vector<Index> owner(n, kUnpaired);
  detail::Column scratch;

  auto reduce_one = [&](std::size_t j) {
    auto& col = cols[j];
    while (!col.empty() && owner[col.back()] != kUnpaired)
      detail::add_column(col, cols[owner[col.back()]], scratch);
    if (col.empty()) return;
    const Index low = col.back();
    owner[low] = static_cast<Index>(j);
    p.partner[low] = static_cast<Index>(j);
    p.partner[j] = low;
    p.negative[j] = 1;
  };

  if (!use_clearing) {
    for (std::size_t j = 0; j < n; ++j) reduce_one(j);
    return p;
  }
  int top = 0;
  for (int d : m.dims) top = std::max(top, d);
  std::vector<char> cleared(n, 0);
  for (int d = top; d >= 0; --d) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m.dims[j] != d) continue;
      if (cleared[j]) {
        cols[j].clear();
        continue;
      }
      reduce_one(j);
      if (p.negative[j]) cleared[p.partner[j]] = 1;
    }
  }
  return p;
}

std::size_t PersistenceDiagram::persisting(double s, double t) const {
  std::size_t count = 0;
  for (const auto& pt : points)
    if (pt.birth <= s && pt.death > t) ++count;
  return count;
}

PersistenceDiagram make_diagram(int degree, std::vector<DiagramPoint> raw) {
  PersistenceDiagram d;
  d.degree = degree;
  for (const auto& pt : raw) {
    if (pt.death == pt.birth) {
      ++d.zero_persistence;
      continue;
    }
    d.points.push_back(pt);
  }
  std::sort(d.points.begin(), d.points.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
    return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
  });
  return d;
}

std::vector<PersistenceDiagram> diagrams(const FilteredComplex& k, int max_degree) {
  if (max_degree < 0) throw InputError("max_degree must be >= 0");
  const BoundaryMatrix m = boundary_matrix(k);
  const Pairing p = reduce(m, true);
  std::vector<std::vector<DiagramPoint>> raw(static_cast<std::size_t>(max_degree) + 1);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const int d = m.dims[i];
    if (d > max_degree || p.negative[i]) continue;
    const double death = p.essential(i) ? std::numeric_limits<double>::infinity() : m.values[p.partner[i]];
    raw[d].push_back({m.values[i], death});
  }
  std::vector<PersistenceDiagram> out;
  const int top = k.dimension();
  for (int d = 0; d <= max_degree; ++d) {
    out.push_back(make_diagram(d, std::move(raw[d])));
    out.back().truncated = d >= top && !out.back().empty();
  }
  return out;
}

}  // namespace m2s2
