#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "m2s2/error.hpp"
#include "m2s2/geometry.hpp"
#include "predicates.hpp"

namespace m2s2 {

using detail::PointView;

namespace {

constexpr Index kInfinite = std::numeric_limits<Index>::max();
constexpr int kMaxCellSize = kMaxDelaunayDim + 1;

// Points kept after dropping exact duplicates, a maximal affinely independent
// subset, and coordinate axes on which that subset is nondegenerate.
struct Frame {
  std::vector<Index> points;
  std::vector<Index> basis;
  std::vector<int> axes;
  int dim() const { return static_cast<int>(basis.size()) - 1; }
};

Frame make_frame(const PointView& pv, std::size_t n) {
  Frame fr;
  std::unordered_set<std::vector<double>, decltype([](const std::vector<double>& v) {
                       std::size_t h = v.size();
                       for (double x : v) h = h * 1000003u ^ std::hash<double>{}(x);
                       return h;
                     })>
      seen;
  for (Index i = 0; i < n; ++i) {
    std::vector<double> key(pv[i], pv[i] + pv.dim);
    for (double& x : key)
      if (x == 0.0) x = 0.0;
    if (seen.insert(std::move(key)).second) fr.points.push_back(i);
  }
  if (fr.points.empty()) return fr;
  fr.basis.push_back(fr.points[0]);
  for (std::size_t k = 1; k < fr.points.size(); ++k) {
    if (static_cast<int>(fr.basis.size()) == pv.dim + 1) break;
    if (detail::affinely_independent(pv, fr.basis, fr.points[k])) fr.basis.push_back(fr.points[k]);
  }
  const int m = fr.dim();
  // First m-subset of axes (lexicographic) on which the basis is full rank.
  std::vector<int> pick(static_cast<std::size_t>(m));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    if (m == 0 || detail::orientation(pv, fr.basis, pick) != 0) {
      fr.axes = pick;
      break;
    }
    int i = m - 1;
    while (i >= 0 && pick[i] == pv.dim - m + i) --i;
    if (i < 0) throw std::logic_error("no nondegenerate projection for an independent basis");
    ++pick[i];
    for (int j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  return fr;
}

// Axes for a facet of m points within the (m-1)-dimensional projection.
std::vector<int> facet_axes(const PointView& pv, std::span<const Index> facet,
                            std::span<const int> axes) {
  std::vector<int> sub;
  for (std::size_t drop = 0; drop < axes.size(); ++drop) {
    sub.clear();
    for (std::size_t j = 0; j < axes.size(); ++j)
      if (j != drop) sub.push_back(axes[j]);
    if (detail::orientation(pv, facet, sub) != 0) return sub;
  }
  throw std::logic_error("degenerate hull facet");
}

struct Cell {
  std::array<Index, kMaxCellSize> v{};
  std::array<int, kMaxCellSize> nb{};
  bool alive = true;
  mutable std::int8_t orient = 0;
};

class Triangulator {
 public:
  Triangulator(const PointView& pv, const Frame& frame)
      : pv_(pv), m_(frame.dim()), axes_(frame.axes), hint_(frame.points.empty() ? 0 : frame.points.back() + 1, -1) {
    Cell first;
    for (int i = 0; i <= m_; ++i) first.v[i] = frame.basis[i];
    std::vector<int> ids{add(first)};
    for (int i = 0; i <= m_; ++i) {
      Cell inf = first;
      inf.v[i] = kInfinite;
      ids.push_back(add(inf));
    }
    link(ids, kInfinite, true);
    for (Index b : frame.basis) {
      hint_[b] = ids[0];
      inserted_.push_back(b);
    }
  }

  void insert(Index q) {
    const int seed = find_seed(q);
    ++stamp_;
    std::vector<int> conflict{seed};
    mark(seed, kConflict);
    std::vector<std::pair<int, int>> boundary;
    for (std::size_t at = 0; at < conflict.size(); ++at) {
      const int c = conflict[at];
      for (int i = 0; i <= m_; ++i) {
        const int o = cells_[c].nb[i];
        const int st = state(o);
        if (st == kConflict) continue;
        if (st == 0) {
          if (in_conflict(o, q)) {
            mark(o, kConflict);
            conflict.push_back(o);
            continue;
          }
          mark(o, kClear);
        }
        boundary.emplace_back(c, i);
      }
    }

    std::vector<int> fresh;
    fresh.reserve(boundary.size());
    for (auto [c, i] : boundary) {
      Cell nc = cells_[c];
      nc.v[i] = q;
      const int o = nc.nb[i];
      const int id = add(nc);
      Cell& out = cells_[o];
      for (int j = 0; j <= m_; ++j)
        if (out.nb[j] == c) out.nb[j] = id;
      if (std::find(out.v.begin(), out.v.begin() + m_ + 1, kInfinite) != out.v.begin() + m_ + 1) out.orient = 0;
      fresh.push_back(id);
    }
    link(fresh, q, false);
    for (int c : conflict) {
      cells_[c].alive = false;
      free_.push_back(c);
    }
    for (int id : fresh)
      for (int j = 0; j <= m_; ++j)
        if (cells_[id].v[j] != kInfinite) hint_[cells_[id].v[j]] = id;
    inserted_.push_back(q);
  }

  std::vector<std::vector<Index>> finite_cells() const {
    std::vector<std::vector<Index>> out;
    for (const Cell& c : cells_) {
      if (!c.alive) continue;
      std::vector<Index> v(c.v.begin(), c.v.begin() + m_ + 1);
      if (std::find(v.begin(), v.end(), kInfinite) != v.end()) continue;
      std::sort(v.begin(), v.end());
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  static constexpr int kConflict = 1;
  static constexpr int kClear = 2;

  int add(const Cell& c) {
    if (!free_.empty()) {
      int id = free_.back();
      free_.pop_back();
      cells_[id] = c;
      cells_[id].alive = true;
      cells_[id].orient = 0;
      return id;
    }
    cells_.push_back(c);
    cells_.back().alive = true;
    cells_.back().orient = 0;
    marks_.push_back({0, 0});
    return static_cast<int>(cells_.size()) - 1;
  }

  int state(int c) const { return marks_[c].first == stamp_ ? marks_[c].second : 0; }
  void mark(int c, int s) { marks_[c] = {stamp_, s}; }

  // Pair up the facets of `ids` that do not exclude `apex`; each must be
  // shared by exactly two of the cells.
  void link(const std::vector<int>& ids, Index apex, bool all_facets) {
    std::map<std::array<Index, kMaxCellSize>, std::pair<int, int>> open;
    for (int id : ids) {
      for (int j = 0; j <= m_; ++j) {
        if (!all_facets && cells_[id].v[j] == apex) continue;
        std::array<Index, kMaxCellSize> key;
        key.fill(0);
        int w = 0;
        for (int k = 0; k <= m_; ++k)
          if (k != j) key[w++] = cells_[id].v[k];
        std::sort(key.begin(), key.begin() + w);
        auto it = open.find(key);
        if (it == open.end()) {
          open.emplace(key, std::make_pair(id, j));
        } else {
          cells_[id].nb[j] = it->second.first;
          cells_[it->second.first].nb[it->second.second] = id;
          open.erase(it);
        }
      }
    }
    if (!open.empty()) throw std::logic_error("unmatched facet while linking Delaunay cells");
  }

  bool in_conflict(int c, Index q) const {
    const Cell& cell = cells_[c];
    int inf_pos = -1;
    for (int j = 0; j <= m_; ++j)
      if (cell.v[j] == kInfinite) inf_pos = j;
    if (inf_pos < 0) {
      const std::span<const Index> simplex(cell.v.data(), m_ + 1);
      if (cell.orient == 0) cell.orient = static_cast<std::int8_t>(detail::orientation(pv_, simplex, axes_));
      return detail::in_sphere(pv_, simplex, q, axes_, cell.orient);
    }

    std::array<Index, kMaxCellSize + 1> pts{};
    int w = 0;
    for (int j = 0; j <= m_; ++j)
      if (j != inf_pos) pts[w++] = cell.v[j];
    // For a hull cell, orient caches the side of its finite neighbor's apex.
    if (cell.orient == 0) {
      const Cell& inner = cells_[cell.nb[inf_pos]];
      Index apex = kInfinite;
      for (int j = 0; j <= m_; ++j)
        if (inner.nb[j] == c) apex = inner.v[j];
      pts[m_] = apex;
      cell.orient = static_cast<std::int8_t>(detail::orientation(pv_, std::span<const Index>(pts.data(), m_ + 1), axes_));
    }
    const int side_inner = cell.orient;
    pts[m_] = q;
    const int side_q = detail::orientation(pv_, std::span<const Index>(pts.data(), m_ + 1), axes_);
    if (side_q != 0) return side_q != side_inner;
    // q on the hull facet's hyperplane: conflict iff inside the facet's circumsphere.
    std::span<const Index> facet(pts.data(), m_);
    return detail::in_sphere(pv_, facet, q, hull_facet_axes(facet));
  }

  const std::vector<int>& hull_facet_axes(std::span<const Index> facet) const {
    std::array<Index, kMaxCellSize> key;
    key.fill(0);
    std::copy(facet.begin(), facet.end(), key.begin());
    std::sort(key.begin(), key.begin() + static_cast<long>(facet.size()));
    auto it = facet_axes_.find(key);
    if (it == facet_axes_.end()) it = facet_axes_.emplace(key, facet_axes(pv_, facet, axes_)).first;
    return it->second;
  }

  int find_seed(Index q) const {
    Index nearest = inserted_.front();
    double best = std::numeric_limits<double>::infinity();
    for (Index p : inserted_) {
      double d2 = 0.0;
      for (int k = 0; k < pv_.dim; ++k) {
        const double t = pv_[p][k] - pv_[q][k];
        d2 += t * t;
      }
      if (d2 < best) {
        best = d2;
        nearest = p;
      }
    }
    // Walk the star of the nearest vertex first.
    std::vector<int> stack{hint_[nearest]};
    std::unordered_set<int> seen{hint_[nearest]};
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      if (in_conflict(c, q)) return c;
      for (int j = 0; j <= m_; ++j) {
        if (cells_[c].v[j] == nearest) continue;
        const int o = cells_[c].nb[j];
        if (seen.insert(o).second) stack.push_back(o);
      }
    }
    for (std::size_t c = 0; c < cells_.size(); ++c)
      if (cells_[c].alive && in_conflict(static_cast<int>(c), q)) return static_cast<int>(c);
    throw std::logic_error("no Delaunay cell conflicts with an inserted point");
  }

  PointView pv_;
  int m_;
  std::vector<int> axes_;
  std::vector<Cell> cells_;
  std::vector<std::pair<int, int>> marks_;
  int stamp_ = 0;
  std::vector<int> free_;
  std::vector<int> hint_;
  std::vector<Index> inserted_;
  mutable std::map<std::array<Index, kMaxCellSize>, std::vector<int>> facet_axes_;
};

void check_input(std::span<const double> coords, int dim) {
  if (dim < 1 || dim > kMaxDelaunayDim)
    throw InputError("Delaunay dimension must be in 1.." + std::to_string(kMaxDelaunayDim));
  if (coords.size() % static_cast<std::size_t>(dim) != 0)
    throw InputError("coordinate count is not a multiple of the dimension");
}

DelaunayComplex trivial(const Frame& fr) {
  DelaunayComplex out;
  if (fr.points.empty()) return out;
  out.hull_dimension = 0;
  out.cells.push_back({fr.points[0]});
  return out;
}

}  // namespace

std::vector<std::vector<Index>> DelaunayComplex::faces(int max_dim) const {
  std::unordered_set<std::vector<Index>, VertexListHash> all;
  std::vector<Index> face;
  for (const auto& cell : cells) {
    const int n = static_cast<int>(cell.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) > max_dim + 1) continue;
      face.clear();
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) face.push_back(cell[i]);
      all.insert(face);
    }
  }
  std::vector<std::vector<Index>> out(all.begin(), all.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

DelaunayComplex delaunay(std::span<const double> coords, int dim) {
  check_input(coords, dim);
  const PointView pv{coords.data(), dim};
  const Frame fr = make_frame(pv, coords.size() / static_cast<std::size_t>(dim));
  if (fr.points.size() < 2) return trivial(fr);

  Triangulator tri(pv, fr);
  std::vector<char> in_basis(fr.points.back() + 1, 0);
  for (Index b : fr.basis) in_basis[b] = 1;
  for (Index p : fr.points)
    if (!in_basis[p]) tri.insert(p);

  DelaunayComplex out;
  out.hull_dimension = fr.dim();
  out.cells = tri.finite_cells();
  std::sort(out.cells.begin(), out.cells.end());
  return out;
}

DelaunayComplex delaunay_brute_force(std::span<const double> coords, int dim) {
  check_input(coords, dim);
  const PointView pv{coords.data(), dim};
  const Frame fr = make_frame(pv, coords.size() / static_cast<std::size_t>(dim));
  if (fr.points.size() < 2) return trivial(fr);
  if (fr.points.size() > 30) throw RefusalError("brute-force Delaunay is limited to 30 points");

  const int m = fr.dim();
  const std::size_t n = fr.points.size();
  DelaunayComplex out;
  out.hull_dimension = m;
  std::vector<std::size_t> pick(static_cast<std::size_t>(m) + 1);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  std::vector<Index> cell(pick.size());
  while (true) {
    for (std::size_t i = 0; i < pick.size(); ++i) cell[i] = fr.points[pick[i]];
    if (detail::orientation(pv, cell, fr.axes) != 0) {
      bool empty = true;
      for (Index q : fr.points) {
        if (std::find(cell.begin(), cell.end(), q) != cell.end()) continue;
        if (detail::in_sphere(pv, cell, q, fr.axes)) {
          empty = false;
          break;
        }
      }
      if (empty) out.cells.push_back(cell);
    }
    int i = m;
    while (i >= 0 && pick[i] == n - static_cast<std::size_t>(m + 1) + static_cast<std::size_t>(i)) --i;
    if (i < 0) break;
    ++pick[i];
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
  }
  for (auto& c : out.cells) std::sort(c.begin(), c.end());
  std::sort(out.cells.begin(), out.cells.end());
  return out;
}

}  // namespace m2s2
