#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>

#include "m2s2/error.hpp"
#include "m2s2/sixpack.hpp"

namespace m2s2 {

namespace {

// Dense Z/2 vectors of a fixed width.
using Bits = std::vector<std::uint64_t>;

int top_bit(const Bits& v) {
  for (std::size_t w = v.size(); w-- > 0;)
    if (v[w]) return static_cast<int>(w * 64 + 63 - std::countl_zero(v[w]));
  return -1;
}

void xor_into(Bits& a, const Bits& b) {
  for (std::size_t w = 0; w < a.size(); ++w) a[w] ^= b[w];
}

// Span with one stored vector per pivot.
class Echelon {
 public:
  explicit Echelon(std::size_t width = 0) : owner_(width, -1) {}

  const Bits* row_for(int bit) const {
    const int o = owner_[static_cast<std::size_t>(bit)];
    return o < 0 ? nullptr : &rows_[static_cast<std::size_t>(o)];
  }

  // v must already be reduced to a top bit without an owner here.
  void add(Bits v, int top) {
    owner_[static_cast<std::size_t>(top)] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(v));
  }

  bool insert(Bits v) {
    int t = top_bit(v);
    while (t >= 0) {
      const Bits* r = row_for(t);
      if (!r) break;
      xor_into(v, *r);
      t = top_bit(v);
    }
    if (t < 0) return false;
    add(std::move(v), t);
    return true;
  }

  std::size_t rank() const noexcept { return rows_.size(); }

 private:
  std::vector<int> owner_;
  std::vector<Bits> rows_;
};

// Reduces v (and its tracked combination) against a fixed span and a growing
// local one. Returns the final top bit, -1 when v lies in their sum.
int reduce_two(Bits& v, Bits* combo, const Echelon& base, const Echelon& local,
               const std::vector<Bits>& local_combos, const std::vector<int>& local_owner) {
  int t = top_bit(v);
  while (t >= 0) {
    if (const Bits* r = base.row_for(t)) {
      xor_into(v, *r);
    } else if (const Bits* r2 = local.row_for(t)) {
      xor_into(v, *r2);
      if (combo) xor_into(*combo, local_combos[static_cast<std::size_t>(local_owner[static_cast<std::size_t>(t)])]);
    } else {
      break;
    }
    t = top_bit(v);
  }
  return t;
}

// dim(span(base) + span(extra)) - dim(span(base)).
std::size_t extra_rank(const Echelon& base, const std::vector<Bits>& extra, std::size_t width) {
  Echelon local(width);
  const std::vector<Bits> none;
  const std::vector<int> no_owner;
  for (Bits v : extra) {
    const int t = reduce_two(v, nullptr, base, local, none, no_owner);
    if (t >= 0) local.add(std::move(v), t);
  }
  return local.rank();
}

struct Tagged {
  double tag;
  Bits vec;
};

struct Side {
  std::size_t width = 0;
  std::vector<Index> position;  // simplex -> index in its chain group, or kUnpaired
  std::vector<Index> simplices;  // chain group index -> simplex
};

Side chain_group(const FilteredComplex& k, int p) {
  Side s;
  s.position.assign(k.size(), kUnpaired);
  for (std::size_t i = 0; i < k.size(); ++i)
    if (k[i].dim() == p) {
      s.position[i] = static_cast<Index>(s.simplices.size());
      s.simplices.push_back(static_cast<Index>(i));
    }
  s.width = s.simplices.size();
  return s;
}

Bits zero_bits(std::size_t width) { return Bits((width + 63) / 64, 0); }

void set_bit(Bits& b, std::size_t i) { b[i / 64] ^= std::uint64_t{1} << (i % 64); }

// Boundaries of (p+1)-simplices as p-chains, tagged with the simplex value.
std::vector<Tagged> boundaries(const FilteredComplex& k, const Side& cp, int p) {
  std::vector<Tagged> out;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i].dim() != p + 1) continue;
    Bits b = zero_bits(cp.width);
    for (Index f : k.facet_indices(i)) set_bit(b, cp.position[f]);
    out.push_back({k[i].value, std::move(b)});
  }
  return out;
}

// Cycles of Z_p, each tagged with the value at which it first exists.
std::vector<Tagged> cycles(const FilteredComplex& k, const Side& cp, const Side& cm) {
  std::vector<Tagged> out;
  std::vector<int> owner(cm.width, -1);
  std::vector<Bits> rows, combos;
  for (std::size_t a = 0; a < cp.simplices.size(); ++a) {
    const Index i = cp.simplices[a];
    Bits b = zero_bits(cm.width);
    if (k[i].dim() > 0)
      for (Index f : k.facet_indices(i)) set_bit(b, cm.position[f]);
    Bits combo = zero_bits(cp.width);
    set_bit(combo, a);
    int t = top_bit(b);
    while (t >= 0 && owner[static_cast<std::size_t>(t)] >= 0) {
      xor_into(b, rows[static_cast<std::size_t>(owner[static_cast<std::size_t>(t)])]);
      xor_into(combo, combos[static_cast<std::size_t>(owner[static_cast<std::size_t>(t)])]);
      t = top_bit(b);
    }
    if (t < 0) {
      out.push_back({k[i].value, std::move(combo)});
    } else {
      owner[static_cast<std::size_t>(t)] = static_cast<int>(rows.size());
      rows.push_back(std::move(b));
      combos.push_back(std::move(combo));
    }
  }
  return out;
}

std::vector<Bits> upto(const std::vector<Tagged>& v, double s) {
  std::vector<Bits> out;
  for (const auto& x : v)
    if (x.tag <= s) out.push_back(x.vec);
  return out;
}

Echelon span(const std::vector<Bits>& v, std::size_t width) {
  Echelon e(width);
  for (const auto& x : v) e.insert(x);
  return e;
}

}  // namespace

struct RankOracle::Impl {
  int degree;
  Side lp, lm, kp, km;
  std::vector<Tagged> zl, bl, zk, bk, fzl;

  struct Scale {
    std::vector<Bits> ker;  // basis of {z in Z(L_s) : f z in B(K_s)}
    std::vector<Bits> fz;   // f Z(L_s)
    std::vector<Bits> zk;   // Z(K_s)
    Echelon bl, bk, bk_fz;
  };
  std::map<double, Scale> cache;

  Bits apply(const FilteredChainMap& f, const Bits& z) const {
    Bits out = zero_bits(kp.width);
    for (std::size_t a = 0; a < lp.width; ++a)
      if ((z[a / 64] >> (a % 64)) & 1u) set_bit(out, kp.position[f.assignment[lp.simplices[a]]]);
    return out;
  }

  const Scale& at(double s) {
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    Scale sc;
    const auto bk_s = upto(bk, s);
    sc.fz = upto(fzl, s);
    sc.zk = upto(zk, s);
    sc.bl = span(upto(bl, s), lp.width);
    sc.bk = span(bk_s, kp.width);
    sc.bk_fz = span(bk_s, kp.width);
    for (const auto& v : sc.fz) sc.bk_fz.insert(v);

    // Kernel: combinations of Z(L_s) whose image lies in B(K_s).
    Echelon local(kp.width);
    std::vector<int> local_owner(kp.width, -1);
    std::vector<Bits> combos;
    for (std::size_t j = 0; j < zl.size(); ++j) {
      if (zl[j].tag > s) continue;
      Bits img = fzl[j].vec;
      Bits combo = zl[j].vec;
      const int t = reduce_two(img, &combo, sc.bk, local, combos, local_owner);
      if (t < 0) {
        sc.ker.push_back(std::move(combo));
      } else {
        local_owner[static_cast<std::size_t>(t)] = static_cast<int>(combos.size());
        combos.push_back(std::move(combo));
        local.add(std::move(img), t);
      }
    }
    return cache.emplace(s, std::move(sc)).first->second;
  }
};

RankOracle::RankOracle(const FilteredChainMap& f, int degree) : impl_(std::make_unique<Impl>()) {
  if (!f.domain || !f.codomain) throw InputError("chain map is missing a complex");
  if (f.domain->size() > kRankOracleLimit || f.codomain->size() > kRankOracleLimit)
    throw RefusalError("rank oracle refused: complexes are limited to " +
                       std::to_string(kRankOracleLimit) + " simplices");
  if (degree < 0) throw InputError("degree must be >= 0");
  f.validate();
  auto& m = *impl_;
  m.degree = degree;
  m.lp = chain_group(*f.domain, degree);
  m.lm = chain_group(*f.domain, degree - 1);
  m.kp = chain_group(*f.codomain, degree);
  m.km = chain_group(*f.codomain, degree - 1);
  m.zl = cycles(*f.domain, m.lp, m.lm);
  m.zk = cycles(*f.codomain, m.kp, m.km);
  m.bl = boundaries(*f.domain, m.lp, degree);
  m.bk = boundaries(*f.codomain, m.kp, degree);
  for (const auto& z : m.zl) m.fzl.push_back({z.tag, m.apply(f, z.vec)});
}

RankOracle::~RankOracle() = default;

RankTriple RankOracle::ranks(double s, double t) {
  if (s > t) throw InputError("rank oracle needs s <= t");
  auto& m = *impl_;
  const auto& at_s = m.at(s);
  const auto& at_t = m.at(t);
  RankTriple r;
  r.kernel = extra_rank(at_t.bl, at_s.ker, m.lp.width);
  r.image = extra_rank(at_t.bk, at_s.fz, m.kp.width);
  r.cokernel = extra_rank(at_t.bk_fz, at_s.zk, m.kp.width);
  return r;
}

RankTriple rank_oracle(const FilteredChainMap& f, double s, double t, int degree) {
  RankOracle oracle(f, degree);
  return oracle.ranks(s, t);
}

}  // namespace m2s2
