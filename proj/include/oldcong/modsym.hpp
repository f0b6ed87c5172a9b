#pragma once

// Weight-2 modular symbols for Gamma0(N) in the Manin presentation, Hecke
// operators via Heilbronn matrices, and the integral q-expansion basis of
// S2(Gamma0(N)) truncated at a chosen precision.
//
// Everything is exact over Q. Integrality is recovered only at the end, by
// saturating the truncated coefficient space in Z^B.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "oldcong/arith.hpp"
#include "oldcong/error.hpp"
#include "oldcong/linalg.hpp"

namespace oldcong {

struct invalid_symbol : usage_error {
  using usage_error::usage_error;
};

struct precision_error : usage_error {
  using usage_error::usage_error;
};

/// A point (c : d) of P^1(Z/N), stored as its canonical representative.
struct P1Elt {
  u64 c = 0;
  u64 d = 0;
  friend auto operator<=>(const P1Elt&, const P1Elt&) = default;
};

struct Mat2 {
  i64 a, b, c, d;
  i64 det() const { return a * d - b * c; }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

namespace detail {

inline std::vector<u64> units_mod(u64 n) {
  std::vector<u64> u;
  for (u64 x = 1; x < n; ++x)
    if (std::gcd(x, n) == 1) u.push_back(x);
  if (n == 1) u.push_back(0);
  return u;
}

}  // namespace detail

/// Canonical representative of the unit-scaling class of (c : d): among all
/// u*(c, d) with u a unit mod N, the one with least c, then least d.
inline P1Elt p1_normalize(i64 c, i64 d, Level level) {
  const i64 n = static_cast<i64>(level.value());
  const u64 cc = static_cast<u64>(mod_floor(c, n));
  const u64 dd = static_cast<u64>(mod_floor(d, n));
  if (std::gcd(std::gcd(cc, dd), level.value()) != 1 && n != 1)
    throw invalid_symbol("p1_normalize: gcd(c, d, N) != 1");
  P1Elt best{cc, dd};
  for (u64 u : detail::units_mod(level.value())) {
    const P1Elt cand{mul_mod(u, cc, level.value()), mul_mod(u, dd, level.value())};
    if (cand < best) best = cand;
  }
  return best;
}

/// Enumeration of P^1(Z/N) with O(1) index lookup of arbitrary pairs.
class P1List {
 public:
  explicit P1List(Level level) : n_(level.value()), table_(n_ * n_, -1) {
    const auto units = detail::units_mod(n_);
    std::vector<u64> orbit_canon(n_ * n_, 0);
    std::vector<u64> canon;
    for (u64 c = 0; c < n_; ++c)
      for (u64 d = 0; d < n_; ++d) {
        const u64 key = c * n_ + d;
        if (table_[key] != -1) continue;
        if (n_ != 1 && std::gcd(std::gcd(c, d), n_) != 1) continue;
        // Visit the whole orbit once; its least member is the canonical pair.
        u64 least = key;
        for (u64 u : units) least = std::min(least, mul_mod(u, c, n_) * n_ + mul_mod(u, d, n_));
        for (u64 u : units) {
          const u64 k = mul_mod(u, c, n_) * n_ + mul_mod(u, d, n_);
          table_[k] = 0;
          orbit_canon[k] = least;
        }
        table_[key] = 0;
        orbit_canon[key] = least;
        canon.push_back(least);
      }
    std::sort(canon.begin(), canon.end());
    std::map<u64, i64> pos;
    for (std::size_t i = 0; i < canon.size(); ++i) {
      pos[canon[i]] = static_cast<i64>(i);
      elts_.push_back({canon[i] / n_, canon[i] % n_});
    }
    for (u64 k = 0; k < n_ * n_; ++k)
      if (table_[k] != -1) table_[k] = pos.at(orbit_canon[k]);
  }

  u64 modulus() const { return n_; }
  std::size_t size() const { return elts_.size(); }
  const std::vector<P1Elt>& elements() const { return elts_; }
  const P1Elt& operator[](std::size_t i) const { return elts_[i]; }

  /// Index of the class of (c : d), or -1 when gcd(c, d, N) != 1.
  i64 index(i64 c, i64 d) const {
    const i64 n = static_cast<i64>(n_);
    return table_[static_cast<u64>(mod_floor(c, n)) * n_ + static_cast<u64>(mod_floor(d, n))];
  }

 private:
  u64 n_;
  std::vector<i64> table_;
  std::vector<P1Elt> elts_;
};

/// One canonical representative per point of P^1(Z/N), sorted by (c, d).
inline std::vector<P1Elt> p1_list(Level level) { return P1List(level).elements(); }

namespace detail {

/// Nearest integer to a/b, halves rounded away from zero.
inline i64 round_div(i64 a, i64 b) {
  if (b < 0) {
    a = -a;
    b = -b;
  }
  const i64 q = (2 * a + (a >= 0 ? b : -b)) / (2 * b);
  return q;
}

}  // namespace detail

/// Cremona's Heilbronn matrices of determinant p (continued fractions of p/r).
inline std::vector<Mat2> heilbronn_matrices(u64 prime) {
  if (!is_prime(prime)) throw usage_error("heilbronn_matrices: p must be prime");
  const i64 p = static_cast<i64>(prime);
  if (p == 2) return {{1, 0, 0, 2}, {2, 0, 0, 1}, {2, 1, 0, 1}, {1, 0, 1, 2}};
  std::vector<Mat2> out{{1, 0, 0, p}};
  for (i64 r = -(p - 1) / 2; r <= (p - 1) / 2; ++r) {
    i64 x1 = p, x2 = -r, y1 = 0, y2 = 1, a = -p, b = r;
    out.push_back({x1, x2, y1, y2});
    while (b != 0) {
      const i64 q = detail::round_div(a, b);
      const i64 c = a - b * q;
      a = -b;
      b = c;
      const i64 x3 = q * x2 - x1;
      x1 = x2;
      x2 = x3;
      const i64 y3 = q * y2 - y1;
      y1 = y2;
      y2 = y3;
      out.push_back({x1, x2, y1, y2});
    }
  }
  return out;
}

/// Merel's set: all [a b; c d] with a > b >= 0, d > c >= 0, ad - bc = n.
inline std::vector<Mat2> merel_matrices(u64 n_) {
  const i64 n = static_cast<i64>(n_);
  std::vector<Mat2> out;
  for (i64 a = 1; a <= n; ++a) {
    const i64 q = n / a;
    if (q * a == n) {
      const i64 d = q;
      for (i64 b = 0; b < a; ++b) out.push_back({a, b, 0, d});
      for (i64 c = 1; c < d; ++c) out.push_back({a, 0, c, d});
    }
    for (i64 d = q + 1; d <= n; ++d) {
      const i64 bc = a * d - n;
      for (i64 c = bc / a + 1; c < d; ++c)
        if (bc % c == 0) out.push_back({a, bc / c, c, d});
    }
  }
  return out;
}

/// A cusp a/c in lowest terms, with c >= 0 (infinity is 1/0).
struct Cusp {
  i64 a = 1;
  i64 c = 0;
};

/// Gamma0(N)-equivalence: a1/c1 ~ a2/c2 iff s1*c2 == s2*c1 mod gcd(c1*c2, N),
/// where s_j * a_j == 1 mod c_j.
inline bool cusps_equivalent(const Cusp& x, const Cusp& y, Level level) {
  const i64 n = static_cast<i64>(level.value());
  auto inverse = [](const Cusp& z) -> i64 { return z.c == 0 ? z.a : inv_mod(z.a, z.c); };
  const i64 s1 = inverse(x);
  const i64 s2 = inverse(y);
  const i64 m = std::gcd(static_cast<i64>((static_cast<__int128>(mod_floor(x.c, n)) * mod_floor(y.c, n)) % n), n);
  const __int128 diff = static_cast<__int128>(s1) * y.c - static_cast<__int128>(s2) * x.c;
  return diff % m == 0;
}

/// A matrix in SL2(Z) whose bottom row reduces to (c, d) mod N.
inline Mat2 lift_to_sl2z(i64 c, i64 d, Level level) {
  const i64 n = static_cast<i64>(level.value());
  if (n == 1) return {1, 0, 0, 1};
  i64 c0 = mod_floor(c, n);
  i64 d0 = mod_floor(d, n);
  if (c0 == 0) c0 = n;
  while (std::gcd(c0, d0) != 1) d0 += n;
  i64 x, y;
  ext_gcd(d0, c0, x, y);  // x*d0 + y*c0 = 1
  return {x, -y, c0, d0};
}

enum class Subspace { full, cuspidal, plus_cuspidal };

namespace detail {
using SparseVec = std::vector<std::pair<std::size_t, Rational>>;

struct HeckeCache {
  std::mutex mutex;
  std::map<std::pair<int, u64>, RatMatrix> matrices;
};
}  // namespace detail

/// The space of weight-2 modular symbols for Gamma0(N): the Manin quotient,
/// its cuspidal subspace and the plus part of that under the star involution.
///
/// Subspaces are stored as RREF row bases in coordinates of the quotient basis.
/// Operator matrices act on row vectors (v -> v * T).
class ModSymSpace {
 public:
  explicit ModSymSpace(Level level) : level_(level), p1_(level), cache_(std::make_shared<detail::HeckeCache>()) {
    build_quotient();
    build_cuspidal();
    build_plus();
  }

  Level level() const { return level_; }
  const std::vector<P1Elt>& generators() const { return p1_.elements(); }
  const P1List& p1() const { return p1_; }

  std::size_t dimension() const { return free_gens_.size(); }
  std::size_t cusp_class_count() const { return cusps_.size(); }
  const std::vector<Cusp>& cusp_classes() const { return cusps_; }

  /// dimension() x cusp_class_count(); row k is the boundary of basis symbol k.
  const RatMatrix& boundary_matrix() const { return boundary_; }
  const RatMatrix& cuspidal_basis() const { return cuspidal_; }
  const RatMatrix& plus_basis() const { return plus_; }
  const RatMatrix& star_matrix() const { return star_; }

  const RatMatrix& basis_of(Subspace s) const {
    switch (s) {
      case Subspace::cuspidal:
        return cuspidal_;
      case Subspace::plus_cuspidal:
        return plus_;
      case Subspace::full:
        break;
    }
    return full_;
  }

  /// Coordinates of a generator (Manin symbol) in the quotient basis.
  const detail::SparseVec& project(std::size_t generator) const { return proj_[generator]; }

  /// Generator index of each quotient basis element.
  const std::vector<std::size_t>& basis_generators() const { return free_gens_; }

  /// T_p on the full quotient for a prime p.
  RatMatrix hecke_prime_full(u64 p) const {
    const auto mats = (level_.value() % p == 0) ? merel_matrices(p) : heilbronn_matrices(p);
    const std::size_t dim = dimension();
    RatMatrix t(dim, dim);
    std::vector<i64> counts(p1_.size(), 0);
    std::vector<std::size_t> touched;
    for (std::size_t k = 0; k < dim; ++k) {
      const P1Elt& x = p1_[free_gens_[k]];
      const i64 c = static_cast<i64>(x.c), d = static_cast<i64>(x.d);
      for (const Mat2& h : mats) {
        const i64 idx = p1_.index(c * h.a + d * h.c, c * h.b + d * h.d);
        if (idx < 0) continue;
        if (counts[static_cast<std::size_t>(idx)]++ == 0) touched.push_back(static_cast<std::size_t>(idx));
      }
      for (std::size_t g : touched) {
        if (counts[g] != 0)
          for (const auto& [j, coef] : proj_[g]) t(k, j) += coef * counts[g];
        counts[g] = 0;
      }
      touched.clear();
    }
    return t;
  }

  /// Matrix of an operator (given on the full quotient) restricted to the
  /// subspace with RREF basis `basis`. Throws if the subspace is not stable.
  static RatMatrix restrict_to(const RatMatrix& op, const RatMatrix& basis) {
    RatMatrix image = basis * op;
    RatMatrix probe = basis;
    const auto piv = rref(probe);
    RatMatrix out(basis.rows(), basis.rows());
    for (std::size_t i = 0; i < basis.rows(); ++i)
      for (std::size_t k = 0; k < piv.size(); ++k) out(i, k) = image(i, piv[k]);
    if (!(out * basis == image)) throw math_error("restrict_to: subspace is not invariant");
    return out;
  }

  /// T_n on the chosen subspace. T_mn = T_m T_n for coprime m, n;
  /// T_{p^k} = T_{p^{k-1}} T_p - p T_{p^{k-2}} for p not dividing N, and
  /// T_{p^k} = T_p^k for p | N.
  RatMatrix hecke_matrix(u64 n, Subspace which = Subspace::cuspidal) const {
    if (n == 0) throw usage_error("hecke_matrix: n must be positive");
    const int key = static_cast<int>(which);
    {
      std::lock_guard lock(cache_->mutex);
      auto it = cache_->matrices.find({key, n});
      if (it != cache_->matrices.end()) return it->second;
    }
    const std::size_t dim = basis_of(which).rows();
    RatMatrix result;
    if (n == 1) {
      result = RatMatrix::identity(dim);
    } else {
      const auto f = factorize(n);
      if (f.pairs.size() > 1) {
        result = RatMatrix::identity(dim);
        for (auto [p, e] : f.pairs) {
          u64 pe = 1;
          for (unsigned i = 0; i < e; ++i) pe *= p;
          result = result * hecke_matrix(pe, which);
        }
      } else {
        const auto [p, e] = f.pairs.front();
        if (e == 1) {
          result = restrict_to(hecke_prime_full(p), basis_of(which));
        } else {
          const RatMatrix tp = hecke_matrix(p, which);
          const RatMatrix prev = hecke_matrix(n / p, which);
          if (level_.value() % p == 0) {
            result = prev * tp;
          } else {
            result = prev * tp - hecke_matrix(n / p / p, which).scaled(Rational(static_cast<long>(p)));
          }
        }
      }
    }
    std::lock_guard lock(cache_->mutex);
    return cache_->matrices.emplace(std::pair{key, n}, std::move(result)).first->second;
  }

  /// Star involution restricted to the cuspidal subspace.
  RatMatrix star_on_cuspidal() const { return restrict_to(star_, cuspidal_); }

 private:
  void build_quotient();
  void build_cuspidal();
  void build_plus();

  Level level_;
  P1List p1_;
  std::vector<std::size_t> free_gens_;
  std::vector<detail::SparseVec> proj_;
  std::vector<Cusp> cusps_;
  RatMatrix full_, boundary_, cuspidal_, star_, plus_;
  std::shared_ptr<detail::HeckeCache> cache_;
};

inline void ModSymSpace::build_quotient() {
  const std::size_t ngen = p1_.size();
  auto s_image = [&](std::size_t i) {
    const auto& x = p1_[i];
    return static_cast<std::size_t>(p1_.index(static_cast<i64>(x.d), -static_cast<i64>(x.c)));
  };
  auto t_image = [&](std::size_t i) {
    const auto& x = p1_[i];
    return static_cast<std::size_t>(
        p1_.index(static_cast<i64>(x.d), -static_cast<i64>(x.c) - static_cast<i64>(x.d)));
  };

  // Two-term relations x + xS = 0: x_i = sign_i * x_{rep_i}, or x_i = 0.
  std::vector<std::size_t> rep(ngen);
  std::vector<int> sign(ngen, 0);
  std::vector<bool> done(ngen, false);
  for (std::size_t i = 0; i < ngen; ++i) {
    if (done[i]) continue;
    const std::size_t j = s_image(i);
    done[i] = done[j] = true;
    if (j == i) {
      sign[i] = 0;
      continue;
    }
    rep[i] = rep[j] = i;
    sign[i] = 1;
    sign[j] = -1;
  }

  // Three-term relations x + xT + xT^2 = 0 in terms of representatives,
  // eliminated sparsely into a fully reduced echelon form.
  using Row = std::map<std::size_t, Rational>;
  std::map<std::size_t, Row> pivots;
  std::fill(done.begin(), done.end(), false);
  for (std::size_t i = 0; i < ngen; ++i) {
    if (done[i]) continue;
    const std::size_t j = t_image(i);
    const std::size_t k = t_image(j);
    done[i] = done[j] = done[k] = true;
    Row row;
    for (std::size_t g : {i, j, k}) {
      if (sign[g] == 0) continue;
      row[rep[g]] += sign[g];
    }
    std::erase_if(row, [](const auto& e) { return e.second == 0; });

    for (auto it = row.begin(); it != row.end();) {
      auto pv = pivots.find(it->first);
      if (pv == pivots.end()) {
        ++it;
        continue;
      }
      const Rational f = it->second;
      for (const auto& [col, val] : pv->second) row[col] -= f * val;
      std::erase_if(row, [](const auto& e) { return e.second == 0; });
      it = row.begin();
    }
    if (row.empty()) continue;
    const std::size_t pcol = row.rbegin()->first;
    const Rational inv = 1 / row.rbegin()->second;
    for (auto& e : row) e.second *= inv;
    for (auto& [pc, prow] : pivots) {
      auto hit = prow.find(pcol);
      if (hit == prow.end()) continue;
      const Rational f = hit->second;
      for (const auto& [col, val] : row) prow[col] -= f * val;
      std::erase_if(prow, [](const auto& e) { return e.second == 0; });
    }
    pivots.emplace(pcol, std::move(row));
  }

  std::vector<i64> free_pos(ngen, -1);
  for (std::size_t i = 0; i < ngen; ++i)
    if (sign[i] != 0 && rep[i] == i && !pivots.count(i)) {
      free_pos[i] = static_cast<i64>(free_gens_.size());
      free_gens_.push_back(i);
    }

  proj_.assign(ngen, {});
  for (std::size_t i = 0; i < ngen; ++i) {
    if (sign[i] == 0) continue;
    const std::size_t r = rep[i];
    if (free_pos[r] >= 0) {
      proj_[i].emplace_back(static_cast<std::size_t>(free_pos[r]), Rational(sign[i]));
      continue;
    }
    for (const auto& [col, val] : pivots.at(r)) {
      if (col == r) continue;
      proj_[i].emplace_back(static_cast<std::size_t>(free_pos[col]), -val * sign[i]);
    }
    std::sort(proj_[i].begin(), proj_[i].end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  }
  full_ = RatMatrix::identity(free_gens_.size());
}

inline void ModSymSpace::build_cuspidal() {
  const std::size_t dim = dimension();
  // Boundary of g{0, oo} is {g oo} - {g 0} = [a/c] - [b/d].
  auto class_of = [&](i64 a, i64 c) -> std::size_t {
    if (c < 0) {
      a = -a;
      c = -c;
    }
    if (c == 0) a = 1;
    const Cusp z{a, c};
    for (std::size_t i = 0; i < cusps_.size(); ++i)
      if (cusps_equivalent(cusps_[i], z, level_)) return i;
    cusps_.push_back(z);
    return cusps_.size() - 1;
  };
  class_of(1, 0);  // infinity is always class 0
  std::vector<std::pair<std::size_t, std::size_t>> ends(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const P1Elt& x = p1_[free_gens_[k]];
    const Mat2 g = lift_to_sl2z(static_cast<i64>(x.c), static_cast<i64>(x.d), level_);
    ends[k] = {class_of(g.a, g.c), class_of(g.b, g.d)};
  }
  boundary_ = RatMatrix(dim, cusps_.size());
  for (std::size_t k = 0; k < dim; ++k) {
    boundary_(k, ends[k].first) += 1;
    boundary_(k, ends[k].second) -= 1;
  }
  cuspidal_ = left_kernel(boundary_);

  star_ = RatMatrix(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const P1Elt& x = p1_[free_gens_[k]];
    const i64 idx = p1_.index(-static_cast<i64>(x.c), static_cast<i64>(x.d));
    for (const auto& [j, v] : proj_[static_cast<std::size_t>(idx)]) star_(k, j) += v;
  }
}

inline void ModSymSpace::build_plus() {
  if (cuspidal_.rows() == 0) {
    plus_ = RatMatrix(0, dimension());
    return;
  }
  const RatMatrix s = star_on_cuspidal();
  const RatMatrix fixed = left_kernel(s - RatMatrix::identity(s.rows()));
  plus_ = row_space(fixed * cuspidal_);
}

inline ModSymSpace build_space(Level level) { return ModSymSpace(level); }

/// Z-basis (HNF) of the lattice of first-B coefficient vectors of the forms
/// in S2(Gamma0(N)) with integral q-expansions. Requires B >= sturm_bound(N).
///
/// The vectors n -> (T_n)_{ij} over all matrix positions span the truncated
/// coefficient space over Q; saturating their denominator-cleared span gives
/// the integral lattice.
inline IntMatrix integral_basis(const ModSymSpace& space, u64 precision) {
  const Level level = space.level();
  if (precision < sturm_bound(level))
    throw precision_error("integral_basis: precision " + std::to_string(precision) + " is below the Sturm bound " +
                          std::to_string(sturm_bound(level)) + " of level " + std::to_string(level.value()));
  const std::size_t g = space.plus_basis().rows();
  if (g == 0 || precision == 0) return IntMatrix(0, precision);

  std::vector<RatMatrix> t;
  t.reserve(precision);
  for (u64 n = 1; n <= precision; ++n) t.push_back(space.hecke_matrix(n, Subspace::plus_cuspidal));

  RatMatrix span(0, precision);
  std::vector<Rational> v(precision);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      for (u64 n = 0; n < precision; ++n) v[n] = t[n](i, j);
      span.append_row(v);
    }
  return saturate(clear_denominators(row_space(std::move(span))));
}

inline IntMatrix integral_basis(Level level, u64 precision) {
  if (precision < sturm_bound(level))
    throw precision_error("integral_basis: precision " + std::to_string(precision) + " is below the Sturm bound " +
                          std::to_string(sturm_bound(level)) + " of level " + std::to_string(level.value()));
  if (genus_x0(level) == 0) return IntMatrix(0, precision);
  return integral_basis(ModSymSpace(level), precision);
}

}  // namespace oldcong
