#pragma once

// Exact linear algebra over Z, Q and prime fields.
//
// Integer lattices are represented by the rows of an IntMatrix. Normal forms
// follow the row convention: the Hermite normal form has zero rows removed,
// positive pivots, and entries above each pivot reduced into [0, pivot).

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oldcong/arith.hpp"
#include "oldcong/error.hpp"

namespace oldcong {

using Integer = mpz_class;
using Rational = mpq_class;

template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  DenseMatrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : init) {
      if (r.size() != cols_) throw usage_error("ragged matrix literal");
      for (long x : r) data_.emplace_back(x);
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static DenseMatrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
    DenseMatrix m(0, cols);
    for (const auto& r : rows) m.append_row(r);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<T> row_vector(std::size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }

  std::vector<std::vector<T>> to_rows() const {
    std::vector<std::vector<T>> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row_vector(i));
    return out;
  }

  void append_row(std::span<const T> r) {
    if (r.size() != cols_) throw usage_error("append_row: length mismatch");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }
  void append_row(const std::vector<T>& r) { append_row(std::span<const T>(r)); }

  DenseMatrix without_row(std::size_t i) const {
    DenseMatrix m(0, cols_);
    for (std::size_t k = 0; k < rows_; ++k)
      if (k != i) m.append_row(row(k));
    return m;
  }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw usage_error("matrix product: shape mismatch");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw usage_error("matrix difference: shape mismatch");
    DenseMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
    return c;
  }

  DenseMatrix scaled(const T& s) const {
    DenseMatrix c = *this;
    for (auto& x : c.data_) x *= s;
    return c;
  }

  T trace() const {
    T t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  friend std::ostream& operator<<(std::ostream& os, const DenseMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? ", " : "") << m(i, j);
      os << ']';
    }
    return os << ']';
  }

  std::string to_string() const {
    std::ostringstream os;
    os << *this;
    return os.str();
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = DenseMatrix<Integer>;
using RatMatrix = DenseMatrix<Rational>;

struct SmithInvariants {
  std::vector<Integer> divisors;  // d1 | d2 | ... | dr, all positive

  Integer product() const {
    Integer p = 1;
    for (const auto& d : divisors) p *= d;
    return p;
  }
};

/// A vector over F_p with components reduced into [0, p).
struct ModPVector {
  u64 p = 0;
  std::vector<u64> components;
};

struct Membership {
  bool member = false;
  std::optional<ModPVector> witness;  // c with c * A == v (mod p) when member
};

namespace detail {

using IntRow = std::vector<Integer>;

inline void axpy_from(IntRow& y, const Integer& a, const IntRow& x, std::size_t from) {
  for (std::size_t k = from; k < y.size(); ++k)
    if (x[k] != 0) y[k] += a * x[k];
}

/// In-place row HNF on a row list; returns the rank. Rows [0, rank) hold the
/// result, later rows are zero.
inline std::size_t hnf_rows(std::vector<IntRow>& rows, std::size_t ncols) {
  const std::size_t m = rows.size();
  std::size_t r = 0;
  Integer g, s, t, q, ua, ub;
  for (std::size_t j = 0; j < ncols && r < m; ++j) {
    // Bring the smallest nonzero entry of column j (rows r..m) to row r.
    std::size_t best = m;
    for (std::size_t i = r; i < m; ++i)
      if (rows[i][j] != 0 && (best == m || abs(rows[i][j]) < abs(rows[best][j]))) best = i;
    if (best == m) continue;
    std::swap(rows[r], rows[best]);

    for (std::size_t i = r + 1; i < m; ++i) {
      if (rows[i][j] == 0) continue;
      const Integer& a = rows[r][j];
      const Integer& b = rows[i][j];
      if (mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) {
        q = b / a;
        axpy_from(rows[i], -q, rows[r], j);
        continue;
      }
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      ua = a / g;
      ub = b / g;
      IntRow top(ncols), bottom(ncols);
      for (std::size_t k = j; k < ncols; ++k) {
        top[k] = s * rows[r][k] + t * rows[i][k];
        bottom[k] = ua * rows[i][k] - ub * rows[r][k];
      }
      rows[r].swap(top);
      rows[i].swap(bottom);
    }
    if (rows[r][j] < 0)
      for (std::size_t k = j; k < ncols; ++k) rows[r][k] = -rows[r][k];

    const Integer& piv = rows[r][j];
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i][j] >= 0 && rows[i][j] < piv) continue;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][j].get_mpz_t(), piv.get_mpz_t());
      axpy_from(rows[i], -q, rows[r], j);
    }
    ++r;
  }
  return r;
}

inline u64 reduce_mod(const Integer& x, u64 p) {
  return static_cast<u64>(mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(p)));
}

}  // namespace detail

/// Row-style Hermite normal form.
inline IntMatrix hnf(const IntMatrix& a) {
  auto rows = a.to_rows();
  const std::size_t r = detail::hnf_rows(rows, a.cols());
  rows.resize(r);
  return IntMatrix::from_rows(rows, a.cols());
}

/// Rank over Q.
inline std::size_t rank(const IntMatrix& a) {
  auto rows = a.to_rows();
  return detail::hnf_rows(rows, a.cols());
}

/// Smith invariants d1 | ... | dr of a (r = rank).
inline SmithInvariants snf(const IntMatrix& a) {
  auto m = hnf(a).to_rows();
  const std::size_t r = m.size();
  const std::size_t n = a.cols();
  SmithInvariants out;
  Integer q;
  for (std::size_t t = 0; t < r; ++t) {
    for (;;) {
      // Move the smallest nonzero entry of the trailing block to (t, t).
      std::size_t bi = r, bj = n;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (m[i][j] != 0 && (bi == r || abs(m[i][j]) < abs(m[bi][bj]))) {
            bi = i;
            bj = j;
          }
      std::swap(m[t], m[bi]);
      if (bj != t)
        for (std::size_t i = 0; i < r; ++i) std::swap(m[i][t], m[i][bj]);

      bool clean = true;
      const Integer piv = m[t][t];
      for (std::size_t i = t + 1; i < r; ++i) {
        if (m[i][t] == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), m[i][t].get_mpz_t(), piv.get_mpz_t());
        detail::axpy_from(m[i], -q, m[t], t);
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (m[t][j] == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), m[t][j].get_mpz_t(), piv.get_mpz_t());
        for (std::size_t i = t; i < r; ++i)
          if (m[i][t] != 0) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      bool divides_all = true;
      for (std::size_t i = t + 1; i < r && divides_all; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(m[i][j].get_mpz_t(), piv.get_mpz_t())) {
            detail::axpy_from(m[t], Integer(1), m[i], t);
            divides_all = false;
            break;
          }
      if (divides_all) break;
    }
    out.divisors.push_back(abs(m[t][t]));
  }
  return out;
}

/// Reduced row echelon form over Q, in place. Returns pivot columns.
inline std::vector<std::size_t> rref(RatMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  Rational f;
  for (std::size_t j = 0; j < a.cols() && r < a.rows(); ++j) {
    std::size_t k = r;
    while (k < a.rows() && a(k, j) == 0) ++k;
    if (k == a.rows()) continue;
    if (k != r)
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(r, c), a(k, c));
    const Rational inv = 1 / a(r, j);
    for (std::size_t c = j; c < a.cols(); ++c) a(r, c) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, j) == 0) continue;
      f = a(i, j);
      for (std::size_t c = j; c < a.cols(); ++c)
        if (a(r, c) != 0) a(i, c) -= f * a(r, c);
    }
    pivots.push_back(j);
    ++r;
  }
  return pivots;
}

/// Nonzero rows of the RREF: a canonical basis of the row space over Q.
inline RatMatrix row_space(RatMatrix a) {
  const auto piv = rref(a);
  RatMatrix out(0, a.cols());
  for (std::size_t i = 0; i < piv.size(); ++i) out.append_row(a.row(i));
  return out;
}

/// Basis (in RREF) of the right kernel { x : a x = 0 }.
inline RatMatrix right_kernel(RatMatrix a) {
  const auto piv = rref(a);
  const std::size_t n = a.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto j : piv) is_pivot[j] = true;
  RatMatrix k(0, n);
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(n);
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -a(i, f);
    k.append_row(v);
  }
  return row_space(k);
}

/// Basis (in RREF) of the left kernel { x : x a = 0 }.
inline RatMatrix left_kernel(const RatMatrix& a) { return right_kernel(a.transpose()); }

inline RatMatrix to_rational(const IntMatrix& a) {
  RatMatrix q(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) q(i, j) = a(i, j);
  return q;
}

/// Scales each row by the lcm of its denominators.
inline IntMatrix clear_denominators(const RatMatrix& a) {
  IntMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).get_num() * (l / a(i, j).get_den());
  }
  return out;
}

/// Integer basis (HNF) of { y in Z^m : y a = 0 }.
inline IntMatrix integer_left_kernel(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  std::vector<detail::IntRow> aug(m, detail::IntRow(k + m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) aug[i][j] = a(i, j);
    aug[i][k + i] = 1;
  }
  const std::size_t r = detail::hnf_rows(aug, k + m);
  IntMatrix ker(0, m);
  for (std::size_t i = 0; i < r; ++i) {
    if (std::any_of(aug[i].begin(), aug[i].begin() + static_cast<std::ptrdiff_t>(k),
                    [](const Integer& x) { return x != 0; }))
      continue;
    ker.append_row(std::vector<Integer>(aug[i].begin() + static_cast<std::ptrdiff_t>(k), aug[i].end()));
  }
  return hnf(ker);
}

/// Basis (HNF) of the saturation (Q L) ∩ Z^n of the row lattice L of a.
inline IntMatrix saturate(const IntMatrix& a) {
  const IntMatrix h = hnf(a);
  const std::size_t n = a.cols();
  if (h.rows() == 0) return IntMatrix(0, n);
  if (h.rows() == n) return IntMatrix::identity(n);
  // sat(L) is the integer annihilator of the rational kernel of L.
  const IntMatrix kernel = clear_denominators(right_kernel(to_rational(h)));
  return integer_left_kernel(kernel.transpose());
}

/// [sat(L) : L], the product of the Smith invariants; 1 for the zero lattice.
inline Integer saturation_index(const IntMatrix& a) { return snf(a).product(); }

inline std::size_t rank_mod_p(const IntMatrix& a, u64 p) {
  if (!is_prime(p)) throw usage_error("rank_mod_p: modulus must be prime");
  const std::size_t n = a.cols();
  std::vector<std::vector<u64>> rows;
  rows.reserve(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::vector<u64> r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = detail::reduce_mod(a(i, j), p);
    rows.push_back(std::move(r));
  }
  std::size_t rk = 0;
  for (std::size_t j = 0; j < n && rk < rows.size(); ++j) {
    std::size_t k = rk;
    while (k < rows.size() && rows[k][j] == 0) ++k;
    if (k == rows.size()) continue;
    std::swap(rows[rk], rows[k]);
    const u64 inv = inv_mod_prime(rows[rk][j], p);
    for (std::size_t c = j; c < n; ++c) rows[rk][c] = mul_mod(rows[rk][c], inv, p);
    for (std::size_t i = rk + 1; i < rows.size(); ++i) {
      const u64 f = rows[i][j];
      if (f == 0) continue;
      for (std::size_t c = j; c < n; ++c)
        rows[i][c] = (rows[i][c] + p - mul_mod(f, rows[rk][c], p)) % p;
    }
    ++rk;
  }
  return rk;
}

/// Decides whether v mod p lies in the F_p-span of the rows of a; on success
/// returns coefficients c with c * a == v (mod p).
inline Membership in_rowspace_mod_p(const IntMatrix& a, std::span<const Integer> v, u64 p) {
  if (v.size() != a.cols()) throw usage_error("in_rowspace_mod_p: vector length differs from column count");
  if (!is_prime(p)) throw usage_error("in_rowspace_mod_p: modulus must be prime");
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();

  struct BasisRow {
    std::size_t pivot;
    std::vector<u64> vec;    // pivot entry 1
    std::vector<u64> combo;  // vec == combo * a (mod p)
  };
  std::vector<BasisRow> basis;

  auto reduce = [&](std::vector<u64>& x, std::vector<u64>& combo) {
    for (const auto& b : basis) {
      const u64 f = x[b.pivot];
      if (f == 0) continue;
      const u64 neg = p - f;
      for (std::size_t c = 0; c < n; ++c)
        if (b.vec[c]) x[c] = (x[c] + mul_mod(neg, b.vec[c], p)) % p;
      for (std::size_t c = 0; c < m; ++c)
        if (b.combo[c]) combo[c] = (combo[c] + mul_mod(neg, b.combo[c], p)) % p;
    }
  };

  for (std::size_t i = 0; i < m; ++i) {
    std::vector<u64> x(n), combo(m, 0);
    for (std::size_t j = 0; j < n; ++j) x[j] = detail::reduce_mod(a(i, j), p);
    combo[i] = 1;
    reduce(x, combo);
    auto it = std::find_if(x.begin(), x.end(), [](u64 e) { return e != 0; });
    if (it == x.end()) continue;
    const std::size_t piv = static_cast<std::size_t>(it - x.begin());
    const u64 inv = inv_mod_prime(x[piv], p);
    for (auto& e : x) e = mul_mod(e, inv, p);
    for (auto& e : combo) e = mul_mod(e, inv, p);
    basis.push_back({piv, std::move(x), std::move(combo)});
  }

  // Reduce v; whatever we subtract accumulates into the witness.
  std::vector<u64> x(n), witness(m, 0);
  for (std::size_t j = 0; j < n; ++j) x[j] = detail::reduce_mod(v[j], p);
  for (const auto& b : basis) {
    const u64 f = x[b.pivot];
    if (f == 0) continue;
    for (std::size_t c = 0; c < n; ++c)
      if (b.vec[c]) x[c] = (x[c] + p - mul_mod(f, b.vec[c], p)) % p;
    for (std::size_t c = 0; c < m; ++c)
      if (b.combo[c]) witness[c] = (witness[c] + mul_mod(f, b.combo[c], p)) % p;
  }
  if (std::any_of(x.begin(), x.end(), [](u64 e) { return e != 0; })) return {};
  return {true, ModPVector{p, std::move(witness)}};
}

inline Membership in_rowspace_mod_p(const IntMatrix& a, const std::vector<Integer>& v, u64 p) {
  return in_rowspace_mod_p(a, std::span<const Integer>(v), p);
}

/// True when c * a == v entrywise modulo p.
inline bool verify_witness(const IntMatrix& a, std::span<const Integer> v, const ModPVector& c) {
  if (c.components.size() != a.rows() || v.size() != a.cols()) return false;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    Integer s = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += Integer(std::to_string(c.components[i])) * a(i, j);
    s -= v[j];
    if (detail::reduce_mod(s, c.p) != 0) return false;
  }
  return true;
}

}  // namespace oldcong
