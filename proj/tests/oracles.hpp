#pragma once

// Slow, independent reference computations used only by the tests. Nothing
// here calls into the library's linear algebra or modular-symbols code.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using i64 = std::int64_t;
using Mat = std::vector<std::vector<i64>>;

/// Prime factorization by plain trial division.
inline std::vector<std::pair<std::uint64_t, unsigned>> trial_factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) n /= p, ++e;
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

/// Determinant by Laplace expansion; fine for k <= 4.
inline i64 det(const Mat& a) {
  const std::size_t k = a.size();
  if (k == 0) return 1;
  if (k == 1) return a[0][0];
  i64 s = 0;
  for (std::size_t j = 0; j < k; ++j) {
    Mat minor;
    for (std::size_t i = 1; i < k; ++i) {
      std::vector<i64> r;
      for (std::size_t c = 0; c < k; ++c)
        if (c != j) r.push_back(a[i][c]);
      minor.push_back(r);
    }
    s += (j % 2 ? -1 : 1) * a[0][j] * det(minor);
  }
  return s;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t from, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = from; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

/// gcd of all k x k minors (the k-th determinantal divisor).
inline i64 minor_gcd(const Mat& a, std::size_t k) {
  const std::size_t m = a.size(), n = m ? a[0].size() : 0;
  if (k == 0) return 1;
  if (k > m || k > n) return 0;
  std::vector<std::vector<std::size_t>> rs, cs;
  std::vector<std::size_t> cur;
  subsets(m, k, 0, cur, rs);
  subsets(n, k, 0, cur, cs);
  i64 g = 0;
  for (const auto& r : rs)
    for (const auto& c : cs) {
      Mat sub;
      for (auto i : r) {
        std::vector<i64> row;
        for (auto j : c) row.push_back(a[i][j]);
        sub.push_back(row);
      }
      g = std::gcd(g, det(sub));
    }
  return g;
}

inline std::size_t rank(const Mat& a) {
  const std::size_t m = a.size(), n = m ? a[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t k = 1; k <= std::min(m, n); ++k)
    if (minor_gcd(a, k) != 0) r = k;
  return r;
}

/// Smith invariants from determinantal divisors: d_k = D_k / D_{k-1}.
inline std::vector<i64> smith(const Mat& a) {
  std::vector<i64> out;
  const std::size_t r = rank(a);
  for (std::size_t k = 1; k <= r; ++k) out.push_back(minor_gcd(a, k) / minor_gcd(a, k - 1));
  return out;
}

inline Mat stack(Mat a, const Mat& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Is v in the Z-span of the rows of a? Adding v to a lattice of rank r keeps
/// the rank and the r-th determinantal divisor exactly when v is in it.
inline bool in_lattice(const Mat& a, const std::vector<i64>& v) {
  const std::size_t r = rank(a);
  const Mat b = stack(a, {v});
  if (rank(b) != r) return false;
  return minor_gcd(b, r) == minor_gcd(a, r);
}

inline bool same_lattice(const Mat& a, const Mat& b) {
  for (const auto& r : b)
    if (!in_lattice(a, r)) return false;
  for (const auto& r : a)
    if (!in_lattice(b, r)) return false;
  return true;
}

/// Every point of the box [-R, R]^n, for direct lattice enumeration.
inline std::vector<std::vector<i64>> box(std::size_t n, i64 radius) {
  std::vector<std::vector<i64>> out{{}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::vector<i64>> next;
    for (const auto& p : out)
      for (i64 x = -radius; x <= radius; ++x) {
        auto q = p;
        q.push_back(x);
        next.push_back(q);
      }
    out = std::move(next);
  }
  return out;
}

/// Exhaustive search over all p^rows coefficient vectors.
inline bool brute_force_membership(const Mat& a, const std::vector<i64>& v, i64 p) {
  if (a.size() > 4 || p > 7) throw std::invalid_argument("brute_force_membership: rows <= 4 and p <= 7 required");
  const std::size_t m = a.size(), n = v.size();
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("brute_force_membership: dimension mismatch");
  std::vector<i64> c(m, 0);
  auto mod = [p](i64 x) { return ((x % p) + p) % p; };
  while (true) {
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      i64 s = 0;
      for (std::size_t i = 0; i < m; ++i) s += c[i] * a[i][j];
      ok = mod(s - v[j]) == 0;
    }
    if (ok) return true;
    std::size_t i = 0;
    while (i < m && ++c[i] == p) c[i++] = 0;
    if (i == m) return false;
  }
}

inline Mat random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, i64 bound) {
  std::uniform_int_distribution<i64> d(-bound, bound);
  Mat a(rows, std::vector<i64>(cols));
  for (auto& r : a)
    for (auto& x : r) x = d(rng);
  return a;
}

}  // namespace oracle
