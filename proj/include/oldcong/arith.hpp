#pragma once

// Integer utilities: factorization, divisors, the index psi(N) of Gamma0(N)
// in SL2(Z), the Sturm bound, and the genus of X0(N).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "oldcong/error.hpp"

namespace oldcong {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// A level (conductor) N >= 1.
class Level {
 public:
  explicit Level(u64 n) : n_(n) {
    if (n == 0) throw usage_error("level must be a positive integer");
  }
  u64 value() const { return n_; }
  friend bool operator==(Level, Level) = default;

 private:
  u64 n_;
};

struct Factorization {
  std::vector<std::pair<u64, unsigned>> pairs;  // primes strictly ascending

  u64 value() const {
    u64 v = 1;
    for (auto [p, e] : pairs)
      for (unsigned i = 0; i < e; ++i) v *= p;
    return v;
  }
  std::vector<u64> primes() const {
    std::vector<u64> out;
    out.reserve(pairs.size());
    for (auto [p, e] : pairs) out.push_back(p);
    return out;
  }
  bool empty() const { return pairs.empty(); }
};

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (u64 d = 3; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

inline Factorization factorize(u64 n) {
  if (n == 0) throw usage_error("factorize: n must be positive");
  Factorization f;
  for (u64 p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) f.pairs.emplace_back(p, e);
  }
  if (n > 1) f.pairs.emplace_back(n, 1);
  return f;
}

inline std::vector<u64> prime_divisors(u64 n) { return factorize(n).primes(); }

/// All positive divisors, ascending.
inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> out{1};
  for (auto [p, e] : factorize(n).pairs) {
    const std::size_t base = out.size();
    u64 pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline u64 euler_phi(u64 n) {
  u64 r = n;
  for (u64 p : prime_divisors(n)) r = r / p * (p - 1);
  return r;
}

/// psi(N) = [SL2(Z) : Gamma0(N)] = N * prod_{p | N} (1 + 1/p).
inline u64 psi_index(Level level) {
  u64 r = level.value();
  for (u64 p : prime_divisors(level.value())) r = r / p * (p + 1);
  return r;
}

/// floor(psi/6 - (psi - 1)/N), evaluated exactly as
/// floor((N*psi - 6*(psi - 1)) / (6N)). The expression is negative only for
/// N in {2, 3, 4}; those levels have no cusp forms and the bound is 0.
inline u64 sturm_bound(Level level) {
  const i64 n = static_cast<i64>(level.value());
  const i64 psi = static_cast<i64>(psi_index(level));
  const i64 num = n * psi - 6 * (psi - 1);
  const i64 den = 6 * n;
  if (num <= 0) return 0;
  return static_cast<u64>(num / den);
}

/// Number of cusps of X0(N): sum over d | N of phi(gcd(d, N/d)).
inline u64 cusp_count(Level level) {
  const u64 n = level.value();
  u64 total = 0;
  for (u64 d : divisors(n)) total += euler_phi(std::gcd(d, n / d));
  return total;
}

/// Elliptic points of order 2 and 3 on X0(N).
inline u64 elliptic_points_2(Level level) {
  const u64 n = level.value();
  if (n % 4 == 0) return 0;
  u64 r = 1;
  for (u64 p : prime_divisors(n)) {
    if (p == 2) continue;
    r *= (p % 4 == 1) ? 2 : 0;
  }
  return r;
}

inline u64 elliptic_points_3(Level level) {
  const u64 n = level.value();
  if (n % 9 == 0) return 0;
  u64 r = 1;
  for (u64 p : prime_divisors(n)) {
    if (p == 3) continue;
    r *= (p % 3 == 1) ? 2 : 0;
  }
  return r;
}

/// Genus of X0(N) = dim S2(Gamma0(N)).
inline u64 genus_x0(Level level) {
  const i64 psi = static_cast<i64>(psi_index(level));
  const i64 twelve_g = 12 + psi - 3 * static_cast<i64>(elliptic_points_2(level)) -
                       4 * static_cast<i64>(elliptic_points_3(level)) -
                       6 * static_cast<i64>(cusp_count(level));
  return static_cast<u64>(twelve_g / 12);
}

// Small modular helpers on signed 64-bit integers.

inline i64 mod_floor(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

/// Returns g = gcd(a, b) >= 0 and sets x, y with a*x + b*y = g.
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    const i64 q = a / b;
    i64 t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

/// Inverse of a modulo m (m >= 1); throws if gcd(a, m) != 1.
inline i64 inv_mod(i64 a, i64 m) {
  if (m == 1) return 0;
  i64 x, y;
  if (ext_gcd(mod_floor(a, m), m, x, y) != 1) throw usage_error("inv_mod: not a unit");
  return mod_floor(x, m);
}

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return r;
}

/// Modular inverse in the prime field F_p.
inline u64 inv_mod_prime(u64 a, u64 p) { return pow_mod(a, p - 2, p); }

}  // namespace oldcong
