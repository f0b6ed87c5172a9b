#pragma once

// Newform coefficients from the attached elliptic curve: a_p by point counting
// over F_p, a_n by the Hecke recurrences. Independent of the modular-symbols
// code, so it can serve as an oracle for it.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oldcong/arith.hpp"
#include "oldcong/error.hpp"
#include "oldcong/linalg.hpp"

namespace oldcong {

struct singular_curve_error : input_error {
  using input_error::input_error;
};

/// Elliptic curve data for one conductor. The Weierstrass model is assumed
/// minimal; only the discriminant is checked.
struct CurveRecord {
  std::string label;
  Level level{1};
  std::array<i64, 5> ainvs{};  // a1, a2, a3, a4, a6
  std::optional<u64> modular_degree;
  std::optional<std::map<u64, u64>> tamagawa;  // p -> c_p for p | level
  std::optional<u64> torsion_order;

  Integer discriminant() const {
    const Integer a1 = ainvs[0], a2 = ainvs[1], a3 = ainvs[2], a4 = ainvs[3], a6 = ainvs[4];
    const Integer b2 = a1 * a1 + 4 * a2;
    const Integer b4 = 2 * a4 + a1 * a3;
    const Integer b6 = a3 * a3 + 4 * a6;
    const Integer b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  }
};

/// Checks the discriminant and, when present, that the Tamagawa keys are
/// exactly the primes dividing the level.
inline void validate_curve(const CurveRecord& curve) {
  if (curve.discriminant() == 0) throw singular_curve_error("singular curve: discriminant is zero");
  if (curve.tamagawa) {
    std::vector<u64> keys;
    for (const auto& [p, c] : *curve.tamagawa) {
      if (c == 0) throw input_error("tamagawa: c_" + std::to_string(p) + " must be positive");
      keys.push_back(p);
    }
    if (keys != prime_divisors(curve.level.value()))
      throw input_error("tamagawa: keys must be exactly the primes dividing the level " +
                        std::to_string(curve.level.value()));
  }
  if (curve.modular_degree && *curve.modular_degree == 0) throw input_error("modular_degree must be positive");
  if (curve.torsion_order && *curve.torsion_order == 0) throw input_error("torsion_order must be positive");
}

/// First B coefficients a_1 .. a_B of a cusp form.
struct CoeffVector {
  Level level{1};
  u64 precision = 0;
  std::vector<Integer> coeffs;

  std::span<const Integer> view() const { return coeffs; }
  const Integer& operator[](u64 n) const { return coeffs.at(n - 1); }  // 1-based
};

namespace detail {

struct ReducedCurve {
  u64 p;
  std::array<u64, 5> a;  // a1 a2 a3 a4 a6 mod p

  ReducedCurve(const CurveRecord& e, u64 prime) : p(prime) {
    for (int i = 0; i < 5; ++i) a[i] = static_cast<u64>(mod_floor(e.ainvs[i], static_cast<i64>(p)));
  }
  // y^2 + a1 xy + a3 y - (x^3 + a2 x^2 + a4 x + a6)
  u64 f(u64 x, u64 y) const {
    const u64 lhs = (mul_mod(y, y, p) + mul_mod(a[0], mul_mod(x, y, p), p) + mul_mod(a[2], y, p)) % p;
    const u64 x2 = mul_mod(x, x, p);
    const u64 rhs = (mul_mod(x2, x, p) + mul_mod(a[1], x2, p) + mul_mod(a[3], x, p) + a[4]) % p;
    return (lhs + p - rhs) % p;
  }
  bool singular_at(u64 x, u64 y) const {
    // d/dx: a1 y - 3x^2 - 2 a2 x - a4;  d/dy: 2y + a1 x + a3
    const u64 fx = (mul_mod(a[0], y, p) + 3 * p * p - mul_mod(3, mul_mod(x, x, p), p) - mul_mod(2 * a[1] % p, x, p) -
                    a[3]) % p;
    const u64 fy = (mul_mod(2, y, p) + mul_mod(a[0], x, p) + a[2]) % p;
    return fx == 0 && fy == 0;
  }
  /// Affine points, counted exhaustively.
  u64 count_affine(bool nonsingular_only) const {
    u64 n = 0;
    for (u64 x = 0; x < p; ++x)
      for (u64 y = 0; y < p; ++y)
        if (f(x, y) == 0 && !(nonsingular_only && singular_at(x, y))) ++n;
    return n;
  }
};

}  // namespace detail

/// a_p = p + 1 - #E(F_p) for a prime of good reduction.
inline i64 ap_good(const CurveRecord& curve, u64 p) {
  if (!is_prime(p)) throw usage_error("ap_good: p must be prime");
  if (curve.level.value() % p == 0) throw usage_error("ap_good: p divides the level; use ap_bad");
  const detail::ReducedCurve e(curve, p);
  u64 points = 1;  // point at infinity
  if (p <= 3) {
    points += e.count_affine(false);
  } else {
    // (2y + a1 x + a3)^2 = 4(x^3 + a2 x^2 + a4 x + a6) + (a1 x + a3)^2
    std::vector<signed char> chi(p, -1);
    chi[0] = 0;
    for (u64 y = 1; y < p; ++y) chi[mul_mod(y, y, p)] = 1;
    for (u64 x = 0; x < p; ++x) {
      const u64 x2 = mul_mod(x, x, p);
      const u64 cubic = (mul_mod(x2, x, p) + mul_mod(e.a[1], x2, p) + mul_mod(e.a[3], x, p) + e.a[4]) % p;
      const u64 lin = (mul_mod(e.a[0], x, p) + e.a[2]) % p;
      const u64 disc = (mul_mod(4, cubic, p) + mul_mod(lin, lin, p)) % p;
      points += static_cast<u64>(1 + chi[disc]);
    }
  }
  const i64 ap = static_cast<i64>(p + 1) - static_cast<i64>(points);
  if (static_cast<u64>(ap * ap) > 4 * p)
    throw math_error("Hasse bound violated at p = " + std::to_string(p) + "; is the model minimal with this conductor?");
  return ap;
}

/// a_p = p - #E_ns(F_p) for p | N: +1 split multiplicative, -1 non-split, 0 additive.
inline i64 ap_bad(const CurveRecord& curve, u64 p) {
  if (!is_prime(p)) throw usage_error("ap_bad: p must be prime");
  if (curve.level.value() % p != 0) throw usage_error("ap_bad: p does not divide the level");
  const detail::ReducedCurve e(curve, p);
  const u64 nonsingular = 1 + e.count_affine(true);
  return static_cast<i64>(p) - static_cast<i64>(nonsingular);
}

inline i64 ap(const CurveRecord& curve, u64 p) {
  return curve.level.value() % p == 0 ? ap_bad(curve, p) : ap_good(curve, p);
}

/// (a_1, ..., a_B) of the newform attached to the curve.
inline CoeffVector coefficient_vector(const CurveRecord& curve, u64 precision) {
  if (precision == 0) throw usage_error("coefficient_vector: precision must be at least 1");
  const u64 n_level = curve.level.value();
  std::vector<u64> spf(precision + 1, 0);  // smallest prime factor
  for (u64 i = 2; i <= precision; ++i)
    if (spf[i] == 0)
      for (u64 j = i; j <= precision; j += i)
        if (spf[j] == 0) spf[j] = i;

  std::vector<i64> a(precision + 1, 0);
  a[1] = 1;
  for (u64 n = 2; n <= precision; ++n) {
    const u64 p = spf[n];
    u64 m = n, pk = 1;
    while (m % p == 0) {
      m /= p;
      pk *= p;
    }
    if (m != 1) {
      a[n] = a[pk] * a[m];
    } else if (pk == p) {
      a[n] = ap(curve, p);
    } else if (n_level % p == 0) {
      a[n] = a[pk / p] * a[p];
    } else {
      a[n] = a[pk / p] * a[p] - static_cast<i64>(p) * a[pk / p / p];
    }
  }
  CoeffVector v{curve.level, precision, {}};
  v.coeffs.reserve(precision);
  for (u64 n = 1; n <= precision; ++n) v.coeffs.emplace_back(static_cast<long>(a[n]));
  return v;
}

}  // namespace oldcong
