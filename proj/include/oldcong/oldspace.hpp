#pragma once

// Degeneracy maps on truncated q-expansions and the old-space matrix M whose
// rows span the integral old subspace of S2(Gamma0(N)) at Sturm precision.

#include <span>
#include <utility>
#include <vector>

#include "oldcong/arith.hpp"
#include "oldcong/linalg.hpp"
#include "oldcong/modsym.hpp"
#include "oldcong/parallel.hpp"

namespace oldcong {

/// beta_d: sum a_i q^i -> sum a_i q^{d i}, truncated to B coefficients.
inline std::vector<Integer> degeneracy_image(std::span<const Integer> v, u64 d, u64 precision) {
  if (d == 0) throw usage_error("degeneracy_image: d must be positive");
  std::vector<Integer> w(precision, 0);
  for (u64 i = d; i <= precision; i += d)
    if (i / d <= v.size()) w[i - 1] = v[i / d - 1];
  return w;
}

struct RowSource {
  u64 source_level;  // N / p
  u64 degeneracy;    // 1 or p
  friend bool operator==(const RowSource&, const RowSource&) = default;
};

struct OldspaceMatrix {
  Level level{1};
  u64 precision = 0;
  IntMatrix matrix;
  std::vector<RowSource> provenance;  // one entry per row
};

/// For each prime p | N (ascending): an integral basis of S2(Gamma0(N/p)) at
/// the level-N Sturm bound, pushed up by beta_1 (all rows), then by beta_p.
/// Rows may be dependent; only their span matters.
inline OldspaceMatrix oldspace_matrix(Level level) {
  const u64 n = level.value();
  const u64 b = sturm_bound(level);
  const auto primes = prime_divisors(n);

  std::vector<IntMatrix> bases(primes.size());
  parallel_for(primes.size(), [&](std::size_t i) { bases[i] = integral_basis(Level(n / primes[i]), b); });

  OldspaceMatrix out{level, b, IntMatrix(0, b), {}};
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const u64 p = primes[i];
    const IntMatrix& basis = bases[i];
    for (u64 d : {u64{1}, p})
      for (std::size_t r = 0; r < basis.rows(); ++r) {
        out.matrix.append_row(degeneracy_image(basis.row(r), d, b));
        out.provenance.push_back({n / p, d});
      }
  }
  return out;
}

}  // namespace oldcong
