#pragma once

// Congruence primes between a newform with integer coefficients and the old
// subspace of S2(Gamma0(N)).
//
// Two routes produce the same prime list:
//  * theorem3: candidates are the primes dividing the modular degree together
//    with the p where p^2 | N; each is kept when v(f) lies in the row space of
//    M modulo p.
//  * smith: stack the saturated old-space lattice with v(f). Because v(f) is
//    primitive (a_1 = 1) and the old lattice is saturated, a prime divides the
//    saturation index of the stack exactly when v(f) is in the old lattice
//    modulo p. The index itself is reported as the congruence exponent.

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oldcong/arith.hpp"
#include "oldcong/curves.hpp"
#include "oldcong/error.hpp"
#include "oldcong/linalg.hpp"
#include "oldcong/oldspace.hpp"
#include "oldcong/parallel.hpp"

namespace oldcong {

enum class Method { theorem3, smith, both };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::theorem3:
      return "theorem3";
    case Method::smith:
      return "smith";
    case Method::both:
      return "both";
  }
  return "smith";
}

inline Method parse_method(const std::string& s) {
  if (s == "theorem3") return Method::theorem3;
  if (s == "smith") return Method::smith;
  if (s == "both") return Method::both;
  throw usage_error("unknown method '" + s + "' (expected theorem3, smith or both)");
}

enum class Provenance { divides_modular_degree, p2_divides_level, divides_saturation_index };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::divides_modular_degree:
      return "divides-modular-degree";
    case Provenance::p2_divides_level:
      return "p2-divides-N";
    case Provenance::divides_saturation_index:
      return "divides-saturation-index";
  }
  return "";
}

inline Provenance parse_provenance(const std::string& s) {
  for (auto p : {Provenance::divides_modular_degree, Provenance::p2_divides_level,
                 Provenance::divides_saturation_index})
    if (to_string(p) == s) return p;
  throw input_error("unknown candidate provenance '" + s + "'");
}

struct Candidate {
  u64 p = 0;
  std::vector<Provenance> provenance;
  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct Conjecture1Verdict {
  u64 ell = 0;
  bool consistent = true;
  std::string reason;
  friend bool operator==(const Conjecture1Verdict&, const Conjecture1Verdict&) = default;
};

struct CongruenceReport {
  std::string label;
  Level level{1};
  u64 sturm_bound = 0;
  Method method = Method::smith;
  std::vector<Candidate> candidates;  // ascending
  std::vector<u64> congruence_primes;  // ascending
  std::map<u64, std::vector<u64>> witnesses;  // p -> c with c * M == v(f) mod p
  std::optional<Integer> congruence_exponent;
  std::optional<std::vector<Conjecture1Verdict>> conjecture1;
  Integer oldspace_saturation_index = 1;  // 1 when the rows of M span a saturated lattice
  std::vector<std::string> notes;
};

struct SmithCandidates {
  std::vector<u64> primes;
  Integer saturation_index;
};

namespace detail {

inline Integer pollard_rho(const Integer& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Integer x = 2, y = 2, d = 1;
    auto step = [&](Integer& z) {
      z = z * z + c;
      mpz_mod(z.get_mpz_t(), z.get_mpz_t(), n.get_mpz_t());
    };
    while (d == 1) {
      step(x);
      step(y);
      step(y);
      Integer diff = abs(x - y);
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != n) return d;
  }
}

inline void factor_into(Integer n, std::vector<Integer>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
    out.push_back(n);
    return;
  }
  const Integer d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

/// Distinct prime divisors of a positive big integer, ascending.
inline std::vector<Integer> prime_divisors_big(Integer n) {
  if (n <= 0) throw usage_error("prime_divisors_big: n must be positive");
  std::vector<Integer> out;
  for (unsigned long p = 2; p < 100000 && Integer(p) * p <= n; ++p) {
    if (!mpz_divisible_ui_p(n.get_mpz_t(), p)) continue;
    out.emplace_back(p);
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) n /= p;
  }
  if (n > 1) detail::factor_into(n, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Is v(f) in the row space of M modulo p?
inline Membership is_congruence_prime(const CoeffVector& vf, const OldspaceMatrix& m, u64 p) {
  if (vf.precision != m.precision || vf.coeffs.size() != m.matrix.cols())
    throw usage_error("is_congruence_prime: coefficient vector precision " + std::to_string(vf.precision) +
                      " differs from old-space precision " + std::to_string(m.precision));
  return in_rowspace_mod_p(m.matrix, vf.view(), p);
}

/// {p : p | modular degree} ∪ {p : p^2 | N}, ascending, with provenance.
inline std::vector<Candidate> candidate_primes_theorem3(u64 modular_degree, Level level) {
  if (modular_degree == 0) throw usage_error("modular degree must be positive");
  std::map<u64, std::vector<Provenance>> c;
  for (u64 p : prime_divisors(modular_degree)) c[p].push_back(Provenance::divides_modular_degree);
  for (auto [p, e] : factorize(level.value()).pairs)
    if (e >= 2) c[p].push_back(Provenance::p2_divides_level);
  std::vector<Candidate> out;
  for (auto& [p, prov] : c) out.push_back({p, std::move(prov)});
  return out;
}

/// Saturation-index route on raw data: primes dividing [sat(L) : L] for
/// L = Z v(f) + sat(rows of M). Requires v(f) outside the rational span of M.
inline SmithCandidates candidate_primes_smith(std::span<const Integer> vf, const IntMatrix& m) {
  if (vf.size() != m.cols()) throw usage_error("candidate_primes_smith: vector length differs from column count");
  IntMatrix stacked = saturate(m);
  const std::size_t old_rank = stacked.rows();
  stacked.append_row(vf);
  if (rank(stacked) != old_rank + 1)
    throw math_error("v(f) lies in the rational span of the old space; the form is not new");
  SmithCandidates out{{}, saturation_index(stacked)};
  for (const Integer& p : prime_divisors_big(out.saturation_index)) {
    if (!p.fits_ulong_p()) throw math_error("congruence prime " + p.get_str() + " exceeds 64 bits");
    out.primes.push_back(p.get_ui());
  }
  return out;
}

inline SmithCandidates candidate_primes_smith(const CoeffVector& vf, const OldspaceMatrix& m) {
  if (vf.precision != m.precision) throw usage_error("candidate_primes_smith: precision mismatch");
  return candidate_primes_smith(vf.view(), m.matrix);
}

/// Odd primes dividing the Tamagawa product: consistent when they divide the
/// torsion order or are congruence primes.
inline std::vector<Conjecture1Verdict> check_conjecture1(const std::vector<u64>& congruence_primes,
                                                         const CurveRecord& curve) {
  if (!curve.tamagawa || !curve.torsion_order)
    throw input_error("check-conjecture1 needs both tamagawa and torsion_order in the curve record");
  Integer product = 1;
  for (const auto& [p, c] : *curve.tamagawa) product *= static_cast<unsigned long>(c);
  std::vector<Conjecture1Verdict> out;
  for (const Integer& l : prime_divisors_big(product)) {
    if (l == 2) continue;
    const u64 ell = l.get_ui();
    Conjecture1Verdict v{ell, true, ""};
    if (*curve.torsion_order % ell == 0) {
      v.reason = "divides torsion order " + std::to_string(*curve.torsion_order);
    } else if (std::binary_search(congruence_primes.begin(), congruence_primes.end(), ell)) {
      v.reason = "congruence prime to the old space";
    } else {
      v.consistent = false;
      v.reason = "divides the Tamagawa product but neither the torsion order nor the congruence exponent";
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline std::vector<Conjecture1Verdict> check_conjecture1(const CongruenceReport& report, const CurveRecord& curve) {
  return check_conjecture1(report.congruence_primes, curve);
}

namespace detail {

inline void merge_candidates(std::vector<Candidate>& into, const std::vector<Candidate>& from) {
  for (const auto& c : from) {
    auto it = std::find_if(into.begin(), into.end(), [&](const Candidate& x) { return x.p == c.p; });
    if (it == into.end()) {
      into.push_back(c);
    } else {
      for (auto pr : c.provenance)
        if (std::find(it->provenance.begin(), it->provenance.end(), pr) == it->provenance.end())
          it->provenance.push_back(pr);
    }
  }
  std::sort(into.begin(), into.end(), [](const Candidate& a, const Candidate& b) { return a.p < b.p; });
}

}  // namespace detail

/// The full pipeline: build M, compute v(f), generate candidates by the chosen
/// route and keep those passing the mod-p membership test.
inline CongruenceReport congruence_primes(const CurveRecord& curve, Method method,
                                          const OldspaceMatrix* precomputed = nullptr) {
  validate_curve(curve);
  const Level level = curve.level;
  const u64 n = level.value();
  if (genus_x0(level) == 0 || sturm_bound(level) == 0)
    throw math_error("level " + std::to_string(n) + " has no cusp forms (genus of X0(N) is 0); no newform exists");
  if (method != Method::smith && !curve.modular_degree)
    throw input_error("method " + to_string(method) + " needs modular_degree in the curve record");

  const OldspaceMatrix m = precomputed ? *precomputed : oldspace_matrix(level);
  const CoeffVector vf = coefficient_vector(curve, m.precision);

  CongruenceReport report;
  report.label = curve.label;
  report.level = level;
  report.sturm_bound = m.precision;
  report.method = method;
  report.oldspace_saturation_index = saturation_index(m.matrix);
  if (report.oldspace_saturation_index != 1)
    report.notes.push_back("old-space rows are not saturated in Z^B (index " +
                           report.oldspace_saturation_index.get_str() + ")");

  std::vector<u64> theorem3_primes, smith_primes;

  if (method != Method::smith) {
    report.notes.push_back(
        "theorem3 candidates cover congruences to the orthogonal complement of f, which contains the old space "
        "because f is new");
    const auto cands = candidate_primes_theorem3(*curve.modular_degree, level);
    detail::merge_candidates(report.candidates, cands);
    std::vector<Membership> results(cands.size());
    parallel_for(cands.size(), [&](std::size_t i) { results[i] = is_congruence_prime(vf, m, cands[i].p); });
    for (std::size_t i = 0; i < cands.size(); ++i)
      if (results[i].member) {
        theorem3_primes.push_back(cands[i].p);
        report.witnesses[cands[i].p] = results[i].witness->components;
      }
  }

  if (method != Method::theorem3) {
    const auto smith = candidate_primes_smith(vf, m);
    report.congruence_exponent = smith.saturation_index;
    std::vector<Candidate> cands;
    for (u64 p : smith.primes) cands.push_back({p, {Provenance::divides_saturation_index}});
    detail::merge_candidates(report.candidates, cands);
    smith_primes = smith.primes;
    for (u64 p : smith_primes) {
      if (report.witnesses.count(p)) continue;
      const auto mem = is_congruence_prime(vf, m, p);
      if (mem.member)
        report.witnesses[p] = mem.witness->components;
      else
        report.notes.push_back("prime " + std::to_string(p) +
                               " is a congruence prime for the saturated old lattice only; no witness in M");
    }
  }

  switch (method) {
    case Method::theorem3:
      report.congruence_primes = theorem3_primes;
      break;
    case Method::smith:
      report.congruence_primes = smith_primes;
      break;
    case Method::both:
      if (theorem3_primes != smith_primes) {
        auto join = [](const std::vector<u64>& v) {
          std::string s = "{";
          for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
          return s + "}";
        };
        throw math_error("routes disagree at level " + std::to_string(n) + ": theorem3 " + join(theorem3_primes) +
                         " vs smith " + join(smith_primes));
      }
      report.congruence_primes = smith_primes;
      break;
  }

  // Witnesses are reported only for confirmed primes.
  std::erase_if(report.witnesses, [&](const auto& kv) {
    return !std::binary_search(report.congruence_primes.begin(), report.congruence_primes.end(), kv.first);
  });

  if (curve.tamagawa && curve.torsion_order) report.conjecture1 = check_conjecture1(report, curve);
  return report;
}

}  // namespace oldcong
