#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"
#include "oldcong/curves.hpp"
#include "oldcong/modsym.hpp"

using namespace oldcong;

namespace {

// T_p on the full quotient built from an arbitrary matrix set, mirroring the
// library's action so the two matrix families can be compared.
RatMatrix hecke_from(const ModSymSpace& s, const std::vector<Mat2>& mats) {
  const std::size_t dim = s.dimension();
  RatMatrix t(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const P1Elt& x = s.p1()[s.basis_generators()[k]];
    const i64 c = static_cast<i64>(x.c), d = static_cast<i64>(x.d);
    for (const Mat2& h : mats) {
      const i64 idx = s.p1().index(c * h.a + d * h.c, c * h.b + d * h.d);
      if (idx < 0) continue;
      for (const auto& [j, coef] : s.project(static_cast<std::size_t>(idx))) t(k, j) += coef;
    }
  }
  return t;
}

std::size_t rational_rank(RatMatrix a) { return rref(a).size(); }

}  // namespace

TEST(P1List, Examples) {
  EXPECT_EQ(p1_list(Level(1)).size(), 1u);
  EXPECT_EQ(p1_list(Level(2)), (std::vector<P1Elt>{{0, 1}, {1, 0}, {1, 1}}));
  EXPECT_EQ(p1_list(Level(11)).size(), 12u);
}

TEST(P1List, SizeIsPsi) {
  for (u64 n = 1; n <= 500; ++n) EXPECT_EQ(P1List(Level(n)).size(), psi_index(Level(n))) << n;
}

TEST(P1List, MatchesBruteForceOrbits) {
  for (u64 n = 2; n <= 40; ++n) {
    std::set<std::set<std::pair<u64, u64>>> orbits;
    for (u64 c = 0; c < n; ++c)
      for (u64 d = 0; d < n; ++d) {
        if (std::gcd(std::gcd(c, d), n) != 1) continue;
        std::set<std::pair<u64, u64>> orbit;
        for (u64 u = 1; u < n; ++u)
          if (std::gcd(u, n) == 1) orbit.insert({u * c % n, u * d % n});
        orbits.insert(orbit);
      }
    const P1List list{Level(n)};
    ASSERT_EQ(list.size(), orbits.size()) << n;
    for (const auto& orbit : orbits) {
      const auto [c0, d0] = *orbit.begin();  // least member is the canonical one
      const i64 idx = list.index(static_cast<i64>(c0), static_cast<i64>(d0));
      ASSERT_GE(idx, 0);
      EXPECT_EQ(list[static_cast<std::size_t>(idx)], (P1Elt{c0, d0}));
      for (auto [c, d] : orbit) EXPECT_EQ(list.index(static_cast<i64>(c), static_cast<i64>(d)), idx);
    }
  }
}

TEST(P1Normalize, Examples) {
  EXPECT_EQ(p1_normalize(0, 5, Level(11)), (P1Elt{0, 1}));
  for (u64 n = 2; n <= 50; ++n) EXPECT_EQ(p1_normalize(1, 0, Level(n)), (P1Elt{1, 0}));
  EXPECT_THROW(p1_normalize(2, 4, Level(6)), invalid_symbol);
  for (u64 n = 2; n <= 30; ++n)
    for (const P1Elt& x : p1_list(Level(n)))
      EXPECT_EQ(p1_normalize(static_cast<i64>(x.c), static_cast<i64>(x.d), Level(n)), x);
}

TEST(HeilbronnMatrices, Shape) {
  const auto h2 = heilbronn_matrices(2);
  EXPECT_NE(std::find(h2.begin(), h2.end(), Mat2{1, 0, 0, 2}), h2.end());
  EXPECT_NE(std::find(h2.begin(), h2.end(), Mat2{2, 0, 0, 1}), h2.end());
  for (u64 p : {2, 3, 5, 7, 11, 13, 29, 31})
    for (const Mat2& m : heilbronn_matrices(p)) EXPECT_EQ(m.det(), static_cast<i64>(p));
  for (u64 p : {2, 3, 5, 7})
    for (const Mat2& m : merel_matrices(p)) EXPECT_EQ(m.det(), static_cast<i64>(p));
}

TEST(ModSymSpace, Examples) {
  EXPECT_EQ(build_space(Level(11)).dimension(), 3u);
  EXPECT_EQ(build_space(Level(22)).dimension(), 7u);
  EXPECT_EQ(build_space(Level(2)).dimension(), 1u);

  const auto s11 = build_space(Level(11));
  EXPECT_EQ(s11.cusp_class_count(), 2u);
  EXPECT_EQ(s11.cuspidal_basis().rows(), 2u);
  const auto s22 = build_space(Level(22));
  EXPECT_EQ(s22.cusp_class_count(), 4u);
  EXPECT_EQ(s22.cuspidal_basis().rows(), 4u);
  const auto s4 = build_space(Level(4));
  EXPECT_EQ(s4.cusp_class_count(), 3u);
  EXPECT_EQ(s4.cuspidal_basis().rows(), 0u);
}

TEST(ModSymSpace, DimensionFormulas) {
  for (u64 n = 1; n <= 100; ++n) {
    const Level l(n);
    const auto s = build_space(l);
    const std::size_t g = genus_x0(l);
    EXPECT_EQ(s.cusp_class_count(), cusp_count(l)) << n;
    if (n > 2) {
      EXPECT_EQ(s.dimension(), 2 * g + cusp_count(l) - 1) << n;
    }
    EXPECT_EQ(s.cuspidal_basis().rows(), 2 * g) << n;
    EXPECT_EQ(s.plus_basis().rows(), g) << n;
  }
}

TEST(Cusps, EquivalenceIsAnEquivalenceRelation) {
  for (u64 n : {12u, 18u, 25u, 36u}) {
    const Level l(n);
    std::vector<Cusp> cs;
    for (i64 c = 0; c <= static_cast<i64>(n); ++c)
      for (i64 a = 0; a < std::max<i64>(c, 1); ++a)
        if (std::gcd(a, c) == 1) cs.push_back({a, c});
    std::size_t classes = 0;
    std::vector<int> seen(cs.size(), 0);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      EXPECT_TRUE(cusps_equivalent(cs[i], cs[i], l));
      for (std::size_t j = 0; j < cs.size(); ++j)
        EXPECT_EQ(cusps_equivalent(cs[i], cs[j], l), cusps_equivalent(cs[j], cs[i], l));
      if (seen[i]) continue;
      ++classes;
      for (std::size_t j = i; j < cs.size(); ++j)
        if (cusps_equivalent(cs[i], cs[j], l)) seen[j] = 1;
    }
    EXPECT_EQ(classes, cusp_count(l)) << n;
  }
}

TEST(LiftToSl2z, BottomRowReduces) {
  for (u64 n : {1u, 2u, 11u, 12u, 30u, 49u})
    for (const P1Elt& x : p1_list(Level(n))) {
      const Mat2 m = lift_to_sl2z(static_cast<i64>(x.c), static_cast<i64>(x.d), Level(n));
      EXPECT_EQ(m.det(), 1);
      if (n > 1) {
        EXPECT_EQ(mod_floor(m.c - static_cast<i64>(x.c), static_cast<i64>(n)), 0);
        EXPECT_EQ(mod_floor(m.d - static_cast<i64>(x.d), static_cast<i64>(n)), 0);
      }
    }
}

TEST(Hecke, TraceOfT2AtLevel11) {
  const auto s = build_space(Level(11));
  EXPECT_EQ(s.hecke_matrix(2, Subspace::plus_cuspidal).trace(), -2);
  EXPECT_EQ(s.hecke_matrix(1), RatMatrix::identity(2));
}

TEST(Hecke, MultiplicativeRecurrence) {
  for (u64 n : {11u, 13u, 23u, 25u, 35u}) {
    const auto s = build_space(Level(n));
    EXPECT_EQ(s.hecke_matrix(6), s.hecke_matrix(2) * s.hecke_matrix(3)) << n;
  }
}

TEST(Hecke, CommutativityAndStar) {
  for (u64 n = 11; n <= 60; ++n) {
    const auto s = build_space(Level(n));
    if (s.cuspidal_basis().rows() == 0) continue;
    const RatMatrix star = s.star_on_cuspidal();
    EXPECT_EQ(star * star, RatMatrix::identity(star.rows())) << n;
    for (u64 a = 1; a <= 12; ++a) {
      const RatMatrix ta = s.hecke_matrix(a);
      EXPECT_EQ(star * ta, ta * star) << "N=" << n << " n=" << a;
      for (u64 b = a + 1; b <= 12; ++b) {
        const RatMatrix tb = s.hecke_matrix(b);
        EXPECT_EQ(ta * tb, tb * ta) << "N=" << n << " m=" << a << " n=" << b;
      }
    }
  }
}

TEST(Hecke, CremonaAgreesWithMerelAwayFromLevel) {
  for (u64 n : {11u, 14u, 23u, 30u, 37u, 43u, 45u}) {
    const auto s = build_space(Level(n));
    for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u}) {
      if (n % p == 0) continue;
      const RatMatrix c = ModSymSpace::restrict_to(s.hecke_prime_full(p), s.cuspidal_basis());
      const RatMatrix m = ModSymSpace::restrict_to(hecke_from(s, merel_matrices(p)), s.cuspidal_basis());
      EXPECT_EQ(c, m) << "N=" << n << " p=" << p;
    }
  }
}

TEST(Hecke, EigenvaluesMatchTabulatedAp) {
  // For each optimal curve of conductor <= 60 the tabulated a_p is an eigenvalue of T_p on the plus space.
  const auto data = testutil::sweep_data();
  for (const auto& e : data) {
    const u64 n = e["level"].get<u64>();
    if (n > 60) continue;
    const auto s = build_space(Level(n));
    const auto& an = e["an"];
    for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u}) {
      const RatMatrix t = s.hecke_matrix(p, Subspace::plus_cuspidal);
      const RatMatrix shifted = t - RatMatrix::identity(t.rows()).scaled(Rational(an[p - 1].get<long>()));
      EXPECT_LT(rational_rank(shifted), t.rows()) << "N=" << n << " p=" << p;
    }
  }
}

TEST(IntegralBasis, Examples) {
  for (u64 n = 1; n <= 10; ++n) EXPECT_EQ(integral_basis(Level(n), 5).rows(), 0u);
  EXPECT_EQ(integral_basis(Level(11), 4), (IntMatrix{{1, -2, -1, 2}}));
  EXPECT_EQ(integral_basis(Level(22), 4), (IntMatrix{{1, 0, -1, -2}, {0, 1, 0, -2}}));
  EXPECT_THROW(integral_basis(Level(42), 12), precision_error);
}

TEST(IntegralBasis, RowCountIsGenus) {
  for (u64 n = 1; n <= 60; ++n) {
    const Level l(n);
    EXPECT_EQ(integral_basis(l, sturm_bound(l)).rows(), genus_x0(l)) << n;
  }
}

TEST(IntegralBasis, IsSaturatedHnf) {
  for (u64 n : {22u, 33u, 42u, 57u}) {
    const IntMatrix b = integral_basis(Level(n), sturm_bound(Level(n)) + 5);
    EXPECT_EQ(hnf(b), b);
    EXPECT_EQ(saturation_index(b), 1);
  }
}
