#include <catch2/catch_amalgamated.hpp>

#include "eis/siegel_series.hpp"

using namespace eis;

namespace {

HalfIntegralMatrix h2(long two_a, long two_b, long two_d, unsigned scale = 1) {
  return HalfIntegralMatrix::from_doubled({Int(two_a), Int(two_b), Int(two_b), Int(two_d)}, 2,
                                          scale);
}

UniPoly<Rational> poly_from(std::initializer_list<long> coeffs) {
  std::vector<Rational> c;
  for (long v : coeffs) c.emplace_back(v);
  return UniPoly<Rational>::from_coeffs(std::move(c));
}

// Rank-1 series for h = (a): 1 + sum_{j=1}^{v} (p^j - p^{j-1}) X^j - p^v X^{v+1}
// with v = v_p(a).
UniPoly<Rational> rank1_series(const Int& p, long v) {
  std::vector<Rational> c(static_cast<std::size_t>(v) + 2);
  c[0] = Rational(1);
  for (long j = 1; j <= v; ++j)
    c[static_cast<std::size_t>(j)] =
        Rational(int_pow(p, static_cast<unsigned>(j)) - int_pow(p, static_cast<unsigned>(j - 1)));
  c[static_cast<std::size_t>(v) + 1] = -Rational(int_pow(p, static_cast<unsigned>(v)));
  return UniPoly<Rational>::from_coeffs(std::move(c));
}

}  // namespace

TEST_CASE("Hermite forms by determinant valuation") {
  REQUIRE(enumerate_hnf_cosets(2, Int(3), 0).size() == 1);
  REQUIRE(enumerate_hnf_cosets(2, Int(3), 1).size() == 1 + 4);
  REQUIRE(enumerate_hnf_cosets(2, Int(5), 1).size() == 1 + 6);
  REQUIRE(enumerate_hnf_cosets(2, Int(3), 2).size() == 1 + 4 + 13);

  // Every listed matrix is upper triangular with the right determinant.
  for (const auto& c : enumerate_hnf_cosets(2, Int(3), 2)) {
    REQUIRE(c.g.at(1, 0) == Rational(0));
    REQUIRE(rational_valuation(c.g.det(), Int(3)).v == c.det_valuation);
  }
}

TEST_CASE("rank-1 direct enumeration") {
  for (long pl : {2L, 3L, 5L}) {
    Int p(pl);
    for (long v = 0; v <= 2; ++v) {
      Int a = int_pow(p, static_cast<unsigned>(v));
      auto h = HalfIntegralMatrix::from_doubled({2 * a}, 1, 1);
      auto bp = brute_force_Bp(h, p, v + 1);
      REQUIRE(bp.poly == rank1_series(p, v));
    }
  }
  // A unit scalar prime to p keeps the same series.
  auto h5 = HalfIntegralMatrix::from_doubled({Int(10)}, 1, 1);
  REQUIRE(brute_force_Bp(h5, Int(3), 1).poly == rank1_series(Int(3), 0));
}

TEST_CASE("unimodular binary series") {
  // B_p(X, I_2) = (1 - X)(1 + eps p X) with eps = (-1 | p).
  auto id = h2(2, 0, 2);
  REQUIRE(brute_force_Bp(id, Int(3), 2).poly == poly_from({1, -4, 3}));
  REQUIRE(brute_force_Bp(id, Int(5), 2).poly == poly_from({1, 4, -5}));
  REQUIRE(lattice_sum_Bp(id, Int(3), 2).poly == poly_from({1, -4, 3}));
  REQUIRE(lattice_sum_Bp(id, Int(5), 2).poly == poly_from({1, 4, -5}));
  REQUIRE(kitaoka_bp_poly(id, Int(3), 1).poly == poly_from({1, -4, 3}));
  REQUIRE(kitaoka_bp_poly(id, Int(5), 1).poly == poly_from({1, 4, -5}));
}

TEST_CASE("split index diag(1, p)") {
  auto h = h2(2, 0, 6);
  auto expect = poly_from({1, -1, -9, 9});  // (1 - X)(1 - 9 X^2)
  REQUIRE(brute_force_Bp(h, Int(3), 3).poly == expect);
  REQUIRE(lattice_sum_Bp(h, Int(3), 3).poly == expect);
  REQUIRE(kitaoka_bp_poly(h, Int(3), 1).poly == expect);
}

TEST_CASE("the three evaluators agree on assorted indices") {
  std::vector<HalfIntegralMatrix> hs = {
      h2(2, 0, 18),   // diag(1, 9)
      h2(6, 0, 6),    // diag(3, 3)
      h2(2, 1, 6),    // non-diagonal, det 2h = 11 (v_3 = 0 sanity row)
      h2(4, 1, 8),    // non-diagonal
      h2(6, 3, 12),   // 3 | all entries in the even convention
      h2(18, 3, 6),
  };
  for (const auto& h : hs) {
    for (long pl : {3L, 5L}) {
      Int p(pl);
      Val v2 = rational_valuation(h.det_doubled(), p);
      long jmax = v2.v + 3;
      if (int_pow(p, static_cast<unsigned>(3 * jmax)) > 10'000'000) continue;
      auto direct = brute_force_Bp(h, p, jmax);
      auto lattice = lattice_sum_Bp(h, p, jmax);
      REQUIRE(direct.poly == lattice.poly);
      REQUIRE(kitaoka_bp_poly(h, p, 1).poly == lattice.poly);
    }
  }
}

TEST_CASE("lattice evaluator agrees with direct enumeration at p = 2") {
  std::vector<HalfIntegralMatrix> hs = {
      h2(2, 0, 2),  // identity
      h2(2, 1, 2),
      h2(4, 0, 2),  // diag(2, 1)
      h2(4, 2, 4),
      h2(8, 0, 4),
      h2(2, 1, 8),
  };
  for (const auto& h : hs) {
    Val v2 = rational_valuation(h.det_doubled(), Int(2));
    long jmax = std::min(v2.v + 3, 6L);
    auto direct = brute_force_Bp_at_level(h, Int(2), jmax, jmax, 400'000'000LL);
    auto lattice = lattice_sum_Bp(h, Int(2), jmax);
    for (long j = 0; j <= jmax; ++j)
      REQUIRE(direct.poly.coeff(static_cast<std::size_t>(j)) ==
              lattice.poly.coeff(static_cast<std::size_t>(j)));
  }

  // Same comparison deeper in the series at p = 3, truncated to what the
  // direct enumerator can reach.
  auto h19 = h2(2, 0, 18);
  auto direct3 = brute_force_Bp_at_level(h19, Int(3), 4, 4, 100'000'000LL);
  auto lattice3 = lattice_sum_Bp(h19, Int(3), 4);
  for (long j = 0; j <= 4; ++j)
    REQUIRE(direct3.poly.coeff(static_cast<std::size_t>(j)) ==
            lattice3.poly.coeff(static_cast<std::size_t>(j)));
}

TEST_CASE("coefficients stabilize across truncation levels") {
  auto h = h2(2, 0, 6);
  for (long m = 1; m <= 3; ++m) {
    auto low = brute_force_Bp_at_level(h, Int(3), m, m, 100'000'000LL);
    auto high = brute_force_Bp_at_level(h, Int(3), m, m + 1, 100'000'000LL);
    for (long j = 0; j <= m; ++j)
      REQUIRE(low.poly.coeff(static_cast<std::size_t>(j)) ==
              high.poly.coeff(static_cast<std::size_t>(j)));
  }
}

TEST_CASE("budget cap") {
  REQUIRE_THROWS_WITH(brute_force_Bp(h2(2, 0, 2), Int(7), 4, 1000),
                      Catch::Matchers::ContainsSubstring("budget overflow"));
}

TEST_CASE("f-polynomial extraction") {
  auto chi = trivial_character(4);

  // diag(1, 3) at p = 3: B factors completely, f = 1.
  auto dd13 = discriminant_data(h2(2, 0, 6), 1);
  auto f13 = extract_f_poly(h2(2, 0, 6), Int(3), 6, chi, dd13.rho, 1);
  REQUIRE(f13.poly.degree() == 0);
  REQUIRE(f13.poly.coeff(0) == Rational(1));

  // diag(1, 9) at p = 3: discriminant -4 * 3^2, f has degree 2.
  auto h19 = h2(2, 0, 18);
  auto dd19 = discriminant_data(h19, 1);
  auto f19 = extract_f_poly(h19, Int(3), 6, chi, dd19.rho, 1);
  REQUIRE(f19.poly.degree() == 2);
  REQUIRE(f19.poly.coeff(0) == Rational(1));
  for (long i = 0; i <= f19.poly.degree(); ++i)
    REQUIRE(denominator(f19.poly.coeff(static_cast<std::size_t>(i))) == 1);

  // p = 2 goes through the lattice evaluator.
  auto h24 = h2(4, 0, 8);  // diag(2, 4), det 2h = 32
  auto dd24 = discriminant_data(h24, 1);
  auto f24 = extract_f_poly(h24, Int(2), 5, kronecker_character(Int(-4)), dd24.rho, 1);
  REQUIRE(f24.poly.coeff(0) == Rational(1));
  REQUIRE(f24.poly.degree() == rational_valuation(h24.det_doubled(), Int(2)).v -
                                   int_valuation(dd24.conductor, Int(2)));
}

TEST_CASE("key valuation margin") {
  auto chi = trivial_character(4);
  auto rep = check_key_valuation(h2(2, 0, 18), Int(3), 6, 1, chi);
  REQUIRE(rep.det_valuation == 2);
  REQUIRE(rep.e_ph == 0);
  REQUIRE(rep.pass);
  REQUIRE(rep.margin >= 0);

  auto rep2 = check_key_valuation(h2(6, 0, 6), Int(3), 4, 1, chi);
  REQUIRE(rep2.det_valuation == 2);
  REQUIRE(rep2.pass);

  auto rep3 = check_key_valuation(h2(2, 0, 6), Int(3), 5, 1, chi);
  REQUIRE(rep3.det_valuation == 1);
  REQUIRE(rep3.e_ph == 1);
  REQUIRE(rep3.pass);
}
