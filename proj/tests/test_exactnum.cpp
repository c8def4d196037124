#include <catch2/catch_amalgamated.hpp>

#include "eis/bernoulli.hpp"
#include "eis/common.hpp"
#include "eis/cyclotomic.hpp"
#include "eis/pi_scalar.hpp"
#include "eis/polynomial.hpp"

using namespace eis;

TEST_CASE("integer and rational valuations") {
  REQUIRE(int_valuation(Int(48), Int(2)) == 4);
  REQUIRE(int_valuation(Int(-27), Int(3)) == 3);
  REQUIRE(rational_valuation(Rational(9, 4), Int(2)).v == -2);
  REQUIRE(rational_valuation(Rational(9, 4), Int(3)).v == 2);
  REQUIRE(rational_valuation(Rational(0), Int(5)).infinite);
  REQUIRE(Val::of(1) < Val::inf());
  REQUIRE(Val::min(Val::of(-2), Val::of(3)) == Val::of(-2));
}

TEST_CASE("roots of unity and canonical moduli") {
  auto i = CyclotomicNumber::root_of_unity(4, 1);
  REQUIRE(i * i == CyclotomicNumber(Rational(-1)));
  REQUIRE(i.pow(4) == CyclotomicNumber(Rational(1)));

  // Order 2u with u odd is folded into modulus u.
  auto z6 = CyclotomicNumber::root_of_unity(6, 1);
  REQUIRE(z6.modulus() == 3);
  REQUIRE(z6.pow(3) == CyclotomicNumber(Rational(-1)));
  REQUIRE(z6.pow(6) == CyclotomicNumber(Rational(1)));

  auto z5 = CyclotomicNumber::root_of_unity(5, 1);
  CyclotomicNumber sum;
  for (long t = 0; t < 5; ++t) sum = sum + z5.pow(t);
  REQUIRE(sum.is_zero());
}

TEST_CASE("field arithmetic in small cyclotomic fields") {
  auto z5 = CyclotomicNumber::root_of_unity(5, 1);
  auto x = CyclotomicNumber(Rational(1)) + z5;
  REQUIRE(x * x.inverse() == CyclotomicNumber(Rational(1)));
  REQUIRE(z5.conjugate() == z5.pow(-1));
  REQUIRE((z5 + z5.conjugate()).conjugate() == z5 + z5.conjugate());

  // Galois action permutes the roots.
  REQUIRE(z5.galois(2) == z5.pow(2));
  REQUIRE((z5 + z5.pow(2)).galois(3) == z5.pow(3) + z5.pow(6));
}

TEST_CASE("minimization into subfields") {
  auto z8 = CyclotomicNumber::root_of_unity(8, 1);
  auto two = (z8 + z8.pow(-1)) * (z8 + z8.pow(-1));
  REQUIRE(two.minimized().modulus() == 1);
  REQUIRE(two.is_rational());
  REQUIRE(two.rational_value() == Rational(2));

  auto z12 = CyclotomicNumber::root_of_unity(12, 1);
  REQUIRE(z12.pow(3).minimized().modulus() == 4);
}

TEST_CASE("exact square roots of integers") {
  for (long v : {0L, 1L, 2L, 3L, 4L, 5L, 8L, 12L, 15L, 20L, 45L}) {
    auto r = sqrt_as_cyclotomic(Int(v));
    REQUIRE(r * r == CyclotomicNumber(Rational(v)));
  }
  REQUIRE(sqrt_as_cyclotomic(Int(49)).is_rational());
  REQUIRE(sqrt_as_cyclotomic(Int(49)).rational_value() == Rational(7));
}

TEST_CASE("coordinate p-valuations") {
  auto z5 = CyclotomicNumber::root_of_unity(5, 1);
  auto x = (CyclotomicNumber(Rational(9)) * z5 + CyclotomicNumber(Rational(3)));
  REQUIRE(x.p_valuation(Int(3)) == Val::of(1));
  REQUIRE(CyclotomicNumber(Rational(0)).p_valuation(Int(7)) == Val::inf());
  // v_p is only defined away from ramification: p must not divide the modulus.
  REQUIRE_THROWS_WITH(z5.p_valuation(Int(5)),
                      Catch::Matchers::ContainsSubstring("ramified modulus unsupported"));
}

TEST_CASE("pi-power scalars") {
  PiScalar a{CyclotomicNumber(Rational(3)), 2};
  PiScalar b{CyclotomicNumber(Rational(5)), 2};
  REQUIRE((a + b).value == CyclotomicNumber(Rational(8)));
  PiScalar c{CyclotomicNumber(Rational(1)), 0};
  REQUIRE_THROWS_WITH(a + c, Catch::Matchers::ContainsSubstring("pi exponents differ"));
  PiScalar zero{CyclotomicNumber(Rational(0)), 0};
  REQUIRE((a + zero).pi_exponent == 2);
  REQUIRE((a * c).pi_exponent == 2);
  REQUIRE((a * b).pi_exponent == 4);
}

TEST_CASE("polynomial division") {
  auto x = UniPoly<Rational>::monomial(Rational(1), 1);
  auto one = UniPoly<Rational>(Rational(1));
  auto prod = (one - x) * (one + x.scaled(Rational(3))) * (one + x + x * x);
  auto back = prod.divide_exact(one + x.scaled(Rational(3)));
  REQUIRE(back == (one - x) * (one + x + x * x));
  REQUIRE_THROWS_WITH((one + x).divide_exact(one - x),
                      Catch::Matchers::ContainsSubstring("inexact division"));
}

TEST_CASE("classical Bernoulli numbers") {
  REQUIRE(bernoulli_number(0) == Rational(1));
  REQUIRE(bernoulli_number(1) == Rational(-1, 2));
  REQUIRE(bernoulli_number(2) == Rational(1, 6));
  REQUIRE(bernoulli_number(3) == Rational(0));
  REQUIRE(bernoulli_number(12) == Rational(-691, 2730));
  auto b2 = bernoulli_polynomial(2);
  REQUIRE(b2.coeff(0) == Rational(1, 6));
  REQUIRE(b2.coeff(1) == Rational(-1));
  REQUIRE(b2.coeff(2) == Rational(1));
}

TEST_CASE("generalized Bernoulli numbers against the series oracle") {
  // Trivial character mod 1 uses B_n(1), so the n = 1 value flips sign.
  auto triv = trivial_character();
  REQUIRE(generalized_bernoulli(1, triv) == CyclotomicNumber(Rational(1, 2)));
  REQUIRE(generalized_bernoulli(2, triv) == CyclotomicNumber(Rational(1, 6)));

  auto odd4 = kronecker_character(Int(-4));
  REQUIRE(generalized_bernoulli(1, odd4) == CyclotomicNumber(Rational(-1, 2)));

  for (unsigned m : {1u, 3u, 4u, 5u, 7u, 8u}) {
    auto gens = unit_group_generators(m);
    // Quadratic characters suffice here; the full sweep lives in acceptance.
    std::vector<DirichletCharacter> chars;
    chars.push_back(trivial_character(m));
    for (std::size_t g = 0; g < gens.size(); ++g) {
      std::vector<CyclotomicNumber> imgs;
      for (std::size_t t = 0; t < gens.size(); ++t)
        imgs.push_back(CyclotomicNumber(Rational(t == g && gens[t].order % 2 == 0 ? -1 : 1)));
      chars.push_back(make_character(m, imgs));
    }
    for (const auto& chi : chars)
      for (unsigned n = 0; n <= 6; ++n)
        REQUIRE(generalized_bernoulli(n, chi) == generalized_bernoulli_series_oracle(n, chi));
  }
}

TEST_CASE("Gauss sums") {
  auto odd4 = kronecker_character(Int(-4));
  auto g4 = gauss_sum(odd4);
  REQUIRE(g4 == CyclotomicNumber::root_of_unity(4, 1) * CyclotomicNumber(Rational(2)));

  auto quad5 = kronecker_character(Int(5));
  auto g5 = gauss_sum(quad5);
  REQUIRE(g5 * g5 == CyclotomicNumber(Rational(5)));

  auto quad15 = kronecker_character(Int(-15));
  auto g15 = gauss_sum(quad15);
  REQUIRE(g15 * g15 == CyclotomicNumber(Rational(-15)));
  REQUIRE(g15 * g15.conjugate() == CyclotomicNumber(Rational(15)));

  REQUIRE(gauss_sum(trivial_character()) == CyclotomicNumber(Rational(1)));
  REQUIRE_THROWS_WITH(gauss_sum(trivial_character(4)),
                      Catch::Matchers::ContainsSubstring("primitive"));
}

TEST_CASE("L-value bracket at weight 2, level 4") {
  // k = 2, n = 1, trivial character mod 4, rho the discriminant -4 character:
  // the bracket collapses to 1/2.
  auto chi = trivial_character(4);
  auto rho = kronecker_character(Int(-4));
  auto br = l_value_bracket(2, 1, chi, rho, 4);
  REQUIRE(br.value.pi_exponent == 0);
  REQUIRE(br.value.value == CyclotomicNumber(Rational(1, 2)));
  REQUIRE(br.epsilon == 1);
  REQUIRE(br.gauss_unit_part.conductor == 4);
}

TEST_CASE("bracket parity failure is reported") {
  // k - n = 3 odd with an even character: the L-value formula does not apply.
  auto chi = trivial_character(4);
  auto rho = trivial_character(1);
  REQUIRE_THROWS_WITH(l_value_bracket(4, 1, chi, rho, 4),
                      Catch::Matchers::ContainsSubstring("bracket vanishes by parity"));
}
