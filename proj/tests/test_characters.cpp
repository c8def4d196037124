#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "eis/dirichlet.hpp"

using namespace eis;

TEST_CASE("Kronecker symbol") {
  // Rows: (a | n) for small a, n including the 2-adic and sign rules.
  REQUIRE(kronecker_symbol(Int(2), Int(7)) == 1);
  REQUIRE(kronecker_symbol(Int(2), Int(5)) == -1);
  REQUIRE(kronecker_symbol(Int(-1), Int(3)) == -1);
  REQUIRE(kronecker_symbol(Int(-1), Int(5)) == 1);
  REQUIRE(kronecker_symbol(Int(3), Int(2)) == -1);
  REQUIRE(kronecker_symbol(Int(7), Int(2)) == 1);
  REQUIRE(kronecker_symbol(Int(4), Int(6)) == 0);
  REQUIRE(kronecker_symbol(Int(-4), Int(3)) == -1);
  REQUIRE(kronecker_symbol(Int(-4), Int(5)) == 1);
  REQUIRE(kronecker_symbol(Int(5), Int(3)) == -1);
  REQUIRE(kronecker_symbol(Int(12), Int(35)) == 1);
  // Multiplicativity spot check in both arguments.
  for (long a : {3L, 5L, 11L})
    for (long b : {7L, 9L, 13L})
      REQUIRE(kronecker_symbol(Int(a * b), Int(17)) ==
              kronecker_symbol(Int(a), Int(17)) * kronecker_symbol(Int(b), Int(17)));
}

TEST_CASE("unit group generators") {
  auto g8 = unit_group_generators(8);
  REQUIRE(g8.size() == 2);
  REQUIRE(g8[0].residue == 7);  // -1
  REQUIRE(g8[0].order == 2);
  REQUIRE(g8[1].residue == 5);
  REQUIRE(g8[1].order == 2);

  auto g15 = unit_group_generators(15);
  REQUIRE(g15.size() == 2);
  REQUIRE(g15[0].order * g15[1].order == 8);  // phi(15)

  // Generators actually generate: dlog round-trips every unit.
  for (unsigned m : {3u, 4u, 5u, 8u, 9u, 12u, 15u, 16u, 21u, 24u}) {
    auto gens = unit_group_generators(m);
    for (unsigned a = 1; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      auto dl = unit_dlog(m, a, gens);
      unsigned long long acc = 1;
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (unsigned t = 0; t < dl[i]; ++t) acc = acc * gens[i].residue % m;
      REQUIRE(acc == a % m);
    }
  }
}

TEST_CASE("character construction and values") {
  auto odd4 = kronecker_character(Int(-4));
  REQUIRE(odd4.modulus() == 4);
  REQUIRE(odd4.parity_bit() == 1);
  REQUIRE(odd4.is_quadratic());
  REQUIRE(odd4(Int(3)) == CyclotomicNumber(Rational(-1)));
  REQUIRE(odd4(Int(2)).is_zero());
  REQUIRE(odd4(Int(-7)) == CyclotomicNumber(Rational(1)));

  auto quad5 = kronecker_character(Int(5));
  REQUIRE(quad5.modulus() == 5);
  REQUIRE(quad5.parity_bit() == 0);
  for (long a = 1; a < 5; ++a)
    REQUIRE(quad5(Int(a)) == CyclotomicNumber(Rational(kronecker_symbol(Int(a), Int(5)))));

  auto triv = trivial_character(6);
  REQUIRE(triv.is_trivial());
  REQUIRE(triv(Int(5)) == CyclotomicNumber(Rational(1)));
  REQUIRE(triv(Int(3)).is_zero());
}

TEST_CASE("character image validation") {
  auto gens = unit_group_generators(5);  // single generator of order 4
  REQUIRE_THROWS_WITH(make_character(5, {}),
                      Catch::Matchers::ContainsSubstring("generator image count"));
  // A square root of unity is fine, a cube root is not.
  std::vector<CyclotomicNumber> bad{CyclotomicNumber::root_of_unity(3, 1)};
  REQUIRE_THROWS_WITH(make_character(5, bad),
                      Catch::Matchers::ContainsSubstring("inconsistent image order"));
  std::vector<CyclotomicNumber> good{CyclotomicNumber::root_of_unity(4, 1)};
  auto chi = make_character(5, good);
  REQUIRE(chi.order() == 4);
  REQUIRE(chi(Int(gens[0].residue)) == CyclotomicNumber::root_of_unity(4, 1));
}

TEST_CASE("conductor and primitive part") {
  // Trivial character mod 12 comes from modulus 1.
  auto [f1, prim1] = conductor_and_primitive(trivial_character(12));
  REQUIRE(f1 == 1);
  REQUIRE(prim1.is_trivial());

  // The mod-12 character induced from the odd character mod 4.
  auto odd4 = kronecker_character(Int(-4));
  auto triv3 = trivial_character(3);
  auto chi12 = character_product(odd4, triv3);
  REQUIRE(chi12.modulus() == 12);
  auto [f2, prim2] = conductor_and_primitive(chi12);
  REQUIRE(f2 == 4);
  REQUIRE(prim2 == odd4);

  // Kronecker character of a fundamental discriminant is already primitive.
  auto quad7 = kronecker_character(Int(-7));
  REQUIRE(conductor_and_primitive(quad7).first == 7);
}

TEST_CASE("character products and conjugates") {
  auto odd4 = kronecker_character(Int(-4));
  auto sq = character_product(odd4, odd4);
  REQUIRE(conductor_and_primitive(sq).first == 1);

  auto quad5 = kronecker_character(Int(5));
  auto prod = character_product(odd4, quad5);
  REQUIRE(prod.modulus() == 20);
  REQUIRE(conductor_and_primitive(prod).first == 20);
  REQUIRE(prod.conjugate() == prod);  // quadratic

  for (long a : {1L, 3L, 7L, 9L, 11L, 13L, 17L, 19L})
    REQUIRE(prod(Int(a)) == odd4(Int(a)) * quad5(Int(a)));
}

TEST_CASE("Gauss sum norms for primitive characters") {
  for (long d : {-4L, 5L, -3L, 8L, -8L, 12L, -7L, 13L, -15L, 21L}) {
    auto chi = kronecker_character(Int(d));
    auto g = gauss_sum(chi);
    Int n(chi.modulus());
    REQUIRE(g * g.conjugate() == CyclotomicNumber(Rational(n)));
  }
}
