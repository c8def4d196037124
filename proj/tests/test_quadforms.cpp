#include <catch2/catch_amalgamated.hpp>

#include "eis/quadforms.hpp"

using namespace eis;

namespace {

QMatrix sym2(const Rational& a, const Rational& b, const Rational& d) {
  QMatrix m(2, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = b;
  m.at(1, 1) = d;
  return m;
}

}  // namespace

TEST_CASE("matrix basics") {
  QMatrix m = sym2(Rational(1), Rational(2), Rational(5));
  REQUIRE(m.det() == Rational(1));
  REQUIRE(m.inverse() * m == QMatrix::identity(2));
  REQUIRE(m.transpose() == m);
  REQUIRE(m.trace() == Rational(6));

  QMatrix s(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) s.at(i, j) = Rational(static_cast<long>(i * 3 + j + 1));
  REQUIRE(s.det() == Rational(0));
  REQUIRE(s.minor_det({0, 1}, {0, 1}) == Rational(-3));
}

TEST_CASE("half-integral matrices") {
  auto h = HalfIntegralMatrix::from_doubled({Int(2), Int(1), Int(1), Int(2)}, 2, 1);
  REQUIRE(h.matrix().at(0, 1) == Rational(1, 2));
  REQUIRE(h.det() == Rational(3, 4));
  REQUIRE(h.det_doubled() == Rational(3));
  REQUIRE(h.is_positive_definite());

  // Level scale: entries live in N^{-1} L.
  auto hn = HalfIntegralMatrix::from_doubled({Int(2), Int(1), Int(1), Int(4)}, 2, 3);
  REQUIRE(hn.matrix().at(0, 0) == Rational(1, 3));
  REQUIRE(hn.cleared().level_scale() == 1);
  REQUIRE(hn.cleared().matrix() == hn.matrix().scaled(Rational(3)));

  QMatrix bad = sym2(Rational(1, 3), Rational(0), Rational(1));
  REQUIRE_THROWS_WITH(HalfIntegralMatrix(bad, 1),
                      Catch::Matchers::ContainsSubstring("entries leave N^{-1}L"));
}

TEST_CASE("positive semidefinite detection") {
  auto psd = HalfIntegralMatrix::from_doubled({Int(2), Int(2), Int(2), Int(2)}, 2, 1);
  REQUIRE(psd.is_positive_semidefinite());
  REQUIRE_FALSE(psd.is_positive_definite());
  auto zero = HalfIntegralMatrix::from_doubled({Int(0), Int(0), Int(0), Int(0)}, 2, 1);
  REQUIRE(zero.is_positive_semidefinite());
  auto indef = HalfIntegralMatrix::from_doubled({Int(2), Int(0), Int(0), Int(-2)}, 2, 1);
  REQUIRE_FALSE(indef.is_positive_semidefinite());
}

TEST_CASE("discriminant data") {
  // det(2h) = 4 for the identity: Delta = -4, already fundamental.
  auto id = HalfIntegralMatrix::from_doubled({Int(2), Int(0), Int(0), Int(2)}, 2, 1);
  auto d1 = discriminant_data(id, 1);
  REQUIRE(d1.fundamental_discriminant == -4);
  REQUIRE(d1.conductor == 4);
  REQUIRE(d1.square_part == 1);
  REQUIRE(d1.rho(Int(3)) == CyclotomicNumber(Rational(-1)));

  // det(2h) = 12: Delta = -12 = (-3) * 2^2.
  auto h13 = HalfIntegralMatrix::from_doubled({Int(2), Int(0), Int(0), Int(6)}, 2, 1);
  auto d2 = discriminant_data(h13, 1);
  REQUIRE(d2.fundamental_discriminant == -3);
  REQUIRE(d2.conductor == 3);
  REQUIRE(d2.square_part == 2);

  // det(2h) = 36: Delta = -36 = (-4) * 3^2.
  auto h19 = HalfIntegralMatrix::from_doubled({Int(2), Int(0), Int(0), Int(18)}, 2, 1);
  auto d3 = discriminant_data(h19, 1);
  REQUIRE(d3.fundamental_discriminant == -4);
  REQUIRE(d3.square_part == 3);
}

TEST_CASE("quadratic space classification mod p") {
  // Identity: epsilon = (-1 | p).
  QMatrix id = QMatrix::identity(2);
  REQUIRE(classify_mod_p(id, Int(3)).rank == 2);
  REQUIRE(classify_mod_p(id, Int(3)).epsilon == -1);
  REQUIRE(classify_mod_p(id, Int(5)).epsilon == 1);

  // Hyperbolic plane: split regardless of p.
  QMatrix hyp = sym2(Rational(0), Rational(1), Rational(0));
  REQUIRE(classify_mod_p(hyp, Int(3)).rank == 2);
  REQUIRE(classify_mod_p(hyp, Int(3)).epsilon == 1);
  REQUIRE(classify_mod_p(hyp, Int(7)).epsilon == 1);

  // Rank drop mod p.
  QMatrix dg = sym2(Rational(1), Rational(0), Rational(3));
  REQUIRE(classify_mod_p(dg, Int(3)).rank == 1);
  REQUIRE(classify_mod_p(QMatrix(2, 2), Int(5)).rank == 0);

  REQUIRE_THROWS_WITH(classify_mod_p(id, Int(2)),
                      Catch::Matchers::ContainsSubstring("dyadic classification out of scope"));
}

TEST_CASE("classification matches the isotropic vector count") {
  // A full-rank binary space over F_p is split iff it has 2(p-1) nonzero
  // isotropic vectors; anisotropic spaces have none.
  for (long pl : {3L, 5L, 7L}) {
    Int p(pl);
    for (long a = 0; a < pl; ++a)
      for (long b = 0; b < pl; ++b)
        for (long d = 0; d < pl; ++d) {
          QMatrix s = sym2(Rational(a), Rational(b), Rational(d));
          auto cls = classify_mod_p(s, p);
          if (cls.rank != 2) continue;
          long count = 0;
          for (long x = 0; x < pl; ++x)
            for (long y = 0; y < pl; ++y) {
              if (x == 0 && y == 0) continue;
              long q = (a * x * x + 2 * b * x * y + d * y * y) % pl;
              if (q == 0) ++count;
            }
          REQUIRE(count == (cls.epsilon == 1 ? 2 * (pl - 1) : 0));
        }
  }
}

TEST_CASE("minor valuations and elementary divisors") {
  QMatrix r = sym2(Rational(1, 3), Rational(0), Rational(1, 9));
  REQUIRE(elementary_divisor_exponent(r, Int(3)) == 3);
  QMatrix s = sym2(Rational(1, 3), Rational(0), Rational(9));
  REQUIRE(elementary_divisor_exponent(s, Int(3)) == 1);
  REQUIRE(elementary_divisor_exponent(QMatrix::identity(2), Int(3)) == 0);

  auto sm = smith_exponents(sym2(Rational(3), Rational(0), Rational(27)), Int(3));
  REQUIRE(sm == std::vector<long>{1, 3});
}
