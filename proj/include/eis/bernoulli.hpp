#pragma once

// Bernoulli numbers and polynomials, generalized Bernoulli numbers B_{n,eta},
// and the assembled algebraic L-value bracket
//   pi^{n-k} N_h^{k-n-1/2} L^N(k-n, chi rho_h).

#include "common.hpp"
#include "cyclotomic.hpp"
#include "dirichlet.hpp"
#include "pi_scalar.hpp"
#include "polynomial.hpp"

#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace eis {

// B_1 = -1/2 convention.
inline Rational bernoulli_number(unsigned n) {
  static std::mutex mtx;
  static std::vector<Rational> cache{Rational(1)};
  std::lock_guard<std::mutex> lock(mtx);
  while (cache.size() <= n) {
    auto m = static_cast<unsigned>(cache.size());
    // sum_{j=0}^{m} binom(m+1, j) B_j = 0
    Rational acc(0);
    for (unsigned j = 0; j < m; ++j) {
      acc += Rational(binomial(m + 1, j)) * cache[j];
    }
    cache.push_back(-acc / Rational(m + 1));
  }
  return cache[n];
}

// B_n(x) = sum_i binom(n,i) B_{n-i} x^i.
inline RationalPoly bernoulli_polynomial(unsigned n) {
  std::vector<Rational> coeffs(n + 1);
  for (unsigned i = 0; i <= n; ++i) {
    coeffs[i] = Rational(binomial(n, i)) * bernoulli_number(n - i);
  }
  return RationalPoly::from_coeffs(std::move(coeffs));
}

// Closed formula B_{n,eta} = F^{n-1} sum_{a=1}^{F} eta(a) B_n(a/F), F the
// modulus of eta as given (not its conductor). At F = 1 this is B_n(1), so
// B_{1,trivial mod 1} = +1/2 while the plain Bernoulli number keeps B_1 = -1/2.
inline CyclotomicNumber generalized_bernoulli(unsigned n, const DirichletCharacter& eta) {
  unsigned F = eta.modulus();
  RationalPoly bn = bernoulli_polynomial(n);
  CyclotomicNumber acc;
  for (unsigned a = 1; a <= F; ++a) {
    CyclotomicNumber va = eta(Int(a));
    if (va.is_zero()) continue;
    acc = acc + va * CyclotomicNumber(bn.evaluate<Rational>(Rational(a) / Rational(F)));
  }
  Rational scale = rational_pow(Rational(F), static_cast<long>(n) - 1);
  return CyclotomicNumber(scale) * acc;
}

// Independent oracle: extract B_{n,eta} from the truncated generating series
//   sum_{a=1}^{F} eta(a) t e^{at} / (e^{Ft} - 1) = sum_n B_{n,eta} t^n / n!.
inline CyclotomicNumber generalized_bernoulli_series_oracle(unsigned n,
                                                            const DirichletCharacter& eta) {
  unsigned F = eta.modulus();
  std::size_t len = n + 1;
  // Numerator divided by t: coefficients c_j = sum_a eta(a) a^j / j!.
  std::vector<CyclotomicNumber> num(len);
  for (unsigned a = 1; a <= F; ++a) {
    CyclotomicNumber va = eta(Int(a));
    if (va.is_zero()) continue;
    Rational power(1);
    for (std::size_t j = 0; j < len; ++j) {
      num[j] = num[j] + va * CyclotomicNumber(power / Rational(factorial(static_cast<unsigned>(j))));
      power *= Rational(a);
    }
  }
  // Denominator divided by t: d_j = F^{j+1} / (j+1)!.
  std::vector<Rational> den(len);
  {
    Rational power(F);
    for (std::size_t j = 0; j < len; ++j) {
      den[j] = power / Rational(factorial(static_cast<unsigned>(j) + 1));
      power *= Rational(F);
    }
  }
  // Power-series division num/den to order n; den[0] = F != 0.
  std::vector<CyclotomicNumber> quot(len);
  for (std::size_t j = 0; j < len; ++j) {
    CyclotomicNumber acc = num[j];
    for (std::size_t i = 0; i < j; ++i) {
      acc = acc - quot[i] * CyclotomicNumber(den[j - i]);
    }
    quot[j] = acc / CyclotomicNumber(den[0]);
  }
  return quot[n] * CyclotomicNumber(Rational(factorial(n)));
}

struct GaussUnitPart {
  CyclotomicNumber gauss_value;  // G(eta_h)
  unsigned conductor = 1;        // N_h
  unsigned n1 = 1;               // part of N_h supported on primes of the level
  unsigned n2 = 1;               // prime-to-level part
  CyclotomicNumber mu;           // G(eta) = mu G(chi_1) G(chi_2)
  CyclotomicNumber unit;         // W = G(eta_h) / (i^eps sqrt(N_h)), |W| = 1
  Rational u;                    // N_h / C_h
  CyclotomicNumber u_sqrt;       // exact square root of u
};

struct LValueBracket {
  PiScalar value;                  // pi_exponent 0 after assembly
  CyclotomicNumber bernoulli_part; // B_{k-n, conj(eta_h)}
  CyclotomicNumber integral_core;  // value / unit; the part carrying p-valuations
  GaussUnitPart gauss_unit_part;
  DirichletCharacter eta;          // primitive eta_h = chi rho_h
  int epsilon = 0;
};

namespace detail {

// Canonical cache key: the generator images pin the character given its
// modulus, because the generators themselves are derived from the modulus.
inline std::string character_key(const DirichletCharacter& chi) {
  std::string s = std::to_string(chi.modulus());
  for (const auto& g : chi.generator_images()) s += "|" + g.str();
  return s;
}

}  // namespace detail

// Assembles
//   (-1)^{1+(k-n-eps)/2} G(eta_h)/(2 i^eps) (2/N_h)^{k-n} N_h^{k-n-1/2}
//     B_{k-n, conj(eta_h)}/(k-n)! prod_{l | N} (1 - eta_h(l) l^{n-k}),
// the finite form of pi^{n-k} N_h^{k-n-1/2} L^N(k-n, eta_h). rho must be
// primitive (conductor C_h); chi has modulus dividing the level N.
inline LValueBracket l_value_bracket_uncached(int k, int n, const DirichletCharacter& chi,
                                              const DirichletCharacter& rho, unsigned N) {
  require(k - n >= 1, "bracket needs k - n >= 1");
  require(conductor_and_primitive(rho).first == rho.modulus(),
          "rho must be primitive");
  LValueBracket out;
  unsigned c_h = rho.modulus();
  auto [n_h, eta] = conductor_and_primitive(character_product(chi, rho));
  out.eta = eta;
  out.epsilon = eta.parity_bit();
  int s = k - n;
  if ((s - out.epsilon) % 2 != 0) {
    fail("bracket vanishes by parity — L(k−n, η_h) formula inapplicable");
  }

  const CyclotomicNumber one(Rational(1));
  CyclotomicNumber g_eta = gauss_sum(eta);
  require(g_eta * g_eta.conjugate() == CyclotomicNumber(Rational(n_h)),
          "Gauss sum norm is off");

  // Factor over the level: N_1 carries the primes of N, N_2 the rest, and
  // G(eta) = mu G(chi_1) G(chi_2) with mu = chi_1(N_2) chi_2(N_1).
  unsigned n1 = 1;
  for (const auto& [q, e] : detail::factor_unsigned(n_h)) {
    unsigned qe = 1;
    for (unsigned i = 0; i < e; ++i) qe *= q;
    if (N % q == 0) n1 *= qe;
  }
  unsigned n2 = n_h / n1;
  auto restrict_to = [&](unsigned part) {
    auto gens = unit_group_generators(part);
    std::vector<CyclotomicNumber> imgs;
    imgs.reserve(gens.size());
    unsigned other = n_h / part;
    for (const auto& g : gens) {
      unsigned lift = g.residue % part;
      // x = lift mod part, x = 1 mod other.
      unsigned x = 1;
      for (; x <= n_h; ++x) {
        if (x % part == lift && x % other == 1 % other) break;
      }
      imgs.push_back(eta(Int(x)));
    }
    return DirichletCharacter(part, std::move(imgs));
  };
  DirichletCharacter chi1 = restrict_to(n1);
  DirichletCharacter chi2 = restrict_to(n2);
  CyclotomicNumber mu = chi1(Int(n2)) * chi2(Int(n1));
  require(g_eta == mu * gauss_sum(chi1) * gauss_sum(chi2),
          "Gauss sum factorization over the level failed");

  // W = G(eta)/(i^eps sqrt(N_h)) is a unit at every finite place.  Both
  // divisors are normed units, so divide by multiplying: 1/i^eps = i^{-eps}
  // and 1/sqrt(N_h) = sqrt(N_h)/N_h.  This keeps the computation out of the
  // generic polynomial-inverse path, which is slow at large conductors.
  CyclotomicNumber i_eps_inv = CyclotomicNumber::root_of_unity(4, (4u - out.epsilon) % 4u);
  CyclotomicNumber w = (g_eta * i_eps_inv * sqrt_as_cyclotomic(Int(n_h)) *
                        CyclotomicNumber(Rational(1) / Rational(n_h)))
                           .minimized();
  require(w * w.conjugate() == one, "Gauss unit is not on the unit circle");

  out.bernoulli_part = generalized_bernoulli(static_cast<unsigned>(s), eta.conjugate());

  CyclotomicNumber euler = one;
  for (const auto& [q, e] : detail::factor_unsigned(N)) {
    (void)e;
    CyclotomicNumber term =
        one - eta(Int(q)) * CyclotomicNumber(rational_pow(Rational(q), n - k));
    euler = euler * term;
  }

  int sign = ((1 + (s - out.epsilon) / 2) % 2 == 0) ? 1 : -1;
  CyclotomicNumber core = CyclotomicNumber(Rational(sign) *
                                           rational_pow(Rational(2), s - 1) /
                                           Rational(factorial(static_cast<unsigned>(s)))) *
                          out.bernoulli_part * euler;
  out.integral_core = core.minimized();
  out.value = PiScalar((out.integral_core * w).minimized(), 0);

  out.gauss_unit_part.gauss_value = g_eta;
  out.gauss_unit_part.conductor = n_h;
  out.gauss_unit_part.n1 = n1;
  out.gauss_unit_part.n2 = n2;
  out.gauss_unit_part.mu = mu;
  out.gauss_unit_part.unit = w;
  out.gauss_unit_part.u = Rational(n_h) / Rational(c_h);
  out.gauss_unit_part.u_sqrt =
      (sqrt_as_cyclotomic(Int(n_h) * Int(c_h)) * CyclotomicNumber(Rational(1) / Rational(c_h)))
          .minimized();
  return out;
}

// The bracket depends on the index only through rho_h, so expansion builds
// and the per-prime integrality reports hit a small set of distinct inputs
// many times over. Misses may compute concurrently; the first insert wins,
// which is harmless because the computation is deterministic.
inline LValueBracket l_value_bracket(int k, int n, const DirichletCharacter& chi,
                                     const DirichletCharacter& rho, unsigned N) {
  static std::mutex mu;
  static std::map<std::string, LValueBracket> cache;
  std::string key = std::to_string(k) + "#" + std::to_string(n) + "#" + std::to_string(N) +
                    "#" + detail::character_key(chi) + "#" + detail::character_key(rho);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  LValueBracket out = l_value_bracket_uncached(k, n, chi, rho, N);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(out)).first->second;
}

}  // namespace eis
