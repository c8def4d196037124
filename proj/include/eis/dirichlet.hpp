#pragma once

// Dirichlet characters represented by images on a fixed generating set of
// (Z/m)^x. Values are exact roots of unity (CyclotomicNumber); evaluation
// memoizes a full value table per character on first use.

#include "common.hpp"
#include "cyclotomic.hpp"

#include <memory>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

namespace eis {

// Kronecker symbol (a|n), the Jacobi symbol extended by the standard rules
// for n in {0, -1, 2}.
inline int kronecker_symbol(Int a, Int n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  // (a|2) component: 0 for even a, else +1 when a = +-1 mod 8.
  while (n % 2 == 0) {
    n /= 2;
    if (a % 2 == 0) return 0;
    Int r = a % 8;
    if (r < 0) r += 8;
    if (r == 3 || r == 5) result = -result;
  }
  a %= n;
  if (a < 0) a += n;
  // Jacobi symbol by reciprocity; n is odd and positive here.
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      Int r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

namespace detail {

inline std::vector<std::pair<unsigned, unsigned>> factor_unsigned(unsigned m) {
  std::vector<std::pair<unsigned, unsigned>> out;
  for (unsigned q = 2; static_cast<unsigned long long>(q) * q <= m; ++q) {
    if (m % q == 0) {
      unsigned e = 0;
      while (m % q == 0) {
        m /= q;
        ++e;
      }
      out.emplace_back(q, e);
    }
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

inline unsigned pow_mod(unsigned long long base, unsigned long long exp, unsigned mod) {
  if (mod == 1) return 0;
  unsigned long long acc = 1;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) acc = acc * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return static_cast<unsigned>(acc);
}

// Smallest primitive root mod q^e, q an odd prime.
inline unsigned primitive_root_mod_prime_power(unsigned q, unsigned e) {
  unsigned qe = 1;
  for (unsigned i = 0; i < e; ++i) qe *= q;
  unsigned phi_q = q - 1;
  auto prime_factors = factor_unsigned(phi_q);
  unsigned g = 0;
  for (unsigned cand = 2; cand < q; ++cand) {
    bool ok = true;
    for (const auto& [r, _] : prime_factors) {
      if (pow_mod(cand, phi_q / r, q) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      g = cand;
      break;
    }
  }
  require(g != 0, "no primitive root found");
  if (e == 1) return g;
  // Lift: g works mod q^e unless g^(q-1) = 1 mod q^2, in which case g+q does.
  if (pow_mod(g, q - 1, q * q) == 1) g += q;
  return g % qe;
}

}  // namespace detail

struct UnitGroupGenerator {
  unsigned residue;  // lifted to be 1 mod the complementary factor of m
  unsigned order;
};

// Canonical generating set of (Z/m)^x: components in increasing prime order,
// with the 2-part contributing -1 (order 2) and, for 2^e with e >= 3, also 5
// (order 2^(e-2)).
inline std::vector<UnitGroupGenerator> unit_group_generators(unsigned m) {
  std::vector<UnitGroupGenerator> gens;
  if (m <= 2) return gens;
  auto crt_lift = [m](unsigned value, unsigned q_pow) {
    // x = value mod q_pow, x = 1 mod m/q_pow.
    unsigned rest = m / q_pow;
    for (unsigned x = 1; x < m; ++x) {
      if (x % q_pow == value % q_pow && x % rest == 1 % rest) return x;
    }
    fail("CRT lift failed");
  };
  for (const auto& [q, e] : detail::factor_unsigned(m)) {
    unsigned qe = 1;
    for (unsigned i = 0; i < e; ++i) qe *= q;
    if (q == 2) {
      if (e >= 2) gens.push_back({crt_lift(qe - 1, qe), 2});
      if (e >= 3) gens.push_back({crt_lift(5 % qe, qe), 1u << (e - 2)});
    } else {
      unsigned g = detail::primitive_root_mod_prime_power(q, e);
      gens.push_back({crt_lift(g, qe), qe / q * (q - 1)});
    }
  }
  return gens;
}

// Exponent vector of a on the canonical generators, or nullopt-like failure.
inline std::vector<unsigned> unit_dlog(unsigned m, unsigned a,
                                       const std::vector<UnitGroupGenerator>& gens) {
  std::vector<unsigned> exps;
  exps.reserve(gens.size());
  std::size_t gi = 0;
  for (const auto& [q, e] : detail::factor_unsigned(m)) {
    unsigned qe = 1;
    for (unsigned i = 0; i < e; ++i) qe *= q;
    unsigned aq = a % qe;
    if (q == 2) {
      if (e >= 2) {
        unsigned s = (aq % 4 == 3) ? 1 : 0;
        exps.push_back(s);
        ++gi;
        if (e >= 3) {
          unsigned b = s ? (qe - aq) % qe : aq;
          unsigned t = 0;
          unsigned long long acc = 1;
          while (acc != b) {
            acc = acc * 5 % qe;
            ++t;
            require(t <= qe, "dlog overran the 2-part");
          }
          exps.push_back(t);
          ++gi;
        }
      }
    } else {
      unsigned g = gens[gi].residue % qe;
      unsigned ord = gens[gi].order;
      unsigned t = 0;
      unsigned long long acc = 1;
      while (acc != aq) {
        acc = acc * g % qe;
        ++t;
        require(t <= ord, "dlog overran the odd part");
      }
      exps.push_back(t);
      ++gi;
    }
  }
  return exps;
}

class DirichletCharacter {
 public:
  // Trivial character mod 1.
  DirichletCharacter() : DirichletCharacter(1, {}) {}

  DirichletCharacter(unsigned modulus, std::vector<CyclotomicNumber> images)
      : state_(std::make_shared<State>()) {
    require(modulus >= 1, "character modulus must be positive");
    state_->modulus = modulus;
    state_->gens = unit_group_generators(modulus);
    require(images.size() == state_->gens.size(),
            "generator image count does not match the unit group");
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (!(images[i].pow(state_->gens[i].order) == CyclotomicNumber(Rational(1)))) {
        fail("inconsistent image order");
      }
    }
    state_->images = std::move(images);
  }

  unsigned modulus() const { return state_->modulus; }
  const std::vector<CyclotomicNumber>& generator_images() const { return state_->images; }

  CyclotomicNumber operator()(const Int& a) const {
    unsigned m = state_->modulus;
    Int r = a % m;
    if (r < 0) r += m;
    auto idx = static_cast<unsigned>(r);
    if (m == 1) return CyclotomicNumber(Rational(1));
    ensure_table();
    return state_->table[idx];
  }

  // epsilon in {0,1} with chi(-1) = (-1)^epsilon.
  int parity_bit() const {
    CyclotomicNumber at_minus_one = (*this)(Int(state_->modulus) - 1);
    if (at_minus_one == CyclotomicNumber(Rational(1))) return 0;
    require(at_minus_one == CyclotomicNumber(Rational(-1)),
            "character value at -1 is not a sign");
    return 1;
  }

  unsigned order() const {
    unsigned ord = 1;
    for (std::size_t i = 0; i < state_->images.size(); ++i) {
      ord = std::lcm(ord, root_of_unity_order(state_->images[i], state_->gens[i].order));
    }
    return ord;
  }

  bool is_trivial() const {
    for (const auto& im : state_->images) {
      if (!(im == CyclotomicNumber(Rational(1)))) return false;
    }
    return true;
  }

  bool is_quadratic() const { return order() <= 2; }

  DirichletCharacter conjugate() const {
    std::vector<CyclotomicNumber> imgs;
    imgs.reserve(state_->images.size());
    for (const auto& im : state_->images) imgs.push_back(im.conjugate());
    return DirichletCharacter(state_->modulus, std::move(imgs));
  }

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    if (a.modulus() != b.modulus()) return false;
    for (std::size_t i = 0; i < a.state_->images.size(); ++i) {
      if (!(a.state_->images[i] == b.state_->images[i])) return false;
    }
    return true;
  }
  friend bool operator!=(const DirichletCharacter& a, const DirichletCharacter& b) {
    return !(a == b);
  }

 private:
  struct State {
    unsigned modulus = 1;
    std::vector<UnitGroupGenerator> gens;
    std::vector<CyclotomicNumber> images;
    mutable std::mutex table_mutex;
    mutable std::vector<CyclotomicNumber> table;
    mutable bool table_built = false;
  };

  static unsigned root_of_unity_order(const CyclotomicNumber& z, unsigned bound) {
    CyclotomicNumber acc = z;
    for (unsigned j = 1; j <= bound; ++j) {
      if (acc == CyclotomicNumber(Rational(1))) return j;
      acc = acc * z;
    }
    fail("image is not a root of unity of the expected order");
  }

  // Idempotent fill; safe under concurrent first evaluation.
  void ensure_table() const {
    std::lock_guard<std::mutex> lock(state_->table_mutex);
    if (state_->table_built) return;
    unsigned m = state_->modulus;
    std::vector<CyclotomicNumber> table(m);
    for (unsigned a = 0; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      auto exps = unit_dlog(m, a, state_->gens);
      CyclotomicNumber v(Rational(1));
      for (std::size_t i = 0; i < exps.size(); ++i) {
        v = v * state_->images[i].pow(exps[i]);
      }
      table[a] = v;
    }
    state_->table = std::move(table);
    state_->table_built = true;
  }

  std::shared_ptr<State> state_;
};

inline DirichletCharacter make_character(unsigned modulus,
                                         std::vector<CyclotomicNumber> generator_images) {
  return DirichletCharacter(modulus, std::move(generator_images));
}

inline DirichletCharacter trivial_character(unsigned modulus = 1) {
  auto gens = unit_group_generators(modulus);
  std::vector<CyclotomicNumber> imgs(gens.size(), CyclotomicNumber(Rational(1)));
  return DirichletCharacter(modulus, std::move(imgs));
}

// Character mod |D| given by the Kronecker symbol (D|.). D must be a
// discriminant (0 or 1 mod 4) for this to be a genuine character.
inline DirichletCharacter kronecker_character(const Int& D) {
  require(D != 0, "Kronecker character needs a nonzero discriminant");
  Int r = D % 4;
  if (r < 0) r += 4;
  require(r == 0 || r == 1, "Kronecker character needs D = 0 or 1 mod 4");
  Int absd = D < 0 ? -D : D;
  require(absd <= Int(1u << 30), "discriminant too large for a character modulus");
  auto m = static_cast<unsigned>(absd);
  auto gens = unit_group_generators(m);
  std::vector<CyclotomicNumber> imgs;
  imgs.reserve(gens.size());
  for (const auto& g : gens) {
    imgs.emplace_back(Rational(kronecker_symbol(D, Int(g.residue))));
  }
  return DirichletCharacter(m, std::move(imgs));
}

inline DirichletCharacter character_product(const DirichletCharacter& a,
                                            const DirichletCharacter& b) {
  unsigned m = std::lcm(a.modulus(), b.modulus());
  auto gens = unit_group_generators(m);
  std::vector<CyclotomicNumber> imgs;
  imgs.reserve(gens.size());
  for (const auto& g : gens) {
    imgs.push_back(a(Int(g.residue)) * b(Int(g.residue)));
  }
  return DirichletCharacter(m, std::move(imgs));
}

inline std::pair<unsigned, DirichletCharacter> conductor_and_primitive(
    const DirichletCharacter& chi) {
  unsigned m = chi.modulus();
  for (unsigned f : divisors_of(m)) {
    bool constant_on_kernel = true;
    for (unsigned a = 1; a < m && constant_on_kernel; ++a) {
      if (std::gcd(a, m) != 1 || a % f != 1 % f) continue;
      if (!(chi(Int(a)) == CyclotomicNumber(Rational(1)))) constant_on_kernel = false;
    }
    if (!constant_on_kernel) continue;
    if (f == m) return {f, chi};
    auto gens = unit_group_generators(f);
    std::vector<CyclotomicNumber> imgs;
    imgs.reserve(gens.size());
    for (const auto& g : gens) {
      // Lift g to a unit mod m in the same class mod f.
      unsigned lift = g.residue;
      while (std::gcd(lift, m) != 1) lift += f;
      imgs.push_back(chi(Int(lift)));
    }
    return {f, DirichletCharacter(f, std::move(imgs))};
  }
  fail("conductor search exhausted the divisors");
}

inline CyclotomicNumber gauss_sum(const DirichletCharacter& eta) {
  unsigned f = eta.modulus();
  require(conductor_and_primitive(eta).first == f, "gauss_sum requires a primitive character");
  if (f == 1) return CyclotomicNumber(Rational(1));  // empty sum convention
  CyclotomicNumber acc;
  for (unsigned nu = 1; nu < f; ++nu) {
    if (std::gcd(nu, f) != 1) continue;
    acc = acc + eta(Int(nu)) * CyclotomicNumber::root_of_unity(f, nu);
  }
  return acc;
}

}  // namespace eis
