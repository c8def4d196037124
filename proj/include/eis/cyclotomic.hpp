#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_M), stored in the power basis
// 1, zeta, ..., zeta^{phi(M)-1} modulo the M-th cyclotomic polynomial.
// Canonical moduli are 1 and any M >= 3 with M mod 4 != 2; Q(zeta_{2u}) equals
// Q(zeta_u) for odd u, so those moduli are rewritten on entry via
// zeta_{2u} = -zeta_u^{(u+1)/2}.

#include "eis/common.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

namespace eis {

inline unsigned euler_phi(unsigned m) {
  unsigned result = m;
  for (unsigned p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

inline std::vector<unsigned> divisors_of(unsigned m) {
  std::vector<unsigned> ds;
  for (unsigned d = 1; d * d <= m; ++d) {
    if (m % d) continue;
    ds.push_back(d);
    if (d != m / d) ds.push_back(m / d);
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

namespace detail {

// Quotient of num / den over Int for monic den; the remainder must vanish.
inline std::vector<Int> int_poly_divide_exact(const std::vector<Int>& num,
                                              const std::vector<Int>& den) {
  require(!den.empty() && den.back() == 1, "divisor must be monic");
  if (num.size() < den.size()) {
    for (const Int& c : num) require(c == 0, "inexact polynomial division");
    return {Int(0)};
  }
  std::vector<Int> rem = num;
  std::vector<Int> quot(num.size() - den.size() + 1, Int(0));
  for (std::size_t k = quot.size(); k-- > 0;) {
    Int c = rem[k + den.size() - 1];
    if (c == 0) continue;
    quot[k] = c;
    for (std::size_t j = 0; j < den.size(); ++j) rem[k + j] -= c * den[j];
  }
  for (const Int& c : rem) require(c == 0, "inexact polynomial division");
  return quot;
}

// Coefficients of the M-th cyclotomic polynomial, low degree first.
// X^M - 1 = prod_{d | M} Phi_d, so Phi_M falls out by exact division.
inline const std::vector<Int>& cyclotomic_polynomial(unsigned m) {
  static std::mutex mu;
  static std::map<unsigned, std::vector<Int>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;

  for (unsigned d : divisors_of(m)) {
    if (cache.count(d)) continue;
    std::vector<Int> num(d + 1, Int(0));
    num[0] = -1;
    num[d] = 1;
    for (unsigned e : divisors_of(d)) {
      if (e == d) continue;
      num = int_poly_divide_exact(num, cache.at(e));
    }
    cache.emplace(d, std::move(num));
  }
  return cache.at(m);
}

// In-place reduction of a rational polynomial modulo Phi_M (monic).
inline void reduce_mod_cyclotomic(std::vector<Rational>& poly, unsigned m) {
  const std::vector<Int>& phi = cyclotomic_polynomial(m);
  const std::size_t deg = phi.size() - 1;
  for (std::size_t i = poly.size(); i-- > deg;) {
    Rational c = poly[i];
    if (c == 0) continue;
    poly[i] = 0;
    for (std::size_t j = 0; j < deg; ++j)
      if (phi[j] != 0) poly[i - deg + j] -= c * Rational(phi[j]);
  }
  poly.resize(deg, Rational(0));
}

inline void trim_poly(std::vector<Rational>& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

inline std::pair<std::vector<Rational>, std::vector<Rational>> rational_poly_divmod(
    std::vector<Rational> num, const std::vector<Rational>& den) {
  require(den.back() != 0, "division by zero polynomial");
  if (num.size() < den.size()) return {{Rational(0)}, std::move(num)};
  std::vector<Rational> quot(num.size() - den.size() + 1, Rational(0));
  const Rational lead = den.back();
  for (std::size_t k = quot.size(); k-- > 0;) {
    Rational c = num[k + den.size() - 1] / lead;
    if (c == 0) continue;
    quot[k] = c;
    for (std::size_t j = 0; j < den.size(); ++j) num[k + j] -= c * den[j];
  }
  num.resize(den.size() - 1, Rational(0));
  if (num.empty()) num.push_back(Rational(0));
  trim_poly(num);
  return {std::move(quot), std::move(num)};
}

}  // namespace detail

class CyclotomicNumber {
 public:
  CyclotomicNumber() : modulus_(1), coords_(1, Rational(0)) {}
  CyclotomicNumber(const Rational& r) : modulus_(1), coords_(1, r) {}
  CyclotomicNumber(const Int& n) : modulus_(1), coords_(1, Rational(n)) {}
  CyclotomicNumber(long n) : modulus_(1), coords_(1, Rational(n)) {}

  // zeta_order^power; the gcd of order and power is divided out first, so the
  // result always lives at the smallest canonical modulus for that root.
  static CyclotomicNumber root_of_unity(unsigned order, long power) {
    require(order > 0, "root of unity needs positive order");
    long p = power % static_cast<long>(order);
    if (p < 0) p += order;
    if (p == 0) return CyclotomicNumber(Rational(1));
    unsigned g = std::gcd(order, static_cast<unsigned>(p));
    order /= g;
    p /= g;
    bool negate = false;
    if (order % 4 == 2) {
      unsigned u = order / 2;
      negate = (p % 2) != 0;
      p = static_cast<long>((static_cast<unsigned long>(p) % u) * ((u + 1) / 2) % u);
      order = u;
      if (p == 0) return CyclotomicNumber(Rational(negate ? -1 : 1));
      unsigned g2 = std::gcd(order, static_cast<unsigned>(p));
      order /= g2;
      p /= g2;
    }
    CyclotomicNumber z;
    z.modulus_ = order;
    std::vector<Rational> poly(static_cast<std::size_t>(p) + 1, Rational(0));
    poly[static_cast<std::size_t>(p)] = 1;
    detail::reduce_mod_cyclotomic(poly, order);
    z.coords_ = std::move(poly);
    if (negate) z = -z;
    return z;
  }

  // sum_t coeffs[t] * zeta_order^t with a single reduction pass.
  static CyclotomicNumber from_root_powers(unsigned order, const std::vector<Rational>& coeffs) {
    require(order > 0, "root of unity needs positive order");
    if (order % 4 == 2) {
      CyclotomicNumber acc;
      for (std::size_t t = 0; t < coeffs.size(); ++t)
        if (coeffs[t] != 0)
          acc = acc + CyclotomicNumber(coeffs[t]) * root_of_unity(order, static_cast<long>(t));
      return acc;
    }
    std::vector<Rational> poly(order, Rational(0));
    for (std::size_t t = 0; t < coeffs.size(); ++t)
      if (coeffs[t] != 0) poly[t % order] += coeffs[t];
    detail::reduce_mod_cyclotomic(poly, order);
    CyclotomicNumber acc;
    acc.modulus_ = order;
    acc.coords_ = std::move(poly);
    return acc;
  }

  unsigned modulus() const { return modulus_; }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_zero() const {
    for (const auto& c : coords_)
      if (c != 0) return false;
    return true;
  }

  // The power basis is a basis, so a rational element has zero coordinates
  // beyond the constant one at any modulus, minimized or not.
  bool is_rational() const {
    for (std::size_t i = 1; i < coords_.size(); ++i)
      if (coords_[i] != 0) return false;
    return true;
  }

  Rational rational_value() const {
    require(is_rational(), "not a rational element");
    return coords_[0];
  }

  CyclotomicNumber embedded_into(unsigned target) const {
    require(target % 4 != 2, "target modulus not canonical");
    require(target % modulus_ == 0, "target modulus must be a multiple");
    if (target == modulus_) return *this;
    unsigned ratio = target / modulus_;
    std::vector<Rational> poly(static_cast<std::size_t>(coords_.size() - 1) * ratio + 1,
                               Rational(0));
    for (std::size_t i = 0; i < coords_.size(); ++i) poly[i * ratio] = coords_[i];
    detail::reduce_mod_cyclotomic(poly, target);
    CyclotomicNumber out;
    out.modulus_ = target;
    out.coords_ = std::move(poly);
    return out;
  }

  friend CyclotomicNumber operator+(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    unsigned m = std::lcm(a.modulus_, b.modulus_);
    CyclotomicNumber x = a.embedded_into(m), y = b.embedded_into(m);
    for (std::size_t i = 0; i < x.coords_.size(); ++i) x.coords_[i] += y.coords_[i];
    return x;
  }

  friend CyclotomicNumber operator-(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    return a + (-b);
  }

  CyclotomicNumber operator-() const {
    CyclotomicNumber x = *this;
    for (auto& c : x.coords_) c = -c;
    return x;
  }

  friend CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    unsigned m = std::lcm(a.modulus_, b.modulus_);
    CyclotomicNumber x = a.embedded_into(m), y = b.embedded_into(m);
    std::vector<Rational> poly(x.coords_.size() + y.coords_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < x.coords_.size(); ++i) {
      if (x.coords_[i] == 0) continue;
      for (std::size_t j = 0; j < y.coords_.size(); ++j) {
        if (y.coords_[j] == 0) continue;
        poly[i + j] += x.coords_[i] * y.coords_[j];
      }
    }
    detail::reduce_mod_cyclotomic(poly, m);
    CyclotomicNumber out;
    out.modulus_ = m;
    out.coords_ = std::move(poly);
    return out;
  }

  CyclotomicNumber inverse() const {
    require(!is_zero(), "inverse of zero");
    // Extended Euclid in Q[X] against Phi_M.  Phi_M is irreducible, so the
    // gcd with any nonzero residue is a nonzero constant; the invariant is
    // s_k * this == r_k (mod Phi_M).
    const std::vector<Int>& phi_int = detail::cyclotomic_polynomial(modulus_);
    std::vector<Rational> r0(phi_int.begin(), phi_int.end());
    std::vector<Rational> r1 = coords_;
    detail::trim_poly(r1);
    std::vector<Rational> s0{Rational(0)}, s1{Rational(1)};
    while (r1.size() > 1) {
      auto [q, r2] = detail::rational_poly_divmod(r0, r1);
      std::vector<Rational> s2 = s0;
      s2.resize(std::max(s2.size(), q.size() + s1.size() - 1), Rational(0));
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] == 0) continue;
        for (std::size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
      }
      r0 = std::move(r1);
      r1 = std::move(r2);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    require(r1[0] != 0, "gcd with the cyclotomic polynomial collapsed");
    std::vector<Rational> poly = std::move(s1);
    for (auto& c : poly) c /= r1[0];
    detail::reduce_mod_cyclotomic(poly, modulus_);
    CyclotomicNumber out;
    out.modulus_ = modulus_;
    out.coords_ = std::move(poly);
    return out;
  }

  friend CyclotomicNumber operator/(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    unsigned m = std::lcm(a.modulus_, b.modulus_);
    return a.embedded_into(m) * b.embedded_into(m).inverse();
  }

  friend bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    unsigned m = std::lcm(a.modulus_, b.modulus_);
    return a.embedded_into(m).coords_ == b.embedded_into(m).coords_;
  }
  friend bool operator!=(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    return !(a == b);
  }

  CyclotomicNumber pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    CyclotomicNumber r(Rational(1)), base = *this;
    unsigned long u = static_cast<unsigned long>(e);
    while (u) {
      if (u & 1ul) r = r * base;
      base = base * base;
      u >>= 1ul;
    }
    return r;
  }

  // Galois action sigma_j : zeta -> zeta^j for gcd(j, M) = 1.
  CyclotomicNumber galois(unsigned j) const {
    if (modulus_ == 1) return *this;
    j %= modulus_;
    require(std::gcd(j, modulus_) == 1, "galois index not coprime to modulus");
    if (j == 1) return *this;
    std::vector<Rational> poly(modulus_, Rational(0));
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] != 0) poly[(i * j) % modulus_] += coords_[i];
    detail::reduce_mod_cyclotomic(poly, modulus_);
    CyclotomicNumber out;
    out.modulus_ = modulus_;
    out.coords_ = std::move(poly);
    return out;
  }

  CyclotomicNumber conjugate() const {
    return modulus_ == 1 ? *this : galois(modulus_ - 1);
  }

  // Rewrites the element over the smallest cyclotomic subfield containing it,
  // by solving for its coordinates in each embedded subfield basis in turn.
  CyclotomicNumber minimized() const {
    if (is_rational()) return CyclotomicNumber(coords_[0]);
    std::vector<unsigned> candidates;
    for (unsigned d : divisors_of(modulus_))
      if (d % 4 != 2) candidates.push_back(d);
    std::sort(candidates.begin(), candidates.end(), [](unsigned a, unsigned b) {
      unsigned pa = euler_phi(a), pb = euler_phi(b);
      return pa != pb ? pa < pb : a < b;
    });
    for (unsigned d : candidates) {
      if (d == modulus_) break;
      auto sol = solve_in_subfield(d);
      if (!sol.first) continue;
      CyclotomicNumber out;
      out.modulus_ = d;
      out.coords_ = std::move(sol.second);
      return out;
    }
    return *this;
  }

  std::complex<double> to_complex() const {
    const double tau = 6.283185307179586476925286766559;
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] == 0) continue;
      double c = coords_[i].convert_to<double>();
      acc += c * std::polar(1.0, tau * static_cast<double>(i) / modulus_);
    }
    return acc;
  }

  // min over the primes P above p of v_P, computed as the minimum coordinate
  // valuation over the minimal power basis; the power basis is an integral
  // basis and stays one locally exactly when p does not ramify, so a modulus
  // divisible by p (after minimization) is rejected.
  Val p_valuation(const Int& p) const {
    CyclotomicNumber x = minimized();
    if (x.is_zero()) return Val::inf();
    require(Int(x.modulus_) % p != 0, "ramified modulus unsupported");
    Val best = Val::inf();
    for (const auto& c : x.coords_) best = Val::min(best, rational_valuation(c, p));
    return best;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] == 0) continue;
      if (!s.empty()) s += " + ";
      s += "(" + rational_to_string(coords_[i]) + ")";
      if (i > 0) s += "*z" + std::to_string(modulus_) + "^" + std::to_string(i);
    }
    return s;
  }

 private:
  // Attempts to express the element over Q(zeta_d) embedded into the current
  // field; returns {false, {}} when the element does not lie there.
  std::pair<bool, std::vector<Rational>> solve_in_subfield(unsigned d) const {
    const unsigned rows = static_cast<unsigned>(coords_.size());
    const unsigned cols = euler_phi(d);
    std::vector<std::vector<Rational>> aug(rows, std::vector<Rational>(cols + 1, Rational(0)));
    for (unsigned c = 0; c < cols; ++c) {
      CyclotomicNumber basis;
      basis.modulus_ = d;
      basis.coords_.assign(cols, Rational(0));
      basis.coords_[c] = 1;
      CyclotomicNumber emb = basis.embedded_into(modulus_);
      for (unsigned r = 0; r < rows; ++r) aug[r][c] = emb.coords_[r];
    }
    for (unsigned r = 0; r < rows; ++r) aug[r][cols] = coords_[r];

    std::vector<long> pivot_of_col(cols, -1);
    unsigned rank = 0;
    for (unsigned c = 0; c < cols && rank < rows; ++c) {
      unsigned sel = rank;
      while (sel < rows && aug[sel][c] == 0) ++sel;
      if (sel == rows) continue;
      std::swap(aug[sel], aug[rank]);
      Rational inv = Rational(1) / aug[rank][c];
      for (unsigned cc = c; cc <= cols; ++cc) aug[rank][cc] *= inv;
      for (unsigned r = 0; r < rows; ++r) {
        if (r == rank || aug[r][c] == 0) continue;
        Rational f = aug[r][c];
        for (unsigned cc = c; cc <= cols; ++cc) aug[r][cc] -= f * aug[rank][cc];
      }
      pivot_of_col[c] = rank;
      ++rank;
    }
    for (unsigned r = rank; r < rows; ++r)
      if (aug[r][cols] != 0) return {false, {}};
    std::vector<Rational> sol(cols, Rational(0));
    for (unsigned c = 0; c < cols; ++c)
      if (pivot_of_col[c] >= 0) sol[c] = aug[static_cast<unsigned>(pivot_of_col[c])][cols];
    return {true, std::move(sol)};
  }

  unsigned modulus_;
  std::vector<Rational> coords_;
};

namespace detail {

// Quadratic Gauss sum square roots: sqrt(2) = zeta_8 + zeta_8^-1 and, for an
// odd prime q, sum_a (a|q) zeta_q^a = sqrt(q) for q = 1 mod 4 and i sqrt(q)
// for q = 3 mod 4.
inline CyclotomicNumber sqrt_of_prime(unsigned long q) {
  if (q == 2)
    return CyclotomicNumber::root_of_unity(8, 1) + CyclotomicNumber::root_of_unity(8, -1);
  std::vector<Rational> coeffs(q, Rational(0));
  for (unsigned long a = 1; a < q; ++a) {
    // Euler's criterion on machine words; q stays small here.
    unsigned long r = 1, base = a % q, e = (q - 1) / 2;
    while (e) {
      if (e & 1ul) r = (r * base) % q;
      base = (base * base) % q;
      e >>= 1ul;
    }
    coeffs[a] = (r == 1) ? 1 : -1;
  }
  CyclotomicNumber g = CyclotomicNumber::from_root_powers(static_cast<unsigned>(q), coeffs);
  if (q % 4 == 3) g = g * CyclotomicNumber::root_of_unity(4, -1);
  return g;
}

}  // namespace detail

// sqrt of a nonnegative integer as an exact cyclotomic number.
inline CyclotomicNumber sqrt_as_cyclotomic(const Int& n) {
  require(n >= 0, "sqrt of a negative integer");
  if (n == 0) return CyclotomicNumber(Rational(0));
  Int rest = n, root_part = 1;
  std::vector<unsigned long> odd_primes;
  for (Int q = 2; q * q <= rest; ++q) {
    if (rest % q != 0) continue;
    unsigned e = 0;
    while (rest % q == 0) {
      rest /= q;
      ++e;
    }
    root_part *= int_pow(q, e / 2);
    if (e % 2) odd_primes.push_back(q.convert_to<unsigned long>());
  }
  if (rest > 1) odd_primes.push_back(rest.convert_to<unsigned long>());
  CyclotomicNumber acc{Rational(root_part)};
  for (unsigned long q : odd_primes) acc = acc * detail::sqrt_of_prime(q);
  return acc;
}

}  // namespace eis
