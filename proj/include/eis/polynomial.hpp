#pragma once

// Dense univariate polynomials over an exact coefficient ring, low degree
// first.  The zero polynomial is the empty coefficient vector and has
// degree -1.

#include "eis/common.hpp"

#include <vector>

namespace eis {

template <typename T>
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(const T& constant) {
    if (!(constant == T(0))) c_.push_back(constant);
  }
  static UniPoly monomial(const T& coeff, std::size_t deg) {
    UniPoly p;
    if (coeff == T(0)) return p;
    p.c_.assign(deg + 1, T(0));
    p.c_[deg] = coeff;
    return p;
  }
  static UniPoly from_coeffs(std::vector<T> coeffs) {
    UniPoly p;
    p.c_ = std::move(coeffs);
    p.normalize();
    return p;
  }

  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
  const std::vector<T>& coeffs() const { return c_; }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    r.c_.assign(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = r.c_[i] + a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r.c_[i] = r.c_[i] + b.c_[i];
    r.normalize();
    return r;
  }

  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }

  UniPoly operator-() const {
    UniPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly();
    UniPoly r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == T(0)) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
    }
    r.normalize();
    return r;
  }

  UniPoly scaled(const T& s) const {
    UniPoly r;
    if (s == T(0)) return r;
    r.c_ = c_;
    for (auto& x : r.c_) x = x * s;
    return r;
  }

  // Quotient of *this / d; the division must come out exact.
  UniPoly divide_exact(const UniPoly& d) const {
    require(!d.is_zero(), "division by zero polynomial");
    if (is_zero()) return UniPoly();
    require(c_.size() >= d.c_.size(), "inexact division");
    std::vector<T> rem = c_;
    std::vector<T> quot(c_.size() - d.c_.size() + 1, T(0));
    const T& lead = d.c_.back();
    for (std::size_t k = quot.size(); k-- > 0;) {
      T c = rem[k + d.c_.size() - 1] / lead;
      quot[k] = c;
      if (c == T(0)) continue;
      for (std::size_t j = 0; j < d.c_.size(); ++j)
        rem[k + j] = rem[k + j] - c * d.c_[j];
    }
    for (const T& x : rem) require(x == T(0), "inexact division");
    return from_coeffs(std::move(quot));
  }

  template <typename S>
  S evaluate(const S& x) const {
    S acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + S(c_[i]);
    return acc;
  }

  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == T(0)) continue;
      if (!s.empty()) s += " + ";
      s += "(" + coeff_str(c_[i]) + ")";
      if (i == 1) s += "*X";
      if (i > 1) s += "*X^" + std::to_string(i);
    }
    return s;
  }

 private:
  static std::string coeff_str(const Rational& x) { return rational_to_string(x); }
  static std::string coeff_str(const Int& x) { return x.str(); }
  template <typename U>
  static std::string coeff_str(const U& x) {
    return x.str();
  }

  void normalize() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }

  std::vector<T> c_;
};

using RationalPoly = UniPoly<Rational>;

}  // namespace eis
