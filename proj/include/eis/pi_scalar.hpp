#pragma once

// A cyclotomic number times an integer power of pi.  Powers never cancel
// against each other: addition demands equal exponents (zero is the sole
// exception), so a mismatched normalization shows up as an Error instead of
// a silently wrong value.

#include "eis/common.hpp"
#include "eis/cyclotomic.hpp"

#include <complex>

namespace eis {

struct PiScalar {
  CyclotomicNumber value;
  long pi_exponent = 0;

  PiScalar() = default;
  PiScalar(CyclotomicNumber v, long e = 0) : value(std::move(v)), pi_exponent(e) {}
  PiScalar(const Rational& r) : value(r) {}

  bool is_zero() const { return value.is_zero(); }

  friend PiScalar operator+(const PiScalar& a, const PiScalar& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    require(a.pi_exponent == b.pi_exponent, "pi exponents differ in addition");
    return {a.value + b.value, a.pi_exponent};
  }

  friend PiScalar operator-(const PiScalar& a, const PiScalar& b) { return a + (-b); }

  PiScalar operator-() const { return {-value, pi_exponent}; }

  friend PiScalar operator*(const PiScalar& a, const PiScalar& b) {
    if (a.is_zero() || b.is_zero()) return PiScalar{};
    return {a.value * b.value, a.pi_exponent + b.pi_exponent};
  }

  friend PiScalar operator/(const PiScalar& a, const PiScalar& b) {
    require(!b.is_zero(), "division by zero scalar");
    if (a.is_zero()) return PiScalar{};
    return {a.value / b.value, a.pi_exponent - b.pi_exponent};
  }

  friend bool operator==(const PiScalar& a, const PiScalar& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.pi_exponent == b.pi_exponent && a.value == b.value;
  }
  friend bool operator!=(const PiScalar& a, const PiScalar& b) { return !(a == b); }

  std::complex<double> to_complex() const {
    const double pi = 3.14159265358979323846264338328;
    return value.to_complex() * std::pow(pi, static_cast<double>(pi_exponent));
  }

  std::string str() const {
    std::string s = value.str();
    if (pi_exponent != 0 && !value.is_zero())
      s += " * pi^" + std::to_string(pi_exponent);
    return s;
  }
};

}  // namespace eis
