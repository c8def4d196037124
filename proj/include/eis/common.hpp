#pragma once

// Shared infrastructure: error type, integer aliases, a small deterministic
// parallel map.  Everything in this library is a value type; nothing here
// owns global state except immutable caches guarded by their own mutexes.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace eis {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Contract violations (bad arguments, unsupported regimes) and failed
// internal cross-checks both surface as Error; callers that need to tell
// them apart match on what they asked for, not on the message.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

// Deterministic parallel map: results land in slot i regardless of which
// worker computed them.  width <= 1 degrades to a plain loop.
template <typename Fn>
void parallel_for(std::size_t count, unsigned width, Fn&& fn) {
  if (count == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (width == 0) width = hw;
  width = static_cast<unsigned>(std::min<std::size_t>(width, count));
  if (width <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(width);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(width);
  for (unsigned w = 0; w < width; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= count) break;
          fn(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline Int int_pow(Int base, unsigned e) {
  Int r = 1;
  while (e) {
    if (e & 1u) r *= base;
    base *= base;
    e >>= 1u;
  }
  return r;
}

inline Int factorial(unsigned n) {
  Int r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Int binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Int r = 1;
  for (unsigned i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

inline Rational rational_pow(const Rational& x, long e) {
  if (e == 0) return Rational(1);
  require(x != 0 || e > 0, "zero to a negative power");
  Rational base = x;
  if (e < 0) {
    base = Rational(1) / base;
    e = -e;
  }
  Rational r = 1;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// p-adic valuation of a nonzero integer.
inline long int_valuation(Int v, const Int& p) {
  require(v != 0, "valuation of zero integer");
  long n = 0;
  while (v % p == 0) {
    v /= p;
    ++n;
  }
  return n;
}

// Valuation with an explicit point at infinity (the valuation of 0).
struct Val {
  bool infinite = false;
  long v = 0;

  static Val inf() { return Val{true, 0}; }
  static Val of(long x) { return Val{false, x}; }

  bool operator==(const Val& o) const {
    return infinite == o.infinite && (infinite || v == o.v);
  }
  bool operator<(const Val& o) const {
    if (infinite) return false;
    if (o.infinite) return true;
    return v < o.v;
  }
  static Val min(const Val& a, const Val& b) { return a < b ? a : b; }
  std::string str() const { return infinite ? "inf" : std::to_string(v); }
};

inline Val rational_valuation(const Rational& x, const Int& p) {
  if (x == 0) return Val::inf();
  return Val::of(int_valuation(boost::multiprecision::numerator(x), p) -
                 int_valuation(boost::multiprecision::denominator(x), p));
}

inline Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  require(s.find('.') == std::string::npos, "rationals are slash-form, not decimal");
  if (slash == std::string::npos) return Rational(Int(s));
  Int num(s.substr(0, slash));
  Int den(s.substr(slash + 1));
  require(den != 0, "zero denominator");
  return Rational(num) / Rational(den);
}

inline std::string rational_to_string(const Rational& x) {
  const Int num = boost::multiprecision::numerator(x);
  const Int den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace eis
