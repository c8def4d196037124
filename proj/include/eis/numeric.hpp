#pragma once

// Floating-point oracles for the expansion machinery: the defining coset
// series of the Eisenstein series evaluated directly at a point of the
// Siegel upper half space, and numeric evaluation of a NormalizedExpansion
// with the normalization record multiplied back in. Agreement between the
// two is the end-to-end check that the exact Fourier assembly expands the
// function the series defines.

#include "eisenstein.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <vector>

namespace eis {

using Cplx = std::complex<double>;

// A symmetric complex matrix with positive definite imaginary part, stored
// row-major. Only degree 2 points are accepted by the series enumerator.
struct SiegelPoint {
  std::size_t size = 0;
  std::vector<Cplx> entries;

  SiegelPoint(std::size_t n, std::vector<Cplx> e) : size(n), entries(std::move(e)) {
    require(entries.size() == size * size, "point shape mismatch");
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = i + 1; j < size; ++j)
        require(std::abs(entries[i * size + j] - entries[j * size + i]) <= 1e-12,
                "evaluation point must be symmetric");
  }

  Cplx at(std::size_t i, std::size_t j) const { return entries[i * size + j]; }

  // Leading principal minors of Im Z, all of which must be positive.
  bool imag_positive_definite() const {
    if (size == 1) return at(0, 0).imag() > 0;
    if (size == 2) {
      double y00 = at(0, 0).imag(), y11 = at(1, 1).imag(), y01 = at(0, 1).imag();
      return y00 > 0 && y00 * y11 - y01 * y01 > 0;
    }
    return false;
  }

  double min_imag_eigenvalue() const {
    require(size == 2, "eigenvalue helper is implemented for degree 2");
    double y00 = at(0, 0).imag(), y11 = at(1, 1).imag(), y01 = at(0, 1).imag();
    double tr = y00 + y11, det = y00 * y11 - y01 * y01;
    double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
    return (tr - disc) / 2.0;
  }
};

namespace detail {

struct ExtGcd {
  long long g, x, y;  // g = gcd(a, b) >= 0, g = x a + y b
};

inline ExtGcd ext_gcd(long long a, long long b) {
  long long old_r = a, r = b;
  long long old_x = 1, x = 0;
  long long old_y = 0, y = 1;
  while (r != 0) {
    long long q = old_r / r;
    long long t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_x - q * x;
    old_x = x;
    x = t;
    t = old_y - q * y;
    old_y = y;
    y = t;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_x = -old_x;
    old_y = -old_y;
  }
  return {old_r, old_x, old_y};
}

// Deterministic representative of the left GL_2(Z) orbit of a rank-2
// integer 2x4 matrix: row Hermite form with positive pivots and the entry
// above the second pivot reduced into [0, pivot).
inline std::array<long long, 8> hnf_2x4(std::array<long long, 8> m) {
  auto e = [&m](int r, int c) -> long long& { return m[static_cast<std::size_t>(r) * 4 + c]; };
  int p0 = -1;
  for (int c = 0; c < 4 && p0 < 0; ++c)
    if (e(0, c) != 0 || e(1, c) != 0) p0 = c;
  require(p0 >= 0, "zero matrix has no canonical form");
  {
    ExtGcd eg = ext_gcd(e(0, p0), e(1, p0));
    long long a_g = e(0, p0) / eg.g, b_g = e(1, p0) / eg.g;
    for (int c = 0; c < 4; ++c) {
      long long r0 = e(0, c), r1 = e(1, c);
      e(0, c) = eg.x * r0 + eg.y * r1;
      e(1, c) = -b_g * r0 + a_g * r1;
    }
  }
  int p1 = -1;
  for (int c = p0 + 1; c < 4 && p1 < 0; ++c)
    if (e(1, c) != 0) p1 = c;
  require(p1 >= 0, "canonical form needs rank 2");
  if (e(1, p1) < 0)
    for (int c = 0; c < 4; ++c) e(1, c) = -e(1, c);
  long long piv = e(1, p1);
  long long q = e(0, p1) / piv;
  if (e(0, p1) - q * piv < 0) --q;  // floor division
  if (q != 0)
    for (int c = 0; c < 4; ++c) e(0, c) -= q * e(1, c);
  return m;
}

inline long long minor_gcd_2x4(const std::array<long long, 8>& m) {
  long long g = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      long long mi = m[i] * m[4 + j] - m[j] * m[4 + i];
      g = ext_gcd(g, mi).g;
    }
  }
  return g;
}

inline Cplx det2(const std::array<Cplx, 4>& m) { return m[0] * m[3] - m[1] * m[2]; }

// z^{-k} for integer k >= 1 by squaring; integer exponents avoid the branch
// ambiguity of the transcendental pow.
inline Cplx inv_int_pow(Cplx z, int k) {
  Cplx acc(1.0, 0.0), base = z;
  unsigned e = static_cast<unsigned>(k);
  while (e) {
    if (e & 1u) acc *= base;
    base *= base;
    e >>= 1u;
  }
  return Cplx(1.0, 0.0) / acc;
}

}  // namespace detail

// Cumulative values of both coset sums over classes of shell <= height.
struct SeriesShell {
  long long height = 0;
  Cplx translate_sum;  // sum of chi(det D) det(D Z - C)^{-k}
  Cplx standard_sum;   // sum of chi(det D) det(C Z + D)^{-k}
  std::size_t classes = 0;  // classes in this shell alone
};

struct DirectSeriesResult {
  Cplx value;           // the translate series: what the expansion expands
  Cplx standard_value;  // the series at the identity coset normalization
  std::vector<SeriesShell> shells;
  std::size_t class_count = 0;
  double tail_estimate = 0.0;  // geometric extrapolation of shell increments
  bool height_warning = false; // increments not visibly decaying at the top shell
};

// Evaluates the defining series over left GL_2(Z) classes of coprime
// symmetric pairs (C, D) with N | C, both through the identity coset
// normalization (term det(CZ+D)^{-k}, the (0, I) class contributing 1) and
// through the inversion translate (term det(DZ-C)^{-k}, supported on
// positive definite Fourier indices). Classes are those whose canonical
// form has max entry <= height, so each shell is complete and the partial
// sums are deterministic. chi(-1) = (-1)^k makes both terms orbit
// invariants; the spec validation enforces that parity.
inline DirectSeriesResult direct_series_numeric(const EisensteinSpec& spec, const SiegelPoint& z,
                                                long long height) {
  spec.validate();
  require(spec.m0 == 0, "the direct series is evaluated at the holomorphic point");
  require(spec.k >= static_cast<int>(2 * spec.n + 2), "direct series needs k >= 2n + 2");
  require(spec.n == 1, "series enumeration is implemented for half-degree 1");
  require(z.size == 2, "point degree does not match the series degree");
  require(z.imag_positive_definite(), "Im Z must be positive definite");
  require(height >= 1, "height bound must be positive");

  const long long N = spec.N;
  std::set<std::array<long long, 8>> classes;
  std::array<long long, 8> m{};
  for (long long c0 = -height; c0 <= height; ++c0) {
    if (c0 % N != 0) continue;
    for (long long c1 = -height; c1 <= height; ++c1) {
      if (c1 % N != 0) continue;
      for (long long c2 = -height; c2 <= height; ++c2) {
        if (c2 % N != 0) continue;
        for (long long c3 = -height; c3 <= height; ++c3) {
          if (c3 % N != 0) continue;
          for (long long d0 = -height; d0 <= height; ++d0) {
            for (long long d1 = -height; d1 <= height; ++d1) {
              for (long long d2 = -height; d2 <= height; ++d2) {
                // C D^T symmetric: c0 d2 + c1 d3 = c2 d0 + c3 d1.
                for (long long d3 = -height; d3 <= height; ++d3) {
                  if (c0 * d2 + c1 * d3 != c2 * d0 + c3 * d1) continue;
                  // Rows of the 2x4 matrix (C | D).
                  m = {c0, c1, d0, d1, c2, c3, d2, d3};
                  if (detail::minor_gcd_2x4(m) != 1) continue;
                  std::array<long long, 8> canon = detail::hnf_2x4(m);
                  long long mx = 0;
                  for (long long v : canon) mx = std::max(mx, std::llabs(v));
                  if (mx > height) continue;
                  classes.insert(canon);
                }
              }
            }
          }
        }
      }
    }
  }

  DirectSeriesResult out;
  out.class_count = classes.size();
  std::map<long long, SeriesShell> by_shell;
  // std::set iteration is already sorted, so per-shell accumulation order
  // is deterministic.
  std::map<long long, std::vector<const std::array<long long, 8>*>> grouped;
  for (const auto& canon : classes) {
    long long mx = 0;
    for (long long v : canon) mx = std::max(mx, std::llabs(v));
    grouped[mx].push_back(&canon);
  }
  Cplx translate_acc(0.0, 0.0), standard_acc(0.0, 0.0);
  for (const auto& [shell_height, members] : grouped) {
    SeriesShell shell;
    shell.height = shell_height;
    shell.classes = members.size();
    for (const auto* canon : members) {
      const auto& cd = *canon;
      // Row i of (C | D) is (cd[4i], cd[4i+1], cd[4i+2], cd[4i+3]).
      auto c_at = [&cd](int i, int j) { return static_cast<double>(cd[i * 4 + j]); };
      auto d_at = [&cd](int i, int j) { return static_cast<double>(cd[i * 4 + 2 + j]); };
      Int det_d(cd[2] * cd[7] - cd[3] * cd[6]);
      Cplx weight = spec.chi(det_d).to_complex();
      std::array<Cplx, 4> czd{}, dzc{};
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          Cplx cz = c_at(i, 0) * z.at(0, static_cast<std::size_t>(j)) +
                    c_at(i, 1) * z.at(1, static_cast<std::size_t>(j));
          Cplx dz = d_at(i, 0) * z.at(0, static_cast<std::size_t>(j)) +
                    d_at(i, 1) * z.at(1, static_cast<std::size_t>(j));
          czd[static_cast<std::size_t>(i * 2 + j)] = cz + d_at(i, j);
          dzc[static_cast<std::size_t>(i * 2 + j)] = dz - c_at(i, j);
        }
      }
      standard_acc += weight * detail::inv_int_pow(detail::det2(czd), spec.k);
      translate_acc += weight * detail::inv_int_pow(detail::det2(dzc), spec.k);
    }
    shell.translate_sum = translate_acc;
    shell.standard_sum = standard_acc;
    by_shell[shell_height] = shell;
  }
  for (const auto& [hh, shell] : by_shell) out.shells.push_back(shell);
  out.value = translate_acc;
  out.standard_value = standard_acc;

  // Tail heuristic: extrapolate the last two nonzero shell increments of
  // the translate sum geometrically. The warning means the increments give
  // no evidence of decay yet, so the height bound is too small to trust.
  std::vector<double> increments;
  Cplx prev(0.0, 0.0);
  for (const auto& shell : out.shells) {
    double inc = std::abs(shell.translate_sum - prev);
    prev = shell.translate_sum;
    if (inc > 0.0) increments.push_back(inc);
  }
  if (increments.size() < 2) {
    out.tail_estimate = increments.empty() ? 0.0 : increments.back();
    out.height_warning = true;
  } else {
    double last = increments.back(), before = increments[increments.size() - 2];
    double ratio = last / before;
    if (ratio < 1.0) {
      out.tail_estimate = last * ratio / (1.0 - ratio);
      out.height_warning = out.tail_estimate > 1e-3 * std::abs(out.value);
    } else {
      out.tail_estimate = last;
      out.height_warning = true;
    }
  }
  return out;
}

// Truncated Dirichlet series of chi mod N; terms at gcd(j, N) > 1 vanish
// through chi, which is exactly the level-removed Euler product L^N.
inline Cplx dirichlet_l_numeric(int s, const DirichletCharacter& chi, std::size_t terms = 400) {
  require(s >= 2, "series evaluation needs s >= 2");
  Cplx acc(0.0, 0.0);
  for (std::size_t j = 1; j <= terms; ++j) {
    CyclotomicNumber cj = chi(Int(static_cast<long>(j)));
    if (cj.is_zero()) continue;
    acc += cj.to_complex() * std::pow(static_cast<double>(j), -static_cast<double>(s));
  }
  return acc;
}

// Lambda^N(k/2) = L^N(k, chi) prod_{i=1}^{n} L^N(2k - 2i, chi^2).
inline Cplx normalizing_l_product_numeric(const EisensteinSpec& spec) {
  Cplx acc = dirichlet_l_numeric(spec.k, spec.chi);
  DirichletCharacter chi_sq = character_product(spec.chi, spec.chi);
  for (unsigned i = 1; i <= spec.n; ++i)
    acc *= dirichlet_l_numeric(2 * spec.k - 2 * static_cast<int>(i), chi_sq);
  return acc;
}

struct ExpansionEvalResult {
  Cplx value;
  double tail_bound = 0.0;  // heuristic size of the first omitted trace shell
};

// Sums the stored coefficients against e^{2 pi i tr(hZ)} and multiplies the
// normalization back in:
//   E^* (Z) = prefactor. pi^{2nk - n^2 + k - n} sum_h stored(h) q^h / Lambda^N(k/2).
// The pi power is the display power 2nk - n^2 plus the k - n carried by
// each coefficient (stored(h) = pi^{n-k} b(h) keeps pi_exponent 0).
inline ExpansionEvalResult eval_expansion_numeric(const NormalizedExpansion& exp,
                                                  const SiegelPoint& z) {
  const EisensteinSpec& spec = exp.spec;
  require(spec.m0 == 0, "numeric evaluation targets the holomorphic point");
  require(z.size == 2 * spec.n, "point degree does not match the expansion degree");
  require(z.imag_positive_definite(), "Im Z must be positive definite");

  const double tau = 6.283185307179586476925286766559;  // 2 pi
  Cplx acc(0.0, 0.0);
  double largest_term = 0.0;
  for (const auto& [key, entry] : exp.coefficients) {
    const HalfIntegralMatrix& h = entry.first;
    Cplx tr(0.0, 0.0);
    for (std::size_t i = 0; i < z.size; ++i)
      for (std::size_t j = 0; j < z.size; ++j)
        tr += h.matrix().at(i, j).convert_to<double>() * z.at(j, i);
    Cplx term = entry.second.to_complex() * std::exp(Cplx(0.0, 1.0) * tau * tr);
    largest_term = std::max(largest_term, std::abs(term));
    acc += term;
  }

  long pi_power = 2L * spec.n * spec.k - static_cast<long>(spec.n) * spec.n + spec.k - spec.n;
  double scale = exp.normalization.prefactor.convert_to<double>() *
                 std::pow(3.14159265358979323846, static_cast<double>(pi_power));
  Cplx lambda = normalizing_l_product_numeric(spec);

  ExpansionEvalResult out;
  out.value = acc * scale / lambda;
  // Omitted indices have tr(N h) > index_bound, so their exponential factor
  // at this point is at most e^{-2 pi lambda_min(Y) (B + 1)/N} relative to
  // a unit-trace term; scale that by the largest retained term as a crude
  // but honest size indicator.
  double lam_min = z.size == 2 ? z.min_imag_eigenvalue() : 1.0;
  out.tail_bound = largest_term * std::abs(scale / lambda) *
                   std::exp(-tau * lam_min * static_cast<double>(exp.index_bound + 1) /
                            static_cast<double>(spec.N));
  return out;
}

}  // namespace eis
