#pragma once

// Fourier side of the degree-2n Siegel Eisenstein series at the holomorphic
// point.  Stored coefficients are pi^{n-k} b(h), where
//   b(h) = det(h)^{k-(2n+1)/2} L^N(k-n, chi rho_h) prod_{l in C} f_{h,l}(chi(l) l^{-k}),
// so every stored value is an exact cyclotomic number with pi_exponent 0.
// The normalization record keeps the rational display prefactor and the
// symbolic pi^A Lambda^N(k/2) tag; nothing transcendental is folded into the
// coefficients themselves.

#include "eis/bernoulli.hpp"
#include "eis/common.hpp"
#include "eis/cyclotomic.hpp"
#include "eis/dirichlet.hpp"
#include "eis/pi_scalar.hpp"
#include "eis/quadforms.hpp"
#include "eis/siegel_series.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace eis {

// Degree 2n, weight k, level N, nebentypus chi, specialization point s = -m0.
// m0 = 0 is the holomorphic value; m0 >= 1 belongs to the raising layer,
// which builds on the base weight k - 2 m0 kept valid here.
struct EisensteinSpec {
  unsigned n = 1;
  int k = 0;
  unsigned N = 1;
  DirichletCharacter chi;
  int m0 = 0;
  std::string chi_descriptor;  // round-trip label for reports; not validated

  void validate() const {
    require(n >= 1, "degree parameter n must be positive");
    require(N >= 2, "level must exceed 1");
    require(chi.modulus() == N, "character modulus must equal the level");
    require(m0 >= 0, "specialization order m0 must be nonnegative");
    int base_weight = k - 2 * m0;
    require(base_weight >= static_cast<int>(n) + 1,
            "weight must be at least n + 1 at the base point");
    if (base_weight == static_cast<int>(n) + 1) {
      require(!chi.is_quadratic(),
              "chi^2 must be nontrivial at the endpoint weight n + 1");
    }
    int parity = (k % 2 == 0) ? 0 : 1;
    require(chi.parity_bit() == parity, "character parity must match the weight");
  }

  EisensteinSpec base() const {
    EisensteinSpec b = *this;
    b.k = k - 2 * m0;
    b.m0 = 0;
    return b;
  }
};

// N^{-n(2n+1)} (-1)^{nk} 2^k prod_{j=1}^{n-1} 2^{2k-2j-2}/(2k-2j-2)!,
// the rational prefactor of the display expansion
//   Lambda^N(k/2) E*(Z) = prefactor pi^{2nk-n^2} sum_{h>0} b(h) e^{2 pi i tr(hZ)}.
inline Rational display_prefactor(unsigned n, int k, unsigned N) {
  Rational pref = rational_pow(Rational(N), -static_cast<long>(n) * (2 * n + 1));
  pref *= rational_pow(Rational(2), k);
  if ((static_cast<long>(n) * k) % 2 != 0) pref = -pref;
  for (unsigned j = 1; j + 1 <= n; ++j) {
    long e = 2L * k - 2L * j - 2L;
    require(e >= 0, "display prefactor needs k >= n + 1");
    pref *= rational_pow(Rational(2), e) / Rational(factorial(static_cast<unsigned>(e)));
  }
  return pref;
}

// E(Z; h) = pi^{pi_exponent} Lambda^N((k-2m0)/2) E_{k,N}(Z, -m0; h) with
// pi_exponent = n + n^2 - (2n+1)k + (2n+2)m0; Lambda stays symbolic
// (numeric evaluation lives in the float layer).  prefactor is the rational
// constant of the display expansion above, including the raising constants
// d^{-1} 16^{n m0} once m0 > 0.
struct NormalizationRecord {
  Rational prefactor = Rational(1);
  long pi_exponent = 0;
  unsigned n = 1;
  int k = 0;
  int m0 = 0;
  unsigned N = 1;
  DirichletCharacter chi;
};

inline NormalizationRecord make_normalization(const EisensteinSpec& spec) {
  spec.validate();
  require(spec.m0 == 0, "holomorphic normalization record has m0 = 0");
  NormalizationRecord rec;
  rec.prefactor = display_prefactor(spec.n, spec.k, spec.N);
  rec.pi_exponent = static_cast<long>(spec.n) + static_cast<long>(spec.n) * spec.n -
                    (2L * spec.n + 1) * spec.k;
  rec.n = spec.n;
  rec.k = spec.k;
  rec.m0 = 0;
  rec.N = spec.N;
  rec.chi = spec.chi;
  return rec;
}

struct NormalizedExpansion {
  EisensteinSpec spec;
  NormalizationRecord normalization;
  long index_bound = 0;  // enumeration bound on tr(N h)
  // Keyed by HalfIntegralMatrix::index_key(); every index is positive
  // definite and every value has pi_exponent 0.
  std::map<std::vector<Int>, std::pair<HalfIntegralMatrix, PiScalar>> coefficients;

  PiScalar coefficient(const HalfIntegralMatrix& h) const {
    auto it = coefficients.find(h.index_key());
    return it == coefficients.end() ? PiScalar{} : it->second.second;
  }
};

// Positive definite h in N^{-1}L with tr(N h) <= bound, in lexicographic
// (a, c, b) order of N h = [[a, b/2], [b/2, c]].  Enumeration is implemented
// at half-degree 1 (size 2), the working scale of everything downstream.
inline std::vector<HalfIntegralMatrix> enumerate_indices(const EisensteinSpec& spec,
                                                         long bound) {
  spec.validate();
  require(spec.n == 1, "index enumeration is implemented for half-degree 1");
  std::vector<HalfIntegralMatrix> out;
  if (bound <= 0) return out;
  for (long a = 1; a < bound; ++a) {
    for (long c = 1; a + c <= bound; ++c) {
      long bmax = 0;  // largest b with b^2 < 4ac
      while ((bmax + 1) * (bmax + 1) < 4 * a * c) ++bmax;
      for (long b = -bmax; b <= bmax; ++b) {
        out.push_back(HalfIntegralMatrix::from_doubled(
            {Int(2 * a), Int(b), Int(b), Int(2 * c)}, 2, spec.N));
      }
    }
  }
  return out;
}

namespace detail {

// Ascending prime support of v (|v| >= 1) by trial division.
inline std::vector<Int> prime_support(Int v) {
  std::vector<Int> out;
  if (v < 0) v = -v;
  require(v >= 1, "prime support of zero requested");
  for (Int q = 2; q * q <= v; ++q) {
    if (v % q == 0) {
      out.push_back(q);
      while (v % q == 0) v /= q;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

}  // namespace detail

// Everything that enters one stored coefficient, kept for the
// factor-by-factor integrality ledger:
//   stored(h) = u^{n-k+1/2} bracket1 bracket2,      u = N_h / C_h,
//   bracket1  = (det h / C_h)^{k-n-1} (f_rat / 2^n) prod_l f_{h,l}(chi(l) l^{-k}),
//   bracket2  = the L-value bracket pi^{n-k} N_h^{k-n-1/2} L^N(k-n, eta_h).
// f_rat = square_part(N h)/N^n satisfies f_rat^2 = det(2h)/C_h, which turns
// the half power det(h)^{k-n-1/2}/C_h^{k-n-1/2} into rational data.
struct CoefficientBreakdown {
  HalfIntegralMatrix h;
  DiscriminantData disc;
  Rational f_rat = Rational(0);
  std::vector<Int> c_set;
  std::vector<SiegelSeriesPoly> f_polys;
  std::vector<CyclotomicNumber> f_values;
  CyclotomicNumber bracket1;
  LValueBracket bracket2;
  PiScalar stored;

  CoefficientBreakdown(HalfIntegralMatrix index, DiscriminantData d)
      : h(std::move(index)), disc(std::move(d)) {}
};

inline CoefficientBreakdown coefficient_b(const HalfIntegralMatrix& h,
                                          const EisensteinSpec& spec) {
  spec.validate();
  require(spec.m0 == 0, "coefficients are assembled at the holomorphic point");
  require(h.level_scale() == spec.N, "index lattice does not match the level");
  require(h.size() == 2 * spec.n, "index size does not match the degree");
  require(h.is_positive_definite(), "Fourier index must be positive definite");

  const unsigned n = spec.n;
  const int k = spec.k;
  HalfIntegralMatrix t = h.cleared();
  CoefficientBreakdown out(h, discriminant_data(t, n));

  // C = {l prime : l not| N, v_l(det 2(Nh)) > 0}; at such l the lattice of h
  // is the unit scaling N h, so f can be read off the cleared matrix.
  Rational det2t = t.det_doubled();
  require(denominator(det2t) == 1, "cleared matrix must be integral");
  for (const Int& l : detail::prime_support(numerator(det2t))) {
    if (Int(spec.N) % l == 0) continue;
    if (rational_valuation(det2t, l).v <= 0) continue;
    out.c_set.push_back(l);
  }

  CyclotomicNumber f_product{Rational(1)};
  for (const Int& l : out.c_set) {
    require(Int(spec.N) % l != 0, "C-set primes must be prime to the level");
    SiegelSeriesPoly f = extract_f_poly(t, l, k, spec.chi, out.disc.rho, n);
    CyclotomicNumber x0 =
        spec.chi(l) * CyclotomicNumber(rational_pow(Rational(l), -k));
    CyclotomicNumber value = f.evaluate_at(x0);
    f_product = f_product * value;
    out.f_polys.push_back(std::move(f));
    out.f_values.push_back(std::move(value));
  }

  Rational c_h(out.disc.conductor);
  out.f_rat = Rational(out.disc.square_part) / rational_pow(Rational(spec.N), n);
  require(out.f_rat * out.f_rat == h.det_doubled() / c_h,
          "square part does not match det(2h)/C_h");

  Rational det_ratio_power = rational_pow(h.det() / c_h, k - static_cast<long>(n) - 1);
  Rational half_fix = out.f_rat / rational_pow(Rational(2), n);
  out.bracket1 = (CyclotomicNumber(det_ratio_power * half_fix) * f_product).minimized();

  out.bracket2 = l_value_bracket(k, static_cast<int>(n), spec.chi, out.disc.rho, spec.N);

  Rational u = out.bracket2.gauss_unit_part.u;
  CyclotomicNumber u_power =
      CyclotomicNumber(rational_pow(u, static_cast<long>(n) - k)) *
      out.bracket2.gauss_unit_part.u_sqrt;
  out.stored =
      PiScalar((u_power * out.bracket1 * out.bracket2.value.value).minimized(), 0);
  return out;
}

// Per-index coefficients in a parallel map; a single reducer folds the slots
// into the ordered map, so the result is independent of the thread width.
inline NormalizedExpansion build_expansion(const EisensteinSpec& spec, long index_bound,
                                           unsigned width = 0) {
  spec.validate();
  require(spec.m0 == 0, "build_expansion assembles the holomorphic value");
  NormalizedExpansion exp;
  exp.spec = spec;
  exp.normalization = make_normalization(spec);
  exp.index_bound = index_bound;

  std::vector<HalfIntegralMatrix> indices = enumerate_indices(spec, index_bound);
  std::vector<PiScalar> values(indices.size());
  parallel_for(indices.size(), width,
               [&](std::size_t i) { values[i] = coefficient_b(indices[i], spec).stored; });
  for (std::size_t i = 0; i < indices.size(); ++i) {
    require(values[i].pi_exponent == 0, "stored coefficients carry no pi power");
    exp.coefficients.emplace(indices[i].index_key(),
                             std::make_pair(indices[i], values[i]));
  }
  return exp;
}

struct IntegralityRow {
  std::vector<Int> key;
  std::string index_label;        // doubled matrix of N h, row-major upper triangle
  Val valuation;                  // v_p(stored(h))
  Val half_power_valuation;       // v_p(u^{n-k+1/2})
  Val bracket1_valuation;         // v_p(bracket1), key-inequality territory
  Val bracket2_valuation;         // v_p(integral core of the L-value bracket)
  Val bernoulli_valuation;        // v_p(B_{k-n, conj eta}) alone
  bool gauss_unit_certified = false;  // v_p(W) = 0 by the unit-circle certificate
  bool key_margin_present = false;
  Rational key_margin = Rational(0);  // margin of the key inequality at p, if p in C
  bool ledger_consistent = false;     // parts sum to the total valuation
  bool ok = false;                    // v_p(stored) >= 0
  std::string note;
};

struct IntegralityReport {
  Int p;
  int k = 0;
  unsigned n = 1;
  unsigned N = 1;
  bool in_hypotheses = false;  // p not| 2N and p >= 2k
  std::string label;
  Val prefactor_valuation;
  std::vector<IntegralityRow> rows;
  bool all_nonnegative = true;
  bool pass = true;  // false only for an in-hypothesis violation
};

// p-valuation table for every stored coefficient, with the contribution of
// each factor alongside.  The report is produced for any p; verdicts outside
// p not| 2N, p >= 2k are labeled rather than suppressed.
inline IntegralityReport integrality_report(const NormalizedExpansion& exp, const Int& p,
                                            unsigned width = 0) {
  exp.spec.validate();
  IntegralityReport rep;
  rep.p = p;
  rep.k = exp.spec.k;
  rep.n = exp.spec.n;
  rep.N = exp.spec.N;
  rep.in_hypotheses = (Int(2 * exp.spec.N) % p != 0) && (p >= 2 * exp.spec.k);
  rep.label = rep.in_hypotheses ? "within theorem hypotheses" : "outside theorem hypotheses";
  rep.prefactor_valuation = rational_valuation(exp.normalization.prefactor, p);

  std::vector<const HalfIntegralMatrix*> indices;
  indices.reserve(exp.coefficients.size());
  for (const auto& [key, entry] : exp.coefficients) {
    (void)key;
    indices.push_back(&entry.first);
  }
  std::vector<IntegralityRow> rows(indices.size());
  parallel_for(indices.size(), width, [&](std::size_t i) {
    const HalfIntegralMatrix& h = *indices[i];
    IntegralityRow row;
    row.key = h.index_key();
    for (const Int& v : row.key) {
      if (!row.index_label.empty()) row.index_label += " ";
      row.index_label += v.str();
    }
    CoefficientBreakdown bd = coefficient_b(h, exp.spec);
    require(bd.stored.pi_exponent == 0, "stored coefficients carry no pi power");
    const Rational& u = bd.bracket2.gauss_unit_part.u;
    long n_minus_k = static_cast<long>(exp.spec.n) - exp.spec.k;
    try {
      row.half_power_valuation =
          Val::of(rational_valuation(u, p).v * n_minus_k +
                  bd.bracket2.gauss_unit_part.u_sqrt.p_valuation(p).v);
      row.bracket1_valuation = bd.bracket1.is_zero() ? Val::inf() : bd.bracket1.p_valuation(p);
      row.bracket2_valuation = bd.bracket2.integral_core.is_zero()
                                   ? Val::inf()
                                   : bd.bracket2.integral_core.p_valuation(p);
      row.bernoulli_valuation = bd.bracket2.bernoulli_part.is_zero()
                                    ? Val::inf()
                                    : bd.bracket2.bernoulli_part.p_valuation(p);
      // W conj(W) = 1 is checked at assembly, so W is a unit at every finite
      // place; its valuation never enters the sum.
      row.gauss_unit_certified = true;
      row.valuation = bd.stored.is_zero() ? Val::inf() : bd.stored.value.p_valuation(p);
      Val parts = Val::of(0);
      for (const Val& part :
           {row.half_power_valuation, row.bracket1_valuation, row.bracket2_valuation}) {
        parts = (parts.infinite || part.infinite) ? Val::inf()
                                                  : Val::of(parts.v + part.v);
      }
      row.ledger_consistent =
          (parts.infinite && row.valuation.infinite) ||
          (!parts.infinite && !row.valuation.infinite && parts.v == row.valuation.v);
      if (Int(exp.spec.N) % p != 0 && rational_valuation(h.cleared().det_doubled(), p).v > 0) {
        KeyValuationReport kv =
            check_key_valuation(h.cleared(), p, exp.spec.k, exp.spec.n, exp.spec.chi);
        row.key_margin_present = true;
        row.key_margin = kv.margin;
      }
      row.ok = row.valuation.infinite || row.valuation.v >= 0;
    } catch (const Error& e) {
      row.note = e.what();
      row.ok = false;
    }
    rows[i] = std::move(row);
  });
  for (auto& row : rows) {
    if (!row.ok) rep.all_nonnegative = false;
    rep.rows.push_back(std::move(row));
  }
  bool prefactor_ok =
      rep.prefactor_valuation.infinite || rep.prefactor_valuation.v == 0;
  if (rep.in_hypotheses) {
    rep.pass = rep.all_nonnegative && prefactor_ok;
  }
  return rep;
}

}  // namespace eis
