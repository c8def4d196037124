#pragma once

// Exact rational matrices, half-integral symmetric matrices h in N^{-1}L,
// discriminant data (fundamental discriminant, conductor, square part, the
// Kronecker character rho_h), quadratic-space classification over F_p, and
// elementary-divisor exponents e(R) over Z_p.

#include "common.hpp"
#include "dirichlet.hpp"

#include <array>
#include <map>
#include <vector>

namespace eis {

class QMatrix {
 public:
  QMatrix() : rows_(0), cols_(0) {}
  QMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, Rational(0)) {}

  static QMatrix identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  QMatrix transpose() const {
    QMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
  }

  QMatrix operator*(const QMatrix& o) const {
    require(cols_ == o.rows_, "matrix product shape mismatch");
    QMatrix m(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        if (at(i, k) == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) m.at(i, j) += at(i, k) * o.at(k, j);
      }
    return m;
  }

  QMatrix operator+(const QMatrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "matrix sum shape mismatch");
    QMatrix m = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) m.entries_[i] += o.entries_[i];
    return m;
  }

  QMatrix scaled(const Rational& s) const {
    QMatrix m = *this;
    for (auto& e : m.entries_) e *= s;
    return m;
  }

  QMatrix operator-() const { return scaled(Rational(-1)); }

  bool operator==(const QMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }
  bool operator!=(const QMatrix& o) const { return !(*this == o); }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (at(i, j) != at(j, i)) return false;
    return true;
  }

  Rational trace() const {
    require(rows_ == cols_, "trace of a non-square matrix");
    Rational t(0);
    for (std::size_t i = 0; i < rows_; ++i) t += at(i, i);
    return t;
  }

  Rational det() const {
    require(rows_ == cols_, "determinant of a non-square matrix");
    return minor_det(all_indices(), all_indices());
  }

  // Determinant of the submatrix picked by row/column index sets.
  Rational minor_det(const std::vector<std::size_t>& ri,
                     const std::vector<std::size_t>& ci) const {
    require(ri.size() == ci.size(), "minor shape mismatch");
    std::size_t k = ri.size();
    if (k == 0) return Rational(1);
    if (k == 1) return at(ri[0], ci[0]);
    Rational acc(0);
    std::vector<std::size_t> sub_rows(ri.begin() + 1, ri.end());
    for (std::size_t j = 0; j < k; ++j) {
      if (at(ri[0], ci[j]) == 0) continue;
      std::vector<std::size_t> sub_cols;
      sub_cols.reserve(k - 1);
      for (std::size_t t = 0; t < k; ++t)
        if (t != j) sub_cols.push_back(ci[t]);
      Rational term = at(ri[0], ci[j]) * minor_det(sub_rows, sub_cols);
      if (j % 2 == 1) term = -term;
      acc += term;
    }
    return acc;
  }

  QMatrix inverse() const {
    require(rows_ == cols_, "inverse of a non-square matrix");
    std::size_t n = rows_;
    QMatrix a = *this;
    QMatrix inv = identity(n);
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = col;
      while (pivot < n && a.at(pivot, col) == 0) ++pivot;
      require(pivot < n, "matrix is singular");
      if (pivot != col) {
        for (std::size_t j = 0; j < n; ++j) {
          std::swap(a.at(pivot, j), a.at(col, j));
          std::swap(inv.at(pivot, j), inv.at(col, j));
        }
      }
      Rational d = a.at(col, col);
      for (std::size_t j = 0; j < n; ++j) {
        a.at(col, j) /= d;
        inv.at(col, j) /= d;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (i == col || a.at(i, col) == 0) continue;
        Rational factor = a.at(i, col);
        for (std::size_t j = 0; j < n; ++j) {
          a.at(i, j) -= factor * a.at(col, j);
          inv.at(i, j) -= factor * inv.at(col, j);
        }
      }
    }
    return inv;
  }

 private:
  std::vector<std::size_t> all_indices() const {
    std::vector<std::size_t> idx(rows_);
    for (std::size_t i = 0; i < rows_; ++i) idx[i] = i;
    return idx;
  }

  std::size_t rows_, cols_;
  std::vector<Rational> entries_;
};

// Symmetric 2n x 2n matrix h in N^{-1}L: diagonal entries in (1/N)Z,
// off-diagonal entries in (1/2N)Z.
class HalfIntegralMatrix {
 public:
  HalfIntegralMatrix(QMatrix entries, unsigned level_scale)
      : entries_(std::move(entries)), level_scale_(level_scale) {
    require(level_scale_ >= 1, "level scale must be positive");
    require(entries_.rows() == entries_.cols() && entries_.rows() >= 1,
            "index matrices are square");
    require(entries_.is_symmetric(), "index matrices are symmetric");
    Rational n_scale(level_scale_);
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = 0; j < size(); ++j) {
        Rational scaled = entries_.at(i, j) * n_scale * Rational(i == j ? 1 : 2);
        require(denominator(scaled) == 1, "entries leave N^{-1}L");
      }
    }
  }

  // Build h = T/N from an integral matrix 2T (the doubled half-integral T).
  static HalfIntegralMatrix from_doubled(const std::vector<Int>& two_t_row_major,
                                         std::size_t size, unsigned level_scale) {
    require(two_t_row_major.size() == size * size, "doubled matrix shape mismatch");
    QMatrix m(size, size);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j)
        m.at(i, j) = Rational(two_t_row_major[i * size + j]) /
                     Rational(2 * static_cast<long>(level_scale));
    return HalfIntegralMatrix(std::move(m), level_scale);
  }

  std::size_t size() const { return entries_.rows(); }
  unsigned half_degree() const { return static_cast<unsigned>(size() / 2); }
  unsigned level_scale() const { return level_scale_; }
  const QMatrix& matrix() const { return entries_; }

  // N h, an element of L.
  HalfIntegralMatrix cleared() const {
    return HalfIntegralMatrix(entries_.scaled(Rational(level_scale_)), 1);
  }

  Rational det() const { return entries_.det(); }
  Rational det_doubled() const { return entries_.scaled(Rational(2)).det(); }
  Rational trace() const { return entries_.trace(); }

  bool is_positive_definite() const {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < size(); ++k) {
      idx.push_back(k);
      if (!(entries_.minor_det(idx, idx) > 0)) return false;
    }
    return true;
  }

  bool is_positive_semidefinite() const {
    // All principal minors nonnegative (leading ones do not suffice).
    std::size_t n = size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k < n; ++k)
        if (mask & (1u << k)) idx.push_back(k);
      if (entries_.minor_det(idx, idx) < 0) return false;
    }
    return true;
  }

  // Canonical integer key: upper triangle of 2N h, row-major.
  std::vector<Int> index_key() const {
    std::vector<Int> key;
    Rational two_n(2 * static_cast<long>(level_scale_));
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i; j < size(); ++j) {
        Rational v = entries_.at(i, j) * two_n;
        require(denominator(v) == 1, "entries leave N^{-1}L");
        key.push_back(numerator(v));
      }
    return key;
  }

  bool operator==(const HalfIntegralMatrix& o) const {
    return level_scale_ == o.level_scale_ && entries_ == o.entries_;
  }

 private:
  QMatrix entries_;
  unsigned level_scale_;
};

// Trial-division factorization of a positive integer.
inline std::vector<std::pair<Int, unsigned>> factor_positive(Int v) {
  require(v > 0, "factorization needs a positive integer");
  std::vector<std::pair<Int, unsigned>> out;
  for (Int q = 2; q * q <= v; ++q) {
    if (v % q == 0) {
      unsigned e = 0;
      while (v % q == 0) {
        v /= q;
        ++e;
      }
      out.emplace_back(q, e);
    }
  }
  if (v > 1) out.emplace_back(v, 1);
  return out;
}

struct DiscriminantData {
  Int fundamental_discriminant;  // D_h
  Int conductor;                 // C_h = |D_h|
  Int square_part;               // f, with (-1)^n det(2h) = D_h f^2
  DirichletCharacter rho;        // Kronecker character of D_h
};

// Discriminant data of h in L (level scale 1). Delta = (-1)^n det(2h) is a
// discriminant, split as D_h f^2 with D_h fundamental.
inline DiscriminantData discriminant_data(const HalfIntegralMatrix& h, unsigned n) {
  require(h.level_scale() == 1, "discriminant data is computed on the cleared matrix");
  require(h.size() == 2 * n, "half-degree does not match the matrix size");
  Rational det2h = h.det_doubled();
  require(det2h != 0, "singular index matrix");
  Int delta = numerator(det2h);
  require(denominator(det2h) == 1, "det(2h) must be integral");
  if (n % 2 == 1) delta = -delta;

  Int abs_delta = delta < 0 ? -delta : delta;
  Int squarefree(1), root(1);
  for (const auto& [q, e] : factor_positive(abs_delta)) {
    for (unsigned i = 0; i + 1 < e; i += 2) root *= q;
    if (e % 2 == 1) squarefree *= q;
  }
  Int s = delta < 0 ? -squarefree : squarefree;
  Int s_mod = s % 4;
  if (s_mod < 0) s_mod += 4;
  DiscriminantData out{Int(0), Int(0), Int(0), DirichletCharacter()};
  if (s_mod == 1) {
    out.fundamental_discriminant = s;
    out.square_part = root;
  } else {
    require(root % 2 == 0, "discriminant is not 0 or 1 mod 4");
    out.fundamental_discriminant = 4 * s;
    out.square_part = root / 2;
  }
  require(out.fundamental_discriminant * out.square_part * out.square_part == delta,
          "fundamental discriminant extraction failed");
  out.conductor = out.fundamental_discriminant < 0 ? -out.fundamental_discriminant
                                                   : out.fundamental_discriminant;
  out.rho = kronecker_character(out.fundamental_discriminant);
  return out;
}

struct QuadSpaceClass {
  unsigned rank = 0;  // d
  int epsilon = 1;
};

inline int legendre_symbol(const Int& a, const Int& p) { return kronecker_symbol(a, p); }

// Classification of the quadratic space of S over F_p, p odd: rank d of S mod
// p and, for even d, the sign distinguishing split from non-split; for odd d
// (and d = 0) the sign is +1 by convention and never consumed downstream.
// S may have rational entries as long as they are p-integral.
inline QuadSpaceClass classify_mod_p(const QMatrix& s_in, const Int& p) {
  if (p == 2) fail("dyadic classification out of scope");
  require(s_in.is_symmetric(), "classification needs a symmetric matrix");
  std::size_t n = s_in.rows();
  auto to_fp = [&](const Rational& r) -> Int {
    Int num = numerator(r) % p;
    if (num < 0) num += p;
    Int den = denominator(r) % p;
    require(den != 0, "entry is not p-integral");
    // den^(p-2) inverts den mod p
    Int inv(1), base = den, e = p - 2;
    while (e > 0) {
      if (e % 2 == 1) inv = inv * base % p;
      base = base * base % p;
      e /= 2;
    }
    return num * inv % p;
  };
  std::vector<std::vector<Int>> s(n, std::vector<Int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s[i][j] = to_fp(s_in.at(i, j));

  auto addmul_row_col = [&](std::size_t dst, std::size_t src, const Int& c) {
    for (std::size_t j = 0; j < n; ++j) s[dst][j] = (s[dst][j] + c * s[src][j]) % p;
    for (std::size_t i = 0; i < n; ++i) s[i][dst] = (s[i][dst] + c * s[i][src]) % p;
  };

  auto swap_row_col = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(s[a][j], s[b][j]);
    for (std::size_t i = 0; i < n; ++i) std::swap(s[i][a], s[i][b]);
  };

  // Congruence diagonalization over F_p.
  std::vector<Int> diag;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t with_diag = n;
    for (std::size_t j = k; j < n; ++j) {
      if (s[j][j] % p != 0) {
        with_diag = j;
        break;
      }
    }
    if (with_diag < n) {
      swap_row_col(k, with_diag);
    } else {
      // All remaining diagonal entries vanish; if S_kj != 0 then adding
      // row/col j to k makes S_kk = 2 S_kj != 0 (p odd, S_jj = 0).
      for (std::size_t j = k + 1; j < n; ++j) {
        if (s[k][j] % p != 0) {
          addmul_row_col(k, j, Int(1));
          break;
        }
      }
    }
    Int pivot = s[k][k] % p;
    if (pivot < 0) pivot += p;
    if (pivot == 0) continue;  // row k is zero from column k on
    diag.push_back(pivot);
    // Clear the rest of row/column k.
    Int inv(1), base = pivot, e = p - 2;
    while (e > 0) {
      if (e % 2 == 1) inv = inv * base % p;
      base = base * base % p;
      e /= 2;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      Int c = (p - s[i][k] % p) % p * inv % p;
      if (c != 0) addmul_row_col(i, k, c);
    }
  }

  QuadSpaceClass out;
  out.rank = static_cast<unsigned>(diag.size());
  out.epsilon = 1;
  if (out.rank > 0 && out.rank % 2 == 0) {
    Int prod(1);
    for (const auto& v : diag) prod = prod * v % p;
    if ((out.rank / 2) % 2 == 1) prod = (p - prod % p) % p;
    out.epsilon = legendre_symbol(prod, p);
    require(out.epsilon != 0, "nondegenerate part has degenerate determinant");
  }
  return out;
}

// Valuations d_i = min v_p over i x i minors; +infinity rows are skipped.
inline std::vector<Val> minor_valuations(const QMatrix& r, const Int& p) {
  std::size_t n = r.rows();
  require(n == r.cols(), "minor valuations need a square matrix");
  std::vector<Val> out;
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  for (std::size_t k = 1; k <= n; ++k) {
    Val best = Val::inf();
    // All k-subsets of rows and of columns.
    std::vector<std::size_t> ri(k), ci(k);
    auto next_subset = [&](std::vector<std::size_t>& idx) {
      std::size_t i = k;
      while (i-- > 0) {
        if (idx[i] + (k - i) < n) {
          ++idx[i];
          for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
          return true;
        }
      }
      return false;
    };
    for (std::size_t i = 0; i < k; ++i) ri[i] = i;
    do {
      for (std::size_t i = 0; i < k; ++i) ci[i] = i;
      do {
        best = Val::min(best, rational_valuation(r.minor_det(ri, ci), p));
      } while (next_subset(ci));
    } while (next_subset(ri));
    out.push_back(best);
  }
  return out;
}

// e(R) = -sum of the nonpositive Smith exponents of R over Z_p; by convexity
// of the minor valuations this equals -min(0, min_i d_i).
inline long elementary_divisor_exponent(const QMatrix& r, const Int& p) {
  long worst = 0;
  for (const Val& v : minor_valuations(r, p)) {
    if (!v.infinite && v.v < worst) worst = v.v;
  }
  return -worst;
}

// Smith normal form exponents over Z_p (finite ranks only), increasing.
inline std::vector<long> smith_exponents(const QMatrix& r, const Int& p) {
  std::vector<long> out;
  long prev = 0;
  for (const Val& v : minor_valuations(r, p)) {
    if (v.infinite) break;
    out.push_back(v.v - prev);
    prev = v.v;
  }
  return out;
}

}  // namespace eis
