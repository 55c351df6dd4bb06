#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cotorsion/errors.hpp"

namespace cotorsion {

using Residue = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;

inline bool is_prime(Residue p) {
  if (p < 2) return false;
  for (Residue d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Primes are kept below 2^16 so that a*b + c never overflows 32 bits.
inline void require_prime(Residue p) {
  if (!is_prime(p) || p >= (1u << 16))
    throw MalformedInput("characteristic " + std::to_string(p) + " is not a supported prime");
}

inline Residue mod_inverse(Residue a, Residue p) {
  if (a % p == 0) throw DimensionMismatch("inverse of zero residue");
  std::int64_t t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  if (t < 0) t += p;
  return static_cast<Residue>(t);
}

inline Residue neg_mod(Residue a, Residue p) { return a == 0 ? 0 : p - a; }

/// Dense row-major matrix over F_p.
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(Residue p, std::size_t rows, std::size_t cols)
      : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  FieldMatrix(Residue p, std::size_t rows, std::size_t cols, std::vector<Residue> entries)
      : p_(p), rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) throw DimensionMismatch("entry count does not match shape");
    for (Residue v : data_)
      if (v >= p_) throw MalformedInput("matrix entry out of range for F_" + std::to_string(p_));
  }

  static FieldMatrix identity(Residue p, std::size_t n) {
    FieldMatrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static FieldMatrix from_rows(Residue p, const std::vector<std::vector<Residue>>& rows, std::size_t cols = 0) {
    std::size_t c = rows.empty() ? cols : rows.front().size();
    FieldMatrix m(p, rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw DimensionMismatch("ragged rows");
      for (std::size_t j = 0; j < c; ++j) {
        if (rows[i][j] >= p) throw MalformedInput("matrix entry out of range");
        m.at(i, j) = rows[i][j];
      }
    }
    return m;
  }

  Residue p() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Residue operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Residue& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const std::vector<Residue>& entries() const { return data_; }
  const Residue* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }
  Residue* row_ptr(std::size_t r) { return data_.data() + r * cols_; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Residue v) { return v == 0; });
  }

  FieldMatrix transpose() const {
    FieldMatrix t(p_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = (*this)(i, j);
    return t;
  }

  FieldMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    FieldMatrix b(p_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b.at(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const FieldMatrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) at(r0 + i, c0 + j) = b(i, j);
  }

  FieldMatrix select(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
    FieldMatrix b(p_, rs.size(), cs.size());
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = 0; j < cs.size(); ++j) b.at(i, j) = (*this)(rs[i], cs[j]);
    return b;
  }

  std::vector<Residue> column(std::size_t c) const {
    std::vector<Residue> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
  }

  friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
    return a.p_ == b.p_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend FieldMatrix operator+(const FieldMatrix& a, const FieldMatrix& b) {
    check_same_shape(a, b);
    FieldMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] = (a.data_[i] + b.data_[i]) % a.p_;
    return c;
  }

  friend FieldMatrix operator-(const FieldMatrix& a, const FieldMatrix& b) {
    check_same_shape(a, b);
    FieldMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i)
      c.data_[i] = (a.data_[i] + a.p_ - b.data_[i]) % a.p_;
    return c;
  }

  friend FieldMatrix operator*(Residue s, const FieldMatrix& a) {
    FieldMatrix c = a;
    s %= a.p_;
    for (auto& v : c.data_) v = static_cast<Residue>((std::uint64_t{v} * s) % a.p_);
    return c;
  }

  friend FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionMismatch("cannot multiply " + a.shape() + " by " + b.shape());
    if (a.p_ != b.p_) throw DimensionMismatch("characteristics differ");
    FieldMatrix c(a.p_, a.rows_, b.cols_);
    std::vector<std::uint64_t> acc(b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      const Residue* ar = a.row_ptr(i);
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (ar[k] == 0) continue;
        const Residue* br = b.row_ptr(k);
        for (std::size_t j = 0; j < b.cols_; ++j) acc[j] += std::uint64_t{ar[k]} * br[j];
      }
      Residue* cr = c.row_ptr(i);
      for (std::size_t j = 0; j < b.cols_; ++j) cr[j] = static_cast<Residue>(acc[j] % a.p_);
    }
    return c;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  static void check_same_shape(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.p_ != b.p_)
      throw DimensionMismatch("shape mismatch " + a.shape() + " vs " + b.shape());
  }

  Residue p_ = 2;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Residue> data_;
};

inline FieldMatrix hstack(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hstack row mismatch");
  FieldMatrix c(a.p(), a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

inline FieldMatrix vstack(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("vstack column mismatch");
  FieldMatrix c(a.p(), a.rows() + b.rows(), a.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), 0, b);
  return c;
}

inline FieldMatrix block_diag(const FieldMatrix& a, const FieldMatrix& b) {
  FieldMatrix c(a.p(), a.rows() + b.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), a.cols(), b);
  return c;
}

struct RrefResult {
  FieldMatrix matrix;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

namespace detail {

// In-place Gauss-Jordan elimination. The pivot of each column is the first
// row (from the current one down) with a nonzero entry, which keeps results
// reproducible. Only the first `limit` columns are used as pivot columns.
inline std::vector<std::size_t> eliminate(FieldMatrix& m, std::size_t limit) {
  const Residue p = m.p();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  const std::size_t cols = m.cols();
  for (std::size_t c = 0; c < limit && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r) std::swap_ranges(m.row_ptr(piv), m.row_ptr(piv) + cols, m.row_ptr(r));
    Residue* pr = m.row_ptr(r);
    if (pr[c] != 1) {
      Residue inv = mod_inverse(pr[c], p);
      for (std::size_t j = c; j < cols; ++j) pr[j] = static_cast<Residue>((std::uint64_t{pr[j]} * inv) % p);
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      Residue* ri = m.row_ptr(i);
      Residue f = ri[c];
      if (f == 0) continue;
      if (p == 2) {
        for (std::size_t j = c; j < cols; ++j) ri[j] ^= pr[j];
      } else {
        Residue nf = p - f;
        for (std::size_t j = c; j < cols; ++j) ri[j] = (ri[j] + nf * pr[j]) % p;
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

/// Reduced row echelon form.
inline RrefResult rref(const FieldMatrix& m) {
  FieldMatrix a = m;
  auto piv = detail::eliminate(a, a.cols());
  return {std::move(a), std::move(piv)};
}

inline std::size_t rank(const FieldMatrix& m) {
  FieldMatrix a = m;
  return detail::eliminate(a, a.cols()).size();
}

/// Some x with a*x = b, or nothing when the system is inconsistent. Free
/// variables are set to zero.
inline std::optional<FieldMatrix> solve(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("solve: row mismatch " + a.shape() + " / " + b.shape());
  FieldMatrix aug = hstack(a, b);
  auto piv = detail::eliminate(aug, a.cols());
  // inconsistent iff some zero row of the left part has a nonzero right part
  for (std::size_t i = piv.size(); i < aug.rows(); ++i)
    for (std::size_t j = a.cols(); j < aug.cols(); ++j)
      if (aug(i, j) != 0) return std::nullopt;
  FieldMatrix x(a.p(), a.cols(), b.cols());
  for (std::size_t i = 0; i < piv.size(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x.at(piv[i], j) = aug(i, a.cols() + j);
  return x;
}

/// Columns form a basis of the null space of m.
inline FieldMatrix kernel_basis(const FieldMatrix& m) {
  auto [r, piv] = rref(m);
  const Residue p = m.p();
  std::vector<bool> is_piv(m.cols(), false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_piv[c]) free_cols.push_back(c);
  FieldMatrix k(p, m.cols(), free_cols.size());
  for (std::size_t t = 0; t < free_cols.size(); ++t) {
    std::size_t f = free_cols[t];
    k.at(f, t) = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) k.at(piv[i], t) = neg_mod(r(i, f), p);
  }
  return k;
}

inline std::optional<FieldMatrix> inverse(const FieldMatrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  auto x = solve(m, FieldMatrix::identity(m.p(), m.rows()));
  if (!x || rank(m) != m.rows()) return std::nullopt;
  return x;
}

/// Incrementally maintained span of vectors in F_p^n.
class SpanBuilder {
 public:
  SpanBuilder(Residue p, std::size_t n) : p_(p), n_(n) {}

  std::size_t dimension() const { return basis_.size(); }
  std::size_t ambient() const { return n_; }

  bool contains(std::vector<Residue> v) const { return !reduce(v); }

  /// Adds v; returns true iff v was independent of the current span.
  bool add(std::vector<Residue> v) {
    if (!reduce(v)) return false;
    std::size_t c = 0;
    while (v[c] == 0) ++c;
    Residue inv = mod_inverse(v[c], p_);
    for (auto& x : v) x = static_cast<Residue>((std::uint64_t{x} * inv) % p_);
    basis_.push_back(std::move(v));
    pivots_.push_back(c);
    return true;
  }

  const std::vector<std::vector<Residue>>& vectors() const { return basis_; }

 private:
  // Reduces v against the stored vectors; true iff the remainder is nonzero.
  bool reduce(std::vector<Residue>& v) const {
    if (v.size() != n_) throw DimensionMismatch("span vector length");
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      Residue f = v[pivots_[i]];
      if (f == 0) continue;
      Residue nf = p_ - f;
      const auto& b = basis_[i];
      for (std::size_t j = 0; j < n_; ++j)
        if (b[j]) v[j] = (v[j] + nf * b[j]) % p_;
    }
    return std::any_of(v.begin(), v.end(), [](Residue x) { return x != 0; });
  }

  Residue p_;
  std::size_t n_;
  std::vector<std::vector<Residue>> basis_;
  std::vector<std::size_t> pivots_;
};

/// Matrix over Z with arbitrary precision entries.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntegerMatrix from_rows(const std::vector<std::vector<long long>>& rows, std::size_t cols = 0) {
    std::size_t c = rows.empty() ? cols : rows.front().size();
    IntegerMatrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw DimensionMismatch("ragged rows");
      for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  BigInt& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  void append_row(const std::vector<BigInt>& row) {
    if (row.size() != cols_) throw DimensionMismatch("row length");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
  }

  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("integer product shape");
    IntegerMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c.at(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<BigInt> data_;
};

/// Diagonal form D = U*M*V. Only V and its inverse are tracked; they give
/// coordinates on Z^cols / rowspace(M).
struct SmithForm {
  std::vector<BigInt> diagonal;  // length cols; entries past min(rows, cols) are 0
  IntegerMatrix v, v_inverse;    // cols x cols, unimodular
};

inline SmithForm smith_normal_form(IntegerMatrix a) {
  const std::size_t R = a.rows(), C = a.cols();
  IntegerMatrix v(C, C), vi(C, C);
  for (std::size_t i = 0; i < C; ++i) v.at(i, i) = vi.at(i, i) = 1;

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < C; ++c) std::swap(a.at(i, c), a.at(j, c));
  };
  // column op: col_j += q * col_i (tracked in V, inverse in V^-1)
  auto add_col = [&](std::size_t j, std::size_t i, const BigInt& q) {
    for (std::size_t r = 0; r < R; ++r) a.at(r, j) += q * a(r, i);
    for (std::size_t r = 0; r < C; ++r) v.at(r, j) += q * v(r, i);
    for (std::size_t c = 0; c < C; ++c) vi.at(i, c) -= q * vi(j, c);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < R; ++r) std::swap(a.at(r, i), a.at(r, j));
    for (std::size_t r = 0; r < C; ++r) std::swap(v.at(r, i), v.at(r, j));
    for (std::size_t c = 0; c < C; ++c) std::swap(vi.at(i, c), vi.at(j, c));
  };
  auto add_row = [&](std::size_t j, std::size_t i, const BigInt& q) {
    for (std::size_t c = 0; c < C; ++c) a.at(j, c) += q * a(i, c);
  };

  const std::size_t n = std::min(R, C);
  std::size_t t = 0;
  for (; t < n; ++t) {
    // smallest nonzero entry of the trailing block becomes the pivot
    bool found = false;
    std::size_t pr = 0, pc = 0;
    BigInt best;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j)
        if (a(i, j) != 0 && (!found || abs(a(i, j)) < best)) {
          found = true;
          best = abs(a(i, j));
          pr = i;
          pc = j;
        }
    if (!found) break;
    swap_rows(t, pr);
    swap_cols(t, pc);
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (a(i, t) == 0) continue;
        BigInt q = a(i, t) / a(t, t);
        add_row(i, t, -q);
        if (a(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (a(t, j) == 0) continue;
        BigInt q = a(t, j) / a(t, t);
        add_col(j, t, -q);
        if (a(t, j) != 0) dirty = true;
      }
      if (dirty) {
        // move the smallest remainder in row/column t to the pivot
        std::size_t bi = t, bj = t;
        BigInt b = abs(a(t, t));
        for (std::size_t i = t + 1; i < R; ++i)
          if (a(i, t) != 0 && abs(a(i, t)) < b) b = abs(a(i, t)), bi = i, bj = t;
        for (std::size_t j = t + 1; j < C; ++j)
          if (a(t, j) != 0 && abs(a(t, j)) < b) b = abs(a(t, j)), bi = t, bj = j;
        swap_rows(t, bi);
        swap_cols(t, bj);
        continue;
      }
      // divisibility of the trailing block by the pivot
      bool fixed = false;
      for (std::size_t i = t + 1; i < R && !fixed; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (a(i, j) % a(t, t) != 0) {
            add_row(t, i, 1);
            fixed = true;
            break;
          }
      if (!fixed) break;
    }
    if (a(t, t) < 0)
      for (std::size_t c = 0; c < C; ++c) a.at(t, c) = -a(t, c);
  }

  SmithForm out;
  out.diagonal.assign(C, BigInt(0));
  for (std::size_t i = 0; i < t; ++i) out.diagonal[i] = a(i, i);
  out.v = std::move(v);
  out.v_inverse = std::move(vi);
  return out;
}

/// Invariant factors d1 | d2 | ... of the cokernel Z^cols / rowspace(m),
/// one entry per column (zeros mark free summands).
inline std::vector<BigInt> smith_invariant_factors(const IntegerMatrix& m) {
  return smith_normal_form(m).diagonal;
}

/// Human readable abelian group, e.g. "Z", "Z/2", "Z/2 + Z^3", "0".
inline std::string describe_group(const std::vector<BigInt>& factors) {
  std::vector<std::string> parts;
  std::size_t free_rank = 0;
  for (const auto& d : factors) {
    if (d == 0)
      ++free_rank;
    else if (d != 1)
      parts.push_back("Z/" + d.str());
  }
  if (free_rank == 1) parts.push_back("Z");
  if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
  if (parts.empty()) return "0";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += " + " + parts[i];
  return s;
}

/// Rank and product of the nonzero invariant factors of the lattice spanned
/// by the rows of m. For lattices M <= N of equal rank, M == N iff the
/// products agree.
struct LatticeInvariant {
  std::size_t rank = 0;
  BigInt index_product = 1;
};

inline LatticeInvariant lattice_invariant(const IntegerMatrix& m) {
  LatticeInvariant inv;
  if (m.rows() == 0) return inv;
  auto d = smith_invariant_factors(m);
  for (const auto& x : d)
    if (x != 0) {
      ++inv.rank;
      inv.index_product *= x;
    }
  return inv;
}

inline IntegerMatrix stack_rows(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("stack_rows");
  IntegerMatrix c(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.at(a.rows() + i, j) = b(i, j);
  return c;
}

/// Row lattice of `sub` is contained in the row lattice of `super`.
inline bool lattice_contains(const IntegerMatrix& super, const IntegerMatrix& sub) {
  auto big = lattice_invariant(stack_rows(super, sub));
  auto small = lattice_invariant(super);
  return big.rank == small.rank && big.index_product == small.index_product;
}

inline bool lattice_equal(const IntegerMatrix& a, const IntegerMatrix& b) {
  return lattice_contains(a, b) && lattice_contains(b, a);
}

}  // namespace cotorsion
