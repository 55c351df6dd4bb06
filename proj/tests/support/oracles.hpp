#pragma once

// Brute-force reference computations for the tests. Everything here works on
// plain integer arrays with its own elimination and enumeration, so a bug in
// the library's linear algebra cannot hide itself.

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "cotorsion/module.hpp"

namespace oracle {

using Raw = std::vector<std::vector<long>>;

inline Raw raw(const cotorsion::FieldMatrix& m) {
  Raw out(m.rows(), std::vector<long>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline Raw zeros(std::size_t r, std::size_t c) { return Raw(r, std::vector<long>(c, 0)); }

inline Raw mul(const Raw& a, const Raw& b, long p, std::size_t inner) {
  const std::size_t r = a.size(), c = b.empty() ? 0 : b[0].size();
  Raw out = zeros(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < inner; ++k)
      if (a[i][k])
        for (std::size_t j = 0; j < c; ++j) out[i][j] = (out[i][j] + a[i][k] * b[k][j]) % p;
  return out;
}

inline std::size_t rank(Raw m, long p) {
  auto inv = [p](long a) {
    long r = 1;
    for (long e = p - 2, b = a % p; e > 0; e >>= 1, b = b * b % p)
      if (e & 1) r = r * b % p;
    return r;
  };
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] % p == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[r]);
    const long s = inv(m[r][c]);
    for (auto& x : m[r]) x = x * s % p;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (i != r && m[i][c] % p) {
        const long f = m[i][c];
        for (std::size_t j = 0; j < cols; ++j) m[i][j] = ((m[i][j] - f * m[r][j]) % p + p) % p;
      }
    ++r;
  }
  return r;
}

inline std::size_t rank(const cotorsion::FieldMatrix& m) { return rank(raw(m), m.p()); }

// Decodes `code` as `count` base-p digits.
inline std::vector<long> digits(std::uint64_t code, std::size_t count, long p) {
  std::vector<long> v(count);
  for (auto& x : v) {
    x = static_cast<long>(code % p);
    code /= p;
  }
  return v;
}

inline std::uint64_t power(long p, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= p;
  return r;
}

inline std::size_t log_p(std::uint64_t q, long p) {
  std::size_t d = 0;
  while (q > 1) {
    q /= p;
    ++d;
  }
  return d;
}

struct RawModule {
  long p = 2;
  std::size_t dim = 0;
  std::vector<Raw> act;  // one matrix per algebra basis element
};

inline RawModule raw(const cotorsion::Module& m) {
  RawModule r{static_cast<long>(m.p()), m.dim(), {}};
  for (std::size_t k = 0; k < m.algebra()->dim(); ++k) r.act.push_back(raw(m.action(k)));
  return r;
}

// Structure constants as a flat table c[(i*n+j)*n+k].
inline std::vector<long> structure(const cotorsion::Algebra& a) {
  return std::vector<long>(a.structure().begin(), a.structure().end());
}

// Number of linear maps h : m -> n with h a_k = a_k h for every k, as log_p.
inline std::size_t hom_dimension(const RawModule& m, const RawModule& n) {
  const long p = m.p;
  const std::size_t cells = n.dim * m.dim;
  std::uint64_t count = 0;
  for (std::uint64_t code = 0; code < power(p, cells); ++code) {
    auto v = digits(code, cells, p);
    Raw h = zeros(n.dim, m.dim);
    for (std::size_t i = 0; i < n.dim; ++i)
      for (std::size_t j = 0; j < m.dim; ++j) h[i][j] = v[i * m.dim + j];
    bool ok = true;
    for (std::size_t k = 0; k < m.act.size() && ok; ++k) ok = mul(h, m.act[k], p, m.dim) == mul(n.act[k], h, p, n.dim);
    count += ok;
  }
  return log_p(count, p);
}

// Ext^1(c, a) by counting all module structures [[a_k, d_k], [0, c_k]] on
// a (+) c and dividing by the coboundaries a_k h - h c_k.
inline std::size_t ext_dimension(const std::vector<long>& st, std::size_t n, const RawModule& c, const RawModule& a) {
  const long p = c.p;
  const std::size_t da = a.dim, dc = c.dim, cell = da * dc;
  if (cell == 0) return 0;
  const std::size_t unknowns = n * cell;
  auto d_of = [&](const std::vector<long>& v, std::size_t k) {
    Raw d = zeros(da, dc);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < dc; ++j) d[i][j] = v[k * cell + i * dc + j];
    return d;
  };
  std::uint64_t cocycles = 0;
  for (std::uint64_t code = 0; code < power(p, unknowns); ++code) {
    auto v = digits(code, unknowns, p);
    std::vector<Raw> d;
    for (std::size_t k = 0; k < n; ++k) d.push_back(d_of(v, k));
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j) {
        Raw lhs = zeros(da, dc);
        for (std::size_t k = 0; k < n; ++k)
          if (long s = st[(i * n + j) * n + k])
            for (std::size_t r = 0; r < da; ++r)
              for (std::size_t q = 0; q < dc; ++q) lhs[r][q] = (lhs[r][q] + s * d[k][r][q]) % p;
        auto x = mul(a.act[i], d[j], p, da), y = mul(d[i], c.act[j], p, dc);
        for (std::size_t r = 0; r < da && ok; ++r)
          for (std::size_t q = 0; q < dc && ok; ++q) ok = lhs[r][q] == (x[r][q] + y[r][q]) % p;
      }
    cocycles += ok;
  }
  // coboundaries form the image of a linear map, so count its rank
  Raw images;
  for (std::size_t t = 0; t < cell; ++t) {
    Raw h = zeros(da, dc);
    h[t / dc][t % dc] = 1;
    std::vector<long> row;
    for (std::size_t k = 0; k < n; ++k) {
      auto x = mul(a.act[k], h, p, da), y = mul(h, c.act[k], p, dc);
      for (std::size_t r = 0; r < da; ++r)
        for (std::size_t q = 0; q < dc; ++q) row.push_back(((x[r][q] - y[r][q]) % p + p) % p);
    }
    images.push_back(row);
  }
  return log_p(cocycles, p) - rank(images, p);
}

inline std::size_t ext_dimension(const cotorsion::Module& c, const cotorsion::Module& a) {
  const auto& alg = *c.algebra();
  return ext_dimension(structure(alg), alg.dim(), raw(c), raw(a));
}

// dim H_n from ranks: dim X_n - rank d_n - rank d_{n+1}. `d[k]` is d_{lo+k+1}.
inline std::vector<std::size_t> homology_dims(const std::vector<std::size_t>& dims, const std::vector<Raw>& d,
                                              long p) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < dims.size(); ++n) {
    std::size_t r_out = n > 0 ? rank(d[n - 1], p) : 0;
    std::size_t r_in = n + 1 < dims.size() ? rank(d[n], p) : 0;
    out.push_back(dims[n] - r_out - r_in);
  }
  return out;
}

// f : X -> Y is a quasi-isomorphism iff its mapping cone is exact. Both
// complexes live on [lo, lo+len); f[k] : X_k -> Y_k, dx[k] : X_{k+1} -> X_k.
inline bool quasi_iso_by_cone(const std::vector<std::size_t>& xd, const std::vector<std::size_t>& yd,
                              const std::vector<Raw>& dx, const std::vector<Raw>& dy, const std::vector<Raw>& f,
                              long p) {
  const std::size_t len = xd.size();
  // cone_n = X_{n-1} (+) Y_n for n in [0, len]
  auto cd = [&](std::size_t n) { return (n ? xd[n - 1] : 0) + (n < len ? yd[n] : 0); };
  std::vector<std::size_t> dims;
  std::vector<Raw> diffs;
  for (std::size_t n = 0; n <= len; ++n) dims.push_back(cd(n));
  for (std::size_t n = 1; n <= len; ++n) {
    // d(x, y) = (-dx x, f x + dy y) : X_{n-1} (+) Y_n -> X_{n-2} (+) Y_{n-1}
    const std::size_t xs = xd[n - 1], ys = n < len ? yd[n] : 0;
    const std::size_t xt = n >= 2 ? xd[n - 2] : 0, yt = yd[n - 1];
    Raw m = zeros(xt + yt, xs + ys);
    if (n >= 2)
      for (std::size_t i = 0; i < xt; ++i)
        for (std::size_t j = 0; j < xs; ++j) m[i][j] = (p - dx[n - 2][i][j]) % p;
    for (std::size_t i = 0; i < yt; ++i)
      for (std::size_t j = 0; j < xs; ++j) m[xt + i][j] = f[n - 1][i][j];
    if (n < len)
      for (std::size_t i = 0; i < yt; ++i)
        for (std::size_t j = 0; j < ys; ++j) m[xt + i][xs + j] = dy[n - 1][i][j];
    diffs.push_back(m);
  }
  for (auto h : homology_dims(dims, diffs, p))
    if (h) return false;
  return true;
}

inline long gcd_all(const std::vector<long>& v) {
  long g = 0;
  for (long x : v) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

inline long det(const std::vector<std::vector<long>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  long s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<long>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      minor.emplace_back();
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) minor.back().push_back(m[r][k]);
    }
    s += (c % 2 ? -1 : 1) * m[0][c] * det(minor);
  }
  return s;
}

// Invariant factors d_k / d_{k-1}, d_k the gcd of all k x k minors; padded
// with zeros up to the number of columns (the cokernel of Z^rows -> Z^cols).
inline std::vector<long> smith_by_minors(const std::vector<std::vector<long>>& m, std::size_t cols) {
  const std::size_t rows = m.size();
  std::vector<long> out;
  long prev = 1;
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    std::vector<long> minors;
    std::vector<std::size_t> rs(k), cs(k);
    // iterate over k-subsets by bitmask (small matrices only)
    for (std::uint32_t rm = 0; rm < (1u << rows); ++rm) {
      if (static_cast<std::size_t>(__builtin_popcount(rm)) != k) continue;
      for (std::uint32_t cm = 0; cm < (1u << cols); ++cm) {
        if (static_cast<std::size_t>(__builtin_popcount(cm)) != k) continue;
        std::vector<std::vector<long>> sub;
        for (std::size_t r = 0; r < rows; ++r) {
          if (!(rm >> r & 1)) continue;
          sub.emplace_back();
          for (std::size_t c = 0; c < cols; ++c)
            if (cm >> c & 1) sub.back().push_back(m[r][c]);
        }
        minors.push_back(det(sub));
      }
    }
    long dk = gcd_all(minors);
    if (dk == 0) break;
    out.push_back(dk / prev);
    prev = dk;
  }
  while (out.size() < cols) out.push_back(0);
  return out;
}

}  // namespace oracle
