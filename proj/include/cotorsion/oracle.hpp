#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cotorsion/module.hpp"

namespace cotorsion {

/// Brute-force Ext^1(c, a): enumerate every block upper triangular action
/// [[a_k, d_k], [0, c_k]] on a (+) c, count those that are modules (Z^1) and
/// those of the form d_k = a_k h - h c_k (B^1). Returns log_p |Z^1| / |B^1|.
/// Exponential in the number of unknowns; refuses beyond `max_unknowns`.
inline std::size_t brute_force_ext_dimension(const Module& c, const Module& a, std::size_t max_unknowns = 20) {
  if (c.algebra() != a.algebra()) throw ParentMismatch();
  const auto& alg = *c.algebra();
  const Residue p = alg.p();
  const std::size_t n = alg.dim(), da = a.dim(), dc = c.dim();
  const std::size_t cell = da * dc, unknowns = n * cell;
  if (unknowns > max_unknowns) throw BudgetExceeded("oracle would enumerate p^" + std::to_string(unknowns) + " tuples");
  if (cell == 0) return 0;

  auto power = [&](std::size_t e) {
    std::uint64_t r = 1;
    for (std::size_t k = 0; k < e; ++k) r *= p;
    return r;
  };
  auto decode = [&](std::uint64_t code, std::size_t count) {
    std::vector<Residue> v(count);
    for (auto& x : v) {
      x = static_cast<Residue>(code % p);
      code /= p;
    }
    return v;
  };
  auto block = [&](const std::vector<Residue>& v, std::size_t k) {
    return FieldMatrix(p, da, dc, std::vector<Residue>(v.begin() + k * cell, v.begin() + (k + 1) * cell));
  };

  // d(e_i e_j) = a_i d_j + d_i c_j for all basis pairs
  std::uint64_t cocycles = 0;
  const std::uint64_t total = power(unknowns);
  for (std::uint64_t code = 0; code < total; ++code) {
    auto v = decode(code, unknowns);
    std::vector<FieldMatrix> d;
    for (std::size_t k = 0; k < n; ++k) d.push_back(block(v, k));
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j) {
        FieldMatrix lhs(p, da, dc);
        for (std::size_t k = 0; k < n; ++k)
          if (alg.coeff(i, j, k)) lhs = lhs + alg.coeff(i, j, k) * d[k];
        ok = lhs == a.action(i) * d[j] + d[i] * c.action(j);
      }
    cocycles += ok;
  }

  // distinct coboundary tuples
  std::vector<std::vector<Residue>> seen;
  const std::uint64_t hs = power(cell);
  for (std::uint64_t code = 0; code < hs; ++code) {
    FieldMatrix h(p, da, dc, decode(code, cell));
    std::vector<Residue> t;
    for (std::size_t k = 0; k < n; ++k) {
      auto e = (a.action(k) * h - h * c.action(k)).entries();
      t.insert(t.end(), e.begin(), e.end());
    }
    seen.push_back(std::move(t));
  }
  std::sort(seen.begin(), seen.end());
  const std::uint64_t boundaries = static_cast<std::uint64_t>(std::unique(seen.begin(), seen.end()) - seen.begin());

  std::uint64_t q = cocycles / boundaries;
  if (q * boundaries != cocycles) throw InternalInconsistency("cocycle count is not a multiple of the boundaries");
  std::size_t dim = 0;
  while (q > 1) {
    if (q % p) throw InternalInconsistency("extension count is not a power of p");
    q /= p;
    ++dim;
  }
  return dim;
}

}  // namespace cotorsion
