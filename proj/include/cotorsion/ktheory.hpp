#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cotorsion/waldhausen.hpp"

namespace cotorsion {

/// Z^generators / rowspace(relations).
struct K0Presentation {
  std::vector<std::size_t> generators;  // catalog indices
  std::vector<std::string> digests;
  IntegerMatrix relations;
  std::vector<BigInt> invariant_factors;
  std::string group;
  SmithForm smith;

  std::size_t index_of(std::size_t catalog_index) const {
    for (std::size_t k = 0; k < generators.size(); ++k)
      if (generators[k] == catalog_index) return k;
    return generators.size();
  }

  nlohmann::json to_json() const {
    nlohmann::json f = nlohmann::json::array();
    for (const auto& d : invariant_factors) f.push_back(d.str());
    return {{"generators", generators}, {"digests", digests}, {"relations", relations.rows()},
            {"invariant_factors", f}, {"group", group}};
  }
};

inline std::string module_digest(const Module& m) { return digest({identity(m)}); }

namespace detail {

inline K0Presentation finish(K0Presentation k) {
  k.smith = smith_normal_form(k.relations);
  k.invariant_factors = k.smith.diagonal;
  k.group = describe_group(k.invariant_factors);
  return k;
}

inline K0Presentation exact_relations(const ModuleCatalog& cat, const Harvest& harvest,
                                      const std::function<bool(const Module&)>& in_c) {
  K0Presentation k;
  std::vector<std::size_t> slot(cat.size(), cat.size());
  for (std::size_t i = 0; i < cat.size(); ++i)
    if (cat[i].dim() > 0 && in_c(cat[i])) {
      slot[i] = k.generators.size();
      k.generators.push_back(i);
      k.digests.push_back(module_digest(cat[i]));
    }
  const std::size_t n = k.generators.size();
  k.relations = IntegerMatrix(0, n);
  for (const auto& t : harvest.triples) {
    if (slot[t.a] == cat.size() || slot[t.b] == cat.size() || slot[t.c] == cat.size()) continue;
    std::vector<BigInt> row(n, 0);
    row[slot[t.b]] += 1;
    row[slot[t.a]] -= 1;
    row[slot[t.c]] -= 1;
    k.relations.append_row(row);
  }
  return k;
}

}  // namespace detail

/// Generators: catalog classes in C; relations [B] - [A] - [C] for each
/// harvested sequence with all three terms in C.
inline K0Presentation k0_exact_category(const ModuleCatalog& cat, const Harvest& harvest, const SubcategorySpec& c) {
  return detail::finish(detail::exact_relations(cat, harvest, [&](const Module& m) { return c.contains(m); }));
}

inline K0Presentation k0_exact_category(const AlgebraPtr& alg, const SubcategorySpec& c, std::size_t dim_bound,
                                        std::uint64_t budget = std::uint64_t{1} << 27) {
  ModuleCatalog cat(alg, dim_bound, budget);
  return k0_exact_category(cat, harvest_extensions(cat), c);
}

/// Exact-category relations on C plus [Z] = 0 for every generator in Z.
/// A weak equivalence f with canonical factorization (i, p) satisfies
/// [dom f] - [cod f] = [ker p] - [coker i], and both terms lie in Z, so
/// these relations suffice.
inline K0Presentation k0_waldhausen(const WaldhausenData& w, const ModuleCatalog& cat, const Harvest& harvest) {
  if (w.flags().z_two_of_three != true) throw HypothesisError("Z and C lacks 2-out-of-3");
  auto k = detail::exact_relations(cat, harvest, [&](const Module& m) { return w.in_c(m); });
  for (std::size_t s = 0; s < k.generators.size(); ++s)
    if (w.in_z(cat[k.generators[s]])) {
      std::vector<BigInt> row(k.generators.size(), 0);
      row[s] = 1;
      k.relations.append_row(row);
    }
  return detail::finish(std::move(k));
}

/// Matrix of the homomorphism Z^m -> Z^n (rows are images of generators)
/// rewritten in the cyclic decompositions, trivial factors dropped.
inline std::vector<std::vector<std::string>> reduced_map(const K0Presentation& src, const K0Presentation& dst,
                                                         const IntegerMatrix& f) {
  auto kept = [](const K0Presentation& k) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < k.invariant_factors.size(); ++i)
      if (k.invariant_factors[i] != 1) out.push_back(i);
    return out;
  };
  auto rs = kept(src), cs = kept(dst);
  auto m = src.smith.v_inverse * f * dst.smith.v;
  std::vector<std::vector<BigInt>> red(rs.size(), std::vector<BigInt>(cs.size()));
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j) {
      BigInt x = m(rs[i], cs[j]);
      const auto& d = dst.invariant_factors[cs[j]];
      if (d != 0) x = ((x % d) + d) % d;
      red[i][j] = x;
    }
  // signs of free coordinates are a choice of generator; fix them
  for (std::size_t j = 0; j < cs.size(); ++j) {
    if (dst.invariant_factors[cs[j]] != 0) continue;
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (red[i][j] != 0) {
        if (red[i][j] < 0)
          for (auto& row : red) row[j] = -row[j];
        break;
      }
  }
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (src.invariant_factors[rs[i]] != 0) continue;
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (red[i][j] != 0) {
        if (red[i][j] < 0)
          for (std::size_t c = 0; c < cs.size(); ++c) {
            red[i][c] = -red[i][c];
            const auto& d = dst.invariant_factors[cs[c]];
            if (d != 0) red[i][c] = ((red[i][c] % d) + d) % d;
          }
        break;
      }
  }
  std::vector<std::vector<std::string>> out;
  for (const auto& row : red) {
    out.emplace_back();
    for (const auto& x : row) out.back().push_back(x.str());
  }
  return out;
}

struct LocalizationReport {
  K0Presentation ka, kb, kbwa;
  IntegerMatrix first, second;  // generator-level maps
  bool composite_zero = false, surjective = false, im_eq_ker = false;
  std::vector<std::string> hypothesis_failures;
  std::vector<std::string> warnings;

  bool exact() const { return hypothesis_failures.empty() && composite_zero && surjective && im_eq_ker; }

  nlohmann::json to_json() const {
    return {{"groups", {{"KA", ka.to_json()}, {"KB", kb.to_json()}, {"KBwA", kbwa.to_json()}}},
            {"maps", {{"KA_to_KB", reduced_map(ka, kb, first)}, {"KB_to_KBwA", reduced_map(kb, kbwa, second)}}},
            {"verdicts", {{"composite_zero", composite_zero}, {"surjective", surjective}, {"im_eq_ker", im_eq_ker}}},
            {"verdict", exact() ? "exact" : "not exact"},
            {"cokernel", kbwa.group},
            {"hypothesis_failures", hypothesis_failures},
            {"warnings", warnings}};
  }
};

/// K0(A) -> K0(B) -> K0(B, w_A) -> 0 for B = all modules and A = a_spec,
/// checked at the level of presentations.
inline LocalizationReport localization_k0_report(const ModuleCatalog& cat, const Harvest& harvest,
                                                 const SubcategorySpec& a_spec) {
  LocalizationReport r;
  const auto& mods = cat.modules();
  std::vector<bool> in_a(mods.size());
  bool all = true;
  for (std::size_t i = 0; i < mods.size(); ++i) {
    in_a[i] = a_spec.contains(mods[i]);
    all = all && in_a[i];
    if (mods[i].dim() > 0 && is_injective(mods[i]) && !in_a[i])
      r.hypothesis_failures.push_back("injective module M" + std::to_string(i) + " is not in A");
  }
  for (const auto& t : harvest.triples) {
    int inside = int(in_a[t.a]) + int(in_a[t.b]) + int(in_a[t.c]);
    if (inside == 2)
      r.hypothesis_failures.push_back("A lacks 2-out-of-3 on M" + std::to_string(t.a) + " -> M" + std::to_string(t.b) +
                                      " -> M" + std::to_string(t.c));
  }
  if (all) r.warnings.push_back("A contains every sampled module, so A = B and the quotient is trivial");

  r.ka = k0_exact_category(cat, harvest, a_spec);
  r.kb = k0_exact_category(cat, harvest, SubcategorySpec::all());
  {
    auto kk = detail::exact_relations(cat, harvest, [](const Module&) { return true; });
    for (std::size_t s = 0; s < kk.generators.size(); ++s)
      if (in_a[kk.generators[s]]) {
        std::vector<BigInt> row(kk.generators.size(), 0);
        row[s] = 1;
        kk.relations.append_row(row);
      }
    r.kbwa = detail::finish(std::move(kk));
  }
  const std::size_t m = r.ka.generators.size(), n = r.kb.generators.size();
  r.first = IntegerMatrix(m, n);
  for (std::size_t i = 0; i < m; ++i) r.first.at(i, r.kb.index_of(r.ka.generators[i])) = 1;
  r.second = IntegerMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) r.second.at(i, i) = 1;

  auto comp = r.first * r.second;
  r.composite_zero = comp.rows() == 0 || lattice_contains(r.kbwa.relations, comp);
  IntegerMatrix ident(n, n);
  for (std::size_t i = 0; i < n; ++i) ident.at(i, i) = 1;
  r.surjective = lattice_equal(stack_rows(r.second, r.kbwa.relations), ident);
  // kernel of the second map is the preimage of L_BwA, i.e. L_BwA itself
  r.im_eq_ker = lattice_equal(stack_rows(r.first, r.kb.relations), r.kbwa.relations);
  return r;
}

inline LocalizationReport localization_k0_report(const AlgebraPtr& alg, const SubcategorySpec& a_spec,
                                                 std::size_t dim_bound,
                                                 std::uint64_t budget = std::uint64_t{1} << 27) {
  ModuleCatalog cat(alg, dim_bound, budget);
  return localization_k0_report(cat, harvest_extensions(cat), a_spec);
}

}  // namespace cotorsion
