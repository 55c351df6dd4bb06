#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cotorsion/enumerate.hpp"
#include "cotorsion/module.hpp"

namespace cotorsion {

/// Epimorphism from a projective module onto m. One summand A e_b per
/// greedily chosen generator of m.
inline Morphism free_cover(const Module& m) {
  const auto& alg = m.algebra();
  const Residue p = m.p();
  std::vector<std::size_t> gens;
  SpanBuilder generated(p, m.dim());
  for (std::size_t i = 0; i < m.dim() && generated.dimension() < m.dim(); ++i) {
    Vector e(m.dim(), 0);
    e[i] = 1;
    if (generated.contains(e)) continue;
    gens.push_back(i);
    for (std::size_t k = 0; k < alg->dim(); ++k) generated.add(m.action(k).column(i));
  }
  const bool blocked = m.adapted() && alg->blocks().size() > 1;
  std::vector<Subobject> summands;
  std::vector<Module> parts;
  for (auto i : gens) {
    if (blocked) {
      summands.push_back(projective_block(alg, m.block_of(i)));
    } else {
      auto a = regular_module(alg);
      summands.push_back({a, identity(a)});
    }
    parts.push_back(summands.back().object);
  }
  auto sum = direct_sum(parts, alg);
  FieldMatrix pi(p, m.dim(), sum.object.dim());
  std::size_t off = 0;
  for (std::size_t t = 0; t < gens.size(); ++t) {
    // basis vector y of the summand (an algebra element) goes to y . x_t
    const auto& emb = summands[t].inclusion.matrix();
    for (std::size_t c = 0; c < parts[t].dim(); ++c) {
      auto img = m.act(emb.column(c)).column(gens[t]);
      for (std::size_t r = 0; r < m.dim(); ++r) pi.at(r, off + c) = img[r];
    }
    off += parts[t].dim();
  }
  return Morphism(sum.object, m, std::move(pi));
}

/// Ω(m): kernel of the free cover.
struct Syzygy {
  Morphism cover;
  Subobject kernel;
};

inline Syzygy syzygy(const Module& m) {
  auto pi = free_cover(m);
  return {pi, kernel(pi)};
}

/// Monomorphism of m into a sum of indecomposable injectives D(e_b A)
/// (into copies of D(A) when m has no block structure).
inline Morphism injective_embedding(const Module& m) {
  const auto& alg = m.algebra();
  const Residue p = m.p();
  std::vector<Module> blocks;
  if (m.adapted() && alg->blocks().size() > 1) {
    for (std::size_t b = 0; b < alg->blocks().size(); ++b) blocks.push_back(injective_block(alg, b).object);
  } else {
    blocks.push_back(dual_regular_module(alg));
  }
  std::vector<Module> parts;
  std::vector<FieldMatrix> maps;
  FieldMatrix stacked(p, 0, m.dim());
  std::size_t r = 0;
  for (const auto& inj : blocks) {
    if (r == m.dim()) break;
    for (const auto& h : hom_basis(m, inj)) {
      auto candidate = vstack(stacked, h.matrix());
      auto nr = rank(candidate);
      if (nr == r) continue;
      // keep adding copies of this injective while they help
      stacked = candidate;
      r = nr;
      parts.push_back(inj);
      maps.push_back(h.matrix());
      if (r == m.dim()) break;
    }
  }
  auto sum = direct_sum(parts, alg);
  FieldMatrix j(p, sum.object.dim(), m.dim());
  std::size_t off = 0;
  for (std::size_t t = 0; t < parts.size(); ++t) {
    j.set_block(off, 0, maps[t]);
    off += parts[t].dim();
  }
  return Morphism(m, sum.object, std::move(j));
}

inline bool is_projective(const Module& m) {
  if (m.dim() == 0) return true;
  return find_section(free_cover(m)).has_value();
}

inline bool is_injective(const Module& m) {
  if (m.dim() == 0) return true;
  return find_retraction(injective_embedding(m)).has_value();
}

/// Ext^1(c, a) computed as Hom(Ω c, a) modulo maps factoring through the
/// free cover.
struct ExtData {
  Module c, a;
  Morphism cover;                // F -> c
  Subobject omega;               // K -> F
  std::vector<Morphism> cocycles;  // basis of Hom(K, a)
  std::vector<Morphism> basis;     // cocycles representing a basis of Ext
  std::size_t dimension() const { return basis.size(); }
};

inline ExtData ext1(const Module& c, const Module& a) {
  if (c.algebra() != a.algebra()) throw ParentMismatch();
  auto [cover, omega] = syzygy(c);
  ExtData out{c, a, cover, omega, hom_basis(omega.object, a), {}};
  const Residue p = c.p();
  SpanBuilder span(p, a.dim() * omega.object.dim());
  for (const auto& h : hom_basis(cover.dom(), a)) span.add(compose(h, omega.inclusion).matrix().entries());
  for (const auto& z : out.cocycles)
    if (span.add(z.matrix().entries())) out.basis.push_back(z);
  return out;
}

inline Morphism ext_cocycle(const ExtData& e, const Vector& coords) {
  return linear_combination(e.basis, coords, e.omega.object, e.a);
}

/// True iff the cocycle is a coboundary (the extension splits).
inline bool is_coboundary(const ExtData& e, const Morphism& psi) {
  const Residue p = e.c.p();
  SpanBuilder span(p, e.a.dim() * e.omega.object.dim());
  for (const auto& h : hom_basis(e.cover.dom(), e.a)) span.add(compose(h, e.omega.inclusion).matrix().entries());
  return span.contains(psi.matrix().entries());
}

/// Extension 0 -> a -> E -> c -> 0 of a cocycle psi : Ω c -> a, obtained by
/// pushing out 0 -> Ω c -> F -> c -> 0 along psi.
inline ShortExactSequence realize_extension(const ExtData& e, const Morphism& psi) {
  ShortExactSequence pres{e.omega.inclusion, e.cover};
  return pushout_ses(pres, psi).ses;
}

inline ShortExactSequence realize_extension(const ExtData& e, const Vector& coords) {
  return realize_extension(e, ext_cocycle(e, coords));
}

enum class PairKind { AllInjectives, ProjectivesAll, Custom };

/// Complete cotorsion pair (left, right) in an exact category whose objects
/// are modules over some algebra. The admissible monos and epis default to
/// the abelian ones.
class CotorsionPair {
 public:
  virtual ~CotorsionPair() = default;
  virtual std::string name() const = 0;
  virtual PairKind kind() const { return PairKind::Custom; }
  virtual bool in_left(const Module& m) const = 0;
  virtual bool in_right(const Module& m) const = 0;
  /// 0 -> m -> I -> P -> 0 with I in the right class and P in the left.
  virtual ShortExactSequence resolve_right(const Module& m) const = 0;
  /// 0 -> I -> P -> m -> 0 with I in the right class and P in the left.
  virtual ShortExactSequence resolve_left(const Module& m) const = 0;
  virtual bool is_admissible_mono(const Morphism& f) const { return is_injective(f); }
  virtual bool is_admissible_epi(const Morphism& f) const { return is_surjective(f); }
};

using PairPtr = std::shared_ptr<const CotorsionPair>;

inline ShortExactSequence trivial_right(const Module& m) {
  auto z = Module::zero(m.algebra());
  return {identity(m), zero_morphism(m, z)};
}

inline ShortExactSequence trivial_left(const Module& m) {
  auto z = Module::zero(m.algebra());
  return {zero_morphism(z, m), identity(m)};
}

/// (All, Injectives).
class AllInjectivesPair : public CotorsionPair {
 public:
  std::string name() const override { return "all-injectives"; }
  PairKind kind() const override { return PairKind::AllInjectives; }
  bool in_left(const Module&) const override { return true; }
  bool in_right(const Module& m) const override { return is_injective(m); }
  ShortExactSequence resolve_right(const Module& m) const override {
    if (is_injective(m)) return trivial_right(m);
    auto j = injective_embedding(m);
    auto q = cokernel(j);
    return {j, q.projection};
  }
  ShortExactSequence resolve_left(const Module& m) const override { return trivial_left(m); }
};

/// (Projectives, All).
class ProjectivesAllPair : public CotorsionPair {
 public:
  std::string name() const override { return "projectives-all"; }
  PairKind kind() const override { return PairKind::ProjectivesAll; }
  bool in_left(const Module& m) const override { return is_projective(m); }
  bool in_right(const Module&) const override { return true; }
  ShortExactSequence resolve_right(const Module& m) const override { return trivial_right(m); }
  ShortExactSequence resolve_left(const Module& m) const override {
    auto s = syzygy(m);
    return {s.kernel.inclusion, s.cover};
  }
};

inline PairPtr make_pair(PairKind k) {
  if (k == PairKind::AllInjectives) return std::make_shared<AllInjectivesPair>();
  if (k == PairKind::ProjectivesAll) return std::make_shared<ProjectivesAllPair>();
  throw PreconditionError("no built-in pair of this kind");
}

/// Short exact sequence 0 -> A -> B -> C -> 0 among catalog classes.
struct SesTriple {
  std::size_t a = 0, b = 0, c = 0;
  bool split = false;
  friend bool operator<(const SesTriple& x, const SesTriple& y) {
    return std::tie(x.a, x.b, x.c, x.split) < std::tie(y.a, y.b, y.c, y.split);
  }
};

/// Every extension class between nonzero catalog modules with total
/// dimension inside the bound, realized and identified.
struct Harvest {
  std::vector<SesTriple> triples;
  std::size_t extensions_realized = 0;
};

inline Harvest harvest_extensions(const ModuleCatalog& cat) {
  Harvest h;
  std::set<SesTriple> seen;
  const auto& mods = cat.modules();
  const Residue p = cat.algebra()->p();
  for (std::size_t ci = 0; ci < mods.size(); ++ci) {
    if (mods[ci].dim() == 0) continue;
    for (std::size_t ai = 0; ai < mods.size(); ++ai) {
      if (mods[ai].dim() == 0 || mods[ai].dim() + mods[ci].dim() > cat.max_dim()) continue;
      auto e = ext1(mods[ci], mods[ai]);
      Vector coords(e.dimension(), 0);
      for (;;) {
        auto ses = realize_extension(e, coords);
        ++h.extensions_realized;
        auto b = cat.identify(ses.middle());
        if (!b) throw InternalInconsistency("extension middle not found in the catalog");
        bool split = std::all_of(coords.begin(), coords.end(), [](Residue x) { return x == 0; });
        SesTriple t{ai, *b, ci, split};
        if (seen.insert(t).second) h.triples.push_back(t);
        std::size_t i = 0;
        while (i < coords.size() && ++coords[i] == p) coords[i++] = 0;
        if (i == coords.size()) break;
      }
    }
  }
  return h;
}

struct PairReport {
  std::vector<std::string> failures;
  std::size_t orthogonality_checked = 0, closure_checked = 0, resolutions_checked = 0;
  bool ok() const { return failures.empty(); }
};

/// Ext-orthogonality, heredity of both classes and completeness on the
/// catalog modules.
inline PairReport pair_validate(const CotorsionPair& pair, const ModuleCatalog& cat, const Harvest& harvest) {
  PairReport rep;
  const auto& mods = cat.modules();
  std::vector<bool> left(mods.size()), right(mods.size());
  for (std::size_t i = 0; i < mods.size(); ++i) {
    left[i] = pair.in_left(mods[i]);
    right[i] = pair.in_right(mods[i]);
  }
  for (std::size_t i = 0; i < mods.size(); ++i)
    for (std::size_t j = 0; j < mods.size(); ++j) {
      if (!left[i] || !right[j] || mods[i].dim() == 0 || mods[j].dim() == 0) continue;
      ++rep.orthogonality_checked;
      if (ext1(mods[i], mods[j]).dimension() != 0)
        rep.failures.push_back("Ext^1(M" + std::to_string(i) + ", M" + std::to_string(j) +
                               ") is nonzero for a left/right pair");
    }
  for (const auto& t : harvest.triples) {
    ++rep.closure_checked;
    if (left[t.b] && left[t.c] && !left[t.a])
      rep.failures.push_back("left class not closed under kernels of epis (M" + std::to_string(t.b) + " -> M" +
                             std::to_string(t.c) + ")");
    if (right[t.a] && right[t.b] && !right[t.c])
      rep.failures.push_back("right class not closed under cokernels of monos (M" + std::to_string(t.a) +
                             " -> M" + std::to_string(t.b) + ")");
  }
  for (std::size_t i = 0; i < mods.size(); ++i) {
    ++rep.resolutions_checked;
    auto r = pair.resolve_right(mods[i]);
    auto l = pair.resolve_left(mods[i]);
    if (!validate_ses(r).ok() || !pair.in_right(r.middle()) || !pair.in_left(r.right()))
      rep.failures.push_back("resolve_right fails on M" + std::to_string(i));
    if (!validate_ses(l).ok() || !pair.in_right(l.left()) || !pair.in_left(l.middle()))
      rep.failures.push_back("resolve_left fails on M" + std::to_string(i));
  }
  return rep;
}

}  // namespace cotorsion
