#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cotorsion/representation.hpp"
#include "cotorsion/spans.hpp"
#include "cotorsion/waldhausen.hpp"

namespace cotorsion {

/// Bounded complex X_lo <- ... <- X_hi; differentials[k] is d_{lo+k+1}.
struct ChainComplex {
  int lo = 0, hi = 0;
  std::vector<Module> objects;
  std::vector<Morphism> differentials;

  static ChainComplex concentrated(const Module& m, int degree = 0) { return {degree, degree, {m}, {}}; }

  const AlgebraPtr& algebra() const { return objects.front().algebra(); }

  Module object(int n) const {
    if (n < lo || n > hi) return Module::zero(algebra());
    return objects[static_cast<std::size_t>(n - lo)];
  }

  /// d_n : X_n -> X_{n-1}, zero outside the stored range.
  Morphism d(int n) const {
    if (n > lo && n <= hi) return differentials[static_cast<std::size_t>(n - lo - 1)];
    return zero_morphism(object(n), object(n - 1));
  }
};

struct ChainMap {
  ChainComplex dom, cod;
  std::vector<Morphism> components;  // degrees lo..hi of the (shared) range

  Morphism at(int n) const {
    if (n < dom.lo || n > dom.hi) return zero_morphism(dom.object(n), cod.object(n));
    return components[static_cast<std::size_t>(n - dom.lo)];
  }
};

inline ValidationReport validate_complex(const ChainComplex& x) {
  ValidationReport r;
  if (x.hi < x.lo || x.objects.size() != static_cast<std::size_t>(x.hi - x.lo + 1) ||
      x.differentials.size() != x.objects.size() - 1) {
    r.failures.push_back("complex bounds do not match its data");
    return r;
  }
  for (int n = x.lo + 1; n <= x.hi; ++n) {
    const auto& dn = x.d(n);
    if (!(dn.dom() == x.object(n)) || !(dn.cod() == x.object(n - 1)))
      r.failures.push_back("d_" + std::to_string(n) + " has the wrong endpoints");
    else if (!is_module_map(dn))
      r.failures.push_back("d_" + std::to_string(n) + " is not a module map");
  }
  if (r.ok())
    for (int n = x.lo + 2; n <= x.hi; ++n)
      if (!(compose(x.d(n - 1), x.d(n)).matrix().is_zero()))
        r.failures.push_back("d o d is nonzero at degree " + std::to_string(n));
  return r;
}

inline ValidationReport validate_chain_map(const ChainMap& f) {
  ValidationReport r;
  if (f.dom.lo != f.cod.lo || f.dom.hi != f.cod.hi) {
    r.failures.push_back("chain map between complexes with different bounds");
    return r;
  }
  for (int n = f.dom.lo; n <= f.dom.hi; ++n) {
    if (!is_module_map(f.at(n))) r.failures.push_back("component " + std::to_string(n) + " is not a module map");
    if (!(compose(f.cod.d(n), f.at(n)) == compose(f.at(n - 1), f.dom.d(n))))
      r.failures.push_back("component " + std::to_string(n) + " does not commute with d");
  }
  return r;
}

/// Same complex on the range [lo, hi] (which must contain the original).
inline ChainComplex pad(const ChainComplex& x, int lo, int hi) {
  if (lo > x.lo || hi < x.hi) throw PreconditionError("padding range must contain the complex");
  ChainComplex out{lo, hi, {}, {}};
  for (int n = lo; n <= hi; ++n) out.objects.push_back(x.object(n));
  for (int n = lo + 1; n <= hi; ++n) out.differentials.push_back(x.d(n));
  return out;
}

inline ChainMap pad(const ChainMap& f, int lo, int hi) {
  ChainMap out{pad(f.dom, lo, hi), pad(f.cod, lo, hi), {}};
  for (int n = lo; n <= hi; ++n) out.components.push_back(f.at(n));
  return out;
}

/// Brings both ends to a common range and re-indexes the components.
inline ChainMap chain_map(const ChainComplex& x, const ChainComplex& y, const std::vector<Morphism>& comps, int first) {
  const int lo = std::min(x.lo, y.lo), hi = std::max(x.hi, y.hi);
  ChainMap out{pad(x, lo, hi), pad(y, lo, hi), {}};
  for (int n = lo; n <= hi; ++n) {
    const int k = n - first;
    if (k >= 0 && static_cast<std::size_t>(k) < comps.size())
      out.components.push_back(comps[static_cast<std::size_t>(k)]);
    else
      out.components.push_back(zero_morphism(out.dom.object(n), out.cod.object(n)));
  }
  return out;
}

inline ChainMap identity(const ChainComplex& x) {
  ChainMap out{x, x, {}};
  for (int n = x.lo; n <= x.hi; ++n) out.components.push_back(identity(x.object(n)));
  return out;
}

inline ChainMap compose(const ChainMap& g, const ChainMap& f) {
  ChainMap out{f.dom, g.cod, {}};
  for (int n = f.dom.lo; n <= f.dom.hi; ++n) out.components.push_back(compose(g.at(n), f.at(n)));
  return out;
}

struct Homology {
  Module object;
  Subobject cycles;
  Quotient quotient;  // cycles -> homology
};

/// ker d_n / im d_{n+1}; zero outside [lo, hi].
inline Homology homology(const ChainComplex& x, int n) {
  auto cyc = kernel(x.d(n));
  auto bnd = detail::through_mono(cyc.inclusion, x.d(n + 1), x.object(n + 1));
  auto q = cokernel(bnd);
  return {q.object, cyc, q};
}

inline Morphism homology_map(const ChainMap& f, int n, const Homology& hx, const Homology& hy) {
  auto on_cycles = detail::through_mono(hy.cycles.inclusion, compose(f.at(n), hx.cycles.inclusion), hx.cycles.object);
  return detail::through_epi(hx.quotient.projection, compose(hy.quotient.projection, on_cycles), hy.object);
}

inline bool is_quasi_iso(const ChainMap& f) {
  const int lo = std::min(f.dom.lo, f.cod.lo), hi = std::max(f.dom.hi, f.cod.hi);
  for (int n = lo; n <= hi; ++n) {
    auto hx = homology(f.dom, n), hy = homology(f.cod, n);
    if (hx.object.dim() != hy.object.dim()) return false;
    if (!is_iso(homology_map(f, n, hx, hy))) return false;
  }
  return true;
}

inline bool is_exact(const ChainComplex& x) {
  for (int n = x.lo; n <= x.hi; ++n)
    if (x.object(n).dim() != rank(x.d(n).matrix()) + rank(x.d(n + 1).matrix())) return false;
  return true;
}

/// Solves d h + h d = id with h_n : X_n -> X_{n+1} module maps.
inline bool is_contractible(const ChainComplex& x) {
  if (!is_exact(x)) return false;
  const Residue p = x.algebra()->p();
  std::vector<std::vector<Morphism>> hb;  // hb[n-lo] spans Hom(X_n, X_{n+1})
  std::vector<std::size_t> col_off{0};
  for (int n = x.lo; n <= x.hi; ++n) {
    hb.push_back(hom_basis(x.object(n), x.object(n + 1)));
    col_off.push_back(col_off.back() + hb.back().size());
  }
  std::vector<std::size_t> row_off{0};
  for (int n = x.lo; n <= x.hi; ++n) row_off.push_back(row_off.back() + x.object(n).dim() * x.object(n).dim());
  FieldMatrix a(p, row_off.back(), col_off.back());
  FieldMatrix b(p, row_off.back(), 1);
  for (int n = x.lo; n <= x.hi; ++n) {
    const std::size_t k = static_cast<std::size_t>(n - x.lo), dn = x.object(n).dim();
    auto put = [&](std::size_t col, const FieldMatrix& m) {
      for (std::size_t i = 0; i < m.entries().size(); ++i) a.at(row_off[k] + i, col) = (a.at(row_off[k] + i, col) + m.entries()[i]) % p;
    };
    // h_n appears as d_{n+1} h_n at degree n and as h_n d_{n+1} at degree n+1
    for (std::size_t j = 0; j < hb[k].size(); ++j) put(col_off[k] + j, (x.d(n + 1).matrix() * hb[k][j].matrix()));
    if (k > 0)
      for (std::size_t j = 0; j < hb[k - 1].size(); ++j)
        put(col_off[k - 1] + j, hb[k - 1][j].matrix() * x.d(n).matrix());
    for (std::size_t i = 0; i < dn; ++i) b.at(row_off[k] + i * dn + i, 0) = 1;
  }
  return solve(a, b).has_value();
}

/// Cone_n = X_{n-1} (+) Y_n, d(a, b) = (-d a, f a + d b), on [lo, hi+1].
inline ChainComplex cone(const ChainMap& f) {
  const int lo = f.dom.lo, hi = f.dom.hi + 1;
  const Residue p = f.dom.algebra()->p();
  ChainComplex out{lo, hi, {}, {}};
  std::vector<Biproduct> sums;
  for (int n = lo; n <= hi; ++n) {
    sums.push_back(direct_sum(f.dom.object(n - 1), f.cod.object(n)));
    out.objects.push_back(sums.back().object);
  }
  for (int n = lo + 1; n <= hi; ++n) {
    const auto& src = sums[static_cast<std::size_t>(n - lo)];
    const auto& dst = sums[static_cast<std::size_t>(n - lo - 1)];
    auto top = neg_mod(Residue{1}, p) * f.dom.d(n - 1);
    auto m = join_from({stack_into({top, f.at(n - 1)}, dst), compose(dst.injections[1], f.cod.d(n))}, src);
    out.differentials.push_back(m);
  }
  return out;
}

/// Encodes complexes on a fixed range as modules over A (x) k(A_n-quiver with d^2 = 0).
class ChainContext {
 public:
  ChainContext(AlgebraPtr base, int lo, int hi) : lo_(lo), hi_(hi), ctx_(base, shape(base->p(), lo, hi)) {}

  static AlgebraPtr shape(Residue p, int lo, int hi) {
    QuiverPresentation q;
    q.vertices = static_cast<std::size_t>(hi - lo + 1);
    for (int n = lo + 1; n <= hi; ++n)
      q.arrows.push_back({static_cast<std::size_t>(n - lo), static_cast<std::size_t>(n - lo - 1), "d" + std::to_string(n)});
    for (std::size_t k = 1; k < q.arrows.size(); ++k) q.relations.push_back({PathTerm{1, {k, k - 1}}});
    q.nil_bound = q.vertices;
    return algebra_from_quiver(p, q, "chain[" + std::to_string(lo) + "," + std::to_string(hi) + "]");
  }

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  const AlgebraPtr& algebra() const { return ctx_.algebra(); }
  const RepresentationContext& context() const { return ctx_; }

  Module encode(const ChainComplex& x) const {
    auto y = pad(x, lo_, hi_);
    return ctx_.to_module({y.objects, y.differentials});
  }

  Morphism encode(const ChainMap& f, const Module& dom, const Module& cod) const {
    auto g = pad(f, lo_, hi_);
    return ctx_.to_morphism(g.components, dom, cod);
  }

  Morphism encode(const ChainMap& f) const { return encode(f, encode(f.dom), encode(f.cod)); }

  ChainComplex decode(const Module& m) const {
    auto r = ctx_.from_module(m).rep;
    return {lo_, hi_, r.objects, r.arrows};
  }

  /// m -> encode(decode(m)).
  Morphism normalize(const Module& m) const {
    auto s = ctx_.from_module(m);
    FieldMatrix basis(m.p(), m.dim(), 0);
    for (const auto& b : s.basis) basis = hstack(basis, b);
    auto inv = inverse(basis);
    if (!inv) throw InternalInconsistency("vertex decomposition is not a basis");
    return Morphism(m, encode(decode(m)), *inv);
  }

 private:
  int lo_, hi_;
  RepresentationContext ctx_;
};

/// Degreewise split structure with (all complexes, contractible complexes);
/// right resolutions embed into the cone of the identity.
class DwSplitContractiblesPair : public CotorsionPair {
 public:
  explicit DwSplitContractiblesPair(std::shared_ptr<const ChainContext> ctx) : ctx_(std::move(ctx)) {}

  std::string name() const override { return "dwsplit-contractibles"; }
  bool in_left(const Module&) const override { return true; }
  bool in_right(const Module& m) const override { return is_contractible(ctx_->decode(m)); }

  bool is_admissible_mono(const Morphism& f) const override {
    if (!is_injective(f)) return false;
    auto c = components(f);
    for (const auto& x : c)
      if (!find_retraction(x)) return false;
    return true;
  }
  bool is_admissible_epi(const Morphism& f) const override {
    if (!is_surjective(f)) return false;
    auto c = components(f);
    for (const auto& x : c)
      if (!find_section(x)) return false;
    return true;
  }

  ShortExactSequence resolve_right(const Module& m) const override {
    auto x = ctx_->decode(m);
    if (x.object(ctx_->hi()).dim() != 0) throw PreconditionError("complex reaches the top degree; pad it first");
    auto c = cone(identity(x));
    c = pad_down(c);
    ChainMap inc{x, c, {}};
    for (int n = x.lo; n <= x.hi; ++n)
      inc.components.push_back(c.object(n).dim() ? direct_sum(x.object(n - 1), x.object(n)).injections[1]
                                                  : zero_morphism(x.object(n), c.object(n)));
    auto mc = ctx_->encode(c);
    auto j = compose(ctx_->encode(inc, ctx_->encode(x), mc), ctx_->normalize(m));
    return {j, cokernel(j).projection};
  }

  ShortExactSequence resolve_left(const Module& m) const override { return trivial_left(m); }

 private:
  std::vector<Morphism> components(const Morphism& f) const { return ctx_->context().from_morphism(f); }

  // The cone lives on [lo, hi+1]; its top term vanishes because x does.
  ChainComplex pad_down(const ChainComplex& c) const {
    ChainComplex out{c.lo, ctx_->hi(), {}, {}};
    for (int n = c.lo; n <= ctx_->hi(); ++n) out.objects.push_back(c.object(n));
    for (int n = c.lo + 1; n <= ctx_->hi(); ++n) out.differentials.push_back(c.d(n));
    return out;
  }

  std::shared_ptr<const ChainContext> ctx_;
};

/// Weak equivalence for the degreewise split structure with acyclics the
/// exact complexes, decided through the canonical factorization.
inline WeVerdict dwsplit_weq(const ChainMap& f) {
  const int lo = std::min(f.dom.lo, f.cod.lo), hi = std::max(f.dom.hi, f.cod.hi) + 1;
  auto g = pad(f, lo, hi);
  auto ctx = std::make_shared<const ChainContext>(f.dom.algebra(), lo, hi);
  auto pair = std::make_shared<const DwSplitContractiblesPair>(ctx);
  auto z = SubcategorySpec::predicate("exact", [ctx](const Module& m) { return is_exact(ctx->decode(m)); });
  HypothesisFlags flags;
  flags.hereditary_checked = true;
  flags.complete_checked = true;
  flags.right_in_z_checked = true;
  flags.z_two_of_three = true;
  auto w = WaldhausenData::assume(pair, z, flags);
  return is_weak_equivalence(w, ctx->encode(g));
}

}  // namespace cotorsion
