#pragma once

#include <string>
#include <vector>

#include "cotorsion/representation.hpp"
#include "cotorsion/waldhausen.hpp"

namespace cotorsion {

/// left <-g- apex -f-> right
struct SpanObject {
  Module left, apex, right;
  Morphism g, f;

  static SpanObject zero(const AlgebraPtr& alg) {
    auto z = Module::zero(alg);
    return {z, z, z, identity(z), identity(z)};
  }
  std::size_t dim() const { return left.dim() + apex.dim() + right.dim(); }
};

struct SpanMorphism {
  Morphism left, apex, right;
};

inline SpanMorphism compose(const SpanMorphism& b, const SpanMorphism& a) {
  return {compose(b.left, a.left), compose(b.apex, a.apex), compose(b.right, a.right)};
}

inline SpanMorphism identity(const SpanObject& s) { return {identity(s.left), identity(s.apex), identity(s.right)}; }

inline bool span_valid(const SpanObject& s) {
  return s.g.dom() == s.apex && s.g.cod() == s.left && s.f.dom() == s.apex && s.f.cod() == s.right &&
         is_module_map(s.g) && is_module_map(s.f);
}

inline bool span_natural(const SpanObject& x, const SpanObject& y, const SpanMorphism& m) {
  return compose(y.g, m.apex) == compose(m.left, x.g) && compose(y.f, m.apex) == compose(m.right, x.f);
}

/// 0 -> left -> middle -> right -> 0 in Span, strand by strand.
struct SpanSES {
  SpanObject a, b, c;
  SpanMorphism i, p;
};

inline ValidationReport validate_span_ses(const SpanSES& s) {
  ValidationReport r;
  for (const auto* x : {&s.a, &s.b, &s.c})
    if (!span_valid(*x)) r.failures.push_back("span object is malformed");
  if (!span_natural(s.a, s.b, s.i)) r.failures.push_back("first map is not natural");
  if (!span_natural(s.b, s.c, s.p)) r.failures.push_back("second map is not natural");
  const char* names[3] = {"left", "apex", "right"};
  const ShortExactSequence strands[3] = {{s.i.left, s.p.left}, {s.i.apex, s.p.apex}, {s.i.right, s.p.right}};
  for (int k = 0; k < 3; ++k)
    if (!validate_ses(strands[k]).ok()) r.failures.push_back(std::string(names[k]) + " strand is not exact");
  return r;
}

namespace detail {

// h with m o h = g, for m injective.
inline Morphism through_mono(const Morphism& m, const Morphism& g, const Module& dom) {
  Morphism h(dom, m.dom(), left_inverse(m.matrix()) * g.matrix());
  if (!(compose(m, h) == g)) throw InternalInconsistency("map does not factor through the monomorphism");
  return h;
}

// h with h o e = g, for e surjective.
inline Morphism through_epi(const Morphism& e, const Morphism& g, const Module& cod) {
  Morphism h(e.cod(), cod, g.matrix() * left_inverse(e.matrix().transpose()).transpose());
  if (!(compose(h, e) == g)) throw InternalInconsistency("map does not factor through the epimorphism");
  return h;
}

inline bool is_cofibration(const CotorsionPair& pair, const Morphism& f) {
  return pair.is_admissible_mono(f) && pair.in_left(cokernel(f).object);
}

inline bool is_acyclic_fibration(const CotorsionPair& pair, const Morphism& f) {
  return pair.is_admissible_epi(f) && pair.in_right(kernel(f).object);
}

}  // namespace detail

inline bool span_in_P(const SpanObject& s, const CotorsionPair& pair) {
  return pair.in_left(s.left) && pair.in_left(s.apex) && pair.in_left(s.right) && detail::is_cofibration(pair, s.f);
}

inline bool span_in_I(const SpanObject& s, const CotorsionPair& pair) {
  return pair.in_right(s.left) && pair.in_right(s.apex) && pair.in_right(s.right) &&
         detail::is_acyclic_fibration(pair, s.g);
}

namespace detail {

inline void require_resolution(const SpanSES& s, const CotorsionPair& pair, const SpanObject& right_end,
                               const SpanObject& left_end, const char* what) {
  auto rep = validate_span_ses(s);
  if (!rep.ok()) throw InternalInconsistency(std::string(what) + ": " + rep.failures.front());
  auto strand = [&](const SpanObject& x, bool in_i) {
    const char* cls = in_i ? "I" : "P";
    if (in_i ? !pair.in_right(x.left) : !pair.in_left(x.left))
      throw InternalInconsistency(std::string(what) + ": left strand not in " + cls);
    if (in_i ? !pair.in_right(x.apex) : !pair.in_left(x.apex))
      throw InternalInconsistency(std::string(what) + ": apex strand not in " + cls);
    if (in_i ? !pair.in_right(x.right) : !pair.in_left(x.right))
      throw InternalInconsistency(std::string(what) + ": right strand not in " + cls);
    if (in_i && !is_acyclic_fibration(pair, x.g))
      throw InternalInconsistency(std::string(what) + ": I-strand g is not an acyclic fibration");
    if (!in_i && !is_cofibration(pair, x.f))
      throw InternalInconsistency(std::string(what) + ": P-strand f is not a cofibration");
  };
  strand(right_end, false);
  strand(left_end, true);
}

}  // namespace detail

/// 0 -> I -> P -> x -> 0 with I in I_Sp and P in P_Sp: resolve the apex and
/// the left object, lift g, enlarge by a resolution of I_C so the I-part of
/// g becomes an acyclic fibration, then resolve the right object and
/// factor the lifted f.
inline SpanSES span_resolve_right(const SpanObject& x, const CotorsionPair& pair) {
  if (!span_valid(x)) throw PreconditionError("malformed span");
  const auto& alg = x.apex.algebra();
  auto zero = Module::zero(alg);
  auto ra = pair.resolve_left(x.apex);  // I_A -a2-> P_A -a1-> A
  auto rc = pair.resolve_left(x.left);  // I_C -c2-> P_C -c1-> C
  auto g1 = lift(zero_morphism(zero, ra.middle()), rc.p, zero_morphism(zero, rc.middle()), compose(x.g, ra.p));
  auto g2 = detail::through_mono(rc.i, compose(g1, ra.i), ra.left());

  auto rr = pair.resolve_left(rc.left());  // I_{I_C} -> P_{I_C} -h-> I_C
  const auto& h = rr.p;
  auto ia = direct_sum(ra.left(), rr.middle());
  auto pa = direct_sum(ra.middle(), rr.middle());
  auto a2 = direct_sum_map(ra.i, identity(rr.middle()), ia, pa);
  auto a1 = join_from({ra.p, zero_morphism(rr.middle(), x.apex)}, pa);
  auto g2p = join_from({g2, h}, ia);
  auto g1p = join_from({g1, compose(rc.i, h)}, pa);

  auto rb = pair.resolve_left(x.right);  // I_B -> P_B -b1-> B
  auto f1 = lift(zero_morphism(zero, pa.object), rb.p, zero_morphism(zero, rb.middle()), compose(x.f, a1));
  auto fac = factor(pair, f1);
  auto b1p = compose(rb.p, fac.p);
  auto kb = kernel(b1p);
  auto f2 = detail::through_mono(kb.inclusion, compose(fac.i, a2), ia.object);

  SpanSES out;
  out.a = {rc.left(), ia.object, kb.object, g2p, f2};
  out.b = {rc.middle(), pa.object, fac.middle, g1p, fac.i};
  out.c = x;
  out.i = {rc.i, a2, kb.inclusion};
  out.p = {rc.p, a1, b1p};
  detail::require_resolution(out, pair, out.b, out.a, "span resolution");
  return out;
}

/// 0 -> x -> I' -> P' -> 0 with I' in I_Sp and P' in P_Sp: resolve the apex
/// and enlarge it by a resolution of I_C so that g becomes an acyclic
/// fibration, then enlarge the right object by a resolution of the apex
/// cokernel so that f becomes a cofibration.
inline SpanSES span_coresolve(const SpanObject& x, const CotorsionPair& pair) {
  if (!span_valid(x)) throw PreconditionError("malformed span");
  const auto& alg = x.apex.algebra();
  auto zero = Module::zero(alg);
  auto ra = pair.resolve_right(x.apex);  // A -a1-> I_A -a2-> P_A
  auto rc = pair.resolve_right(x.left);  // C -c1-> I_C -c2-> P_C
  auto rb = pair.resolve_right(x.right);  // B -b1-> I_B -b2-> P_B

  auto g1 = lift(ra.i, zero_morphism(rc.middle(), zero), compose(rc.i, x.g), zero_morphism(ra.middle(), zero));
  auto h = pair.resolve_left(rc.middle()).p;  // P_{I_C} -h-> I_C, P_{I_C} in P and I
  auto ia = direct_sum(ra.middle(), h.dom());
  auto pa = direct_sum(ra.right(), h.dom());
  auto a1 = stack_into({ra.i, zero_morphism(x.apex, h.dom())}, ia);
  auto a2 = direct_sum_map(ra.p, identity(h.dom()), ia, pa);
  auto gi = join_from({g1, h}, ia);
  auto gp = detail::through_epi(a2, compose(rc.p, gi), rc.right());

  auto f1 = lift(a1, zero_morphism(rb.middle(), zero), compose(rb.i, x.f), zero_morphism(ia.object, zero));
  auto fp = detail::through_epi(a2, compose(rb.p, f1), rb.right());
  auto k = pair.resolve_right(pa.object).i;  // P_A' -k-> I_{P_A'}, in P and I
  auto ib = direct_sum(rb.middle(), k.cod());
  auto pb = direct_sum(rb.right(), k.cod());
  auto b1 = stack_into({rb.i, zero_morphism(x.right, k.cod())}, ib);
  auto b2 = direct_sum_map(rb.p, identity(k.cod()), ib, pb);
  auto fi = stack_into({f1, compose(k, a2)}, ib);
  auto fpp = stack_into({fp, k}, pb);

  SpanSES out;
  out.a = x;
  out.b = {rc.middle(), ia.object, ib.object, gi, fi};
  out.c = {rc.right(), pa.object, pb.object, gp, fpp};
  out.i = {rc.i, a1, b1};
  out.p = {rc.p, a2, b2};
  detail::require_resolution(out, pair, out.c, out.b, "span coresolution");
  return out;
}

/// Encodes spans as modules over A (x) k(0 -> 1, 0 -> 2).
class SpanContext {
 public:
  explicit SpanContext(AlgebraPtr base) : ctx_(base, shape(base->p())) {}

  static AlgebraPtr shape(Residue p) {
    QuiverPresentation q;
    q.vertices = 3;
    q.arrows = {{0, 1, "g"}, {0, 2, "f"}};
    q.nil_bound = 2;
    return algebra_from_quiver(p, q, "span");
  }

  const RepresentationContext& context() const { return ctx_; }
  const AlgebraPtr& algebra() const { return ctx_.algebra(); }

  Module encode(const SpanObject& s) const { return ctx_.to_module({{s.apex, s.left, s.right}, {s.g, s.f}}); }

  Morphism encode(const SpanMorphism& m, const Module& dom, const Module& cod) const {
    return ctx_.to_morphism({m.apex, m.left, m.right}, dom, cod);
  }

  SpanObject decode(const Module& m) const {
    auto r = ctx_.from_module(m).rep;
    return {r.objects[1], r.objects[0], r.objects[2], r.arrows[0], r.arrows[1]};
  }

  /// Components of a morphism between encoded spans.
  SpanMorphism decode(const Morphism& f, const SpanObject& dom, const SpanObject& cod) const {
    auto sd = ctx_.from_module(f.dom()), sc = ctx_.from_module(f.cod());
    auto c = ctx_.from_morphism(f, sd, sc);
    // from_module may choose different bases than the given spans; compare
    // through the encoding when shapes agree
    if (!(sd.rep.objects[0] == dom.apex) || !(sc.rep.objects[0] == cod.apex))
      throw PreconditionError("morphism is not between the encodings of the given spans");
    return {Morphism(dom.left, cod.left, c[1].matrix()), Morphism(dom.apex, cod.apex, c[0].matrix()),
            Morphism(dom.right, cod.right, c[2].matrix())};
  }

 private:
  RepresentationContext ctx_;
};

/// Cofibration in Span: componentwise admissible monos whose cokernel span
/// lies in P_Sp.
inline bool span_is_cofibration(const SpanObject& x, const SpanObject& y, const SpanMorphism& m,
                                const CotorsionPair& pair) {
  if (!pair.is_admissible_mono(m.left) || !pair.is_admissible_mono(m.apex) || !pair.is_admissible_mono(m.right))
    return false;
  auto ql = cokernel(m.left), qa = cokernel(m.apex), qr = cokernel(m.right);
  SpanObject q{ql.object, qa.object, qr.object,
               detail::through_epi(qa.projection, compose(ql.projection, y.g), ql.object),
               detail::through_epi(qa.projection, compose(qr.projection, y.f), qr.object)};
  (void)x;
  return span_in_P(q, pair);
}

/// Acyclic fibration in Span: componentwise admissible epis whose kernel
/// span lies in I_Sp.
inline bool span_is_acyclic_fibration(const SpanObject& x, const SpanObject& y, const SpanMorphism& m,
                                      const CotorsionPair& pair) {
  if (!pair.is_admissible_epi(m.left) || !pair.is_admissible_epi(m.apex) || !pair.is_admissible_epi(m.right))
    return false;
  auto kl = kernel(m.left), ka = kernel(m.apex), kr = kernel(m.right);
  SpanObject k{kl.object, ka.object, kr.object,
               detail::through_mono(kl.inclusion, compose(x.g, ka.inclusion), ka.object),
               detail::through_mono(kr.inclusion, compose(x.f, ka.inclusion), ka.object)};
  (void)y;
  return span_in_I(k, pair);
}

struct SpanFactorization {
  SpanMorphism i, p;
  SpanObject middle;
};

/// m = p o i through x -> I' (+) y, I' from the coresolution of x.
inline SpanFactorization span_factor(const SpanObject& x, const SpanObject& y, const SpanMorphism& m,
                                     const CotorsionPair& pair) {
  if (!span_natural(x, y, m)) throw PreconditionError("span morphism is not natural");
  // coker(i) is an extension of the coresolution cokernel by y
  if (!span_in_P(y, pair)) throw PreconditionError("codomain span is not in P_Sp");
  auto co = span_coresolve(x, pair);
  const auto& ip = co.b;
  auto sl = direct_sum(ip.left, y.left), sa = direct_sum(ip.apex, y.apex), sr = direct_sum(ip.right, y.right);
  SpanObject mid{sl.object, sa.object, sr.object, direct_sum_map(ip.g, y.g, sa, sl), direct_sum_map(ip.f, y.f, sa, sr)};
  SpanFactorization out;
  out.middle = mid;
  out.i = {stack_into({co.i.left, m.left}, sl), stack_into({co.i.apex, m.apex}, sa),
           stack_into({co.i.right, m.right}, sr)};
  out.p = {sl.projections[1], sa.projections[1], sr.projections[1]};
  if (!span_natural(x, mid, out.i) || !span_natural(mid, y, out.p))
    throw InternalInconsistency("span factorization is not natural");
  if (!(compose(out.p.apex, out.i.apex) == m.apex) || !(compose(out.p.left, out.i.left) == m.left) ||
      !(compose(out.p.right, out.i.right) == m.right))
    throw InternalInconsistency("span factorization does not compose to m");
  if (!span_is_cofibration(x, mid, out.i, pair)) throw InternalInconsistency("span factor i is not a cofibration");
  if (!span_is_acyclic_fibration(mid, y, out.p, pair))
    throw InternalInconsistency("span factor p is not an acyclic fibration");
  return out;
}

/// Lift in a square of spans, solved over the encoding so naturality is
/// automatic.
inline SpanMorphism span_lift(const SpanContext& ctx, const SpanObject& x, const SpanObject& y, const SpanObject& e,
                              const SpanObject& b, const SpanMorphism& i, const SpanMorphism& p,
                              const SpanMorphism& top, const SpanMorphism& bottom, const CotorsionPair& pair) {
  if (!span_is_cofibration(x, y, i, pair)) throw PreconditionError("left map is not a span cofibration");
  if (!span_is_acyclic_fibration(e, b, p, pair)) throw PreconditionError("right map is not a span acyclic fibration");
  auto mx = ctx.encode(x), my = ctx.encode(y), me = ctx.encode(e), mb = ctx.encode(b);
  auto h = lift(ctx.encode(i, mx, my), ctx.encode(p, me, mb), ctx.encode(top, mx, me), ctx.encode(bottom, my, mb));
  // encodings stack apex, left, right
  const std::size_t ya = y.apex.dim(), yl = y.left.dim(), ea = e.apex.dim(), el = e.left.dim();
  const auto& hm = h.matrix();
  auto sub = [&](std::size_t r0, std::size_t rn, std::size_t c0, std::size_t cn) {
    std::vector<std::size_t> rs(rn), cs(cn);
    for (std::size_t k = 0; k < rn; ++k) rs[k] = r0 + k;
    for (std::size_t k = 0; k < cn; ++k) cs[k] = c0 + k;
    return hm.select(rs, cs);
  };
  SpanMorphism out{Morphism(y.left, e.left, sub(ea, el, ya, yl)), Morphism(y.apex, e.apex, sub(0, ea, 0, ya)),
                   Morphism(y.right, e.right, sub(ea + el, e.right.dim(), ya + yl, y.right.dim()))};
  if (!span_natural(y, e, out)) throw InternalInconsistency("span lift is not natural");
  return out;
}

/// Ext^1 between spans, computed in the encoding.
inline std::size_t span_ext_dimension(const SpanContext& ctx, const SpanObject& s, const SpanObject& t) {
  return ext1(ctx.encode(s), ctx.encode(t)).dimension();
}

/// (P_Sp, I_Sp) as a cotorsion pair on encoded spans.
class SpanPair : public CotorsionPair {
 public:
  SpanPair(std::shared_ptr<const SpanContext> ctx, PairPtr base) : ctx_(std::move(ctx)), base_(std::move(base)) {}

  std::string name() const override { return "span(" + base_->name() + ")"; }
  bool in_left(const Module& m) const override { return span_in_P(ctx_->decode(m), *base_); }
  bool in_right(const Module& m) const override { return span_in_I(ctx_->decode(m), *base_); }

  ShortExactSequence resolve_left(const Module& m) const override {
    return encode(span_resolve_right(ctx_->decode(m), *base_), m, false);
  }
  ShortExactSequence resolve_right(const Module& m) const override {
    return encode(span_coresolve(ctx_->decode(m), *base_), m, true);
  }

 private:
  // Re-encode, then identify the fixed end with m itself.
  ShortExactSequence encode(const SpanSES& s, const Module& m, bool fixed_left) const {
    auto ma = ctx_->encode(s.a), mb = ctx_->encode(s.b), mc = ctx_->encode(s.c);
    auto i = ctx_->encode(s.i, ma, mb);
    auto p = ctx_->encode(s.p, mb, mc);
    auto split = ctx_->context().from_module(m);
    FieldMatrix basis = hstack(hstack(split.basis[0], split.basis[1]), split.basis[2]);
    if (fixed_left) {
      // m -> ma: coordinates in the vertex decomposition
      Morphism iso(m, ma, *inverse(basis));
      return {compose(i, iso), p};
    }
    Morphism iso(mc, m, basis);
    return {i, compose(iso, p)};
  }

  std::shared_ptr<const SpanContext> ctx_;
  PairPtr base_;
};

}  // namespace cotorsion
