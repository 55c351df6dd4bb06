#pragma once

#include <memory>
#include <vector>

#include "cotorsion/module.hpp"

namespace cotorsion {

/// A diagram of A-modules of a fixed quiver shape: one module per vertex,
/// one map per arrow.
struct Representation {
  std::vector<Module> objects;
  std::vector<Morphism> arrows;
};

/// Translates between representations of a quiver in A-modules and modules
/// over A (x) kQ, built by tensor_with_shape.
class RepresentationContext {
 public:
  RepresentationContext(AlgebraPtr base, AlgebraPtr shape)
      : base_(std::move(base)), shape_(std::move(shape)), total_(tensor_with_shape(base_, shape_)) {
    if (!shape_->quiver()) throw PreconditionError("shape must be a quiver algebra");
  }

  const AlgebraPtr& base() const { return base_; }
  const AlgebraPtr& shape() const { return shape_; }
  const AlgebraPtr& algebra() const { return total_; }
  std::size_t vertices() const { return shape_->quiver()->vertices; }

  void check(const Representation& r) const {
    const auto& q = *shape_->quiver();
    if (r.objects.size() != q.vertices || r.arrows.size() != q.arrows.size())
      throw DimensionMismatch("representation does not match the shape");
    for (const auto& m : r.objects)
      if (m.algebra() != base_) throw ParentMismatch("object over a different algebra");
    for (std::size_t k = 0; k < q.arrows.size(); ++k) {
      if (!(r.arrows[k].dom() == r.objects[q.arrows[k].source]) || !(r.arrows[k].cod() == r.objects[q.arrows[k].target]))
        throw DimensionMismatch("arrow " + q.arrows[k].label + " has the wrong endpoints");
    }
  }

  /// Components stacked in vertex order.
  Module to_module(const Representation& r) const {
    check(r);
    const std::size_t nv = vertices(), da = base_->dim(), dq = shape_->dim();
    std::vector<std::size_t> off(nv + 1, 0);
    for (std::size_t v = 0; v < nv; ++v) off[v + 1] = off[v] + r.objects[v].dim();
    const std::size_t n = off[nv];
    const Residue p = base_->p();
    std::vector<FieldMatrix> action;
    action.reserve(da * dq);
    for (std::size_t k = 0; k < da; ++k)
      for (std::size_t q = 0; q < dq; ++q) {
        const auto& path = shape_->basis_paths()[q];
        FieldMatrix m(p, n, n);
        FieldMatrix along = FieldMatrix::identity(p, r.objects[path.source].dim());
        for (auto a : path.arrows) along = r.arrows[a].matrix() * along;
        auto block = r.objects[path.target].action(k) * along;
        m.set_block(off[path.target], off[path.source], block);
        action.push_back(std::move(m));
      }
    return Module(total_, n, std::move(action));
  }

  Morphism to_morphism(const std::vector<Morphism>& comps, const Module& dom, const Module& cod) const {
    if (comps.size() != vertices()) throw DimensionMismatch("one component per vertex expected");
    FieldMatrix m(base_->p(), cod.dim(), dom.dim());
    std::size_t r = 0, c = 0;
    for (const auto& f : comps) {
      m.set_block(r, c, f.matrix());
      r += f.cod().dim();
      c += f.dom().dim();
    }
    if (r != cod.dim() || c != dom.dim()) throw DimensionMismatch("components do not match the modules");
    return Morphism(dom, cod, std::move(m));
  }

  /// Vertex decomposition of a module over the total algebra.
  struct Split {
    Representation rep;
    std::vector<FieldMatrix> basis;    // columns span the vertex part
    std::vector<FieldMatrix> coords;   // left inverses of `basis`
  };

  Split from_module(const Module& m) const {
    if (m.algebra() != total_) throw ParentMismatch("module over a different algebra");
    const std::size_t nv = vertices(), da = base_->dim(), dq = shape_->dim();
    const Residue p = base_->p();
    Split out;
    for (std::size_t v = 0; v < nv; ++v) {
      auto e = m.act(tensor(base_->unit(), shape_->blocks()[v]));
      auto piv = rref(e).pivots;
      auto b = e.select(all_rows(m.dim()), piv);
      out.basis.push_back(b);
      out.coords.push_back(piv.empty() ? FieldMatrix(p, 0, m.dim()) : detail::left_inverse(b));
    }
    for (std::size_t v = 0; v < nv; ++v) {
      std::vector<FieldMatrix> action;
      const std::size_t dv = out.basis[v].cols();
      for (std::size_t k = 0; k < da; ++k) {
        auto x = tensor(base_->basis_vector(k), shape_->blocks()[v]);
        action.push_back(dv ? out.coords[v] * m.act(x) * out.basis[v] : FieldMatrix(p, 0, 0));
      }
      out.rep.objects.emplace_back(base_, dv, std::move(action));
    }
    const auto& q = *shape_->quiver();
    for (std::size_t a = 0; a < q.arrows.size(); ++a) {
      const auto s = q.arrows[a].source, t = q.arrows[a].target;
      auto x = tensor(base_->unit(), arrow_element(a));
      out.rep.arrows.emplace_back(out.rep.objects[s], out.rep.objects[t], out.coords[t] * m.act(x) * out.basis[s]);
    }
    (void)dq;
    return out;
  }

  std::vector<Morphism> from_morphism(const Morphism& f) const {
    auto sd = from_module(f.dom()), sc = from_module(f.cod());
    return from_morphism(f, sd, sc);
  }

  std::vector<Morphism> from_morphism(const Morphism& f, const Split& sd, const Split& sc) const {
    std::vector<Morphism> out;
    for (std::size_t v = 0; v < vertices(); ++v)
      out.emplace_back(sd.rep.objects[v], sc.rep.objects[v], sc.coords[v] * f.matrix() * sd.basis[v]);
    return out;
  }

 private:
  static std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = i;
    return r;
  }

  Vector tensor(const Vector& x, const Vector& y) const {
    const std::size_t dq = shape_->dim();
    Vector z(base_->dim() * dq, 0);
    for (std::size_t i = 0; i < base_->dim(); ++i)
      for (std::size_t q = 0; q < dq; ++q) z[i * dq + q] = static_cast<Residue>((std::uint64_t{x[i]} * y[q]) % base_->p());
    return z;
  }

  Vector arrow_element(std::size_t a) const {
    const auto& paths = shape_->basis_paths();
    for (std::size_t q = 0; q < paths.size(); ++q)
      if (paths[q].arrows.size() == 1 && paths[q].arrows[0] == a) return shape_->basis_vector(q);
    throw InternalInconsistency("arrow missing from the shape basis");
  }

  AlgebraPtr base_, shape_, total_;
};

}  // namespace cotorsion
