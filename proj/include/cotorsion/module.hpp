#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cotorsion/algebra.hpp"

namespace cotorsion {

/// Finite-dimensional left module: one action matrix per basis element of
/// the algebra. Cheap to copy; the data is shared and immutable.
class Module {
 public:
  Module() = default;

  Module(AlgebraPtr alg, std::size_t dim, std::vector<FieldMatrix> action) {
    if (!alg) throw PreconditionError("module without algebra");
    if (action.size() != alg->dim()) throw MalformedInput("module needs one action matrix per basis element");
    for (const auto& m : action) {
      if (m.rows() != dim || m.cols() != dim) throw MalformedInput("action matrix has wrong shape");
      if (m.p() != alg->p()) throw MalformedInput("action matrix over the wrong field");
    }
    auto d = std::make_shared<Data>();
    d->alg = std::move(alg);
    d->dim = dim;
    d->action = std::move(action);
    d->generator_action.reserve(d->alg->generators().size());
    for (const auto& g : d->alg->generators()) d->generator_action.push_back(combine(*d, g.element));
    detect_blocks(*d);
    d_ = std::move(d);
  }

  static Module zero(const AlgebraPtr& alg) {
    return Module(alg, 0, std::vector<FieldMatrix>(alg->dim(), FieldMatrix(alg->p(), 0, 0)));
  }

  bool valid() const { return d_ != nullptr; }
  const AlgebraPtr& algebra() const { return d_->alg; }
  Residue p() const { return d_->alg->p(); }
  std::size_t dim() const { return d_->dim; }
  const std::vector<FieldMatrix>& action() const { return d_->action; }
  const FieldMatrix& action(std::size_t k) const { return d_->action[k]; }
  const FieldMatrix& generator_action(std::size_t g) const { return d_->generator_action[g]; }

  /// Matrix by which the algebra element x acts.
  FieldMatrix act(const Vector& x) const { return combine(*d_, x); }

  /// True when every block idempotent acts diagonally by 0/1, so each basis
  /// vector lies in exactly one block.
  bool adapted() const { return d_->adapted; }
  std::size_t block_of(std::size_t i) const { return d_->block_of[i]; }
  std::vector<std::size_t> block_indices(std::size_t b) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dim(); ++i)
      if (d_->block_of[i] == b) out.push_back(i);
    return out;
  }
  std::vector<std::size_t> dimension_vector() const {
    std::vector<std::size_t> v(d_->alg->blocks().size(), 0);
    if (!adapted()) return v;
    for (auto b : d_->block_of) ++v[b];
    return v;
  }

  friend bool operator==(const Module& a, const Module& b) {
    if (a.d_ == b.d_) return true;
    if (!a.d_ || !b.d_) return false;
    return a.d_->alg == b.d_->alg && a.d_->dim == b.d_->dim && a.d_->action == b.d_->action;
  }

 private:
  struct Data {
    AlgebraPtr alg;
    std::size_t dim = 0;
    std::vector<FieldMatrix> action;
    std::vector<FieldMatrix> generator_action;
    bool adapted = false;
    std::vector<std::size_t> block_of;
  };

  static FieldMatrix combine(const Data& d, const Vector& x) {
    const Residue p = d.alg->p();
    FieldMatrix m(p, d.dim, d.dim);
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k]) m = m + x[k] * d.action[k];
    return m;
  }

  static void detect_blocks(Data& d) {
    const auto& blocks = d.alg->blocks();
    d.block_of.assign(d.dim, 0);
    if (blocks.size() == 1) {
      d.adapted = true;
      return;
    }
    std::vector<int> owner(d.dim, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      auto e = combine(d, blocks[b]);
      for (std::size_t i = 0; i < d.dim; ++i)
        for (std::size_t j = 0; j < d.dim; ++j) {
          Residue v = e(i, j);
          if (i != j && v != 0) return;
          if (i == j && v > 1) return;
          if (i == j && v == 1) {
            if (owner[i] != -1) return;
            owner[i] = static_cast<int>(b);
          }
        }
    }
    for (std::size_t i = 0; i < d.dim; ++i) {
      if (owner[i] < 0) return;
      d.block_of[i] = static_cast<std::size_t>(owner[i]);
    }
    d.adapted = true;
  }

  std::shared_ptr<const Data> d_;
};

/// Module axioms against the structure constants.
inline ValidationReport validate_module(const Module& m) {
  ValidationReport rep;
  const auto& a = *m.algebra();
  const Residue p = a.p();
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      FieldMatrix rhs(p, m.dim(), m.dim());
      for (std::size_t k = 0; k < a.dim(); ++k)
        if (a.coeff(i, j, k)) rhs = rhs + a.coeff(i, j, k) * m.action(k);
      if (m.action(i) * m.action(j) != rhs) {
        rep.failures.push_back("action is not multiplicative on (e" + std::to_string(i) + ", e" +
                               std::to_string(j) + ")");
        if (rep.failures.size() > 8) return rep;
      }
    }
  if (m.act(a.unit()) != FieldMatrix::identity(p, m.dim())) rep.failures.push_back("unit does not act as identity");
  return rep;
}

/// Module map dom -> cod; matrix is cod.dim x dom.dim.
class Morphism {
 public:
  Morphism() = default;
  Morphism(Module dom, Module cod, FieldMatrix m) : dom_(std::move(dom)), cod_(std::move(cod)), m_(std::move(m)) {
    if (dom_.algebra() != cod_.algebra()) throw ParentMismatch();
    if (m_.rows() != cod_.dim() || m_.cols() != dom_.dim())
      throw DimensionMismatch("morphism matrix " + m_.shape() + " does not fit " + std::to_string(dom_.dim()) +
                              " -> " + std::to_string(cod_.dim()));
  }

  const Module& dom() const { return dom_; }
  const Module& cod() const { return cod_; }
  const FieldMatrix& matrix() const { return m_; }
  Residue p() const { return dom_.p(); }

  friend bool operator==(const Morphism& a, const Morphism& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.m_ == b.m_;
  }

 private:
  Module dom_, cod_;
  FieldMatrix m_;
};

inline Morphism identity(const Module& m) { return Morphism(m, m, FieldMatrix::identity(m.p(), m.dim())); }
inline Morphism zero_morphism(const Module& a, const Module& b) {
  return Morphism(a, b, FieldMatrix(a.p(), b.dim(), a.dim()));
}

/// g after f.
inline Morphism compose(const Morphism& g, const Morphism& f) {
  if (!(f.cod() == g.dom())) throw DimensionMismatch("compose: codomain of f is not the domain of g");
  return Morphism(f.dom(), g.cod(), g.matrix() * f.matrix());
}

inline Morphism operator+(const Morphism& f, const Morphism& g) {
  return Morphism(f.dom(), f.cod(), f.matrix() + g.matrix());
}
inline Morphism operator-(const Morphism& f, const Morphism& g) {
  return Morphism(f.dom(), f.cod(), f.matrix() - g.matrix());
}
inline Morphism operator*(Residue s, const Morphism& f) { return Morphism(f.dom(), f.cod(), s * f.matrix()); }

inline bool is_module_map(const Morphism& f) {
  const auto& alg = *f.dom().algebra();
  for (std::size_t g = 0; g < alg.generators().size(); ++g)
    if (f.matrix() * f.dom().generator_action(g) != f.cod().generator_action(g) * f.matrix()) return false;
  if (alg.blocks().size() == 1) return true;
  if (f.dom().adapted() && f.cod().adapted()) {
    for (std::size_t r = 0; r < f.cod().dim(); ++r)
      for (std::size_t c = 0; c < f.dom().dim(); ++c)
        if (f.matrix()(r, c) && f.cod().block_of(r) != f.dom().block_of(c)) return false;
  } else {
    for (const auto& e : alg.blocks())
      if (f.matrix() * f.dom().act(e) != f.cod().act(e) * f.matrix()) return false;
  }
  return true;
}

inline bool is_injective(const Morphism& f) { return rank(f.matrix()) == f.dom().dim(); }
inline bool is_surjective(const Morphism& f) { return rank(f.matrix()) == f.cod().dim(); }
inline bool is_iso(const Morphism& f) { return f.dom().dim() == f.cod().dim() && is_injective(f); }

namespace detail {

inline Vector flatten(const FieldMatrix& m) { return m.entries(); }

// Equations for F with F*A_M(x) = A_N(x)*F for the generators (and the block
// idempotents when the bases are not block adapted).
inline FieldMatrix hom_system(const Module& m, const Module& n, std::vector<std::vector<long>>& var) {
  const auto& alg = *m.algebra();
  const Residue p = m.p();
  const std::size_t dm = m.dim(), dn = n.dim();
  const bool blocked = m.adapted() && n.adapted();
  var.assign(dn, std::vector<long>(dm, -1));
  long nv = 0;
  for (std::size_t r = 0; r < dn; ++r)
    for (std::size_t c = 0; c < dm; ++c)
      if (!blocked || n.block_of(r) == m.block_of(c)) var[r][c] = nv++;

  std::vector<std::pair<FieldMatrix, FieldMatrix>> ops;  // (A_M, A_N)
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  for (std::size_t g = 0; g < alg.generators().size(); ++g) {
    ops.emplace_back(m.generator_action(g), n.generator_action(g));
    ends.emplace_back(alg.generators()[g].source_block, alg.generators()[g].target_block);
  }
  if (!blocked && alg.blocks().size() > 1)
    for (const auto& e : alg.blocks()) {
      ops.emplace_back(m.act(e), n.act(e));
      ends.emplace_back(0, 0);
    }

  std::vector<std::vector<Residue>> rows;
  std::vector<Residue> row(static_cast<std::size_t>(nv));
  for (std::size_t o = 0; o < ops.size(); ++o) {
    const auto& am = ops[o].first;
    const auto& an = ops[o].second;
    for (std::size_t r = 0; r < dn; ++r) {
      if (blocked && n.block_of(r) != ends[o].second) continue;
      for (std::size_t c = 0; c < dm; ++c) {
        if (blocked && m.block_of(c) != ends[o].first) continue;
        std::fill(row.begin(), row.end(), 0);
        bool any = false;
        // (F A_M)[r][c] = sum_k F[r][k] A_M[k][c]
        for (std::size_t k = 0; k < dm; ++k) {
          Residue a = am(k, c);
          if (!a || var[r][k] < 0) continue;
          auto& x = row[var[r][k]];
          x = (x + a) % p;
          any = true;
        }
        // (A_N F)[r][c] = sum_k A_N[r][k] F[k][c]
        for (std::size_t k = 0; k < dn; ++k) {
          Residue a = an(r, k);
          if (!a || var[k][c] < 0) continue;
          auto& x = row[var[k][c]];
          x = (x + p - a) % p;
          any = true;
        }
        if (any) rows.push_back(row);
      }
    }
  }
  if (rows.empty()) return FieldMatrix(p, 0, static_cast<std::size_t>(nv));
  return FieldMatrix::from_rows(p, rows);
}

}  // namespace detail

/// Basis of Hom_A(m, n).
inline std::vector<Morphism> hom_basis(const Module& m, const Module& n) {
  if (m.algebra() != n.algebra()) throw ParentMismatch();
  std::vector<std::vector<long>> var;
  FieldMatrix sys = detail::hom_system(m, n, var);
  FieldMatrix k = kernel_basis(sys);
  std::vector<Morphism> out;
  out.reserve(k.cols());
  for (std::size_t t = 0; t < k.cols(); ++t) {
    FieldMatrix f(m.p(), n.dim(), m.dim());
    for (std::size_t r = 0; r < n.dim(); ++r)
      for (std::size_t c = 0; c < m.dim(); ++c)
        if (var[r][c] >= 0) f.at(r, c) = k(var[r][c], t);
    out.emplace_back(m, n, std::move(f));
  }
  return out;
}

inline Morphism linear_combination(const std::vector<Morphism>& basis, const Vector& coeffs, const Module& dom,
                                   const Module& cod) {
  FieldMatrix f(dom.p(), cod.dim(), dom.dim());
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (coeffs[i]) f = f + coeffs[i] * basis[i].matrix();
  return Morphism(dom, cod, std::move(f));
}

/// Finds h in span(basis) with op(h) == target, where op is linear.
inline std::optional<Morphism> solve_in_span(const std::vector<Morphism>& basis,
                                             const std::function<FieldMatrix(const Morphism&)>& op,
                                             const FieldMatrix& target, const Module& dom, const Module& cod) {
  const Residue p = dom.p();
  const std::size_t len = target.rows() * target.cols();
  FieldMatrix a(p, len, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    auto v = op(basis[j]);
    for (std::size_t i = 0; i < len; ++i) a.at(i, j) = v.entries()[i];
  }
  FieldMatrix b(p, len, 1, target.entries());
  auto x = solve(a, b);
  if (!x) return std::nullopt;
  return linear_combination(basis, x->column(0), dom, cod);
}

namespace detail {

// Left inverse L (k x m) of a full column rank m x k matrix.
inline FieldMatrix left_inverse(const FieldMatrix& e) {
  auto piv = rref(e.transpose()).pivots;
  std::vector<std::size_t> all(e.cols());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  FieldMatrix sq = e.select(piv, all);
  auto inv = inverse(sq);
  if (!inv) throw InternalInconsistency("left_inverse of a rank deficient matrix");
  FieldMatrix sel(e.p(), e.cols(), e.rows());
  for (std::size_t i = 0; i < piv.size(); ++i) sel.at(i, piv[i]) = 1;
  return *inv * sel;
}

inline FieldMatrix columns_to_matrix(Residue p, std::size_t n, const std::vector<Vector>& cols) {
  FieldMatrix m(p, n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) m.at(i, j) = cols[j][i];
  return m;
}

}  // namespace detail

struct Subobject {
  Module object;
  Morphism inclusion;
};

struct Quotient {
  Module object;
  Morphism projection;
  FieldMatrix section;  // linear right inverse of projection
};

/// Submodule of m spanned by the (independent) columns of e.
inline Subobject submodule(const Module& m, const FieldMatrix& e) {
  const Residue p = m.p();
  const std::size_t k = e.cols();
  std::vector<FieldMatrix> act;
  act.reserve(m.algebra()->dim());
  if (k == 0) {
    act.assign(m.algebra()->dim(), FieldMatrix(p, 0, 0));
  } else {
    FieldMatrix l = detail::left_inverse(e);
    for (const auto& a : m.action()) act.push_back(l * (a * e));
  }
  Module s(m.algebra(), k, std::move(act));
  return {s, Morphism(s, m, e)};
}

/// Quotient of n by the submodule spanned by the columns of f.
inline Quotient quotient(const Module& n, const FieldMatrix& f) {
  const Residue p = n.p();
  const std::size_t dn = n.dim();
  std::vector<std::vector<std::size_t>> groups;
  if (n.adapted()) {
    for (std::size_t b = 0; b < n.algebra()->blocks().size(); ++b) groups.push_back(n.block_indices(b));
  } else {
    std::vector<std::size_t> all(dn);
    for (std::size_t i = 0; i < dn; ++i) all[i] = i;
    groups.push_back(all);
  }
  std::vector<Vector> image, picked;
  for (const auto& idx : groups) {
    if (idx.empty()) continue;
    // image restricted to this block is a block component of the submodule
    SpanBuilder span(p, idx.size());
    for (std::size_t c = 0; c < f.cols(); ++c) {
      Vector v(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) v[i] = f(idx[i], c);
      span.add(v);
    }
    for (const auto& v : span.vectors()) {
      Vector full(dn, 0);
      for (std::size_t i = 0; i < idx.size(); ++i) full[idx[i]] = v[i];
      image.push_back(full);
    }
    for (std::size_t i = 0; i < idx.size(); ++i) {
      Vector e(idx.size(), 0);
      e[i] = 1;
      if (span.add(e)) {
        Vector full(dn, 0);
        full[idx[i]] = 1;
        picked.push_back(full);
      }
    }
  }
  const std::size_t s = image.size(), r = picked.size();
  auto all = image;
  all.insert(all.end(), picked.begin(), picked.end());
  FieldMatrix pm = detail::columns_to_matrix(p, dn, picked);
  FieldMatrix q(p, r, dn);
  if (dn > 0) {
    auto binv = inverse(detail::columns_to_matrix(p, dn, all));
    if (!binv) throw InternalInconsistency("quotient basis is not invertible");
    q = binv->block(s, 0, r, dn);
  }
  std::vector<FieldMatrix> act;
  act.reserve(n.algebra()->dim());
  for (const auto& a : n.action()) act.push_back(q * (a * pm));
  Module qm(n.algebra(), r, std::move(act));
  return {qm, Morphism(n, qm, q), pm};
}

inline Subobject kernel(const Morphism& f) {
  const Module& m = f.dom();
  const Residue p = m.p();
  std::vector<Vector> cols;
  auto collect = [&](const std::vector<std::size_t>& idx) {
    if (idx.empty()) return;
    std::vector<std::size_t> rows(f.cod().dim());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    FieldMatrix k = kernel_basis(f.matrix().select(rows, idx));
    for (std::size_t t = 0; t < k.cols(); ++t) {
      Vector v(m.dim(), 0);
      for (std::size_t i = 0; i < idx.size(); ++i) v[idx[i]] = k(i, t);
      cols.push_back(v);
    }
  };
  if (m.adapted()) {
    for (std::size_t b = 0; b < m.algebra()->blocks().size(); ++b) collect(m.block_indices(b));
  } else {
    std::vector<std::size_t> all(m.dim());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    collect(all);
  }
  return submodule(m, detail::columns_to_matrix(p, m.dim(), cols));
}

inline Quotient cokernel(const Morphism& f) { return quotient(f.cod(), f.matrix()); }

/// Image of f as a submodule of its codomain.
inline Subobject image(const Morphism& f) {
  auto q = cokernel(f);
  return kernel(q.projection);
}

struct Biproduct {
  Module object;
  std::vector<Morphism> injections, projections;
};

inline Biproduct direct_sum(const std::vector<Module>& parts, const AlgebraPtr& alg) {
  const Residue p = alg->p();
  std::size_t total = 0;
  for (const auto& m : parts) {
    if (m.algebra() != alg) throw ParentMismatch();
    total += m.dim();
  }
  std::vector<FieldMatrix> act(alg->dim(), FieldMatrix(p, total, total));
  std::size_t off = 0;
  for (const auto& m : parts) {
    for (std::size_t k = 0; k < alg->dim(); ++k) act[k].set_block(off, off, m.action(k));
    off += m.dim();
  }
  Module sum(alg, total, std::move(act));
  Biproduct out{sum, {}, {}};
  off = 0;
  for (const auto& m : parts) {
    FieldMatrix in(p, total, m.dim()), pr(p, m.dim(), total);
    for (std::size_t i = 0; i < m.dim(); ++i) in.at(off + i, i) = pr.at(i, off + i) = 1;
    out.injections.emplace_back(m, sum, std::move(in));
    out.projections.emplace_back(sum, m, std::move(pr));
    off += m.dim();
  }
  return out;
}

inline Biproduct direct_sum(const Module& a, const Module& b) { return direct_sum({a, b}, a.algebra()); }

/// (f; g) : X -> target, where target is the biproduct of the codomains.
inline Morphism stack_into(const std::vector<Morphism>& maps, const Biproduct& target) {
  const Module& x = maps.front().dom();
  FieldMatrix m(x.p(), target.object.dim(), x.dim());
  for (std::size_t i = 0; i < maps.size(); ++i) m = m + compose(target.injections[i], maps[i]).matrix();
  return Morphism(x, target.object, std::move(m));
}

/// (f | g) : source -> Y, where source is the biproduct of the domains.
inline Morphism join_from(const std::vector<Morphism>& maps, const Biproduct& source) {
  const Module& y = maps.front().cod();
  FieldMatrix m(y.p(), y.dim(), source.object.dim());
  for (std::size_t i = 0; i < maps.size(); ++i) m = m + compose(maps[i], source.projections[i]).matrix();
  return Morphism(source.object, y, std::move(m));
}

inline Morphism direct_sum_map(const Morphism& f, const Morphism& g, const Biproduct& src, const Biproduct& dst) {
  return Morphism(src.object, dst.object, block_diag(f.matrix(), g.matrix()));
}

struct Pushout {
  Module object;
  Morphism from_b, from_c;  // legs out of B and C
  Quotient quotient;        // B (+) C -> object
  Biproduct sum;
};

/// Pushout of B <-f- A -g-> C.
inline Pushout pushout(const Morphism& f, const Morphism& g) {
  if (!(f.dom() == g.dom())) throw DimensionMismatch("pushout: maps do not share a domain");
  auto sum = direct_sum(f.cod(), g.cod());
  auto q = cokernel(stack_into({f, (f.p() - 1) * g}, sum));
  return {q.object, compose(q.projection, sum.injections[0]), compose(q.projection, sum.injections[1]), q, sum};
}

/// The map out of a pushout induced by u : B -> T and v : C -> T.
inline Morphism pushout_induced(const Pushout& po, const Morphism& u, const Morphism& v) {
  auto joined = join_from({u, v}, po.sum);
  return Morphism(po.object, u.cod(), joined.matrix() * po.quotient.section);
}

struct Pullback {
  Module object;
  Morphism to_b, to_c;
};

/// Pullback of B -f-> D <-g- C.
inline Pullback pullback(const Morphism& f, const Morphism& g) {
  if (!(f.cod() == g.cod())) throw DimensionMismatch("pullback: maps do not share a codomain");
  auto sum = direct_sum(f.dom(), g.dom());
  auto k = kernel(join_from({f, (f.p() - 1) * g}, sum));
  return {k.object, compose(sum.projections[0], k.inclusion), compose(sum.projections[1], k.inclusion)};
}

/// 0 -> left -i-> middle -p-> right -> 0
struct ShortExactSequence {
  Morphism i, p;
  const Module& left() const { return i.dom(); }
  const Module& middle() const { return i.cod(); }
  const Module& right() const { return p.cod(); }
};

inline ValidationReport validate_ses(const ShortExactSequence& s) {
  ValidationReport rep;
  if (!(s.i.cod() == s.p.dom())) {
    rep.failures.push_back("middle objects differ");
    return rep;
  }
  if (!is_module_map(s.i)) rep.failures.push_back("i is not a module map");
  if (!is_module_map(s.p)) rep.failures.push_back("p is not a module map");
  if (!is_injective(s.i)) rep.failures.push_back("i is not injective");
  if (!is_surjective(s.p)) rep.failures.push_back("p is not surjective");
  if (!compose(s.p, s.i).matrix().is_zero()) rep.failures.push_back("p after i is not zero");
  if (s.left().dim() + s.right().dim() != s.middle().dim()) rep.failures.push_back("not exact in the middle");
  return rep;
}

inline std::optional<Morphism> find_section(const Morphism& p) {
  return solve_in_span(
      hom_basis(p.cod(), p.dom()), [&](const Morphism& s) { return p.matrix() * s.matrix(); },
      FieldMatrix::identity(p.p(), p.cod().dim()), p.cod(), p.dom());
}

inline std::optional<Morphism> find_retraction(const Morphism& i) {
  return solve_in_span(
      hom_basis(i.cod(), i.dom()), [&](const Morphism& r) { return r.matrix() * i.matrix(); },
      FieldMatrix::identity(i.p(), i.dom().dim()), i.cod(), i.dom());
}

inline bool is_split(const ShortExactSequence& s) { return find_section(s.p).has_value(); }

/// Pushout of an exact sequence 0 -> K -> B -> C -> 0 along g : K -> D,
/// giving 0 -> D -> D +_K B -> C -> 0.
struct PushoutSequence {
  ShortExactSequence ses;
  Morphism from_middle;  // B -> D +_K B
};

inline PushoutSequence pushout_ses(const ShortExactSequence& s, const Morphism& g) {
  auto po = pushout(s.i, g);
  auto to_c = pushout_induced(po, s.p, zero_morphism(g.cod(), s.right()));
  return {{po.from_c, to_c}, po.from_b};
}

/// Pullback of 0 -> K -> B -> C -> 0 along h : D -> C, giving
/// 0 -> K -> B x_C D -> D -> 0.
inline ShortExactSequence pullback_ses(const ShortExactSequence& s, const Morphism& h) {
  auto pb = pullback(s.p, h);
  // K -> pullback via (i, 0)
  FieldMatrix target = vstack(s.i.matrix(), FieldMatrix(s.i.p(), h.dom().dim(), s.left().dim()));
  std::vector<Morphism> basis = hom_basis(s.left(), pb.object);
  auto k = solve_in_span(
      basis,
      [&](const Morphism& x) { return vstack(pb.to_b.matrix() * x.matrix(), pb.to_c.matrix() * x.matrix()); },
      target, s.left(), pb.object);
  if (!k) throw InternalInconsistency("pullback sequence: kernel map not found");
  return {*k, pb.to_c};
}

/// Iso m -> n if one exists. Hom dimensions are compared first; then the hom
/// space is searched exhaustively when small, otherwise by seeded random
/// combinations.
inline std::optional<Morphism> is_isomorphic(const Module& m, const Module& n) {
  if (m.algebra() != n.algebra()) throw ParentMismatch();
  if (m.dim() != n.dim()) return std::nullopt;
  if (m.dim() == 0) return zero_morphism(m, n);
  if (m.adapted() && n.adapted() && m.dimension_vector() != n.dimension_vector()) return std::nullopt;
  auto h = hom_basis(m, n);
  if (h.empty()) return std::nullopt;
  if (h.size() != hom_basis(m, m).size() || h.size() != hom_basis(n, m).size()) return std::nullopt;
  const Residue p = m.p();
  for (const auto& f : h)
    if (is_iso(f)) return f;
  double space = std::pow(static_cast<double>(p), static_cast<double>(h.size()));
  Vector c(h.size(), 0);
  if (space <= 65536.0) {
    for (;;) {
      std::size_t i = 0;
      while (i < c.size() && ++c[i] == p) c[i++] = 0;
      if (i == c.size()) break;
      auto f = linear_combination(h, c, m, n);
      if (is_iso(f)) return f;
    }
    return std::nullopt;
  }
  std::mt19937_64 rng(0x5eedULL);
  for (int t = 0; t < 4096; ++t) {
    for (auto& x : c) x = static_cast<Residue>(rng() % p);
    auto f = linear_combination(h, c, m, n);
    if (is_iso(f)) return f;
  }
  return std::nullopt;
}

/// Regular module A acting on itself from the left.
inline Module regular_module(const AlgebraPtr& alg) {
  std::vector<FieldMatrix> act;
  for (std::size_t i = 0; i < alg->dim(); ++i) act.push_back(alg->left_multiplication(alg->basis_vector(i)));
  return Module(alg, alg->dim(), std::move(act));
}

/// D(A) = Hom_k(A, k) with (a.phi)(x) = phi(x a), on the dual basis.
inline Module dual_regular_module(const AlgebraPtr& alg) {
  const auto n = alg->dim();
  std::vector<FieldMatrix> act;
  for (std::size_t i = 0; i < n; ++i) {
    FieldMatrix m(alg->p(), n, n);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t j = 0; j < n; ++j) m.at(l, j) = alg->coeff(l, i, j);
    act.push_back(std::move(m));
  }
  return Module(alg, n, std::move(act));
}

/// Projective summand A e_b of the regular module, with its inclusion.
inline Subobject projective_block(const AlgebraPtr& alg, std::size_t b) {
  auto a = regular_module(alg);
  auto r = alg->right_multiplication(alg->blocks()[b]);
  SpanBuilder span(alg->p(), alg->dim());
  for (std::size_t c = 0; c < r.cols(); ++c) span.add(r.column(c));
  // prefer standard basis vectors when they span the same space
  std::vector<Vector> cols;
  SpanBuilder chosen(alg->p(), alg->dim());
  for (std::size_t i = 0; i < alg->dim(); ++i) {
    auto e = alg->basis_vector(i);
    if (!span.contains(e)) continue;
    if (chosen.add(e)) cols.push_back(e);
  }
  if (cols.size() != span.dimension()) cols = span.vectors();
  return submodule(a, detail::columns_to_matrix(alg->p(), alg->dim(), cols));
}

/// Injective summand D(e_b A) of D(A), with its inclusion.
inline Subobject injective_block(const AlgebraPtr& alg, std::size_t b) {
  auto d = dual_regular_module(alg);
  const auto n = alg->dim();
  // phi -> phi(e_b . -) on the dual basis
  FieldMatrix proj(alg->p(), n, n);
  for (std::size_t l = 0; l < n; ++l) {
    auto x = alg->multiply(alg->blocks()[b], alg->basis_vector(l));
    for (std::size_t j = 0; j < n; ++j) proj.at(l, j) = x[j];
  }
  SpanBuilder span(alg->p(), n);
  for (std::size_t c = 0; c < n; ++c) span.add(proj.column(c));
  std::vector<Vector> cols;
  SpanBuilder chosen(alg->p(), n);
  for (std::size_t i = 0; i < n; ++i) {
    auto e = alg->basis_vector(i);
    if (span.contains(e) && chosen.add(e)) cols.push_back(e);
  }
  if (cols.size() != span.dimension()) cols = span.vectors();
  return submodule(d, detail::columns_to_matrix(alg->p(), n, cols));
}

}  // namespace cotorsion
