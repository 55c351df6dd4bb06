#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cotorsion/errors.hpp"
#include "cotorsion/linalg.hpp"

namespace cotorsion {

using Vector = std::vector<Residue>;

struct QuiverArrow {
  std::size_t source = 0, target = 0;
  std::string label;
};

/// coeff * path, the path listed in traversal order (first arrow first).
struct PathTerm {
  Residue coeff = 1;
  std::vector<std::size_t> arrows;
};

struct QuiverPresentation {
  std::size_t vertices = 0;
  std::vector<QuiverArrow> arrows;
  std::vector<std::vector<PathTerm>> relations;
  std::size_t nil_bound = 2;  // paths of this length or longer vanish
};

/// A path in the quiver; a trivial path is the idempotent at `source`.
struct BasisPath {
  std::size_t source = 0, target = 0;
  std::vector<std::size_t> arrows;
};

/// Element of the algebra with e_target * g * e_source = g. Generators
/// together with the block idempotents generate the algebra.
struct Generator {
  Vector element;
  std::size_t source_block = 0, target_block = 0;
  std::string label;
};

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Finite-dimensional associative unital F_p-algebra given by structure
/// constants: e_i * e_j = sum_k c(i,j,k) e_k.
class Algebra {
 public:
  Algebra(Residue p, std::size_t dim, std::vector<Residue> structure, Vector unit, std::string name = {})
      : p_(p), dim_(dim), structure_(std::move(structure)), unit_(std::move(unit)), name_(std::move(name)) {
    require_prime(p_);
    if (structure_.size() != dim_ * dim_ * dim_) throw MalformedInput("structure tensor has wrong size");
    if (unit_.size() != dim_) throw MalformedInput("unit has wrong length");
    for (auto v : structure_)
      if (v >= p_) throw MalformedInput("structure constant out of range");
    for (auto v : unit_)
      if (v >= p_) throw MalformedInput("unit coordinate out of range");
    blocks_ = {unit_};
    generators_ = greedy_generators();
  }

  // Used by the quiver and tensor constructions, which know their blocks.
  Algebra(Residue p, std::size_t dim, std::vector<Residue> structure, Vector unit, std::vector<Vector> blocks,
          std::vector<Generator> generators, std::string name)
      : p_(p), dim_(dim), structure_(std::move(structure)), unit_(std::move(unit)), name_(std::move(name)),
        blocks_(std::move(blocks)), generators_(std::move(generators)) {}

  Residue p() const { return p_; }
  std::size_t dim() const { return dim_; }
  const std::string& name() const { return name_; }
  const Vector& unit() const { return unit_; }
  const std::vector<Residue>& structure() const { return structure_; }
  Residue coeff(std::size_t i, std::size_t j, std::size_t k) const { return structure_[(i * dim_ + j) * dim_ + k]; }

  /// Complete set of orthogonal idempotents (a single {1} unless known).
  const std::vector<Vector>& blocks() const { return blocks_; }
  const std::vector<Generator>& generators() const { return generators_; }

  const std::optional<QuiverPresentation>& quiver() const { return quiver_; }
  const std::vector<BasisPath>& basis_paths() const { return basis_paths_; }
  const std::vector<std::string>& basis_labels() const { return labels_; }

  Vector basis_vector(std::size_t i) const {
    Vector v(dim_, 0);
    v[i] = 1;
    return v;
  }

  Vector multiply(const Vector& x, const Vector& y) const {
    Vector z(dim_, 0);
    std::vector<std::uint64_t> acc(dim_, 0);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (y[j] == 0) continue;
        std::uint64_t s = std::uint64_t{x[i]} * y[j] % p_;
        const Residue* c = &structure_[(i * dim_ + j) * dim_];
        for (std::size_t k = 0; k < dim_; ++k)
          if (c[k]) acc[k] += s * c[k];
      }
    }
    for (std::size_t k = 0; k < dim_; ++k) z[k] = static_cast<Residue>(acc[k] % p_);
    return z;
  }

  /// Matrix of left multiplication by x on the basis.
  FieldMatrix left_multiplication(const Vector& x) const {
    FieldMatrix m(p_, dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      auto col = multiply(x, basis_vector(j));
      for (std::size_t k = 0; k < dim_; ++k) m.at(k, j) = col[k];
    }
    return m;
  }

  FieldMatrix right_multiplication(const Vector& x) const {
    FieldMatrix m(p_, dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      auto col = multiply(basis_vector(j), x);
      for (std::size_t k = 0; k < dim_; ++k) m.at(k, j) = col[k];
    }
    return m;
  }

  // Populated by algebra_from_quiver.
  void set_quiver_data(QuiverPresentation q, std::vector<BasisPath> paths, std::vector<std::string> labels) {
    quiver_ = std::move(q);
    basis_paths_ = std::move(paths);
    labels_ = std::move(labels);
  }

 private:
  // Adds basis elements as generators until they generate the algebra.
  std::vector<Generator> greedy_generators() const {
    std::vector<Generator> gens;
    SpanBuilder span(p_, dim_);
    std::vector<Vector> frontier;
    if (span.add(unit_)) frontier.push_back(unit_);
    auto close = [&]() {
      while (!frontier.empty()) {
        auto w = frontier.back();
        frontier.pop_back();
        for (const auto& g : gens) {
          auto x = multiply(g.element, w);
          if (span.add(x)) frontier.push_back(x);
        }
      }
    };
    for (std::size_t i = 0; i < dim_ && span.dimension() < dim_; ++i) {
      auto e = basis_vector(i);
      if (span.contains(e)) continue;
      gens.push_back({e, 0, 0, "e" + std::to_string(i)});
      // words ending in the new generator, then everything reachable again
      std::vector<Vector> all = span.vectors();
      for (auto& w : all) frontier.push_back(w);
      frontier.push_back(unit_);
      close();
    }
    return gens;
  }

  Residue p_;
  std::size_t dim_;
  std::vector<Residue> structure_;
  Vector unit_;
  std::string name_;
  std::vector<Vector> blocks_;
  std::vector<Generator> generators_;
  std::optional<QuiverPresentation> quiver_;
  std::vector<BasisPath> basis_paths_;
  std::vector<std::string> labels_;
};

struct ValidationReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Associativity and two-sided unit.
inline ValidationReport validate_algebra(const Algebra& a) {
  ValidationReport rep;
  const auto n = a.dim();
  for (std::size_t i = 0; i < n && rep.failures.size() < 16; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        auto ei = a.basis_vector(i), ej = a.basis_vector(j), ek = a.basis_vector(k);
        if (a.multiply(a.multiply(ei, ej), ek) != a.multiply(ei, a.multiply(ej, ek)))
          rep.failures.push_back("associativity fails on (e" + std::to_string(i) + ", e" + std::to_string(j) +
                                 ", e" + std::to_string(k) + ")");
      }
  for (std::size_t i = 0; i < n; ++i) {
    auto ei = a.basis_vector(i);
    if (a.multiply(a.unit(), ei) != ei || a.multiply(ei, a.unit()) != ei) {
      rep.failures.push_back("unit fails on e" + std::to_string(i));
      break;
    }
  }
  return rep;
}

namespace detail {

inline std::string path_label(const QuiverPresentation& q, const BasisPath& path) {
  if (path.arrows.empty()) return "e" + std::to_string(path.source);
  std::string s;
  for (std::size_t i = path.arrows.size(); i-- > 0;) {
    s += q.arrows[path.arrows[i]].label;
    if (i) s += "*";
  }
  return s;
}

}  // namespace detail

/// kQ/I for an admissible (nilpotent) ideal. Basis elements are paths; the
/// product p*q means "q, then p".
inline AlgebraPtr algebra_from_quiver(Residue p, const QuiverPresentation& q, std::string name = {}) {
  require_prime(p);
  if (q.vertices == 0) throw MalformedInput("quiver has no vertices");
  if (q.nil_bound < 1) throw MalformedInput("nil_bound must be positive");
  for (const auto& a : q.arrows)
    if (a.source >= q.vertices || a.target >= q.vertices) throw MalformedInput("arrow endpoint out of range");

  // all paths shorter than nil_bound
  std::vector<BasisPath> paths;
  for (std::size_t v = 0; v < q.vertices; ++v) paths.push_back({v, v, {}});
  for (std::size_t start = 0; start < paths.size(); ++start) {
    if (paths[start].arrows.size() + 1 >= q.nil_bound) continue;
    for (std::size_t a = 0; a < q.arrows.size(); ++a) {
      if (q.arrows[a].source != paths[start].target) continue;
      BasisPath np = paths[start];
      np.arrows.push_back(a);
      np.target = q.arrows[a].target;
      paths.push_back(np);
      if (paths.size() > 4096) throw BudgetExceeded("quiver has too many paths below nil_bound");
    }
  }
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> index;
  for (std::size_t i = 0; i < paths.size(); ++i) index[{paths[i].source, paths[i].arrows}] = i;
  const std::size_t np = paths.size();

  // Columns ordered longest first so that long paths get eliminated and
  // short paths survive as basis elements.
  std::vector<std::size_t> order(np);
  for (std::size_t i = 0; i < np; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return paths[x].arrows.size() > paths[y].arrows.size();
  });
  std::vector<std::size_t> column_of(np);
  for (std::size_t c = 0; c < np; ++c) column_of[order[c]] = c;

  auto concat = [&](const BasisPath& first, const std::vector<std::size_t>& then) -> std::optional<std::size_t> {
    std::vector<std::size_t> arrows = first.arrows;
    std::size_t at = first.target;
    for (auto a : then) {
      if (q.arrows[a].source != at) return std::nullopt;
      at = q.arrows[a].target;
      arrows.push_back(a);
    }
    if (arrows.size() >= q.nil_bound) return std::nullopt;
    auto it = index.find({first.source, arrows});
    if (it == index.end()) return std::nullopt;
    return it->second;
  };

  // ideal generated by the relations: u * r * w for paths u, w
  std::vector<std::vector<Residue>> ideal_rows;
  for (const auto& rel : q.relations) {
    for (const auto& t : rel) {
      if (t.arrows.empty()) throw MalformedInput("relation terms must be paths of positive length");
      for (auto a : t.arrows)
        if (a >= q.arrows.size()) throw MalformedInput("relation mentions unknown arrow");
    }
    for (const auto& w : paths)
      for (const auto& u : paths) {
        std::vector<Residue> row(np, 0);
        bool any = false;
        for (const auto& t : rel) {
          if (q.arrows[t.arrows.front()].source != w.target || q.arrows[t.arrows.back()].target != u.source)
            continue;
          std::vector<std::size_t> tail = t.arrows;
          tail.insert(tail.end(), u.arrows.begin(), u.arrows.end());
          auto r = concat(w, tail);
          if (!r) continue;
          auto c = column_of[*r];
          row[c] = (row[c] + t.coeff % p) % p;
          any = true;
        }
        if (any) ideal_rows.push_back(std::move(row));
      }
  }
  FieldMatrix ideal = ideal_rows.empty() ? FieldMatrix(p, 0, np) : FieldMatrix::from_rows(p, ideal_rows);
  auto [red, piv] = rref(ideal);
  std::vector<bool> is_piv(np, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::size_t> basis;  // path indices, in the original path order
  std::vector<long> basis_pos(np, -1);
  for (std::size_t i = 0; i < np; ++i)
    if (!is_piv[column_of[i]]) {
      basis_pos[i] = static_cast<long>(basis.size());
      basis.push_back(i);
    }
  const std::size_t dim = basis.size();
  std::vector<std::size_t> pivot_row(np, np);
  for (std::size_t r = 0; r < piv.size(); ++r) pivot_row[order[piv[r]]] = r;

  // normal form of a path in the chosen basis
  auto reduce = [&](std::size_t path) {
    Vector v(dim, 0);
    if (basis_pos[path] >= 0) {
      v[basis_pos[path]] = 1;
      return v;
    }
    std::size_t r = pivot_row[path];
    for (std::size_t c = 0; c < np; ++c) {
      std::size_t pth = order[c];
      if (basis_pos[pth] >= 0 && red(r, c)) v[basis_pos[pth]] = neg_mod(red(r, c), p);
    }
    return v;
  };

  std::vector<Residue> structure(dim * dim * dim, 0);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const auto& a = paths[basis[i]];
      const auto& b = paths[basis[j]];
      // e_i * e_j : first b, then a
      if (b.target != a.source) continue;
      auto r = concat(b, a.arrows);
      if (!r) continue;
      auto v = reduce(*r);
      for (std::size_t k = 0; k < dim; ++k) structure[(i * dim + j) * dim + k] = v[k];
    }
  Vector unit(dim, 0);
  std::vector<Vector> blocks;
  for (std::size_t v = 0; v < q.vertices; ++v) {
    auto idx = basis_pos[v];
    if (idx < 0) throw MalformedInput("relations kill a vertex idempotent");
    unit[idx] = 1;
    Vector e(dim, 0);
    e[idx] = 1;
    blocks.push_back(e);
  }
  std::vector<Generator> gens;
  for (std::size_t a = 0; a < q.arrows.size(); ++a) {
    if (q.nil_bound < 2) break;
    auto it = index.find({q.arrows[a].source, {a}});
    auto v = reduce(it->second);
    bool nonzero = false;
    for (auto x : v) nonzero |= x != 0;
    if (nonzero) gens.push_back({v, q.arrows[a].source, q.arrows[a].target, q.arrows[a].label});
  }
  std::vector<BasisPath> bpaths;
  std::vector<std::string> labels;
  for (auto i : basis) {
    bpaths.push_back(paths[i]);
    labels.push_back(detail::path_label(q, paths[i]));
  }
  auto alg = std::make_shared<Algebra>(p, dim, std::move(structure), std::move(unit), std::move(blocks),
                                       std::move(gens), std::move(name));
  alg->set_quiver_data(q, std::move(bpaths), std::move(labels));
  return alg;
}

/// base (x) shape, where shape comes from algebra_from_quiver. Its modules
/// are representations of the shape quiver in base-modules.
inline AlgebraPtr tensor_with_shape(const AlgebraPtr& base, const AlgebraPtr& shape, std::string name = {}) {
  if (!shape->quiver()) throw PreconditionError("shape algebra must come from a quiver");
  if (base->p() != shape->p()) throw ParentMismatch("characteristics differ");
  const std::size_t da = base->dim(), dq = shape->dim(), d = da * dq;
  const Residue p = base->p();
  std::vector<Residue> st(d * d * d, 0);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < da; ++k) {
        Residue ca = base->coeff(i, j, k);
        if (!ca) continue;
        for (std::size_t q = 0; q < dq; ++q)
          for (std::size_t r = 0; r < dq; ++r)
            for (std::size_t s = 0; s < dq; ++s) {
              Residue cq = shape->coeff(q, r, s);
              if (!cq) continue;
              st[((i * dq + q) * d + (j * dq + r)) * d + (k * dq + s)] = (ca * cq) % p;
            }
      }
  auto tensor = [&](const Vector& x, const Vector& y) {
    Vector z(d, 0);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t q = 0; q < dq; ++q) z[i * dq + q] = (x[i] * y[q]) % p;
    return z;
  };
  const auto& qv = *shape->quiver();
  std::vector<Vector> blocks;
  const std::size_t nb = base->blocks().size();
  for (std::size_t a = 0; a < nb; ++a)
    for (std::size_t v = 0; v < qv.vertices; ++v) blocks.push_back(tensor(base->blocks()[a], shape->blocks()[v]));
  std::vector<Generator> gens;
  for (const auto& g : base->generators())
    for (std::size_t v = 0; v < qv.vertices; ++v)
      gens.push_back({tensor(g.element, shape->blocks()[v]), g.source_block * qv.vertices + v,
                      g.target_block * qv.vertices + v, g.label + "@" + std::to_string(v)});
  for (const auto& arrow : shape->generators())
    for (std::size_t a = 0; a < nb; ++a)
      gens.push_back({tensor(base->blocks()[a], arrow.element), a * qv.vertices + arrow.source_block,
                      a * qv.vertices + arrow.target_block, arrow.label + "@b" + std::to_string(a)});
  return std::make_shared<Algebra>(p, d, std::move(st), tensor(base->unit(), shape->unit()), std::move(blocks),
                                   std::move(gens), std::move(name));
}

}  // namespace cotorsion
