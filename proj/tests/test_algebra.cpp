#include <gtest/gtest.h>

#include <random>

#include "cotorsion/enumerate.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace cotorsion;
using namespace testing_support;

namespace {

// Structure constants of F_2[x]/(x^2) written out: 1*1=1, 1*x=x, x*1=x, x*x=0.
std::vector<Residue> fx2_table() {
  std::vector<Residue> st(8, 0);
  st[(0 * 2 + 0) * 2 + 0] = 1;
  st[(0 * 2 + 1) * 2 + 1] = 1;
  st[(1 * 2 + 0) * 2 + 1] = 1;
  return st;
}

}  // namespace

TEST(ValidateAlgebra, Fx2IsValid) {
  Algebra a(2, 2, fx2_table(), {1, 0});
  EXPECT_TRUE(validate_algebra(a).ok());
  EXPECT_EQ(truncated(2, 2)->structure(), fx2_table());
}

TEST(ValidateAlgebra, ZeroUnitIsReported) {
  Algebra a(2, 2, fx2_table(), {0, 0});
  auto rep = validate_algebra(a);
  ASSERT_FALSE(rep.ok());
  bool unit = false;
  for (const auto& f : rep.failures) unit = unit || f.find("unit") != std::string::npos;
  EXPECT_TRUE(unit);
}

TEST(ValidateAlgebra, PrimeFieldF3) { EXPECT_TRUE(validate_algebra(*field(3)).ok()); }

TEST(ValidateAlgebra, NonAssociativeTable) {
  // basis 1, x, y with x*x = y, x*y = x, y*x = 0: (x*x)*x = 0 but x*(x*x) = x
  std::vector<Residue> st(27, 0);
  auto set = [&](int i, int j, int k) { st[(i * 3 + j) * 3 + k] = 1; };
  for (int j = 0; j < 3; ++j) {
    set(0, j, j);
    if (j) set(j, 0, j);
  }
  set(1, 1, 2);
  set(1, 2, 1);
  Algebra a(2, 3, st, {1, 0, 0});
  auto rep = validate_algebra(a);
  ASSERT_FALSE(rep.ok());
  EXPECT_NE(rep.failures.front().find("associativity"), std::string::npos);
}

TEST(ValidateAlgebra, CorpusAlgebrasAreValid) {
  for (auto a : {truncated(2, 2), truncated(2, 3), truncated(3, 2), cyclic_group(2, 2), quiver_a1(), hereditary()})
    EXPECT_TRUE(validate_algebra(*a).ok()) << a->name();
}

TEST(Quiver, A1HasFourBasisPaths) {
  auto a = quiver_a1();
  EXPECT_EQ(a->dim(), 4u);
  EXPECT_EQ(a->basis_labels(), (std::vector<std::string>{"e0", "e1", "a0", "a1"}));
  EXPECT_EQ(a->blocks().size(), 2u);
  EXPECT_TRUE(validate_algebra(*a).ok());
}

TEST(Quiver, SingleVertexIsTheField) {
  QuiverPresentation q;
  q.vertices = 1;
  auto a = algebra_from_quiver(2, q);
  EXPECT_EQ(a->dim(), 1u);
  EXPECT_EQ(a->structure(), field(2)->structure());
}

TEST(Quiver, LoopWithSquareRelationIsFx2) {
  QuiverPresentation q;
  q.vertices = 1;
  q.arrows = {{0, 0, "x"}};
  q.relations = {{{1, {0, 0}}}};
  q.nil_bound = 3;
  auto a = algebra_from_quiver(2, q);
  ASSERT_EQ(a->dim(), 2u);
  EXPECT_EQ(a->structure(), fx2_table());
}

TEST(Quiver, PathAlgebraOfLineIsThreeDimensional) {
  auto h = hereditary();
  EXPECT_EQ(h->dim(), 3u);
  EXPECT_TRUE(validate_algebra(*h).ok());
}

TEST(Quiver, A2OfTheCorpus) {
  QuiverPresentation q;
  q.vertices = 3;
  q.arrows = {{0, 0, "a0"}, {0, 1, "a1"}, {1, 2, "a2"}};
  q.relations = {{{1, {0, 0}}}, {{1, {0, 1}}}, {{1, {1, 2}}}};
  q.nil_bound = 3;
  auto a = algebra_from_quiver(2, q);
  EXPECT_EQ(a->dim(), 6u);
  EXPECT_TRUE(validate_algebra(*a).ok());
}

TEST(HomBasis, Fx2Examples) {
  Fx2 f;
  EXPECT_EQ(hom_basis(f.S, f.S).size(), 1u);
  EXPECT_EQ(hom_basis(f.S, f.A).size(), 1u);
  EXPECT_EQ(hom_basis(f.A, f.S).size(), 1u);
  EXPECT_EQ(hom_basis(f.A, f.A).size(), 2u);
}

TEST(HomBasis, DimensionMatchesEnumerationOracle) {
  for (auto alg : {truncated(2, 2), truncated(2, 3), cyclic_group(2, 2), quiver_a1(), truncated(3, 2)}) {
    ModuleCatalog cat(alg, alg->p() == 2 ? 3 : 2);
    for (const auto& m : cat.modules())
      for (const auto& n : cat.modules()) {
        if (m.dim() * n.dim() > 9) continue;
        auto basis = hom_basis(m, n);
        EXPECT_EQ(basis.size(), oracle::hom_dimension(oracle::raw(m), oracle::raw(n))) << alg->name();
        for (const auto& h : basis) EXPECT_TRUE(is_module_map(h));
      }
  }
}

TEST(KernelCokernel, Identity) {
  Fx2 f;
  auto id = identity(f.A);
  EXPECT_EQ(kernel(id).object.dim(), 0u);
  EXPECT_EQ(cokernel(id).object.dim(), 0u);
}

TEST(KernelCokernel, ZeroMap) {
  Fx2 f;
  auto z = zero_morphism(f.S, f.S);
  EXPECT_TRUE(isomorphic(kernel(z).object, f.S));
  EXPECT_TRUE(isomorphic(cokernel(z).object, f.S));
}

TEST(KernelCokernel, MultiplicationByX) {
  Fx2 f;
  auto k = kernel(f.mul_x);
  auto q = cokernel(f.mul_x);
  EXPECT_TRUE(isomorphic(k.object, f.S));
  EXPECT_TRUE(isomorphic(q.object, f.S));
  EXPECT_TRUE(compose(f.mul_x, k.inclusion).matrix().is_zero());
  EXPECT_TRUE(compose(q.projection, f.mul_x).matrix().is_zero());
  EXPECT_TRUE(is_module_map(k.inclusion));
  EXPECT_TRUE(is_module_map(q.projection));
}

TEST(Pushout, IdentityAlongIdentity) {
  Fx2 f;
  auto po = pushout(identity(f.A), identity(f.A));
  EXPECT_TRUE(isomorphic(po.object, f.A));
}

TEST(Pushout, SocleAlongZero) {
  Fx2 f;
  auto po = pushout(f.soc, zero_morphism(f.S, Module::zero(f.alg)));
  EXPECT_TRUE(isomorphic(po.object, f.S));
  EXPECT_EQ(compose(po.from_b, f.soc), compose(po.from_c, zero_morphism(f.S, Module::zero(f.alg))));
}

TEST(Pullback, TopAgainstTop) {
  Fx2 f;
  auto pb = pullback(f.top, f.top);
  EXPECT_EQ(pb.object.dim(), 3u);
  EXPECT_EQ(compose(f.top, pb.to_b), compose(f.top, pb.to_c));
  EXPECT_TRUE(validate_module(pb.object).ok());
}

TEST(DirectSum, InjectionsAndProjections) {
  Fx2 f;
  auto s = direct_sum(f.S, f.A);
  EXPECT_EQ(s.object.dim(), 3u);
  EXPECT_EQ(compose(s.projections[0], s.injections[0]), identity(f.S));
  EXPECT_EQ(compose(s.projections[1], s.injections[1]), identity(f.A));
  EXPECT_TRUE(compose(s.projections[1], s.injections[0]).matrix().is_zero());
}

TEST(Enumerate, FieldGivesVectorSpaces) {
  ModuleCatalog cat(field(2), 2);
  ASSERT_EQ(cat.size(), 3u);
  EXPECT_EQ(cat[0].dim(), 0u);
  EXPECT_EQ(cat[1].dim(), 1u);
  EXPECT_EQ(cat[2].dim(), 2u);
}

TEST(Enumerate, Fx2UpToTwo) {
  Fx2 f;
  ModuleCatalog cat(f.alg, 2);
  ASSERT_EQ(cat.size(), 4u);
  for (const auto& m : {Module::zero(f.alg), f.S, f.sum({f.S, f.S}), f.A}) EXPECT_TRUE(cat.identify(m).has_value());
}

TEST(Enumerate, A1DimensionOne) {
  ModuleCatalog cat(quiver_a1(), 1);
  ASSERT_EQ(cat.size(), 3u);
  EXPECT_EQ(cat[1].dimension_vector()[0] + cat[2].dimension_vector()[0], 1u);
}

TEST(Enumerate, TruncatedPolynomialCountsArePartitions) {
  // modules of F_p[x]/(x^k) of dim n are Jordan types with blocks <= k
  auto partitions = [](std::size_t n, std::size_t k) {
    std::vector<std::size_t> c(n + 1, 0);
    c[0] = 1;
    for (std::size_t part = 1; part <= k; ++part)
      for (std::size_t s = part; s <= n; ++s) c[s] += c[s - part];
    return c;
  };
  for (std::size_t k : {2u, 3u}) {
    ModuleCatalog cat(truncated(2, k), 4);
    auto expect = partitions(4, k);
    std::vector<std::size_t> got(5, 0);
    for (const auto& m : cat.modules()) ++got[m.dim()];
    EXPECT_EQ(got, expect) << "k = " << k;
  }
}

TEST(Enumerate, CatalogIsPairwiseNonIsomorphicAndValid) {
  for (auto alg : {truncated(2, 2), cyclic_group(2, 2), quiver_a1(), hereditary()}) {
    ModuleCatalog cat(alg, 3);
    for (std::size_t i = 0; i < cat.size(); ++i) {
      EXPECT_TRUE(validate_module(cat[i]).ok());
      EXPECT_EQ(cat.identify(cat[i]), i);
      for (std::size_t j = i + 1; j < cat.size(); ++j)
        if (cat[i].dim() == cat[j].dim()) EXPECT_FALSE(isomorphic(cat[i], cat[j])) << alg->name();
    }
  }
}

TEST(Enumerate, BudgetIsEnforced) { EXPECT_THROW(ModuleCatalog(truncated(2, 2), 30, 1000), BudgetExceeded); }

TEST(IsIsomorphic, SelfAndDistinct) {
  Fx2 f;
  auto iso = is_isomorphic(f.A, f.A);
  ASSERT_TRUE(iso);
  EXPECT_TRUE(is_iso(*iso));
  EXPECT_FALSE(is_isomorphic(f.sum({f.S, f.S}), f.A));
}

TEST(IsIsomorphic, ConjugatedAction) {
  std::mt19937_64 rng(3);
  for (auto alg : {truncated(2, 3), quiver_a1(), truncated(3, 2)}) {
    ModuleCatalog cat(alg, 3);
    for (const auto& m : cat.modules()) {
      if (m.dim() == 0) continue;
      FieldMatrix g(alg->p(), m.dim(), m.dim());
      std::optional<FieldMatrix> gi;
      while (!gi) {
        for (std::size_t i = 0; i < m.dim(); ++i)
          for (std::size_t j = 0; j < m.dim(); ++j) g.at(i, j) = static_cast<Residue>(rng() % alg->p());
        gi = inverse(g);
      }
      std::vector<FieldMatrix> act;
      for (const auto& a : m.action()) act.push_back(g * a * *gi);
      Module n(alg, m.dim(), act);
      auto iso = is_isomorphic(m, n);
      ASSERT_TRUE(iso);
      EXPECT_TRUE(is_module_map(*iso));
      EXPECT_TRUE(is_iso(*iso));
    }
  }
}

TEST(Modules, ValidationCatchesBrokenAction) {
  Fx2 f;
  // x acting as the identity violates x*x = 0
  Module bad(f.alg, 1, {FieldMatrix::identity(2, 1), FieldMatrix::identity(2, 1)});
  EXPECT_FALSE(validate_module(bad).ok());
  EXPECT_THROW(Module(f.alg, 2, {FieldMatrix::identity(2, 2)}), MalformedInput);
}

TEST(Modules, ParentMismatch) {
  Fx2 f;
  auto other = truncated(2, 3);
  EXPECT_THROW(ext1(f.S, regular_module(other)), ParentMismatch);
}
