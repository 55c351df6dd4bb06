#pragma once

// Small named modules and maps over F_2[x]/(x^2), A = span(1, x).

#include "cotorsion/homological.hpp"
#include "support/algebras.hpp"

namespace testing_support {

using namespace cotorsion;

struct Fx2 {
  AlgebraPtr alg = truncated(2, 2);
  Module S = Module(alg, 1, {FieldMatrix::identity(2, 1), FieldMatrix(2, 1, 1)});
  Module A = regular_module(alg);
  Morphism soc = Morphism(S, A, FieldMatrix::from_rows(2, {{0}, {1}}));
  Morphism top = Morphism(A, S, FieldMatrix::from_rows(2, {{1, 0}}));
  Morphism mul_x = Morphism(A, A, FieldMatrix::from_rows(2, {{0, 0}, {1, 0}}));

  Module sum(const std::vector<Module>& parts) const { return direct_sum(parts, alg).object; }
};

inline bool isomorphic(const Module& a, const Module& b) { return is_isomorphic(a, b).has_value(); }

}  // namespace testing_support
