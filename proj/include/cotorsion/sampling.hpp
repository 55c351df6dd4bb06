#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cotorsion/waldhausen.hpp"

namespace cotorsion {

/// Seeded random objects and maps drawn from a catalog. Residues use
/// rng() % p so streams are identical across standard libraries.
class Sampler {
 public:
  Sampler(const WaldhausenData& w, const ModuleCatalog& cat, std::uint64_t seed) : w_(w), cat_(cat), rng_(seed) {
    for (std::size_t i = 1; i < cat.size(); ++i) {
      if (!w.in_c(cat[i])) continue;
      c_.push_back(i);
      if (w.in_z(cat[i])) z_.push_back(i);
      if (w.in_c_perp(cat[i])) perp_.push_back(i);
    }
    if (c_.empty()) throw PreconditionError("catalog has no nonzero module in C");
  }

  std::mt19937_64& rng() { return rng_; }
  std::size_t below(std::size_t n) { return n ? static_cast<std::size_t>(rng_() % n) : 0; }
  bool coin() { return rng_() & 1; }
  Residue residue() { return static_cast<Residue>(rng_() % cat_.algebra()->p()); }

  const Module& any_module() { return cat_[c_[below(c_.size())]]; }
  // Zero is returned when the class has no sampled member.
  Module z_module() { return z_.empty() ? Module::zero(cat_.algebra()) : cat_[z_[below(z_.size())]]; }
  Module perp_module() { return perp_.empty() ? Module::zero(cat_.algebra()) : cat_[perp_[below(perp_.size())]]; }

  Morphism hom(const Module& a, const Module& b) {
    auto basis = hom_basis(a, b);
    Vector c(basis.size());
    for (auto& x : c) x = residue();
    return linear_combination(basis, c, a, b);
  }

  Morphism automorphism(const Module& a) {
    for (int t = 0; t < 8; ++t) {
      auto f = hom(a, a);
      if (is_iso(f)) return f;
    }
    return identity(a);
  }

  /// Random extension 0 -> a -> ? -> c -> 0.
  ShortExactSequence extension(const Module& c, const Module& a) {
    auto e = ext1(c, a);
    Vector coords(e.dimension());
    for (auto& x : coords) x = residue();
    return realize_extension(e, coords);
  }

  Morphism cofibration_from(const Module& a, bool acyclic) {
    if (!acyclic && below(3) == 0) return factor(w_, hom(a, any_module())).i;
    return extension(acyclic ? z_module() : any_module(), a).i;
  }

  Morphism acyclic_fibration_onto(const Module& d) {
    if (below(3) == 0) return factor(w_, hom(any_module(), d)).p;
    return extension(d, perp_module()).p;
  }

  Morphism admissible_epi_onto(const Module& d) {
    if (coin()) return acyclic_fibration_onto(d);
    return extension(d, any_module()).p;
  }

  Morphism weak_equivalence_from(const Module& a) {
    if (!w_.in_c(a)) return automorphism(a);
    switch (below(3)) {
      case 0:
        return automorphism(a);
      case 1:
        return cofibration_from(a, true);
      default:
        for (int t = 0; t < 8; ++t) {
          auto f = hom(a, any_module());
          if (is_weak_equivalence(w_, f) == WeVerdict::Yes) return f;
        }
        return cofibration_from(a, true);
    }
  }

  Morphism weak_equivalence_onto(const Module& d) {
    if (!w_.in_c(d)) return automorphism(d);
    switch (below(3)) {
      case 0:
        return automorphism(d);
      case 1:
        return acyclic_fibration_onto(d);
      default:
        for (int t = 0; t < 8; ++t) {
          auto f = hom(any_module(), d);
          if (is_weak_equivalence(w_, f) == WeVerdict::Yes) return f;
        }
        return acyclic_fibration_onto(d);
    }
  }

 private:
  const WaldhausenData& w_;
  const ModuleCatalog& cat_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> c_, z_, perp_;
};

/// Random instances for one axiom checker.
inline CheckReport sample_check(const std::string& check, const WaldhausenData& w, Sampler& s) {
  if (check == "gluing") {
    auto a = s.any_module();
    auto i = s.cofibration_from(a, false);
    auto j = s.hom(a, s.any_module());
    auto alpha = s.weak_equivalence_from(a);
    auto pb = pushout(i, alpha), pc = pushout(j, alpha);
    GluingData d{j, i, pc.from_c, pb.from_c, alpha, pb.from_b, pc.from_b};
    if (s.coin()) {
      auto g2 = s.weak_equivalence_from(d.jp.cod());
      d.jp = compose(g2, d.jp);
      d.gamma = compose(g2, d.gamma);
    }
    return check_gluing(w, d);
  }
  if (check == "extension") {
    auto top = s.extension(s.any_module(), s.any_module());
    auto a = s.weak_equivalence_from(top.left());
    auto po = pushout_ses(top, a);
    ShortExactSequence bottom = po.ses;
    auto b = po.from_middle;
    auto c = identity(top.right());
    if (s.coin()) {
      auto z = s.z_module();
      auto mid = direct_sum(bottom.middle(), z);
      auto right = direct_sum(bottom.right(), z);
      ShortExactSequence widened{stack_into({bottom.i, zero_morphism(bottom.left(), z)}, mid),
                                 direct_sum_map(bottom.p, identity(z), mid, right)};
      b = stack_into({b, zero_morphism(top.middle(), z)}, mid);
      c = right.injections[0];
      bottom = widened;
    }
    return check_extension_axiom(w, top, bottom, a, b, c);
  }
  if (check == "saturation") {
    auto a = s.any_module();
    auto f = s.coin() ? s.weak_equivalence_from(a) : s.hom(a, s.any_module());
    auto g = s.coin() ? s.weak_equivalence_from(f.cod()) : s.hom(f.cod(), s.any_module());
    return check_saturation(w, f, g);
  }
  if (check == "properness-pushout") {
    auto a = s.any_module();
    return check_properness(w, s.cofibration_from(a, false), s.weak_equivalence_from(a));
  }
  if (check == "properness-pullback") {
    auto d = s.any_module();
    return check_properness_pullback(w, s.admissible_epi_onto(d), s.weak_equivalence_onto(d));
  }
  if (check == "acyclic-object") return check_acyclic_object(w, s.coin() ? s.z_module() : s.any_module());
  if (check == "cobase-change") {
    auto a = s.any_module();
    return check_cobase_change(w, s.cofibration_from(a, false), s.hom(a, s.any_module()));
  }
  throw MalformedInput("unknown check '" + check + "'");
}

inline const std::vector<std::string>& axiom_checks() {
  static const std::vector<std::string> names{"gluing",          "extension",           "saturation",
                                              "properness-pushout", "properness-pullback", "acyclic-object",
                                              "cobase-change"};
  return names;
}

struct SuiteSummary {
  std::string check;
  std::size_t pass = 0, fail = 0, inapplicable = 0;
  std::vector<CheckReport> failures;
};

inline std::vector<SuiteSummary> run_axiom_suite(const WaldhausenData& w, const ModuleCatalog& cat,
                                                 std::uint64_t seed, std::size_t per_check,
                                                 const std::vector<std::string>& checks = axiom_checks()) {
  std::vector<SuiteSummary> out;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    Sampler s(w, cat, seed + k);
    SuiteSummary sum{checks[k], 0, 0, 0, {}};
    for (std::size_t n = 0; n < per_check; ++n) {
      auto r = sample_check(checks[k], w, s);
      if (r.verdict == Verdict::Pass) ++sum.pass;
      if (r.verdict == Verdict::Inapplicable) ++sum.inapplicable;
      if (r.verdict == Verdict::Fail) {
        ++sum.fail;
        sum.failures.push_back(r);
      }
    }
    out.push_back(std::move(sum));
  }
  return out;
}

}  // namespace cotorsion
