#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cotorsion/homological.hpp"
#include "cotorsion/subcategory.hpp"

namespace cotorsion {

/// What was verified about the hypotheses, and on how large a sample.
struct HypothesisFlags {
  bool hereditary_checked = false;
  bool complete_checked = false;
  bool right_in_z_checked = false;
  std::optional<bool> z_two_of_three;
  std::size_t sample_bound = 0;
  std::size_t sample_size = 0;
};

/// Exact category with a complete hereditary cotorsion pair (C, C^perp) and
/// a subcategory Z of acyclic objects.
class WaldhausenData {
 public:
  /// Flags supplied by the caller (used when the hypotheses are known, e.g.
  /// degreewise split complexes).
  static WaldhausenData assume(PairPtr pair, SubcategorySpec z, HypothesisFlags flags) {
    return WaldhausenData(std::move(pair), std::move(z), flags);
  }

  /// Checks the hypotheses on every catalog module and every harvested
  /// extension; throws HypothesisError on a violation.
  static WaldhausenData validated(PairPtr pair, SubcategorySpec z, const ModuleCatalog& cat, const Harvest& harvest) {
    WaldhausenData w(std::move(pair), std::move(z), {});
    const auto& mods = cat.modules();
    std::vector<bool> c(mods.size()), zz(mods.size());
    for (std::size_t i = 0; i < mods.size(); ++i) {
      c[i] = w.in_c(mods[i]);
      zz[i] = w.in_z(mods[i]);
      if (w.in_c_perp(mods[i]) && !zz[i])
        throw HypothesisError("right class not contained in Z: module M" + std::to_string(i) + " of dim " +
                              std::to_string(mods[i].dim()));
    }
    bool two_of_three = true;
    for (const auto& t : harvest.triples) {
      if (c[t.b] && c[t.c] && !c[t.a])
        throw HypothesisError("C is not closed under kernels of epimorphisms (M" + std::to_string(t.a) + ")");
      if (!(c[t.a] && c[t.b] && c[t.c])) continue;
      if (zz[t.a] && zz[t.c] && !zz[t.b])
        throw HypothesisError("Z and C is not closed under extensions (M" + std::to_string(t.b) + ")");
      if (zz[t.a] && zz[t.b] && !zz[t.c])
        throw HypothesisError("Z and C is not closed under cokernels of monos (M" + std::to_string(t.c) + ")");
      if (zz[t.b] && zz[t.c] && !zz[t.a]) two_of_three = false;
    }
    for (const auto& m : mods) {
      auto r = w.pair_->resolve_right(m);
      auto l = w.pair_->resolve_left(m);
      if (!validate_ses(r).ok() || !w.in_c_perp(r.middle()) || !w.in_c(r.right()))
        throw HypothesisError("pair is not complete on a sample (right resolution)");
      if (!validate_ses(l).ok() || !w.in_c_perp(l.left()) || !w.in_c(l.middle()))
        throw HypothesisError("pair is not complete on a sample (left resolution)");
    }
    w.flags_.hereditary_checked = true;
    w.flags_.complete_checked = true;
    w.flags_.right_in_z_checked = true;
    w.flags_.z_two_of_three = two_of_three;
    w.flags_.sample_bound = cat.max_dim();
    w.flags_.sample_size = mods.size();
    return w;
  }

  const CotorsionPair& pair() const { return *pair_; }
  const PairPtr& pair_ptr() const { return pair_; }
  const SubcategorySpec& z() const { return z_; }
  const HypothesisFlags& flags() const { return flags_; }
  void set_z_two_of_three(std::optional<bool> v) { flags_.z_two_of_three = v; }

  bool in_c(const Module& m) const { return pair_->in_left(m); }
  bool in_c_perp(const Module& m) const { return pair_->in_right(m); }
  bool in_z(const Module& m) const { return z_.contains(m); }

 private:
  WaldhausenData(PairPtr pair, SubcategorySpec z, HypothesisFlags flags)
      : pair_(std::move(pair)), z_(std::move(z)), flags_(flags) {}

  PairPtr pair_;
  SubcategorySpec z_;
  HypothesisFlags flags_;
};

struct MapClassification {
  bool is_admissible_mono = false;
  bool is_admissible_epi = false;
  bool is_cofibration = false;
  bool is_acyclic_cofibration = false;
  bool is_acyclic_fibration = false;
};

inline void require_in_c(const WaldhausenData& w, const Morphism& f) {
  if (!w.in_c(f.dom())) throw OutsideSubcategory("domain is not in C");
  if (!w.in_c(f.cod())) throw OutsideSubcategory("codomain is not in C");
}

inline MapClassification classify_map(const WaldhausenData& w, const Morphism& f) {
  require_in_c(w, f);
  MapClassification out;
  out.is_admissible_mono = w.pair().is_admissible_mono(f);
  out.is_admissible_epi = w.pair().is_admissible_epi(f);
  if (out.is_admissible_mono) {
    auto q = cokernel(f).object;
    out.is_cofibration = w.in_c(q);
    out.is_acyclic_cofibration = out.is_cofibration && w.in_z(q);
  }
  if (out.is_admissible_epi) out.is_acyclic_fibration = w.in_c_perp(kernel(f).object);
  return out;
}

/// f = p o i with i a cofibration and p an acyclic fibration.
struct Factorization {
  Morphism i, p;
  Module middle;
};

/// i = (j, f) : A -> I (+) B, p = (0, id), where j : A -> I comes from the
/// right resolution of A.
inline Factorization factor(const CotorsionPair& pair, const Morphism& f) {
  auto j = pair.resolve_right(f.dom()).i;
  auto sum = direct_sum(j.cod(), f.cod());
  auto i = stack_into({j, f}, sum);
  Factorization out{i, sum.projections[1], sum.object};
  if (!(compose(out.p, out.i) == f)) throw InternalInconsistency("factorization does not compose to f");
  return out;
}

inline Factorization factor(const WaldhausenData& w, const Morphism& f) {
  require_in_c(w, f);
  return factor(w.pair(), f);
}

/// h with h o i = top and p o h = bottom.
inline Morphism lift(const Morphism& i, const Morphism& p, const Morphism& top, const Morphism& bottom) {
  if (!(compose(p, top) == compose(bottom, i))) throw PreconditionError("lifting square does not commute");
  const Residue pr = i.p();
  auto flat = [&](const FieldMatrix& a, const FieldMatrix& b) {
    auto e = a.entries();
    e.insert(e.end(), b.entries().begin(), b.entries().end());
    const std::size_t n = e.size();
    return FieldMatrix(pr, 1, n, std::move(e));
  };
  auto h = solve_in_span(
      hom_basis(i.cod(), p.dom()),
      [&](const Morphism& x) { return flat(x.matrix() * i.matrix(), p.matrix() * x.matrix()); },
      flat(top.matrix(), bottom.matrix()), i.cod(), p.dom());
  if (!h) throw InternalInconsistency("no lift exists for the given square");
  return *h;
}

enum class WeVerdict { Yes, No, Indeterminate };

inline const char* to_string(WeVerdict v) {
  switch (v) {
    case WeVerdict::Yes:
      return "yes";
    case WeVerdict::No:
      return "no";
    case WeVerdict::Indeterminate:
      return "indeterminate";
  }
  return "?";
}

/// Canonical factorization test: yes when coker(i) is in Z and C; otherwise
/// no if Z and C has 2-out-of-3, else indeterminate.
inline WeVerdict is_weak_equivalence(const WaldhausenData& w, const Morphism& f) {
  auto fac = factor(w, f);
  auto q = cokernel(fac.i).object;
  if (w.in_z(q) && w.in_c(q)) return WeVerdict::Yes;
  if (w.flags().z_two_of_three == true) return WeVerdict::No;
  return WeVerdict::Indeterminate;
}

enum class Verdict { Pass, Fail, Inapplicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Inapplicable:
      return "INAPPLICABLE";
  }
  return "?";
}

struct CheckReport {
  std::string check;
  std::string instance_digest;
  Verdict verdict = Verdict::Inapplicable;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const {
    return {{"check", check}, {"instance_digest", instance_digest}, {"verdict", to_string(verdict)}, {"details", details}};
  }
};

/// FNV-1a over the shapes and entries of the given maps.
inline std::string digest(const std::vector<Morphism>& maps) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t x) {
    for (int k = 0; k < 8; ++k) {
      h ^= (x >> (8 * k)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& f : maps) {
    mix(f.dom().dim());
    mix(f.cod().dim());
    for (auto v : f.matrix().entries()) mix(v);
    for (const auto& a : f.dom().action())
      for (auto v : a.entries()) mix(v);
    for (const auto& a : f.cod().action())
      for (auto v : a.entries()) mix(v);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline CheckReport start_report(std::string name, const std::vector<Morphism>& maps) {
  CheckReport r;
  r.check = std::move(name);
  r.instance_digest = digest(maps);
  return r;
}

inline CheckReport inapplicable(CheckReport r, const std::string& why) {
  r.verdict = Verdict::Inapplicable;
  r.details["reason"] = why;
  return r;
}

inline CheckReport failed(CheckReport r, const std::string& why) {
  r.verdict = Verdict::Fail;
  r.details["reason"] = why;
  return r;
}

inline bool outside_c(const WaldhausenData& w, const std::vector<Morphism>& maps) {
  for (const auto& f : maps)
    if (!w.in_c(f.dom()) || !w.in_c(f.cod())) return true;
  return false;
}

inline Verdict from_we(WeVerdict v) {
  if (v == WeVerdict::Yes) return Verdict::Pass;
  if (v == WeVerdict::No) return Verdict::Fail;
  return Verdict::Inapplicable;
}

}  // namespace detail

/// C <-j- A -i-> B over C' <-j'- A' -i'-> B' with vertical maps.
struct GluingData {
  Morphism j, i, jp, ip;
  Morphism alpha, beta, gamma;  // A -> A', B -> B', C -> C'
};

/// Gluing lemma: the map between the two pushouts is a weak equivalence.
inline CheckReport check_gluing(const WaldhausenData& w, const GluingData& d) {
  auto r = detail::start_report("gluing", {d.j, d.i, d.jp, d.ip, d.alpha, d.beta, d.gamma});
  if (!(compose(d.beta, d.i) == compose(d.ip, d.alpha)) || !(compose(d.gamma, d.j) == compose(d.jp, d.alpha)))
    throw PreconditionError("gluing diagram does not commute");
  if (detail::outside_c(w, {d.j, d.i, d.jp, d.ip})) return detail::inapplicable(r, "object outside C");
  if (!classify_map(w, d.i).is_cofibration || !classify_map(w, d.ip).is_cofibration)
    return detail::inapplicable(r, "horizontal maps are not cofibrations");
  for (const auto* m : {&d.alpha, &d.beta, &d.gamma}) {
    auto v = is_weak_equivalence(w, *m);
    if (v != WeVerdict::Yes) return detail::inapplicable(r, std::string("vertical map decided ") + to_string(v));
  }
  auto po = pushout(d.i, d.j);
  auto po2 = pushout(d.ip, d.jp);
  if (!w.in_c(po.object) || !w.in_c(po2.object)) return detail::failed(r, "pushout along a cofibration left C");
  auto phi = pushout_induced(po, compose(po2.from_b, d.beta), compose(po2.from_c, d.gamma));
  auto v = is_weak_equivalence(w, phi);
  auto cls = classify_map(w, phi);
  r.details["induced_map"] = to_string(v);
  r.details["induced_acyclic_cofibration"] = cls.is_acyclic_cofibration;
  r.details["pushout_dims"] = {po.object.dim(), po2.object.dim()};
  r.verdict = detail::from_we(v);
  if (r.verdict == Verdict::Inapplicable) r.details["reason"] = "induced map undecided";
  return r;
}

/// Extension axiom: a map of exact sequences with outer weak equivalences
/// has a weak equivalence in the middle.
inline CheckReport check_extension_axiom(const WaldhausenData& w, const ShortExactSequence& top,
                                         const ShortExactSequence& bottom, const Morphism& a, const Morphism& b,
                                         const Morphism& c) {
  auto r = detail::start_report("extension", {top.i, top.p, bottom.i, bottom.p, a, b, c});
  if (!(compose(b, top.i) == compose(bottom.i, a)) || !(compose(c, top.p) == compose(bottom.p, b)))
    throw PreconditionError("map of sequences does not commute");
  if (detail::outside_c(w, {top.i, top.p, bottom.i, bottom.p})) return detail::inapplicable(r, "object outside C");
  if (!classify_map(w, top.i).is_cofibration || !classify_map(w, bottom.i).is_cofibration)
    return detail::inapplicable(r, "sequences are not cofiber sequences in C");
  auto va = is_weak_equivalence(w, a), vc = is_weak_equivalence(w, c);
  if (va != WeVerdict::Yes || vc != WeVerdict::Yes)
    return detail::inapplicable(r, std::string("outer maps decided ") + to_string(va) + "/" + to_string(vc));
  auto vb = is_weak_equivalence(w, b);
  r.details["middle"] = to_string(vb);
  r.verdict = detail::from_we(vb);
  return r;
}

/// Saturation: two of f, g, g o f weak equivalences forces the third.
inline CheckReport check_saturation(const WaldhausenData& w, const Morphism& f, const Morphism& g) {
  auto r = detail::start_report("saturation", {f, g});
  if (w.flags().z_two_of_three != true) return detail::inapplicable(r, "Z and C lacks 2-out-of-3");
  if (detail::outside_c(w, {f, g})) return detail::inapplicable(r, "object outside C");
  auto gf = compose(g, f);
  WeVerdict v[3] = {is_weak_equivalence(w, f), is_weak_equivalence(w, g), is_weak_equivalence(w, gf)};
  r.details["f"] = to_string(v[0]);
  r.details["g"] = to_string(v[1]);
  r.details["gf"] = to_string(v[2]);
  int yes = 0, no = 0;
  for (auto x : v) {
    if (x == WeVerdict::Yes) ++yes;
    if (x == WeVerdict::No) ++no;
  }
  if (yes + no != 3) return detail::inapplicable(r, "undecided map");
  r.verdict = (yes == 2 && no == 1) ? Verdict::Fail : Verdict::Pass;
  return r;
}

/// Left properness: pushing a weak equivalence a : A -> A' out along a
/// cofibration f : A -> B gives a weak equivalence B -> A' +_A B.
inline CheckReport check_properness(const WaldhausenData& w, const Morphism& f, const Morphism& a) {
  auto r = detail::start_report("properness-pushout", {f, a});
  if (detail::outside_c(w, {f, a})) return detail::inapplicable(r, "object outside C");
  if (!classify_map(w, f).is_cofibration) return detail::inapplicable(r, "f is not a cofibration");
  auto va = is_weak_equivalence(w, a);
  if (va != WeVerdict::Yes) return detail::inapplicable(r, std::string("a decided ") + to_string(va));
  auto po = pushout(f, a);
  if (!w.in_c(po.object)) return detail::failed(r, "pushout along a cofibration left C");
  auto v = is_weak_equivalence(w, po.from_b);
  r.details["pushed_map"] = to_string(v);
  r.verdict = detail::from_we(v);
  return r;
}

/// Right properness: pulling a weak equivalence a : D' -> D back along an
/// admissible epi p : B -> D gives a weak equivalence B x_D D' -> B.
inline CheckReport check_properness_pullback(const WaldhausenData& w, const Morphism& p, const Morphism& a) {
  auto r = detail::start_report("properness-pullback", {p, a});
  if (detail::outside_c(w, {p, a})) return detail::inapplicable(r, "object outside C");
  if (!w.pair().is_admissible_epi(p)) return detail::inapplicable(r, "p is not an admissible epi");
  auto va = is_weak_equivalence(w, a);
  if (va != WeVerdict::Yes) return detail::inapplicable(r, std::string("a decided ") + to_string(va));
  auto pb = pullback(p, a);
  if (!w.in_c(pb.object)) return detail::failed(r, "pullback along an admissible epi left C");
  auto v = is_weak_equivalence(w, pb.to_b);
  r.details["pulled_map"] = to_string(v);
  r.verdict = detail::from_we(v);
  return r;
}

/// 0 -> A is a weak equivalence iff A is in Z.
inline CheckReport check_acyclic_object(const WaldhausenData& w, const Module& a) {
  auto z = Module::zero(a.algebra());
  auto f = zero_morphism(z, a);
  auto r = detail::start_report("acyclic-object", {f});
  if (!w.in_c(a)) return detail::inapplicable(r, "object outside C");
  auto v = is_weak_equivalence(w, f);
  bool member = w.in_z(a);
  r.details["verdict"] = to_string(v);
  r.details["in_z"] = member;
  if (v == WeVerdict::Indeterminate) return detail::inapplicable(r, "undecided");
  r.verdict = ((v == WeVerdict::Yes) == member) ? Verdict::Pass : Verdict::Fail;
  return r;
}

/// Cofibrations are stable under cobase change.
inline CheckReport check_cobase_change(const WaldhausenData& w, const Morphism& f, const Morphism& g) {
  auto r = detail::start_report("cobase-change", {f, g});
  if (detail::outside_c(w, {f, g})) return detail::inapplicable(r, "object outside C");
  if (!classify_map(w, f).is_cofibration) return detail::inapplicable(r, "f is not a cofibration");
  auto po = pushout(f, g);
  if (!w.in_c(po.object)) return detail::failed(r, "pushout along a cofibration left C");
  r.verdict = classify_map(w, po.from_c).is_cofibration ? Verdict::Pass : Verdict::Fail;
  return r;
}

/// Turns a finite P-resolution of a (sequences 0 -> P_n -> P_{n-1} -> C_{n-1} -> 0,
/// ..., 0 -> C_1 -> P_0 -> a -> 0) into one whose terms lie in Z and P,
/// alternating right P-resolutions with pushouts.
inline std::vector<ShortExactSequence> build_zp_resolution(const WaldhausenData& w, const Module& a,
                                                           const std::vector<ShortExactSequence>& pres,
                                                           const CotorsionPair& pair_p) {
  if (!w.in_c(a) || !w.in_z(a)) throw PreconditionError("a is not in Z and C");
  if (w.flags().z_two_of_three != true) throw PreconditionError("Z and C lacks 2-out-of-3");
  const std::size_t n = pres.size();
  if (n == 0) {
    if (!pair_p.in_left(a)) throw PreconditionError("empty resolution but a is not in P");
    return {};
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!validate_ses(pres[k]).ok()) throw PreconditionError("sequence " + std::to_string(k) + " is not exact");
    if (k + 1 < n && !(pres[k].right() == pres[k + 1].left()))
      throw PreconditionError("sequence " + std::to_string(k) + " does not chain into the next");
    if (!pair_p.in_left(pres[k].middle()))
      throw PreconditionError("P_" + std::to_string(n - 1 - k) + " is not in P");
  }
  if (!pair_p.in_left(pres[0].left())) throw PreconditionError("P_" + std::to_string(n) + " is not in P");
  if (!(pres.back().right() == a)) throw PreconditionError("resolution does not end in a");

  std::vector<ShortExactSequence> out;
  auto r0 = pair_p.resolve_right(pres[0].left());
  ShortExactSequence cur = pushout_ses(pres[0], r0.i).ses;
  for (std::size_t k = 1; k < n; ++k) {
    auto rq = pair_p.resolve_right(cur.middle());
    auto po = pushout(rq.i, cur.p);
    out.push_back({compose(rq.i, cur.i), po.from_b});
    cur = pushout_ses(pres[k], po.from_c).ses;
  }
  out.push_back(cur);

  auto bad = [](const std::string& s) { return HypothesisError("resolution output invalid: " + s); };
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (!validate_ses(out[k]).ok()) throw InternalInconsistency("constructed sequence is not exact");
    if (!w.in_z(out[k].middle()) || !pair_p.in_left(out[k].middle()))
      throw bad("middle term " + std::to_string(k) + " is not in Z and P");
  }
  if (!w.in_z(out[0].left()) || !pair_p.in_left(out[0].left())) throw bad("first term is not in Z and P");
  return out;
}

}  // namespace cotorsion
