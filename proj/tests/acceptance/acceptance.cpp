// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Every criterion produces a JSON report; the last criterion recomputes all
// of them and requires byte-identical output.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cotorsion/chain.hpp"
#include "cotorsion/cli.hpp"
#include "cotorsion/ktheory.hpp"
#include "cotorsion/sampling.hpp"
#include "cotorsion/spans.hpp"
#include "json.hpp"
#include "support/algebras.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "support/random_chains.hpp"
#include "support/random_spans.hpp"

using namespace cotorsion;
using namespace testing_support;
using nlohmann::json;

namespace {

struct Result {
  bool pass = true;
  json report = json::object();
  std::vector<std::string> problems;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (problems.size() < 10) problems.push_back(what);
  }
  json to_json() const {
    json r = report;
    r["pass"] = pass;
    r["problems"] = problems;
    return r;
  }
};

Module simple_at(const AlgebraPtr& alg, std::size_t v) {
  std::vector<FieldMatrix> act(alg->dim(), FieldMatrix(alg->p(), 1, 1));
  act[v].at(0, 0) = 1;
  return Module(alg, 1, act);
}

// 1. Ext^1 dimensions against the cocycle-counting oracle.
Result ext_oracle() {
  Result r;
  for (auto alg : {truncated(2, 2), quiver_a1()}) {
    ModuleCatalog cat(alg, 4);
    std::size_t pairs = 0, nonzero = 0;
    for (const auto& c : cat.modules())
      for (const auto& a : cat.modules()) {
        if (c.dim() + a.dim() > 4) continue;
        ++pairs;
        const auto got = ext1(c, a).dimension(), want = oracle::ext_dimension(c, a);
        nonzero += got > 0;
        r.require(got == want, alg->name() + ": ext1 " + std::to_string(got) + " vs oracle " + std::to_string(want));
      }
    r.report[alg->name()] = {{"pairs", pairs}, {"nonzero", nonzero}};
  }
  return r;
}

// 2. Factorizations on every corpus algebra.
Result factorizations(const std::vector<CorpusWorld>& worlds) {
  Result r;
  for (const auto& c : worlds) {
    Sampler s(c.w, c.cat, 1000);
    std::size_t n = 0;
    for (; n < 500; ++n) {
      auto f = s.hom(s.any_module(), s.any_module());
      auto fac = factor(c.w, f);
      r.require(compose(fac.p, fac.i) == f, c.name + ": p o i != f");
      r.require(is_injective(fac.i) && is_surjective(fac.p), c.name + ": factors not mono/epi");
      r.require(c.w.in_c(cokernel(fac.i).object), c.name + ": coker i outside C");
      r.require(c.w.in_c_perp(kernel(fac.p).object), c.name + ": ker p outside the right class");
    }
    r.report[c.name] = n;
  }
  return r;
}

// 3. Lifts in squares built from a cofibration, an acyclic fibration and any
// map between their middle objects.
Result lifts(const std::vector<CorpusWorld>& worlds) {
  Result r;
  std::size_t total = 0;
  for (std::size_t k = 0; total < 200; ++k) {
    const auto& c = worlds[k % worlds.size()];
    Sampler s(c.w, c.cat, 2000 + k);
    auto i = factor(c.w, s.hom(s.any_module(), s.any_module())).i;
    auto p = factor(c.w, s.hom(s.any_module(), s.any_module())).p;
    auto cls_i = classify_map(c.w, i), cls_p = classify_map(c.w, p);
    r.require(cls_i.is_cofibration && cls_p.is_acyclic_fibration, c.name + ": square legs misclassified");
    auto h = s.hom(i.cod(), p.dom());
    auto top = compose(h, i), bottom = compose(p, h);
    try {
      auto l = lift(i, p, top, bottom);
      r.require(compose(l, i) == top && compose(p, l) == bottom, c.name + ": lift triangle fails");
    } catch (const std::exception& e) {
      r.require(false, c.name + ": " + e.what());
    }
    ++total;
  }
  r.report["squares"] = total;
  return r;
}

json suite_json(const std::vector<SuiteSummary>& sums, std::size_t& fails, std::size_t& min_pass) {
  json out = json::object();
  for (const auto& x : sums) {
    out[x.check] = {{"pass", x.pass}, {"fail", x.fail}, {"inapplicable", x.inapplicable}};
    fails += x.fail;
    min_pass = std::min(min_pass, x.pass);
  }
  return out;
}

// 4. Randomized axiom checkers, plus a corrupted predicate that must be caught.
Result axioms() {
  Result r;
  struct World {
    std::string name;
    AlgebraPtr alg;
    PairKind pair;
    SubcategorySpec z;
  };
  std::vector<World> worlds{{"fx2/projectives", truncated(2, 2), PairKind::AllInjectives, SubcategorySpec::projectives()},
                            {"fx2/all", truncated(2, 2), PairKind::AllInjectives, SubcategorySpec::all()},
                            {"A1/injectives", quiver_a1(), PairKind::AllInjectives, SubcategorySpec::injectives()},
                            {"A1/projectives-all", quiver_a1(), PairKind::ProjectivesAll, SubcategorySpec::all()}};
  for (const auto& x : worlds) {
    ModuleCatalog cat(x.alg, x.alg->dim() > 2 ? 3 : 4);
    auto w = WaldhausenData::validated(make_pair(x.pair), x.z, cat, harvest_extensions(cat));
    std::size_t fails = 0, min_pass = 300;
    r.report[x.name] = suite_json(run_axiom_suite(w, cat, 4000, 300), fails, min_pass);
    r.require(fails == 0, x.name + ": " + std::to_string(fails) + " FAIL verdicts");
    r.require(min_pass > 0, x.name + ": a checker never applied");
  }
  {
    auto alg = truncated(2, 2);
    ModuleCatalog cat(alg, 4);
    HypothesisFlags flags;
    flags.z_two_of_three = true;
    auto z = SubcategorySpec::predicate("dim<=2", [](const Module& m) { return m.dim() <= 2; });
    auto w = WaldhausenData::assume(make_pair(PairKind::AllInjectives), z, flags);
    std::size_t fails = 0, min_pass = 300;
    r.report["negative/dim<=2"] = suite_json(run_axiom_suite(w, cat, 4000, 300), fails, min_pass);
    r.require(fails > 0, "corrupted predicate dim<=2 was not caught");
  }
  {
    // validation must refuse a Z that misses the injectives
    ModuleCatalog cat(truncated(2, 2), 3);
    bool refused = false;
    try {
      WaldhausenData::validated(make_pair(PairKind::AllInjectives), SubcategorySpec::zero(), cat,
                                harvest_extensions(cat));
    } catch (const HypothesisError&) {
      refused = true;
    }
    r.report["negative/zero"] = refused ? "refused" : "accepted";
    r.require(refused, "Z = 0 over F2[x]/(x^2) passed validation");
  }
  return r;
}

// 5. dwsplit weak equivalences against quasi-isomorphisms.
Result quasi_isos() {
  Result r;
  for (auto alg : {truncated(2, 2), quiver_a1()}) {
    ModuleCatalog cat(alg, 3);
    std::mt19937_64 rng(5000);
    std::size_t yes = 0, no = 0, indeterminate = 0;
    for (int t = 0; t < 250; ++t) {
      auto f = random_test_map(rng, cat, 1 + static_cast<int>(rng() % 3), 3);
      const bool q = is_quasi_iso(f);
      r.require(q == oracle_quasi_iso(f), alg->name() + ": is_quasi_iso disagrees with the cone oracle");
      auto v = dwsplit_weq(f);
      if (v == WeVerdict::Indeterminate) {
        ++indeterminate;
        r.require(false, alg->name() + ": indeterminate verdict");
        continue;
      }
      r.require((v == WeVerdict::Yes) == q, alg->name() + ": dwsplit_weq disagrees with is_quasi_iso");
      (q ? yes : no) += 1;
    }
    r.report[alg->name()] = {{"quasi_isos", yes}, {"others", no}, {"indeterminate", indeterminate}};
    r.require(yes > 0 && no > 0, alg->name() + ": sample lacks one of the two outcomes");
  }
  return r;
}

// 6. K0 localization sequences and their stability in the dimension bound.
Result localization() {
  Result r;
  struct Case {
    AlgebraPtr alg;
    std::string cokernel, multiplier;
  };
  for (const auto& c : {Case{truncated(2, 2), "Z/2", "2"}, Case{truncated(2, 3), "Z/3", "3"}}) {
    json per = json::object();
    for (std::size_t bound : {3u, 4u, 5u}) {
      auto rep = localization_k0_report(c.alg, SubcategorySpec::projectives(), bound);
      auto j = rep.to_json();
      const std::string tag = c.alg->name() + " bound " + std::to_string(bound);
      r.require(rep.exact(), tag + ": sequence not exact");
      r.require(rep.ka.group == "Z" && rep.kb.group == "Z", tag + ": K0(A) or K0(B) is not Z");
      r.require(rep.kbwa.group == c.cokernel, tag + ": cokernel " + rep.kbwa.group);
      const auto& m = j["maps"]["KA_to_KB"];
      const bool mult = m.size() == 1 && m[0].size() == 1 &&
                        (m[0][0] == c.multiplier || m[0][0] == "-" + c.multiplier);
      r.require(mult, tag + ": K0(A) -> K0(B) is not multiplication by " + c.multiplier);
      per[std::to_string(bound)] = {{"KA", rep.ka.group}, {"KB", rep.kb.group}, {"KBwA", rep.kbwa.group},
                                    {"map", m}, {"exact", rep.exact()}};
    }
    r.report[c.alg->name()] = per;
  }
  return r;
}

// 7. Projective and injective modules coincide over the Frobenius algebras.
Result frobenius() {
  Result r;
  for (auto alg : {truncated(2, 2), truncated(2, 3), cyclic_group(2, 2)}) {
    ModuleCatalog cat(alg, 4);
    std::size_t proj = 0;
    for (const auto& m : cat.modules()) {
      const bool p = is_projective(m), i = is_injective(m);
      proj += p;
      r.require(p == i, alg->name() + ": projective and injective differ on a module of dim " +
                            std::to_string(m.dim()));
    }
    r.report[alg->name()] = {{"modules", cat.size()}, {"projective", proj}};
  }
  return r;
}

// 8. P1 over A1: projective, not injective, with a long nonzero coresolution.
Result quiver_witness() {
  Result r;
  auto alg = quiver_a1();
  auto p1 = projective_block(alg, 1).object;
  r.require(p1.dim() == 1 && is_isomorphic(p1, simple_at(alg, 1)).has_value(), "P1 is not the simple at vertex 1");
  r.require(is_projective(p1), "P1 not projective");
  r.require(!is_injective(p1), "P1 injective");
  AllInjectivesPair pair;
  Module m = p1;
  json dims = json::array();
  for (int step = 0; step < 10; ++step) {
    auto s = pair.resolve_right(m);
    r.require(validate_ses(s).ok() && is_injective(s.middle()), "coresolution step is not valid");
    m = s.right();
    dims.push_back(m.dim());
    r.require(m.dim() > 0, "cokernel " + std::to_string(step + 1) + " vanished");
  }
  r.report["cokernel_dims"] = dims;
  return r;
}

// 9. Span resolutions and splitting of P_Sp-by-I_Sp extensions.
Result spans() {
  Result r;
  struct Setting {
    AlgebraPtr alg;
    PairPtr pair;
  };
  std::vector<Setting> settings{{truncated(2, 2), make_pair(PairKind::AllInjectives)},
                                {quiver_a1(), make_pair(PairKind::ProjectivesAll)}};
  std::size_t resolved = 0, extensions = 0, nontrivial = 0;
  for (std::size_t k = 0; k < settings.size(); ++k) {
    const auto& st = settings[k];
    ModuleCatalog cat(st.alg, 2);
    SpanContext ctx(st.alg);
    std::mt19937_64 rng(6000 + k);
    for (int t = 0; t < 50; ++t) {
      auto x = random_span(rng, cat, 2);
      auto res = span_resolve_right(x, *st.pair);
      r.require(validate_span_ses(res).ok(), "span resolution is not exact");
      r.require(span_in_I(res.a, *st.pair) && span_in_P(res.b, *st.pair), "span resolution memberships fail");
      ++resolved;
    }
    for (int t = 0; t < 50; ++t) {
      const auto& s = span_resolve_right(random_span(rng, cat, 2), *st.pair).b;
      const auto& i = span_resolve_right(random_span(rng, cat, 2), *st.pair).a;
      auto e = ext1(ctx.encode(s), ctx.encode(i));
      r.require(e.dimension() == 0, "Ext^1 between P_Sp and I_Sp is nonzero");
      auto ses = realize_extension(e, random_hom(rng, e.omega.object, e.a));
      r.require(validate_ses(ses).ok() && is_split(ses), "extension of P_Sp by I_Sp does not split");
      nontrivial += s.dim() > 0 && i.dim() > 0;
      ++extensions;
    }
  }
  r.report = {{"resolutions", resolved}, {"extensions", extensions}, {"nontrivial_extensions", nontrivial}};
  return r;
}

// 10. Resolutions with terms in Z and P, and their precondition errors.
Result ladder() {
  Result r;
  auto check_output = [&](const std::string& tag, const WaldhausenData& w, const CotorsionPair& pp,
                          const Module& a, const std::vector<ShortExactSequence>& out, std::size_t length) {
    r.require(out.size() == length, tag + ": wrong length");
    for (std::size_t k = 0; k < out.size(); ++k) {
      r.require(validate_ses(out[k]).ok(), tag + ": sequence not exact");
      r.require(w.in_z(out[k].middle()) && pp.in_left(out[k].middle()), tag + ": middle outside Z and P");
      if (k + 1 < out.size()) r.require(out[k].right() == out[k + 1].left(), tag + ": sequences do not chain");
    }
    if (!out.empty()) r.require(is_isomorphic(out.back().right(), a).has_value(), tag + ": does not end in a");
  };
  auto expect_error = [&](const std::string& tag, const std::function<void()>& run, const std::string& message) {
    std::string got = "no error";
    try {
      run();
    } catch (const PreconditionError& e) {
      got = e.what();
    }
    r.report["errors"][tag] = got;
    r.require(got.find(message) != std::string::npos, tag + ": expected '" + message + "', got '" + got + "'");
  };

  auto her = Workspace::load(corpus_path("hereditary"));
  auto fx2 = Workspace::load(corpus_path("fx2"));
  auto world = [](const AlgebraPtr& alg, SubcategorySpec z) {
    ModuleCatalog cat(alg, 3);
    return WaldhausenData::validated(make_pair(PairKind::AllInjectives), std::move(z), cat, harvest_extensions(cat));
  };
  ProjectivesAllPair proj;
  AllInjectivesPair everything;  // P = all modules

  const auto& rec = her.resolution("proj_S0");
  const auto& s0 = her.module(rec.module);
  auto wh = world(s0.algebra(), SubcategorySpec::all());
  auto out = build_zp_resolution(wh, s0, rec.steps, proj);
  check_output("hereditary/proj_S0", wh, proj, s0, out, rec.steps.size());
  r.report["hereditary/proj_S0"] = out.size();

  const auto& rec2 = fx2.resolution("length2");
  const auto& a = fx2.module(rec2.module);
  auto wf = world(a.algebra(), SubcategorySpec::projectives());
  auto out2 = build_zp_resolution(wf, a, rec2.steps, everything);
  check_output("fx2/length2", wf, everything, a, out2, rec2.steps.size());
  r.report["fx2/length2"] = out2.size();
  r.require(build_zp_resolution(wh, her.module("P0"), {}, proj).empty(), "length 0 is not returned unchanged");

  const auto& bad = her.resolution("not_projective");
  expect_error("hereditary/not_projective", [&] { build_zp_resolution(wh, her.module(bad.module), bad.steps, proj); },
               "does not chain");
  expect_error("fx2/length2 with P = projectives", [&] { build_zp_resolution(wf, a, rec2.steps, proj); },
               "is not in P");
  const auto& chain = fx2.resolution("broken_chain");
  expect_error("fx2/broken_chain", [&] { build_zp_resolution(wf, a, chain.steps, everything); }, "does not chain");
  expect_error("hereditary/wrong end", [&] { build_zp_resolution(wh, her.module("P0"), rec.steps, proj); },
               "does not end in a");
  auto gate_closed = WaldhausenData::assume(make_pair(PairKind::AllInjectives), SubcategorySpec::all(), {});
  expect_error("hereditary/no 2-out-of-3", [&] { build_zp_resolution(gate_closed, s0, rec.steps, proj); },
               "lacks 2-out-of-3");
  return r;
}

// Reports of the CLI on fixed inputs, for the determinism comparison.
json cli_reports() {
  json out = json::object();
  const std::vector<std::vector<std::string>> runs{
      {"axioms", "--input", corpus_path("fx2"), "--samples", "20", "--seed", "11"},
      {"localize", "--input", corpus_path("fx3"), "--acyclics", "projectives"},
      {"factor", "--input", corpus_path("quiver_a1"), "--map", "top0"}};
  for (const auto& args : runs) {
    std::vector<std::string> a{"cotorsion"};
    a.insert(a.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : a) argv.push_back(s.data());
    std::ostringstream o, e;
    int code = run_command(static_cast<int>(argv.size()), argv.data(), o, e);
    out[args[0]] = {{"code", code}, {"output", o.str()}};
  }
  return out;
}

struct Criterion {
  int id;
  std::string title;
  std::function<Result()> run;
};

}  // namespace

int main() {
  std::vector<CorpusWorld> worlds;
  for (const auto& n : corpus_names()) worlds.push_back(corpus_world(n));

  const std::vector<Criterion> criteria{
      {1, "Ext^1 matches the brute-force oracle", ext_oracle},
      {2, "factorization contract on 500 maps per corpus algebra", [&] { return factorizations(worlds); }},
      {3, "lifting contract on 200 squares", [&] { return lifts(worlds); }},
      {4, "axiom checkers: no FAIL, corrupted predicate caught", axioms},
      {5, "dwsplit weak equivalences are the quasi-isomorphisms", quasi_isos},
      {6, "K0 localization Z -> Z -> Z/n -> 0, stable in the bound", localization},
      {7, "projectives and injectives agree over Frobenius algebras", frobenius},
      {8, "P1 over A1 has a nonvanishing injective coresolution", quiver_witness},
      {9, "span resolutions and split P_Sp-by-I_Sp extensions", spans},
      {10, "resolutions with terms in Z and P", ladder},
  };

  bool all = true;
  std::vector<std::string> first;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    first.push_back(r.to_json().dump());
    all = all && r.pass;
    std::printf("criterion %2d: %s  %s (%.1f s)\n", c.id, r.pass ? "PASS" : "FAIL", c.title.c_str(), secs);
    for (const auto& p : r.problems) std::printf("    %s\n", p.c_str());
    std::printf("    %s\n", r.to_json().dump().substr(0, 400).c_str());
    std::fflush(stdout);
  }

  // 11: everything again with the same seeds
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> mismatched;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Result r;
    try {
      r = criteria[k].run();
    } catch (const std::exception& e) {
      r.require(false, std::string("exception: ") + e.what());
    }
    if (r.to_json().dump() != first[k]) mismatched.push_back(std::to_string(criteria[k].id));
  }
  const auto cli1 = cli_reports().dump(), cli2 = cli_reports().dump();
  if (cli1 != cli2) mismatched.push_back("cli");
  const bool det = mismatched.empty();
  all = all && det;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("criterion 11: %s  repeated runs give byte-identical reports (%.1f s)\n", det ? "PASS" : "FAIL", secs);
  for (const auto& m : mismatched) std::printf("    differs: %s\n", m.c_str());
  return all ? 0 : 1;
}
