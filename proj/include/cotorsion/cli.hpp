#pragma once

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cotorsion/json_io.hpp"
#include "cotorsion/ktheory.hpp"
#include "cotorsion/oracle.hpp"
#include "cotorsion/sampling.hpp"

namespace cotorsion {

enum ExitCode : int { kOk = 0, kFailure = 1, kBudget = 2, kMalformed = 3 };

namespace cli {

struct Options {
  std::string input;
  std::uint64_t seed = 0;
  std::size_t dim_bound = 0;
  std::uint64_t budget = 0;
  bool oracle = false;
  std::string format = "json";
  bool seed_set = false, bound_set = false, budget_set = false;

  // subcommand arguments
  std::string map, module, c, a, i, p, top, bottom, span, target, complex, op, check, subcategory, acyclics, pair,
      pair_p, resolution;
  std::size_t samples = 300;
};

/// Result of one command: the report plus the exit code it implies.
struct Outcome {
  json report;
  int code = kOk;
  std::vector<std::string> diagrams;  // text mode only
};

/// Rows of exact sequences with the object columns aligned.
inline std::vector<std::string> aligned(const std::vector<std::vector<std::string>>& rows,
                                        const std::vector<std::string>& arrows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (width.size() <= k) width.push_back(0);
      width[k] = std::max(width[k], r[k].size());
    }
  std::vector<std::string> out;
  for (const auto& r : rows) {
    std::string s = "0 --> ";
    for (std::size_t k = 0; k < r.size(); ++k) {
      s += r[k] + std::string(width[k] - r[k].size(), ' ');
      s += k + 1 < r.size() ? " --" + arrows[k] + "--> " : " --> 0";
    }
    out.push_back(s);
  }
  return out;
}

inline std::string dim_label(const std::string& name, std::size_t d) { return name + "[" + std::to_string(d) + "]"; }

inline std::vector<std::string> ses_diagram(const std::vector<ShortExactSequence>& seqs, const std::string& l,
                                            const std::string& m, const std::string& r) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < seqs.size(); ++k) {
    const auto suffix = seqs.size() > 1 ? std::to_string(k) : "";
    rows.push_back({dim_label(l + suffix, seqs[k].left().dim()), dim_label(m + suffix, seqs[k].middle().dim()),
                    dim_label(r + suffix, seqs[k].right().dim())});
  }
  return aligned(rows, {"i", "p"});
}

inline void flatten(const json& j, const std::string& prefix, std::vector<std::string>& out) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  out.push_back(prefix + ": " + (j.is_string() ? j.get<std::string>() : j.dump()));
}

inline std::string render(const Outcome& o, const std::string& format) {
  if (format == "json") return o.report.dump(2) + "\n";
  std::string s;
  for (const auto& d : o.diagrams) s += d + "\n";
  if (!o.diagrams.empty()) s += "\n";
  std::vector<std::string> lines;
  flatten(o.report, "", lines);
  for (const auto& l : lines) s += l + "\n";
  return s;
}

// ---- shared setup --------------------------------------------------------

inline PairPtr parse_pair(const std::string& name) {
  if (name == "all-injectives") return make_pair(PairKind::AllInjectives);
  if (name == "projectives-all") return make_pair(PairKind::ProjectivesAll);
  throw MalformedInput("unknown cotorsion pair '" + name + "' (all-injectives | projectives-all)");
}

class Session {
 public:
  Session(const Options& o) : opt_(o) {
    if (o.input.empty()) throw MalformedInput("--input is required");
    ws_ = Workspace::load(o.input);
    seed_ = o.seed_set ? o.seed : ws_.config_number("seed", 0);
    bound_ = o.bound_set ? o.dim_bound : ws_.config_number("dim_bound", 4);
    budget_ = o.budget_set ? o.budget : ws_.config_number("budget", std::uint64_t{1} << 27);
  }

  const Workspace& ws() const { return ws_; }
  const Options& opt() const { return opt_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t bound() const { return bound_; }

  void require_valid() const {
    if (!ws_.failures.empty()) throw HypothesisError("workspace failed validation: " + ws_.failures.front());
  }

  AlgebraPtr algebra() const { return ws_.default_algebra(); }

  std::string pair_name() const { return opt_.pair.empty() ? ws_.config_string("pair", "all-injectives") : opt_.pair; }
  std::string z_name() const {
    return opt_.acyclics.empty() ? ws_.config_string("acyclics", "projectives") : opt_.acyclics;
  }

  const ModuleCatalog& catalog(const AlgebraPtr& alg) {
    if (!cat_ || cat_->algebra() != alg) {
      cat_ = std::make_unique<ModuleCatalog>(alg, bound_, budget_);
      harvest_.reset();
    }
    return *cat_;
  }
  const Harvest& harvest(const AlgebraPtr& alg) {
    catalog(alg);
    if (!harvest_) harvest_ = std::make_unique<Harvest>(harvest_extensions(*cat_));
    return *harvest_;
  }

  /// Waldhausen data validated on the catalog of the given algebra.
  WaldhausenData waldhausen(const AlgebraPtr& alg) {
    return WaldhausenData::validated(parse_pair(pair_name()), parse_subcategory(z_name()), catalog(alg),
                                     harvest(alg));
  }

  json hypotheses(const WaldhausenData& w) const {
    const auto& f = w.flags();
    return {{"pair", w.pair().name()},
            {"acyclics", z_name()},
            {"hereditary_checked", f.hereditary_checked},
            {"complete_checked", f.complete_checked},
            {"right_in_z_checked", f.right_in_z_checked},
            {"z_two_of_three", f.z_two_of_three ? json(*f.z_two_of_three) : json(nullptr)},
            {"sample_bound", f.sample_bound},
            {"sample_size", f.sample_size}};
  }

 private:
  Options opt_;
  Workspace ws_;
  std::uint64_t seed_ = 0, budget_ = 0;
  std::size_t bound_ = 4;
  std::unique_ptr<ModuleCatalog> cat_;
  std::unique_ptr<Harvest> harvest_;
};

inline const std::string& need(const std::string& v, const char* flag) {
  if (v.empty()) throw MalformedInput(std::string("missing ") + flag);
  return v;
}

// ---- commands ------------------------------------------------------------

inline Outcome cmd_validate(Session& s) {
  const auto& ws = s.ws();
  json counts = {{"algebras", ws.algebras.size()},     {"modules", ws.modules.size()},
                 {"morphisms", ws.morphisms.size()},   {"spans", ws.spans.size()},
                 {"span_maps", ws.span_maps.size()},   {"complexes", ws.complexes.size()},
                 {"chain_maps", ws.chain_maps.size()}, {"resolutions", ws.resolutions.size()}};
  Outcome o;
  o.report = {{"valid", ws.failures.empty()}, {"failures", ws.failures}, {"objects", counts}};
  o.code = ws.failures.empty() ? kOk : kFailure;
  return o;
}

inline Outcome cmd_ext(Session& s) {
  s.require_valid();
  const auto& c = s.ws().module(need(s.opt().c, "--c"));
  const auto& a = s.ws().module(need(s.opt().a, "--a"));
  auto e = ext1(c, a);
  Outcome o;
  o.report = {{"c", s.opt().c}, {"a", s.opt().a}, {"dimension", e.dimension()}};
  json reps = json::array();
  for (std::size_t k = 0; k < e.dimension(); ++k) {
    Vector coords(e.dimension(), 0);
    coords[k] = 1;
    auto ses = realize_extension(e, coords);
    reps.push_back(to_json(ses));
  }
  o.report["basis_extensions"] = reps;
  if (s.opt().oracle) {
    auto d = brute_force_ext_dimension(c, a);
    o.report["oracle_dimension"] = d;
    o.report["oracle_agrees"] = d == e.dimension();
    if (d != e.dimension()) o.code = kFailure;
  }
  return o;
}

inline Outcome cmd_class(Session& s) {
  s.require_valid();
  Outcome o;
  if (!s.opt().map.empty()) {
    const auto& f = s.ws().morphism(s.opt().map);
    auto w = s.waldhausen(f.dom().algebra());
    auto c = classify_map(w, f);
    o.report = {{"map", s.opt().map},
                {"admissible_mono", c.is_admissible_mono},
                {"admissible_epi", c.is_admissible_epi},
                {"cofibration", c.is_cofibration},
                {"acyclic_cofibration", c.is_acyclic_cofibration},
                {"acyclic_fibration", c.is_acyclic_fibration},
                {"hypotheses", s.hypotheses(w)}};
    return o;
  }
  const auto& m = s.ws().module(need(s.opt().module, "--module or --map"));
  const bool proj = is_projective(m), inj = is_injective(m);
  o.report = {{"module", s.opt().module}, {"dim", m.dim()}, {"is_projective", proj}, {"is_injective", inj}};
  if (s.opt().oracle) {
    // projective iff Ext^1(m, -) vanishes on the catalog, injective dually
    const auto& cat = s.catalog(m.algebra());
    bool ext_proj = true, ext_inj = true;
    for (const auto& x : cat.modules()) {
      if (x.dim() == 0) continue;
      ext_proj = ext_proj && ext1(m, x).dimension() == 0;
      ext_inj = ext_inj && ext1(x, m).dimension() == 0;
    }
    o.report["oracle"] = {{"ext_vanishing_projective", ext_proj},
                          {"ext_vanishing_injective", ext_inj},
                          {"catalog_bound", s.bound()},
                          {"agrees", ext_proj == proj && ext_inj == inj}};
    if (ext_proj != proj || ext_inj != inj) o.code = kFailure;
  }
  return o;
}

inline Outcome cmd_factor(Session& s) {
  s.require_valid();
  const auto& f = s.ws().morphism(need(s.opt().map, "--map"));
  auto w = s.waldhausen(f.dom().algebra());
  auto fac = factor(w, f);
  auto q = cokernel(fac.i).object;
  auto k = kernel(fac.p).object;
  Outcome o;
  const bool composes = compose(fac.p, fac.i) == f;
  const bool cof = w.pair().is_admissible_mono(fac.i) && w.in_c(q);
  const bool afib = w.pair().is_admissible_epi(fac.p) && w.in_c_perp(k);
  o.report = {{"map", s.opt().map},
              {"middle_dim", fac.middle.dim()},
              {"i", to_json(fac.i.matrix())},
              {"p", to_json(fac.p.matrix())},
              {"checks",
               {{"composes", composes}, {"i_cofibration", cof}, {"p_acyclic_fibration", afib},
                {"coker_i_dim", q.dim()}, {"ker_p_dim", k.dim()}}},
              {"hypotheses", s.hypotheses(w)}};
  o.diagrams = {"A[" + std::to_string(f.dom().dim()) + "] --i--> M[" + std::to_string(fac.middle.dim()) + "] --p--> B[" +
                std::to_string(f.cod().dim()) + "]"};
  if (!(composes && cof && afib)) o.code = kFailure;
  return o;
}

inline Outcome cmd_lift(Session& s) {
  s.require_valid();
  const auto& ws = s.ws();
  const auto& i = ws.morphism(need(s.opt().i, "--i"));
  const auto& p = ws.morphism(need(s.opt().p, "--p"));
  const auto& top = ws.morphism(need(s.opt().top, "--top"));
  const auto& bottom = ws.morphism(need(s.opt().bottom, "--bottom"));
  auto w = s.waldhausen(i.dom().algebra());
  auto ci = classify_map(w, i);
  auto cp = classify_map(w, p);
  if (!ci.is_cofibration) throw PreconditionError("--i is not a cofibration");
  if (!cp.is_acyclic_fibration) throw PreconditionError("--p is not an acyclic fibration");
  auto h = lift(i, p, top, bottom);
  Outcome o;
  o.report = {{"lift", to_json(h.matrix())},
              {"upper_triangle", compose(h, i) == top},
              {"lower_triangle", compose(p, h) == bottom}};
  return o;
}

inline Outcome cmd_weq(Session& s) {
  s.require_valid();
  const auto& f = s.ws().morphism(need(s.opt().map, "--map"));
  auto w = s.waldhausen(f.dom().algebra());
  Outcome o;
  o.report = {{"map", s.opt().map}, {"verdict", to_string(is_weak_equivalence(w, f))}, {"hypotheses", s.hypotheses(w)}};
  return o;
}

inline Outcome cmd_axioms(Session& s) {
  s.require_valid();
  auto alg = s.algebra();
  auto w = s.waldhausen(alg);
  std::vector<std::string> checks;
  const std::string c = s.opt().check.empty() ? "all" : s.opt().check;
  if (c == "all")
    checks = axiom_checks();
  else if (c == "properness")
    checks = {"properness-pushout", "properness-pullback"};
  else if (std::find(axiom_checks().begin(), axiom_checks().end(), c) != axiom_checks().end())
    checks = {c};
  else
    throw MalformedInput("unknown check '" + c + "'");
  auto sums = run_axiom_suite(w, s.catalog(alg), s.seed(), s.opt().samples, checks);
  Outcome o;
  json out = json::array();
  std::size_t fails = 0;
  for (const auto& x : sums) {
    json f = json::array();
    for (const auto& r : x.failures) f.push_back(r.to_json());
    out.push_back({{"check", x.check}, {"pass", x.pass}, {"fail", x.fail}, {"inapplicable", x.inapplicable},
                   {"failures", f}});
    fails += x.fail;
  }
  o.report = {{"seed", s.seed()}, {"samples_per_check", s.opt().samples}, {"suites", out},
              {"hypotheses", s.hypotheses(w)}, {"total_fail", fails}};
  if (fails) o.code = kFailure;
  return o;
}

inline json span_dims(const SpanObject& x) {
  return {{"left", x.left.dim()}, {"apex", x.apex.dim()}, {"right", x.right.dim()}};
}

inline Outcome cmd_span(Session& s) {
  s.require_valid();
  const auto& ws = s.ws();
  const std::string op = s.opt().op.empty() ? "membership" : s.opt().op;
  auto pair = parse_pair(s.pair_name());
  Outcome o;
  o.report = {{"op", op}, {"pair", pair->name()}};
  if (op == "membership") {
    const auto& x = ws.span(need(s.opt().span, "--span"));
    o.report["span"] = s.opt().span;
    o.report["dims"] = span_dims(x);
    o.report["in_P"] = span_in_P(x, *pair);
    o.report["in_I"] = span_in_I(x, *pair);
  } else if (op == "resolve" || op == "coresolve") {
    const auto& x = ws.span(need(s.opt().span, "--span"));
    auto r = op == "resolve" ? span_resolve_right(x, *pair) : span_coresolve(x, *pair);
    auto rep = validate_span_ses(r);
    o.report["span"] = s.opt().span;
    o.report["terms"] = {span_dims(r.a), span_dims(r.b), span_dims(r.c)};
    o.report["exact"] = rep.ok();
    o.report["failures"] = rep.failures;
    if (op == "resolve") {
      o.report["kernel_in_I"] = span_in_I(r.a, *pair);
      o.report["middle_in_P"] = span_in_P(r.b, *pair);
    } else {
      o.report["middle_in_I"] = span_in_I(r.b, *pair);
      o.report["cokernel_in_P"] = span_in_P(r.c, *pair);
    }
    std::vector<std::vector<std::string>> rows;
    rows.push_back({dim_label("left", r.a.left.dim()), dim_label("", r.b.left.dim()), dim_label("", r.c.left.dim())});
    rows.push_back({dim_label("apex", r.a.apex.dim()), dim_label("", r.b.apex.dim()), dim_label("", r.c.apex.dim())});
    rows.push_back({dim_label("right", r.a.right.dim()), dim_label("", r.b.right.dim()), dim_label("", r.c.right.dim())});
    o.diagrams = aligned(rows, {"i", "p"});
    if (!rep.ok()) o.code = kFailure;
  } else if (op == "factor") {
    const auto& m = ws.span_map(need(s.opt().map, "--map"));
    const auto& x = ws.span(m.dom);
    const auto& y = ws.span(m.cod);
    auto fac = span_factor(x, y, m.map, *pair);
    o.report["map"] = s.opt().map;
    o.report["middle"] = span_dims(fac.middle);
    o.report["i_cofibration"] = span_is_cofibration(x, fac.middle, fac.i, *pair);
    o.report["p_acyclic_fibration"] = span_is_acyclic_fibration(fac.middle, y, fac.p, *pair);
  } else if (op == "lift") {
    const auto& i = ws.span_map(need(s.opt().i, "--i"));
    const auto& p = ws.span_map(need(s.opt().p, "--p"));
    const auto& top = ws.span_map(need(s.opt().top, "--top"));
    const auto& bottom = ws.span_map(need(s.opt().bottom, "--bottom"));
    SpanContext ctx(ws.span(i.dom).apex.algebra());
    auto h = span_lift(ctx, ws.span(i.dom), ws.span(i.cod), ws.span(p.dom), ws.span(p.cod), i.map, p.map, top.map,
                       bottom.map, *pair);
    o.report["lift"] = {{"left", to_json(h.left.matrix())},
                        {"apex", to_json(h.apex.matrix())},
                        {"right", to_json(h.right.matrix())}};
  } else if (op == "ext") {
    const auto& x = ws.span(need(s.opt().span, "--span"));
    const auto& y = ws.span(need(s.opt().target, "--target"));
    SpanContext ctx(x.apex.algebra());
    o.report["dimension"] = span_ext_dimension(ctx, x, y);
  } else {
    throw MalformedInput("unknown span op '" + op + "'");
  }
  return o;
}

inline Outcome cmd_chain(Session& s) {
  s.require_valid();
  const auto& ws = s.ws();
  const std::string op = s.opt().op.empty() ? "homology" : s.opt().op;
  Outcome o;
  o.report = {{"op", op}};
  if (op == "homology" || op == "exact" || op == "contractible") {
    const auto& x = ws.complex(need(s.opt().complex, "--complex"));
    o.report["complex"] = s.opt().complex;
    if (op == "homology") {
      json h = json::object();
      for (int n = x.lo; n <= x.hi; ++n) h[std::to_string(n)] = homology(x, n).object.dim();
      o.report["homology_dims"] = h;
    } else if (op == "exact") {
      o.report["exact"] = is_exact(x);
    } else {
      o.report["contractible"] = is_contractible(x);
    }
  } else if (op == "qiso" || op == "weq") {
    const auto& f = ws.chain_map(need(s.opt().map, "--map")).map;
    o.report["map"] = s.opt().map;
    const bool q = is_quasi_iso(f);
    const auto v = dwsplit_weq(f);
    o.report["is_quasi_iso"] = q;
    o.report["dwsplit_weq"] = to_string(v);
    o.report["agree"] = (v == WeVerdict::Yes) == q;
    if ((v == WeVerdict::Yes) != q) o.code = kFailure;
  } else {
    throw MalformedInput("unknown chain op '" + op + "'");
  }
  return o;
}

inline Outcome cmd_k0(Session& s) {
  s.require_valid();
  auto alg = s.algebra();
  const auto& cat = s.catalog(alg);
  const auto& h = s.harvest(alg);
  Outcome o;
  if (!s.opt().acyclics.empty()) {
    auto w = s.waldhausen(alg);
    auto k = k0_waldhausen(w, cat, h);
    o.report = {{"kind", "waldhausen"}, {"presentation", k.to_json()}, {"hypotheses", s.hypotheses(w)}};
  } else {
    const std::string c = s.opt().subcategory.empty() ? "all" : s.opt().subcategory;
    auto k = k0_exact_category(cat, h, parse_subcategory(c));
    o.report = {{"kind", "exact"}, {"subcategory", c}, {"presentation", k.to_json()}};
  }
  o.report["dim_bound"] = s.bound();
  return o;
}

inline Outcome cmd_localize(Session& s) {
  s.require_valid();
  auto alg = s.algebra();
  const std::string a = s.opt().acyclics.empty() ? s.ws().config_string("acyclics", "projectives") : s.opt().acyclics;
  auto r = localization_k0_report(s.catalog(alg), s.harvest(alg), parse_subcategory(a));
  Outcome o;
  o.report = r.to_json();
  o.report["acyclics"] = a;
  o.report["dim_bound"] = s.bound();
  o.diagrams = {"K0(A) = " + r.ka.group + " --> K0(B) = " + r.kb.group + " --> K0(B,w) = " + r.kbwa.group + " --> 0"};
  if (!r.exact()) o.code = kFailure;
  return o;
}

inline Outcome cmd_resolve_zp(Session& s) {
  s.require_valid();
  const auto& rec = s.ws().resolution(need(s.opt().resolution, "--resolution"));
  const auto& a = s.ws().module(rec.module);
  auto w = s.waldhausen(a.algebra());
  auto pp = parse_pair(s.opt().pair_p.empty() ? "projectives-all" : s.opt().pair_p);
  auto out = build_zp_resolution(w, a, rec.steps, *pp);
  Outcome o;
  json seqs = json::array();
  for (const auto& x : out) seqs.push_back(to_json(x));
  o.report = {{"resolution", s.opt().resolution}, {"length", out.size()}, {"sequences", seqs},
              {"hypotheses", s.hypotheses(w)}};
  o.diagrams = ses_diagram(out, "K", "Q", "C");
  return o;
}

inline Outcome cmd_enumerate(Session& s) {
  s.require_valid();
  auto alg = s.algebra();
  const auto& cat = s.catalog(alg);
  json mods = json::array();
  for (std::size_t k = 0; k < cat.size(); ++k) {
    const auto& m = cat[k];
    mods.push_back({{"index", k},
                    {"dim", m.dim()},
                    {"dimension_vector", m.dimension_vector()},
                    {"digest", module_digest(m)},
                    {"is_projective", m.dim() > 0 && is_projective(m)},
                    {"is_injective", m.dim() > 0 && is_injective(m)}});
  }
  Outcome o;
  o.report = {{"algebra", alg->name()}, {"dim_bound", s.bound()}, {"count", cat.size()},
              {"candidates_visited", cat.candidates_visited()}, {"modules", mods}};
  return o;
}

}  // namespace cli

/// Runs one command line; writes the report to `out` and returns the exit
/// code (0 ok, 1 validation or hypothesis failure, 2 budget, 3 malformed).
inline int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace cli;
  Options o;
  CLI::App app{"Cotorsion pairs, Waldhausen structures and K0 over finite-dimensional algebras"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--input", o.input, "JSON workspace");
  auto* seed = app.add_option("--seed", o.seed, "random seed");
  auto* bound = app.add_option("--dim-bound", o.dim_bound, "module enumeration bound");
  auto* budget = app.add_option("--budget", o.budget, "enumeration budget");
  app.add_flag("--oracle", o.oracle, "cross-check with brute force");
  app.add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  using Fn = Outcome (*)(Session&);
  std::vector<std::pair<CLI::App*, Fn>> cmds;
  auto sub = [&](const char* name, const char* help, Fn fn) {
    auto* c = app.add_subcommand(name, help);
    cmds.push_back({c, fn});
    return c;
  };
  sub("validate", "validate every object in the workspace", cmd_validate);
  auto* ext = sub("ext", "dimension of Ext^1(c, a)", cmd_ext);
  ext->add_option("--c", o.c);
  ext->add_option("--a", o.a);
  auto* cls = sub("class", "projectivity / injectivity of a module, or classify a map", cmd_class);
  cls->add_option("--module", o.module);
  cls->add_option("--map", o.map);
  cls->add_option("--pair", o.pair);
  cls->add_option("--acyclics", o.acyclics);
  auto* fac = sub("factor", "cofibration / acyclic fibration factorization", cmd_factor);
  fac->add_option("--map", o.map);
  fac->add_option("--pair", o.pair);
  auto* lf = sub("lift", "lift in a commutative square", cmd_lift);
  for (auto* c : {lf}) {
    c->add_option("--i", o.i);
    c->add_option("--p", o.p);
    c->add_option("--top", o.top);
    c->add_option("--bottom", o.bottom);
    c->add_option("--pair", o.pair);
  }
  auto* weq = sub("weq", "weak equivalence verdict", cmd_weq);
  weq->add_option("--map", o.map);
  weq->add_option("--pair", o.pair);
  weq->add_option("--acyclics", o.acyclics);
  auto* ax = sub("axioms", "randomized Waldhausen axiom checks", cmd_axioms);
  ax->add_option("--check", o.check, "all, gluing, extension, saturation, properness, ...");
  ax->add_option("--samples", o.samples);
  ax->add_option("--pair", o.pair);
  ax->add_option("--acyclics", o.acyclics);
  auto* sp = sub("span", "span category operations", cmd_span);
  sp->add_option("--op", o.op, "membership, resolve, coresolve, factor, lift, ext");
  sp->add_option("--span", o.span);
  sp->add_option("--target", o.target);
  sp->add_option("--map", o.map);
  sp->add_option("--i", o.i);
  sp->add_option("--p", o.p);
  sp->add_option("--top", o.top);
  sp->add_option("--bottom", o.bottom);
  sp->add_option("--pair", o.pair);
  auto* ch = sub("chain", "chain complex operations", cmd_chain);
  ch->add_option("--op", o.op, "homology, exact, contractible, qiso, weq");
  ch->add_option("--complex", o.complex);
  ch->add_option("--map", o.map);
  auto* k0 = sub("k0", "Grothendieck group presentation", cmd_k0);
  k0->add_option("--subcategory", o.subcategory);
  k0->add_option("--acyclics", o.acyclics, "compute the Waldhausen K0 with these acyclics");
  k0->add_option("--pair", o.pair);
  auto* loc = sub("localize", "K0 localization sequence", cmd_localize);
  loc->add_option("--acyclics", o.acyclics);
  auto* zp = sub("resolve-zp", "resolution with terms in Z and P", cmd_resolve_zp);
  zp->add_option("--resolution", o.resolution);
  zp->add_option("--pair", o.pair);
  zp->add_option("--pair-p", o.pair_p);
  zp->add_option("--acyclics", o.acyclics);
  sub("enumerate", "isomorphism classes up to the dimension bound", cmd_enumerate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << e.what() << "\n";
    return kMalformed;
  }
  o.seed_set = seed->count() > 0;
  o.bound_set = bound->count() > 0;
  o.budget_set = budget->count() > 0;

  auto report_error = [&](const char* kind, const std::string& msg, int code) {
    Outcome r;
    r.report = {{"error", {{"kind", kind}, {"message", msg}}}};
    out << render(r, o.format);
    return code;
  };
  try {
    Session session(o);
    for (const auto& [c, fn] : cmds)
      if (c->parsed()) {
        auto r = fn(session);
        out << render(r, o.format);
        return r.code;
      }
    return kMalformed;
  } catch (const BudgetExceeded& e) {
    return report_error("budget_exceeded", e.what(), kBudget);
  } catch (const MalformedInput& e) {
    return report_error("malformed_input", e.what(), kMalformed);
  } catch (const DimensionMismatch& e) {
    return report_error("malformed_input", e.what(), kMalformed);
  } catch (const ParentMismatch& e) {
    return report_error("malformed_input", e.what(), kMalformed);
  } catch (const json::exception& e) {
    return report_error("malformed_input", e.what(), kMalformed);
  } catch (const HypothesisError& e) {
    return report_error("hypothesis_failure", e.what(), kFailure);
  } catch (const PreconditionError& e) {
    return report_error("precondition_failure", e.what(), kFailure);
  } catch (const InternalInconsistency& e) {
    return report_error("internal_inconsistency", e.what(), kFailure);
  }
}

inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"cotorsion"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_command(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cotorsion
