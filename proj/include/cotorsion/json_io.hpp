#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cotorsion/chain.hpp"
#include "cotorsion/spans.hpp"

namespace cotorsion {

using nlohmann::json;

inline json to_json(const FieldMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const Module& m) {
  json act = json::array();
  for (const auto& a : m.action()) act.push_back(to_json(a));
  return {{"dim", m.dim()}, {"action", act}};
}

inline json to_json(const Morphism& f) {
  return {{"dom_dim", f.dom().dim()}, {"cod_dim", f.cod().dim()}, {"matrix", to_json(f.matrix())}};
}

inline json to_json(const ShortExactSequence& s) {
  return {{"dims", {s.left().dim(), s.middle().dim(), s.right().dim()}},
          {"i", to_json(s.i.matrix())},
          {"p", to_json(s.p.matrix())},
          {"split", is_split(s)}};
}

struct SpanMap {
  std::string dom, cod;
  SpanMorphism map;
};

struct ChainMapRecord {
  std::string dom, cod;
  ChainMap map;
};

/// A finite resolution of `module`, stored as the sequences
/// 0 -> P_n -> P_{n-1} -> C_{n-1} -> 0, ..., 0 -> C_1 -> P_0 -> module -> 0.
struct ResolutionRecord {
  std::string module;
  std::vector<ShortExactSequence> steps;
};

namespace detail {

inline std::size_t natural(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw MalformedInput(what + " must be a non-negative integer");
  return j.get<std::size_t>();
}

inline int integer(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw MalformedInput(what + " must be an integer");
  return j.get<int>();
}

inline const std::string& text(const json& j, const std::string& what) {
  if (!j.is_string()) throw MalformedInput(what + " must be a string");
  return j.get_ref<const std::string&>();
}

inline const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw MalformedInput(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline Residue residue(const json& j, Residue p, const std::string& where) {
  if (!j.is_number_integer()) throw MalformedInput(where + ": entries must be integers");
  auto v = j.get<long long>();
  if (v < 0 || v >= static_cast<long long>(p))
    throw MalformedInput(where + ": entry " + std::to_string(v) + " is not reduced mod " + std::to_string(p));
  return static_cast<Residue>(v);
}

inline FieldMatrix matrix(const json& j, Residue p, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!j.is_array() || j.size() != rows)
    throw MalformedInput(where + ": expected " + std::to_string(rows) + " rows");
  FieldMatrix m(p, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw MalformedInput(where + ": row " + std::to_string(r) + " needs " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = residue(j[r][c], p, where);
  }
  return m;
}

inline void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw MalformedInput(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* x : keys) ok = ok || k == x;
    if (!ok) throw MalformedInput(where + ": unknown field '" + k + "'");
  }
}

}  // namespace detail

/// Named algebras, modules, maps, spans and complexes loaded from one JSON
/// document. Structural problems (bad shapes, unknown ids, unreduced
/// entries) raise MalformedInput; mathematical ones (non-associative
/// structure, non-module maps, d^2 != 0) are collected in `failures`.
class Workspace {
 public:
  std::map<std::string, AlgebraPtr> algebras;
  std::map<std::string, Module> modules;
  std::map<std::string, Morphism> morphisms;
  std::map<std::string, SpanObject> spans;
  std::map<std::string, SpanMap> span_maps;
  std::map<std::string, ChainComplex> complexes;
  std::map<std::string, ChainMapRecord> chain_maps;
  std::map<std::string, ResolutionRecord> resolutions;
  json config = json::object();
  std::vector<std::string> failures;

  static Workspace load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot read '" + path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw MalformedInput(std::string("invalid JSON: ") + e.what());
    }
    return parse(j);
  }

  static Workspace parse(const json& j) {
    detail::only_keys(j,
                      {"description", "config", "algebras", "modules", "morphisms", "spans", "span_maps", "complexes",
                       "chain_maps", "resolutions"},
                      "workspace");
    Workspace w;
    auto section = [&](const char* key) { return j.contains(key) ? j.at(key) : json::object(); };
    if (j.contains("config")) {
      w.config = j.at("config");
      detail::only_keys(w.config, {"algebra", "pair", "acyclics", "dim_bound", "seed", "budget"}, "config");
    }
    const json algebras = section("algebras");
    for (const auto& [id, a] : algebras.items()) w.add_algebra(id, a);
    const json modules = section("modules");
    for (const auto& [id, m] : modules.items()) w.add_module(id, m);
    const json morphisms = section("morphisms");
    for (const auto& [id, f] : morphisms.items()) w.add_morphism(id, f);
    const json spans = section("spans");
    for (const auto& [id, s] : spans.items()) w.add_span(id, s);
    const json span_maps = section("span_maps");
    for (const auto& [id, s] : span_maps.items()) w.add_span_map(id, s);
    const json complexes = section("complexes");
    for (const auto& [id, c] : complexes.items()) w.add_complex(id, c);
    const json chain_maps = section("chain_maps");
    for (const auto& [id, c] : chain_maps.items()) w.add_chain_map(id, c);
    const json resolutions = section("resolutions");
    for (const auto& [id, r] : resolutions.items()) w.add_resolution(id, r);
    if (w.config.contains("algebra")) w.algebra(detail::text(w.config["algebra"], "config.algebra"));
    return w;
  }

  const AlgebraPtr& algebra(const std::string& id) const { return lookup(algebras, id, "algebra"); }
  const Module& module(const std::string& id) const { return lookup(modules, id, "module"); }
  const Morphism& morphism(const std::string& id) const { return lookup(morphisms, id, "morphism"); }
  const SpanObject& span(const std::string& id) const { return lookup(spans, id, "span"); }
  const SpanMap& span_map(const std::string& id) const { return lookup(span_maps, id, "span map"); }
  const ChainComplex& complex(const std::string& id) const { return lookup(complexes, id, "complex"); }
  const ChainMapRecord& chain_map(const std::string& id) const { return lookup(chain_maps, id, "chain map"); }
  const ResolutionRecord& resolution(const std::string& id) const { return lookup(resolutions, id, "resolution"); }

  /// config.algebra, or the only algebra in the workspace.
  AlgebraPtr default_algebra() const {
    if (config.contains("algebra")) return algebra(config["algebra"].get<std::string>());
    if (algebras.size() == 1) return algebras.begin()->second;
    throw MalformedInput("workspace has several algebras and no config.algebra");
  }

  std::string config_string(const char* key, const std::string& fallback) const {
    return config.contains(key) ? detail::text(config[key], std::string("config.") + key) : fallback;
  }
  std::uint64_t config_number(const char* key, std::uint64_t fallback) const {
    return config.contains(key) ? detail::natural(config[key], std::string("config.") + key) : fallback;
  }

 private:
  template <class M>
  static const typename M::mapped_type& lookup(const M& m, const std::string& id, const char* kind) {
    auto it = m.find(id);
    if (it == m.end()) throw MalformedInput(std::string("unknown ") + kind + " '" + id + "'");
    return it->second;
  }

  void fail(const std::string& where, const ValidationReport& r) {
    for (const auto& f : r.failures) failures.push_back(where + ": " + f);
  }

  void add_algebra(const std::string& id, const json& a) {
    const std::string where = "algebra " + id;
    const auto p = static_cast<Residue>(detail::natural(detail::field(a, "p", where), where + ".p"));
    if (!is_prime(p)) throw MalformedInput(where + ": p must be prime");
    AlgebraPtr alg;
    if (a.contains("quiver")) {
      detail::only_keys(a, {"p", "quiver", "description"}, where);
      alg = algebra_from_quiver(p, parse_quiver(a.at("quiver"), p, where), id);
    } else {
      detail::only_keys(a, {"p", "dim", "structure", "unit", "description"}, where);
      const auto n = detail::natural(detail::field(a, "dim", where), where + ".dim");
      const auto& s = detail::field(a, "structure", where);
      if (!s.is_array() || s.size() != n) throw MalformedInput(where + ": structure must be dim x dim x dim");
      std::vector<Residue> c;
      for (std::size_t i = 0; i < n; ++i) {
        auto rows = detail::matrix(s[i], p, n, n, where + ".structure");
        auto e = rows.entries();
        c.insert(c.end(), e.begin(), e.end());
      }
      const auto& u = detail::field(a, "unit", where);
      if (!u.is_array() || u.size() != n) throw MalformedInput(where + ": unit must have length dim");
      Vector unit;
      for (const auto& x : u) unit.push_back(detail::residue(x, p, where + ".unit"));
      alg = std::make_shared<const Algebra>(p, n, std::move(c), std::move(unit), id);
    }
    fail(where, validate_algebra(*alg));
    algebras[id] = alg;
  }

  static QuiverPresentation parse_quiver(const json& q, Residue p, const std::string& where) {
    detail::only_keys(q, {"vertices", "arrows", "relations", "nil_bound"}, where + ".quiver");
    QuiverPresentation out;
    out.vertices = detail::natural(detail::field(q, "vertices", where), where + ".vertices");
    out.nil_bound = detail::natural(detail::field(q, "nil_bound", where), where + ".nil_bound");
    if (out.nil_bound < 2) throw MalformedInput(where + ": nil_bound must be at least 2");
    for (const auto& a : detail::field(q, "arrows", where)) {
      QuiverArrow arr;
      arr.source = detail::natural(detail::field(a, "source", where), where + " arrow source");
      arr.target = detail::natural(detail::field(a, "target", where), where + " arrow target");
      arr.label = a.contains("label") ? detail::text(a["label"], "label") : "a" + std::to_string(out.arrows.size());
      if (arr.source >= out.vertices || arr.target >= out.vertices)
        throw MalformedInput(where + ": arrow " + arr.label + " leaves the vertex range");
      out.arrows.push_back(arr);
    }
    auto arrow_index = [&](const json& x) -> std::size_t {
      if (x.is_number_integer()) {
        auto k = detail::natural(x, "arrow index");
        if (k >= out.arrows.size()) throw MalformedInput(where + ": arrow index out of range");
        return k;
      }
      const auto& s = detail::text(x, "arrow");
      for (std::size_t k = 0; k < out.arrows.size(); ++k)
        if (out.arrows[k].label == s) return k;
      throw MalformedInput(where + ": unknown arrow '" + s + "'");
    };
    auto path = [&](const json& x) {
      if (!x.is_array() || x.empty()) throw MalformedInput(where + ": relation paths must be non-empty arrays");
      std::vector<std::size_t> out_path;
      for (const auto& e : x) out_path.push_back(arrow_index(e));
      return out_path;
    };
    if (q.contains("relations"))
      for (const auto& rel : q.at("relations")) {
        std::vector<PathTerm> terms;
        // ["a", "b"] is shorthand for the single path a then b
        if (rel.is_array() && !rel.empty() && !rel[0].is_object()) {
          terms.push_back({1, path(rel)});
        } else {
          for (const auto& t : rel) {
            PathTerm term;
            term.coeff = t.contains("coeff") ? detail::residue(t["coeff"], p, where + " relation") : 1;
            term.arrows = path(detail::field(t, "path", where + " relation"));
            terms.push_back(term);
          }
        }
        for (const auto& t : terms)
          for (std::size_t k = 1; k < t.arrows.size(); ++k)
            if (out.arrows[t.arrows[k - 1]].target != out.arrows[t.arrows[k]].source)
              throw MalformedInput(where + ": relation path is not composable");
        out.relations.push_back(terms);
      }
    return out;
  }

  void add_module(const std::string& id, const json& m) {
    const std::string where = "module " + id;
    const auto& alg = algebra(detail::text(detail::field(m, "algebra_id", where), where + ".algebra_id"));
    Module mod;
    if (m.contains("construct")) {
      // generated modules: regular, dual_regular, projective/injective block
      detail::only_keys(m, {"algebra_id", "construct", "block", "description"}, where);
      const auto& kind = detail::text(m["construct"], where + ".construct");
      auto block = [&] {
        auto b = m.contains("block") ? detail::natural(m["block"], where + ".block") : 0;
        if (b >= alg->blocks().size()) throw MalformedInput(where + ": block out of range");
        return b;
      };
      if (kind == "regular")
        mod = regular_module(alg);
      else if (kind == "dual_regular")
        mod = dual_regular_module(alg);
      else if (kind == "projective")
        mod = projective_block(alg, block()).object;
      else if (kind == "injective")
        mod = injective_block(alg, block()).object;
      else
        throw MalformedInput(where + ": unknown construction '" + kind + "'");
    } else {
      detail::only_keys(m, {"algebra_id", "dim", "action", "description"}, where);
      const auto n = detail::natural(detail::field(m, "dim", where), where + ".dim");
      const auto& act = detail::field(m, "action", where);
      if (!act.is_array() || act.size() != alg->dim())
        throw MalformedInput(where + ": action needs one matrix per algebra basis element");
      std::vector<FieldMatrix> mats;
      for (const auto& a : act) mats.push_back(detail::matrix(a, alg->p(), n, n, where + ".action"));
      mod = Module(alg, n, std::move(mats));
    }
    fail(where, validate_module(mod));
    modules[id] = mod;
  }

  void add_morphism(const std::string& id, const json& f) {
    const std::string where = "morphism " + id;
    detail::only_keys(f, {"dom_id", "cod_id", "matrix", "description"}, where);
    const auto& d = module(detail::text(detail::field(f, "dom_id", where), where + ".dom_id"));
    const auto& c = module(detail::text(detail::field(f, "cod_id", where), where + ".cod_id"));
    if (d.algebra() != c.algebra()) throw MalformedInput(where + ": ends over different algebras");
    Morphism mor(d, c, detail::matrix(detail::field(f, "matrix", where), d.p(), c.dim(), d.dim(), where));
    if (!is_module_map(mor)) failures.push_back(where + ": matrix does not commute with the action");
    morphisms[id] = mor;
  }

  const Morphism& ref_morphism(const json& j, const char* key, const std::string& where) const {
    return morphism(detail::text(detail::field(j, key, where), where + "." + key));
  }

  void add_span(const std::string& id, const json& s) {
    const std::string where = "span " + id;
    detail::only_keys(s, {"left", "apex", "right", "g", "f", "description"}, where);
    SpanObject x{module(detail::text(detail::field(s, "left", where), where)),
                 module(detail::text(detail::field(s, "apex", where), where)),
                 module(detail::text(detail::field(s, "right", where), where)), ref_morphism(s, "g", where),
                 ref_morphism(s, "f", where)};
    if (!(x.g.dom() == x.apex) || !(x.g.cod() == x.left) || !(x.f.dom() == x.apex) || !(x.f.cod() == x.right))
      throw MalformedInput(where + ": legs do not match the named objects");
    if (!span_valid(x)) failures.push_back(where + ": legs are not module maps");
    spans[id] = x;
  }

  void add_span_map(const std::string& id, const json& s) {
    const std::string where = "span map " + id;
    detail::only_keys(s, {"dom_id", "cod_id", "left", "apex", "right", "description"}, where);
    SpanMap m{detail::text(detail::field(s, "dom_id", where), where), detail::text(detail::field(s, "cod_id", where), where),
              {ref_morphism(s, "left", where), ref_morphism(s, "apex", where), ref_morphism(s, "right", where)}};
    const auto& x = span(m.dom);
    const auto& y = span(m.cod);
    if (!(m.map.left.dom() == x.left) || !(m.map.apex.dom() == x.apex) || !(m.map.right.dom() == x.right) ||
        !(m.map.left.cod() == y.left) || !(m.map.apex.cod() == y.apex) || !(m.map.right.cod() == y.right))
      throw MalformedInput(where + ": components do not match the spans");
    if (!span_natural(x, y, m.map)) failures.push_back(where + ": components do not commute with the legs");
    span_maps[id] = m;
  }

  void add_complex(const std::string& id, const json& c) {
    const std::string where = "complex " + id;
    detail::only_keys(c, {"lo", "hi", "objects", "differentials", "description"}, where);
    ChainComplex x;
    x.lo = detail::integer(detail::field(c, "lo", where), where + ".lo");
    x.hi = detail::integer(detail::field(c, "hi", where), where + ".hi");
    if (x.hi < x.lo) throw MalformedInput(where + ": hi < lo");
    const auto& objs = detail::field(c, "objects", where);
    const auto& diffs = detail::field(c, "differentials", where);
    const auto len = static_cast<std::size_t>(x.hi - x.lo + 1);
    if (!objs.is_array() || objs.size() != len) throw MalformedInput(where + ": need one object per degree");
    if (!diffs.is_array() || diffs.size() + 1 != len) throw MalformedInput(where + ": need hi - lo differentials");
    for (const auto& o : objs) x.objects.push_back(module(detail::text(o, where)));
    for (const auto& d : diffs) x.differentials.push_back(morphism(detail::text(d, where)));
    for (std::size_t k = 0; k < x.differentials.size(); ++k)
      if (!(x.differentials[k].dom() == x.objects[k + 1]) || !(x.differentials[k].cod() == x.objects[k]))
        throw MalformedInput(where + ": differential " + std::to_string(k) + " has the wrong ends");
    fail(where, validate_complex(x));
    complexes[id] = x;
  }

  void add_chain_map(const std::string& id, const json& c) {
    const std::string where = "chain map " + id;
    detail::only_keys(c, {"dom_id", "cod_id", "components", "first", "description"}, where);
    ChainMapRecord r;
    r.dom = detail::text(detail::field(c, "dom_id", where), where);
    r.cod = detail::text(detail::field(c, "cod_id", where), where);
    const auto& x = complex(r.dom);
    const auto& y = complex(r.cod);
    const int first = c.contains("first") ? detail::integer(c["first"], where + ".first") : std::min(x.lo, y.lo);
    std::vector<Morphism> comps;
    for (const auto& m : detail::field(c, "components", where)) comps.push_back(morphism(detail::text(m, where)));
    for (std::size_t k = 0; k < comps.size(); ++k) {
      const int n = first + static_cast<int>(k);
      if (!(comps[k].dom() == x.object(n)) || !(comps[k].cod() == y.object(n)))
        throw MalformedInput(where + ": component in degree " + std::to_string(n) + " has the wrong ends");
    }
    r.map = cotorsion::chain_map(x, y, comps, first);
    fail(where, validate_chain_map(r.map));
    chain_maps[id] = r;
  }

  void add_resolution(const std::string& id, const json& r) {
    const std::string where = "resolution " + id;
    detail::only_keys(r, {"module", "steps", "description"}, where);
    ResolutionRecord out;
    out.module = detail::text(detail::field(r, "module", where), where);
    module(out.module);
    for (const auto& s : detail::field(r, "steps", where))
      out.steps.push_back({ref_morphism(s, "i", where), ref_morphism(s, "p", where)});
    resolutions[id] = out;
  }
};

}  // namespace cotorsion
