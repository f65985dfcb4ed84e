#pragma once

// JSON documents for expressions, F-structures, systems and distance
// matrices; CSV output for matrices. Schema: see README.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "behametric/coalgebra.hpp"
#include "behametric/errors.hpp"
#include "behametric/fixpoint.hpp"
#include "behametric/functor.hpp"
#include "behametric/numerics.hpp"
#include "behametric/pseudometric.hpp"

namespace behametric::io {

using json = nlohmann::ordered_json;

/// Named constant spaces available to an expression.
using SpaceMap = std::map<std::string, PseudometricTable, std::less<>>;

struct LoadOptions {
  NumericMode mode = NumericMode::floating();
  Parameters overrides;  // win over the document's "parameters"
};

namespace detail {

inline std::string key_path(const std::string& path, const std::string& key) { return path + "." + key; }
inline std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

/// A rational, "inf", or an arithmetic expression over parameters, as a
/// JSON string or number.
inline std::string scalar_text(const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return j.dump();
  throw ValidationError("expected a number or a string", path);
}

inline Value value(const json& j, const NumericMode& mode, const Parameters& params, const std::string& path) {
  try {
    return parse_value(scalar_text(j, path), mode, params);
  } catch (const ValidationError& e) {
    throw ValidationError(e.what(), path);
  } catch (const ConfigurationError& e) {
    throw ValidationError(e.what(), path);
  }
}

inline Rational rational(const json& j, const Parameters& params, const std::string& path) {
  try {
    return evaluate_expression(scalar_text(j, path), params);
  } catch (const ValidationError& e) {
    throw ValidationError(e.what(), path);
  }
}

inline const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'", path);
  return j.at(key);
}

inline std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError("expected a string", path);
  return j.get<std::string>();
}

}  // namespace detail

inline TopBound parse_top(const json& j, const Parameters& params, const std::string& path) {
  std::string text = detail::scalar_text(j, path);
  if (text == "inf" || text == "infinity" || text == "∞") return TopBound::infinite();
  Rational q = detail::rational(j, params, path);
  if (sgn(q) <= 0) throw ValidationError("top must be positive", path);
  return TopBound::finite(q);
}

inline json top_to_json(const TopBound& top) { return top.to_string(); }

inline Parameters parse_parameters(const json& doc, const Parameters& overrides) {
  Parameters params;
  if (doc.is_object() && doc.contains("parameters")) {
    const json& p = doc.at("parameters");
    if (!p.is_object()) throw ValidationError("expected an object", "$.parameters");
    for (const auto& [k, v] : p.items()) params[k] = detail::rational(v, params, "$.parameters." + k);
  }
  for (const auto& [k, v] : overrides) params[k] = v;
  return params;
}

/// {"points": [...]} is a subset of [0, ⊤] with the Euclidean distance;
/// {"atoms": [...], "distances": [[...]]} is an explicit table.
inline PseudometricTable parse_space(const std::string& name, const json& j, const TopBound& top, const Parameters& params,
                                     const std::string& path) {
  if (j.is_object() && j.contains("points")) {
    const json& pts = j.at("points");
    if (!pts.is_array()) throw ValidationError("expected an array", detail::key_path(path, "points"));
    std::vector<Value> points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      points.push_back(detail::value(pts[i], NumericMode::exact(), params, detail::index_path(detail::key_path(path, "points"), i)));
    }
    try {
      return PseudometricTable::euclidean(name, points, top);
    } catch (const Error& e) {
      throw ValidationError(e.what(), path);
    }
  }
  const json& atoms_j = detail::member(j, "atoms", path);
  const json& dist_j = detail::member(j, "distances", path);
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < atoms_j.size(); ++i) atoms.push_back(detail::string_at(atoms_j[i], detail::index_path(path + ".atoms", i)));
  if (!dist_j.is_array() || dist_j.size() != atoms.size()) throw ValidationError("expected one row per atom", path + ".distances");
  std::vector<Value> entries;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string row_path = detail::index_path(path + ".distances", i);
    if (!dist_j[i].is_array() || dist_j[i].size() != atoms.size()) throw ValidationError("expected one entry per atom", row_path);
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      entries.push_back(detail::value(dist_j[i][k], NumericMode::exact(), params, detail::index_path(row_path, k)));
    }
  }
  try {
    return PseudometricTable(name, std::move(atoms), std::move(entries), top);
  } catch (const ValidationError& e) {
    throw ValidationError(e.what(), path);
  }
}

inline json space_to_json(const PseudometricTable& t) {
  json atoms = json::array();
  for (const auto& a : t.atoms()) atoms.push_back(a);
  json rows = json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < t.size(); ++k) row.push_back(t.at(i, k).to_string());
    rows.push_back(std::move(row));
  }
  return {{"atoms", std::move(atoms)}, {"distances", std::move(rows)}};
}

/// "id" | {"id": {"discount": c}} | {"dist": e} | {"finpow": e} |
/// {"diagsquare": e} | {"product": [l, r], "eval": "max" | {"pnorm": {...}}} |
/// {"coproduct": [l, r]} | {"const": name}
inline FunctorExpr parse_expr(const json& j, const SpaceMap& spaces, const TopBound& top, const Parameters& params,
                              const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "id") return FunctorExpr::id();
  if (!j.is_object()) throw ValidationError("expected a functor expression", path);
  auto binary = [&](const char* key) {
    const json& kids = j.at(key);
    if (!kids.is_array() || kids.size() != 2) throw ValidationError("expected two operands", detail::key_path(path, key));
    return std::pair{parse_expr(kids[0], spaces, top, params, detail::index_path(detail::key_path(path, key), 0)),
                     parse_expr(kids[1], spaces, top, params, detail::index_path(detail::key_path(path, key), 1))};
  };
  try {
    if (j.contains("id")) {
      const json& body = j.at("id");
      Rational c(1);
      if (body.is_object() && body.contains("discount")) c = detail::rational(body.at("discount"), params, path + ".id.discount");
      return FunctorExpr::id(c);
    }
    if (j.contains("dist")) return FunctorExpr::dist(parse_expr(j.at("dist"), spaces, top, params, path + ".dist"));
    if (j.contains("finpow")) return FunctorExpr::finpow(parse_expr(j.at("finpow"), spaces, top, params, path + ".finpow"));
    if (j.contains("diagsquare")) return FunctorExpr::diag_square(parse_expr(j.at("diagsquare"), spaces, top, params, path + ".diagsquare"));
    if (j.contains("coproduct")) {
      auto [l, r] = binary("coproduct");
      return FunctorExpr::coproduct(std::move(l), std::move(r));
    }
    if (j.contains("product")) {
      auto [l, r] = binary("product");
      ProductEval eval = ProductEval::max();
      if (j.contains("eval")) {
        const json& e = j.at("eval");
        if (e.is_string() && e.get<std::string>() == "max") {
          eval = ProductEval::max();
        } else if (e.is_object() && e.contains("pnorm")) {
          const json& pn = e.at("pnorm");
          const std::string pp = path + ".eval.pnorm";
          Rational p = detail::rational(detail::member(pn, "p", pp), params, pp + ".p");
          if (p.get_den() != 1 || sgn(p) <= 0) throw ValidationError("p must be a positive integer", pp + ".p");
          Rational c1 = pn.contains("c1") ? detail::rational(pn.at("c1"), params, pp + ".c1") : Rational(1);
          Rational c2 = pn.contains("c2") ? detail::rational(pn.at("c2"), params, pp + ".c2") : Rational(1);
          eval = ProductEval::pnorm(p.get_num().get_ui(), c1, c2);
        } else {
          throw ValidationError("eval must be \"max\" or {\"pnorm\": {...}}", path + ".eval");
        }
      }
      return FunctorExpr::product(std::move(l), std::move(r), std::move(eval));
    }
    if (j.contains("const")) {
      std::string name = detail::string_at(j.at("const"), path + ".const");
      auto it = spaces.find(name);
      if (it != spaces.end()) return FunctorExpr::constant(it->second);
      if (name == "unit") return FunctorExpr::constant(PseudometricTable::unit(top));
      throw ValidationError("unknown space '" + name + "'", path + ".const");
    }
  } catch (const ConfigurationError& e) {
    throw ValidationError(e.what(), path);
  }
  throw ValidationError("unknown functor node", path);
}

inline json expr_to_json(const FunctorExpr& e) {
  switch (e.kind()) {
    case NodeKind::id:
      if (e.discount() == 1) return "id";
      return {{"id", {{"discount", to_string(e.discount())}}}};
    case NodeKind::dist:
      return {{"dist", expr_to_json(e.child())}};
    case NodeKind::finpow:
      return {{"finpow", expr_to_json(e.child())}};
    case NodeKind::diag_square:
      return {{"diagsquare", expr_to_json(e.child())}};
    case NodeKind::coproduct:
      return {{"coproduct", json::array({expr_to_json(e.child(0)), expr_to_json(e.child(1))})}};
    case NodeKind::constant:
      return {{"const", e.space().name()}};
    case NodeKind::product: {
      json out = {{"product", json::array({expr_to_json(e.child(0)), expr_to_json(e.child(1))})}};
      const auto& ev = e.product_eval();
      if (ev.kind == ProductEval::Kind::max) {
        out["eval"] = "max";
      } else {
        out["eval"] = {{"pnorm", {{"p", ev.p}, {"c1", to_string(ev.c1)}, {"c2", to_string(ev.c2)}}}};
      }
      return out;
    }
  }
  return nullptr;
}

/// Every constant space used by `e`, by name.
inline void collect_spaces(const FunctorExpr& e, SpaceMap& out) {
  if (e.kind() == NodeKind::constant) {
    auto [it, fresh] = out.emplace(e.space().name(), e.space());
    if (!fresh && !(it->second == e.space())) throw ConfigurationError("two different spaces are named '" + e.space().name() + "'");
  }
  for (std::size_t i = 0; i < e.arity(); ++i) collect_spaces(e.child(i), out);
}

/// Atom names resolve against the state list (Id) or the constant space.
/// Distributions: [[element, weight], ...] or, for atom elements,
/// {"atom": weight, ...}. Sets: arrays. Pairs: [l, r]. Tags: {"left": x}.
inline FStructure parse_structure(const FunctorExpr& expr, const json& j, const std::vector<std::string>& states,
                                  const NumericMode& mode, const Parameters& params, const std::string& path) {
  switch (expr.kind()) {
    case NodeKind::id: {
      std::string name = detail::string_at(j, path);
      auto it = std::find(states.begin(), states.end(), name);
      if (it == states.end()) throw ValidationError("unknown state '" + name + "'", path);
      return FStructure::atom(static_cast<std::size_t>(it - states.begin()));
    }
    case NodeKind::constant: {
      std::string name = j.is_number() ? j.dump() : detail::string_at(j, path);
      if (auto idx = expr.space().index_of(name)) return FStructure::atom(*idx);
      // Points spaces name atoms by canonical rationals, so "0.4" finds "2/5".
      try {
        if (auto idx = expr.space().index_of(to_string(parse_rational(name)))) return FStructure::atom(*idx);
      } catch (const ValidationError&) {
      }
      throw ValidationError("unknown atom '" + name + "' of space '" + expr.space().name() + "'", path);
    }
    case NodeKind::dist: {
      std::vector<std::pair<FStructure, Value>> entries;
      if (j.is_object()) {
        for (const auto& [k, w] : j.items()) {
          const std::string p = detail::key_path(path, k);
          entries.emplace_back(parse_structure(expr.child(), json(k), states, mode, params, p), detail::value(w, mode, params, p));
        }
      } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
          const std::string p = detail::index_path(path, i);
          if (!j[i].is_array() || j[i].size() != 2) throw ValidationError("expected [element, weight]", p);
          entries.emplace_back(parse_structure(expr.child(), j[i][0], states, mode, params, p), detail::value(j[i][1], mode, params, p));
        }
      } else {
        throw ValidationError("expected a distribution", path);
      }
      for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].second.is_zero()) throw ValidationError("non-positive weight", path);
      }
      return FStructure::distribution(std::move(entries));
    }
    case NodeKind::finpow: {
      if (!j.is_array()) throw ValidationError("expected a set (array)", path);
      std::vector<FStructure> elements;
      for (std::size_t i = 0; i < j.size(); ++i) elements.push_back(parse_structure(expr.child(), j[i], states, mode, params, detail::index_path(path, i)));
      return FStructure::set(std::move(elements));
    }
    case NodeKind::product:
    case NodeKind::diag_square: {
      if (!j.is_array() || j.size() != 2) throw ValidationError("expected a pair [l, r]", path);
      const FunctorExpr& l = expr.kind() == NodeKind::product ? expr.child(0) : expr.child();
      const FunctorExpr& r = expr.kind() == NodeKind::product ? expr.child(1) : expr.child();
      auto a = parse_structure(l, j[0], states, mode, params, detail::index_path(path, 0));
      auto b = parse_structure(r, j[1], states, mode, params, detail::index_path(path, 1));
      return FStructure::pair(std::move(a), std::move(b));
    }
    case NodeKind::coproduct: {
      if (j.is_object() && j.size() == 1 && j.contains("left")) {
        return FStructure::tagged(Side::left, parse_structure(expr.child(0), j.at("left"), states, mode, params, path + ".left"));
      }
      if (j.is_object() && j.size() == 1 && j.contains("right")) {
        return FStructure::tagged(Side::right, parse_structure(expr.child(1), j.at("right"), states, mode, params, path + ".right"));
      }
      throw ValidationError("expected {\"left\": ...} or {\"right\": ...}", path);
    }
  }
  throw ValidationError("unknown functor node", path);
}

inline json structure_to_json(const FunctorExpr& expr, const FStructure& t, const std::vector<std::string>& states) {
  switch (expr.kind()) {
    case NodeKind::id:
      return states.at(t.atom_index());
    case NodeKind::constant:
      return expr.space().atoms().at(t.atom_index());
    case NodeKind::dist: {
      json out = json::array();
      for (std::size_t i = 0; i < t.size(); ++i) {
        out.push_back(json::array({structure_to_json(expr.child(), t.child(i), states), t.weights()[i].to_string()}));
      }
      return out;
    }
    case NodeKind::finpow: {
      json out = json::array();
      for (const auto& e : t.children()) out.push_back(structure_to_json(expr.child(), e, states));
      return out;
    }
    case NodeKind::product:
      return json::array({structure_to_json(expr.child(0), t.child(0), states), structure_to_json(expr.child(1), t.child(1), states)});
    case NodeKind::diag_square:
      return json::array({structure_to_json(expr.child(), t.child(0), states), structure_to_json(expr.child(), t.child(1), states)});
    case NodeKind::coproduct: {
      const bool left = t.side() == Side::left;
      return {{left ? "left" : "right", structure_to_json(expr.child(left ? 0 : 1), t.child(), states)}};
    }
  }
  return nullptr;
}

namespace detail {

inline std::vector<std::string> state_list(const json& doc) {
  const json& s = member(doc, "states", "$");
  if (!s.is_array()) throw ValidationError("expected an array", "$.states");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(string_at(s[i], index_path("$.states", i)));
  return out;
}

inline std::size_t state_index(const std::vector<std::string>& states, const std::string& name, const std::string& path) {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) throw ValidationError("unknown state '" + name + "'", path);
  return static_cast<std::size_t>(it - states.begin());
}

inline SpaceMap parse_spaces(const json& doc, const TopBound& top, const Parameters& params) {
  SpaceMap spaces;
  if (!doc.contains("spaces")) return spaces;
  const json& s = doc.at("spaces");
  if (!s.is_object()) throw ValidationError("expected an object", "$.spaces");
  for (const auto& [name, body] : s.items()) spaces.emplace(name, parse_space(name, body, top, params, "$.spaces." + name));
  return spaces;
}

}  // namespace detail

/// {"type": "prob_ts", "discount": c, "states": [...],
///  "transitions": {s: {t: w}}, "terminate": {s: w}}
inline ProbTS parse_prob_ts(const json& doc, const LoadOptions& opts = {}) {
  const Parameters params = parse_parameters(doc, opts.overrides);
  ProbTS p;
  p.states = detail::state_list(doc);
  p.discount = detail::rational(detail::member(doc, "discount", "$"), params, "$.discount");
  p.transitions.resize(p.states.size());
  p.terminate.assign(p.states.size(), Rational(0));
  if (doc.contains("transitions")) {
    for (const auto& [s, row] : doc.at("transitions").items()) {
      const std::string path = "$.transitions." + s;
      std::size_t from = detail::state_index(p.states, s, path);
      if (!row.is_object()) throw ValidationError("expected an object", path);
      for (const auto& [t, w] : row.items()) {
        Rational q = detail::rational(w, params, path + "." + t);
        if (sgn(q) < 0) throw ValidationError("negative probability", path + "." + t);
        p.transitions[from][detail::state_index(p.states, t, path + "." + t)] += q;
      }
    }
  }
  if (doc.contains("terminate")) {
    for (const auto& [s, w] : doc.at("terminate").items()) {
      p.terminate[detail::state_index(p.states, s, "$.terminate." + s)] = detail::rational(w, params, "$.terminate." + s);
    }
  }
  p.validate();
  return p;
}

/// {"type": "metric_ts", "propositions": {r: space}, "states": [...],
///  "valuation": {s: {r: atom}}, "tau": {s: [t, ...]}}
inline MetricTS parse_metric_ts(const json& doc, const LoadOptions& opts = {}) {
  const Parameters params = parse_parameters(doc, opts.overrides);
  MetricTS m;
  m.states = detail::state_list(doc);
  if (doc.contains("propositions")) {
    for (const auto& [name, body] : doc.at("propositions").items()) {
      m.propositions.push_back({name, parse_space(name, body, TopBound::infinite(), params, "$.propositions." + name)});
    }
  }
  m.valuation.assign(m.states.size(), std::vector<std::size_t>(m.propositions.size()));
  m.tau.resize(m.states.size());
  const json& val = detail::member(doc, "valuation", "$");
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    const std::string path = "$.valuation." + m.states[s];
    if (!val.contains(m.states[s])) {
      if (m.propositions.empty()) continue;
      throw ValidationError("missing valuation", path);
    }
    const json& v = val.at(m.states[s]);
    for (std::size_t r = 0; r < m.propositions.size(); ++r) {
      const std::string rp = path + "." + m.propositions[r].name;
      FunctorExpr c = FunctorExpr::constant(m.propositions[r].space);
      m.valuation[s][r] = parse_structure(c, detail::member(v, m.propositions[r].name.c_str(), path), {}, NumericMode::exact(), params, rp).atom_index();
    }
  }
  if (doc.contains("tau")) {
    for (const auto& [s, succ] : doc.at("tau").items()) {
      const std::string path = "$.tau." + s;
      std::size_t from = detail::state_index(m.states, s, path);
      if (!succ.is_array()) throw ValidationError("expected an array", path);
      for (std::size_t i = 0; i < succ.size(); ++i) {
        m.tau[from].push_back(detail::state_index(m.states, detail::string_at(succ[i], detail::index_path(path, i)), detail::index_path(path, i)));
      }
    }
  }
  m.validate();
  return m;
}

/// Loads any of the three document types ("system" is the default).
inline System load_system(const json& doc, const LoadOptions& opts = {}) {
  if (!doc.is_object()) throw ValidationError("expected a JSON object", "$");
  const std::string type = doc.contains("type") ? detail::string_at(doc.at("type"), "$.type") : "system";
  if (type == "prob_ts") return from_prob_ts(parse_prob_ts(doc, opts), opts.mode);
  if (type == "metric_ts") return from_metric_ts(parse_metric_ts(doc, opts), opts.mode);
  if (type != "system") throw ValidationError("unknown document type '" + type + "'", "$.type");
  const Parameters params = parse_parameters(doc, opts.overrides);
  TopBound top = doc.contains("top") ? parse_top(doc.at("top"), params, "$.top") : TopBound::infinite();
  SpaceMap spaces = detail::parse_spaces(doc, top, params);
  FunctorExpr expr = parse_expr(detail::member(doc, "functor", "$"), spaces, top, params, "$.functor");
  std::vector<std::string> states = detail::state_list(doc);
  const json& alpha_j = detail::member(doc, "alpha", "$");
  std::vector<FStructure> alpha;
  for (const auto& s : states) {
    const std::string path = "$.alpha." + s;
    if (!alpha_j.contains(s)) throw ValidationError("missing image of state '" + s + "'", path);
    alpha.push_back(parse_structure(expr, alpha_j.at(s), states, opts.mode, params, path));
  }
  for (const auto& [k, _] : alpha_j.items()) detail::state_index(states, k, "$.alpha." + k);
  return System(std::move(states), std::move(expr), std::move(alpha), std::move(top), opts.mode);
}

/// One-shot lifting problem: a ground space, an expression over it and two
/// structures whose Id atoms name points of the ground space.
struct LiftProblem {
  PseudometricTable space;
  FunctorExpr expr;
  FStructure t1;
  FStructure t2;
};

/// `t1` / `t2` replace the document's structures when given.
inline LiftProblem parse_lift(const json& doc, const LoadOptions& opts = {}, const json* t1 = nullptr, const json* t2 = nullptr) {
  if (!doc.is_object()) throw ValidationError("expected a JSON object", "$");
  const std::string type = doc.contains("type") ? detail::string_at(doc.at("type"), "$.type") : "lift";
  if (type != "lift") throw ValidationError("expected a lift document, got type '" + type + "'", "$.type");
  const Parameters params = parse_parameters(doc, opts.overrides);
  TopBound top = doc.contains("top") ? parse_top(doc.at("top"), params, "$.top") : TopBound::infinite();
  SpaceMap spaces = detail::parse_spaces(doc, top, params);
  PseudometricTable space = parse_space("X", detail::member(doc, "space", "$"), top, params, "$.space");
  FunctorExpr expr = parse_expr(detail::member(doc, "functor", "$"), spaces, top, params, "$.functor");
  try {
    check_expression(expr, top);
  } catch (const ConfigurationError& e) {
    throw ValidationError(e.what(), "$.functor");
  }
  const json& j1 = t1 ? *t1 : detail::member(doc, "t1", "$");
  const json& j2 = t2 ? *t2 : detail::member(doc, "t2", "$");
  FStructure a = parse_structure(expr, j1, space.atoms(), opts.mode, params, "$.t1");
  FStructure b = parse_structure(expr, j2, space.atoms(), opts.mode, params, "$.t2");
  validate(expr, space.size(), a, "$.t1", opts.mode.tolerance());
  validate(expr, space.size(), b, "$.t2", opts.mode.tolerance());
  return {std::move(space), std::move(expr), std::move(a), std::move(b)};
}

inline json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open file", file);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what(), file);
  }
}

inline System load_system_file(const std::string& file, const LoadOptions& opts = {}) { return load_system(read_json_file(file), opts); }

/// The generic document for `sys`; load_system inverts it.
inline json serialize(const System& sys) {
  SpaceMap spaces;
  collect_spaces(sys.expr(), spaces);
  json doc;
  doc["type"] = "system";
  doc["top"] = top_to_json(sys.top());
  json sp = json::object();
  for (const auto& [name, table] : spaces) sp[name] = space_to_json(table);
  doc["spaces"] = std::move(sp);
  doc["functor"] = expr_to_json(sys.expr());
  doc["states"] = sys.states();
  json alpha = json::object();
  for (std::size_t s = 0; s < sys.size(); ++s) alpha[sys.states()[s]] = structure_to_json(sys.expr(), sys.alpha(s), sys.states());
  doc["alpha"] = std::move(alpha);
  return doc;
}

inline json matrix_to_json(const DistanceMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m.at(i, k).to_string());
    rows.push_back(std::move(row));
  }
  return {{"states", m.states},
          {"distances", std::move(rows)},
          {"iterations", m.iterations},
          {"converged", m.converged},
          {"residual", m.residual.to_string()},
          {"method", to_string(m.method)},
          {"mode", m.mode.name()},
          {"top", top_to_json(m.top)}};
}

/// Inverse of matrix_to_json (trace and per-step deltas are not stored).
inline DistanceMatrix matrix_from_json(const json& j) {
  DistanceMatrix m;
  for (const auto& s : detail::member(j, "states", "$")) m.states.push_back(s.get<std::string>());
  const std::string mode = detail::member(j, "mode", "$").get<std::string>();
  m.mode = mode == "exact" ? NumericMode::exact() : NumericMode::floating();
  m.top = parse_top(detail::member(j, "top", "$"), {}, "$.top");
  const json& rows = detail::member(j, "distances", "$");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) m.entries.push_back(detail::value(rows[i][k], m.mode, {}, detail::index_path(detail::index_path("$.distances", i), k)));
  }
  m.iterations = detail::member(j, "iterations", "$").get<std::size_t>();
  m.converged = detail::member(j, "converged", "$").get<bool>();
  m.residual = detail::value(detail::member(j, "residual", "$"), m.mode, {}, "$.residual");
  m.method = detail::member(j, "method", "$").get<std::string>() == "kantorovich" ? LiftMethod::kantorovich : LiftMethod::wasserstein;
  return m;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

/// State×state table with a header row.
inline std::string matrix_to_csv(const std::vector<std::string>& states, const std::vector<Value>& entries) {
  std::ostringstream out;
  out << "state";
  for (const auto& s : states) out << "," << csv_field(s);
  out << "\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    out << csv_field(states[i]);
    for (std::size_t k = 0; k < states.size(); ++k) out << "," << entries[i * states.size() + k].to_string();
    out << "\n";
  }
  return out.str();
}

inline std::string matrix_to_csv(const DistanceMatrix& m) { return matrix_to_csv(m.states, m.entries); }

}  // namespace behametric::io
