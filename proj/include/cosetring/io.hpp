#pragma once

// JSON documents for groups, functions, systems, decompositions and reports.
// Requires nlohmann/json (single header json.hpp).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cosetring/bourgain.hpp"
#include "cosetring/decompose.hpp"
#include "cosetring/freiman.hpp"
#include "cosetring/function.hpp"
#include "cosetring/lattice.hpp"
#include "cosetring/lca_model.hpp"
#include "cosetring/refine.hpp"
#include "cosetring/spectral.hpp"
#include "cosetring/subgroup.hpp"

namespace cosetring::io {

using Json = nlohmann::json;

inline void expect(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorCode::InvalidArgument, what);
}

inline const Json& field(const Json& j, const char* key) {
  expect(j.is_object() && j.contains(key), std::string("missing field \"") + key + "\"");
  return j.at(key);
}

// Groups and elements -----------------------------------------------------

inline FiniteAbelianGroup group_from_json(const Json& j) {
  return FiniteAbelianGroup(field(j, "orders").get<std::vector<std::int64_t>>());
}

inline Json element_json(const FiniteAbelianGroup& g, Index x) { return g.coords(x); }

/// An element given either as a coordinate list or as a mixed-radix index.
inline Index element_from_json(const FiniteAbelianGroup& g, const Json& j) {
  if (j.is_number_integer()) {
    auto v = j.get<std::int64_t>();
    expect(v >= 0 && static_cast<std::size_t>(v) < g.size(), "element index out of range");
    return static_cast<Index>(v);
  }
  auto c = j.get<std::vector<std::int64_t>>();
  return g.index(c);
}

inline std::vector<Index> elements_from_json(const FiniteAbelianGroup& g, const Json& j) {
  std::vector<Index> out;
  for (const auto& e : j) out.push_back(element_from_json(g, e));
  return out;
}

inline Json elements_json(const FiniteAbelianGroup& g, const std::vector<Index>& xs) {
  Json a = Json::array();
  for (auto x : xs) a.push_back(element_json(g, x));
  return a;
}

// Functions ---------------------------------------------------------------

inline GroupFunction function_from_json(const Json& j) {
  auto g = group_from_json(j);
  const auto& vals = field(j, "values");
  expect(vals.is_array() && vals.size() == g.size(), "\"values\" must list one entry per element");
  std::vector<Complex> v;
  v.reserve(g.size());
  for (const auto& e : vals) {
    if (e.is_number()) {
      v.emplace_back(e.get<double>(), 0.0);
    } else {
      expect(e.is_array() && e.size() == 2, "complex values are [re, im] pairs");
      v.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
  }
  Domain dom = Domain::Primal;
  if (j.contains("domain")) {
    auto s = j.at("domain").get<std::string>();
    expect(s == "primal" || s == "dual", "domain must be \"primal\" or \"dual\"");
    dom = s == "dual" ? Domain::Dual : Domain::Primal;
  }
  return GroupFunction(g, std::move(v), dom);
}

inline Json function_json(const GroupFunction& f) {
  Json vals = Json::array();
  for (auto z : f.values()) vals.push_back({z.real(), z.imag()});
  return {{"orders", f.group().orders()},
          {"domain", f.domain() == Domain::Dual ? "dual" : "primal"},
          {"values", vals}};
}

// Subgroups ---------------------------------------------------------------

inline Subgroup subgroup_from_json(const FiniteAbelianGroup& g, const Json& j) {
  return Subgroup::generated_by(g, elements_from_json(g, field(j, "generators")));
}

inline Subgroup subgroup_from_json(const Json& j) { return subgroup_from_json(group_from_json(j), j); }

inline Json subgroup_json(const Subgroup& H, bool with_orders = true) {
  Json j = {{"generators", elements_json(H.group(), H.reduced_generators())}, {"size", H.size()}};
  if (with_orders) j["orders"] = H.group().orders();
  return j;
}

// Systems -----------------------------------------------------------------

inline Json radius_value(double r) { return std::isfinite(r) ? Json(r) : Json(nullptr); }

inline Json recipe_json(const FiniteAbelianGroup& g, const Recipe& r);

inline Json recipe_params(const FiniteAbelianGroup& g, const Recipe& r) {
  switch (r.kind) {
    case SystemKind::Subgroup: return {{"generators", elements_json(g, r.generators)}};
    case SystemKind::Bohr: return {{"characters", elements_json(g, r.characters)}, {"kappas", r.kappas}};
    case SystemKind::Dilate: return {{"lambda", r.lambda}, {"system", recipe_json(g, *r.children.at(0))}};
    case SystemKind::Join:
      return {{"left", recipe_json(g, *r.children.at(0))}, {"right", recipe_json(g, *r.children.at(1))}};
    case SystemKind::Freiman: {
      Json m = Json::array();
      for (auto [x, y] : r.mapping) m.push_back({x, y});
      return {{"mapping", m}};
    }
    case SystemKind::Explicit: {
      Json rad = Json::array();
      for (double v : r.radius) rad.push_back(radius_value(v));
      return {{"radius", rad}};
    }
  }
  return Json::object();
}

inline bool has_freiman_node(const Recipe& r) {
  if (r.kind == SystemKind::Freiman) return true;
  return std::any_of(r.children.begin(), r.children.end(), [](const auto& c) { return c && has_freiman_node(*c); });
}

inline Json recipe_json(const FiniteAbelianGroup& g, const Recipe& r) {
  return {{"kind", to_string(r.kind)}, {"params", recipe_params(g, r)}};
}

/// {"orders", "kind", "params", "dim"}. Freiman images are written through
/// their explicit radius function, which determines them completely.
inline Json system_json(const BourgainSystem& S) {
  const auto& g = S.group();
  Json j;
  if (has_freiman_node(S.recipe())) {
    Recipe r;
    r.kind = SystemKind::Explicit;
    r.radius = S.radius();
    j = recipe_json(g, r);
  } else {
    j = recipe_json(g, S.recipe());
  }
  j["orders"] = g.orders();
  j["dim"] = S.dimension();
  j["size"] = S.size();
  j["density"] = S.density();
  return j;
}

inline BourgainSystem system_from_recipe(const FiniteAbelianGroup& g, const Json& j) {
  auto kind = field(j, "kind").get<std::string>();
  const Json params = j.contains("params") ? j.at("params") : Json::object();
  BourgainSystem s;
  if (kind == "subgroup") {
    s = subgroup_system(Subgroup::generated_by(g, elements_from_json(g, field(params, "generators"))));
  } else if (kind == "bohr") {
    auto chars = elements_from_json(g, field(params, "characters"));
    const auto& k = field(params, "kappas");
    std::vector<double> kappas = k.is_number() ? std::vector<double>(chars.size(), k.get<double>())
                                               : k.get<std::vector<double>>();
    s = bohr_system(g, chars, kappas);
  } else if (kind == "dilate") {
    s = dilate(system_from_recipe(g, field(params, "system")), field(params, "lambda").get<double>());
  } else if (kind == "join") {
    s = join(system_from_recipe(g, field(params, "left")), system_from_recipe(g, field(params, "right")));
  } else if (kind == "explicit" || kind == "radius") {
    std::vector<double> r;
    for (const auto& v : field(params, "radius")) r.push_back(v.is_null() ? kInfiniteRadius : v.get<double>());
    expect(j.contains("dim"), "explicit systems need \"dim\"");
    s = BourgainSystem::from_radius(g, std::move(r), j.at("dim").get<double>());
  } else if (kind == "freiman") {
    const auto& src = field(params, "source");
    auto src_group = group_from_json(src);
    auto source = system_from_recipe(src_group, src);
    std::vector<std::pair<Index, Index>> mapping;
    for (const auto& p : field(params, "mapping")) {
      mapping.emplace_back(element_from_json(src_group, p.at(0)), element_from_json(g, p.at(1)));
    }
    s = freiman_image(source, g, mapping);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown system kind \"" + kind + "\"");
  }
  if (j.contains("dim") && j.at("dim").is_number() && j.at("dim").get<double>() != s.dimension()) {
    s = s.recertified(j.at("dim").get<double>());
  }
  return s;
}

inline BourgainSystem system_from_json(const Json& j) { return system_from_recipe(group_from_json(j), j); }

// Frequency specs and lattices ---------------------------------------------

inline FrequencySpec frequency_spec_from_json(const Json& j) {
  FrequencySpec s;
  s.d = field(j, "d").get<std::size_t>();
  if (j.contains("finite_orders")) s.finite_orders = j.at("finite_orders").get<std::vector<std::int64_t>>();
  for (const auto& t : field(j, "terms")) {
    FrequencyTerm term;
    term.sign = t.contains("sign") ? t.at("sign").get<int>() : 1;
    term.omega = t.contains("omega") ? t.at("omega").get<IntVector>() : IntVector{};
    term.r = field(t, "r").get<IntVector>();
    s.terms.push_back(std::move(term));
  }
  return s;
}

inline Lattice lattice_from_json(const Json& j) {
  auto gens = field(j, "generators").get<IntMatrix>();
  std::size_t d = j.contains("ambient") ? j.at("ambient").get<std::size_t>() : (gens.empty() ? 0 : gens.front().size());
  return Lattice::from_generators(d, std::move(gens));
}

inline Json lattice_json(const Lattice& l) {
  return {{"ambient", l.ambient()}, {"rank", l.rank()}, {"basis", l.basis()}};
}

// Reports -------------------------------------------------------------------

inline Json axiom_report_json(const FiniteAbelianGroup& g, const AxiomReport& r) {
  Json fails = Json::array();
  for (const auto& f : r.failures) {
    fails.push_back({{"axiom", f.axiom}, {"rho", f.rho}, {"rho2", f.rho2},
                     {"elements", elements_json(g, f.elements)}, {"detail", f.detail}});
  }
  auto cover = [](const std::vector<CoveringCheck>& cs) {
    Json a = Json::array();
    for (const auto& c : cs) {
      a.push_back({{"rho", c.rho}, {"count", c.count}, {"bound", c.bound}, {"covers", c.covers}, {"ok", c.ok()}});
    }
    return a;
  };
  return {{"BS1", r.nesting}, {"BS2", r.zero}, {"BS3", r.symmetry}, {"BS4", r.addition}, {"BS5", r.doubling},
          {"max_doubling_ratio", r.max_doubling_ratio}, {"doubling_bound", r.doubling_bound},
          {"failures", fails}, {"covering", cover(r.covering)}, {"entropy", cover(r.entropy)},
          {"axioms_pass", r.axioms_pass()}, {"all_pass", r.all_pass()}};
}

inline Json regularity_json(const RegularityReport& r) {
  return {{"lambda", r.lambda}, {"dimension", r.dimension}, {"kappa_max", r.kappa_max},
          {"kappas_tested", r.kappas.size()}, {"max_ratio_violation", r.max_ratio_violation},
          {"worst_kappa", r.worst_kappa}, {"regular", r.regular}};
}

inline Json avg_report_json(const FiniteAbelianGroup& g, const AvgBoundReport& r) {
  return {{"bound", r.bound}, {"rho_min", r.rho_min}, {"probes", r.probes}, {"probe_max", r.probe_max},
          {"max_value", r.max_value}, {"witness_x0", element_json(g, r.witness_x0)},
          {"witness_rho", r.witness_rho}, {"passes", r.passes()}};
}

inline Json refinement_json(const FiniteAbelianGroup& g, const RefinementCertificate& c) {
  Json steps = Json::array();
  for (const auto& s : c.steps) {
    steps.push_back({{"index", s.index}, {"formal", s.formal}, {"rho", s.rho}, {"x0", element_json(g, s.x0)},
                     {"lhs", s.lhs}, {"gamma0", element_json(g, s.gamma0)}, {"weighted_mass", s.weighted_mass},
                     {"weighted_mass_bound", s.weighted_mass_bound}, {"gamma_set", elements_json(g, s.gamma_set)},
                     {"l1_mass", s.l1_mass}, {"l1_mass_bound", s.l1_mass_bound}, {"kappa", s.kappa},
                     {"kappa_prime", s.kappa_prime}, {"lambda", s.lambda}, {"dimension", s.dimension},
                     {"size", s.size}, {"to_sat", s.to_sat}});
  }
  return {{"epsilon", c.epsilon}, {"M", c.M}, {"input_dimension", c.input_dimension},
          {"iterations", c.iterations}, {"iteration_budget", c.iteration_budget}, {"steps", steps},
          {"final_avg_bound", avg_report_json(g, c.final_avg)}, {"disjoint", c.disjoint}, {"to_sat", c.to_sat},
          {"gamma_mass_total", c.gamma_mass_total}, {"algebra_norm", c.algebra_norm},
          {"dim_bound", {{"value", c.dim_value}, {"bound", c.dim_bound}, {"ok", c.dim_ok()}}},
          {"size_bound", {{"ratio", c.size_ratio}, {"fitted_C", c.size_fitted_C}}},
          {"avg_lwr", {{"before", c.psi_sup_before}, {"after", c.psi_sup_after}, {"ok", c.avg_lwr_ok()}}},
          {"almost_int", {{"before", c.distance_before}, {"after", c.distance_after}, {"ok", c.almost_int_ok()}}},
          {"smoothing", {{"l1", c.smoothing_l1}, {"bound", c.smoothing_bound}, {"support_condition", c.smoothing_support},
                         {"ok", c.smoothing_ok()}}},
          {"all_ok", c.all_ok()}};
}

inline Json freiman_json(const FiniteAbelianGroup& g, const FreimanOutput& o) {
  return {{"system", system_json(o.system)}, {"lambda", o.lambda}, {"gamma", elements_json(g, o.gamma)},
          {"chang", elements_json(g, o.chang)}, {"trivial_substituted", o.trivial_substituted}, {"K", o.K},
          {"alpha", o.alpha}, {"sup_psi", o.sup_psi}, {"psi_bound", o.psi_bound},
          {"containment_ok", o.containment_ok}, {"containment_failures", elements_json(g, o.containment_failures)},
          {"gamma_size", o.gamma.size()}, {"gamma_bound", o.gamma_bound}, {"chang_bound", o.chang_bound},
          {"chang_bound_exceeded", o.chang_bound_exceeded}, {"all_ok", o.all_ok()}};
}

inline Json verdict_json(const FiniteAbelianGroup& g, const ConnectednessVerdict& v) {
  Json j = {{"m", v.m}, {"connected", v.connected}, {"vacuous", v.vacuous}, {"subsets", v.subsets},
            {"non_dissociated", v.non_dissociated}, {"spanned", v.spanned}};
  if (!v.connected) j["refuting_subset"] = elements_json(g, v.refuting_subset);
  if (!v.example_subset.empty()) {
    j["example_subset"] = elements_json(g, v.example_subset);
    if (!v.example_relation.empty()) j["example_relation"] = v.example_relation;
    if (v.example_extra) j["example_extra"] = element_json(g, *v.example_extra);
  }
  return j;
}

inline Json concentration_json(const FiniteAbelianGroup& g, const ConcentrationReport& r) {
  Json j = {{"M", r.M}, {"algebra_norm", r.algebra_norm}, {"distance", r.distance},
            {"support_size", r.support_size}, {"full_support", r.full_support},
            {"translation", element_json(g, r.translation)}, {"m_requested", r.m_requested}, {"m", r.m},
            {"dense_path", r.dense_path}, {"K", r.K}, {"alpha", r.alpha},
            {"sup_psi_indicator", r.sup_psi_indicator}, {"sup_psi_square", r.sup_psi_square},
            {"delta", r.delta}, {"x_star", element_json(g, r.x_star)}, {"gamma", element_json(g, r.gamma)},
            {"gamma_value", r.gamma_value}, {"gamma_bound", r.gamma_bound}, {"gamma_ok", r.gamma_ok()},
            {"dilation", r.dilation}, {"kappa", r.kappa}, {"lambda", r.lambda}, {"dimension", r.dimension},
            {"density", r.density}, {"sup_psi", r.sup_psi}, {"sup_psi_bound", r.sup_psi_bound},
            {"sup_ok", r.sup_ok()}};
  j["flags"] = r.dense_path ? Json::array({"dense-path"}) : Json::array();
  if (r.verdict) j["connectedness"] = verdict_json(g, *r.verdict);
  return j;
}

// Decompositions -------------------------------------------------------------

inline Json pieces_json(const FiniteAbelianGroup& g, const std::vector<CosetPiece>& pieces) {
  Json a = Json::array();
  for (const auto& p : pieces) {
    a.push_back({{"sign", p.sign}, {"rep", element_json(g, p.rep)}, {"subgroup", subgroup_json(p.subgroup, false)}});
  }
  return a;
}

inline std::vector<CosetPiece> pieces_from_json(const FiniteAbelianGroup& g, const Json& j) {
  std::vector<CosetPiece> out;
  for (const auto& p : j) {
    CosetPiece piece;
    piece.sign = field(p, "sign").get<int>();
    piece.rep = element_from_json(g, field(p, "rep"));
    piece.subgroup = subgroup_from_json(g, field(p, "subgroup"));
    out.push_back(std::move(piece));
  }
  return out;
}

inline Json decomposition_json(const CosetDecomposition& D) {
  const auto& c = D.certificate;
  Json flags = Json::array();
  if (c.structured_path) flags.push_back("structured-path");
  if (c.singleton_fallback) flags.push_back("singleton-fallback");
  if (c.dense_path) flags.push_back("dense-path");
  Json log = Json::array();
  for (const auto& e : c.log) {
    log.push_back({{"node", e.node}, {"parent", e.parent}, {"depth", e.depth}, {"norm", e.norm},
                   {"distance", e.distance}, {"outcome", e.outcome}, {"detail", e.detail}});
  }
  Json cert = {{"exact", c.exact}, {"L", c.L}, {"leaves", c.leaves}, {"distinct_subgroups", c.distinct_subgroups},
               {"A_norm", c.algebra_norm}, {"M", c.M}, {"epsilon", c.epsilon}, {"guarantees", flags},
               {"residual_patch", c.residual_patch}, {"max_leaf_distance", c.max_leaf_distance},
               {"distance_budget", c.distance_budget}, {"leaf_bound", c.leaf_bound},
               {"distinct_bound", c.distinct_bound}, {"distinct_ok", c.distinct_ok}, {"leaves_ok", c.leaves_ok},
               {"splits", log}};
  return {{"orders", D.group.orders()}, {"pieces", pieces_json(D.group, D.pieces)}, {"certificate", cert}};
}

inline Json verification_json(const FiniteAbelianGroup& g, const VerificationReport& r) {
  Json j = {{"exact", r.exact}, {"L", r.L}, {"distinct_subgroups", r.distinct_subgroups},
            {"A_norm", r.algebra_norm}, {"distinct_bound", r.distinct_bound}, {"distinct_ok", r.distinct_ok}};
  if (r.mismatch) {
    j["mismatch"] = {{"element", element_json(g, *r.mismatch)}, {"expected", r.expected}, {"actual", r.actual}};
  }
  return j;
}

}  // namespace cosetring::io
