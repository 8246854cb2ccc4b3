#pragma once

// JSON formats for polytopes, polynomial specifications and reports.
//
//   polytope:   {"dim": n, "vertices": [[int, ...], ...]}
//   polynomial: {"mode": "explicit", "terms": [{"exp": [...], "coeff": "p/q"}]}
//               {"mode": "random", "seed": u64, "bound": int}

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "torelli/audit.hpp"
#include "torelli/errors.hpp"
#include "torelli/field.hpp"
#include "torelli/jacobian.hpp"
#include "torelli/lattice.hpp"
#include "torelli/laurent.hpp"
#include "torelli/period_kernel.hpp"

namespace torelli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Input

inline Rational parse_rational(const std::string& s) {
  Rational q;
  if (s.empty() || q.set_str(s, 10) != 0) throw ParseError("not a rational number: \"" + s + "\"");
  if (q.get_den() == 0) throw ParseError("zero denominator: \"" + s + "\"");
  q.canonicalize();
  return q;
}

inline LatticePoint parse_point(const Json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) throw ParseError("expected an integer array of length " + std::to_string(dim));
  LatticePoint m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (!j[i].is_number_integer()) throw ParseError("coordinates must be integers");
    m[i] = j[i].get<Coord>();
  }
  return m;
}

inline LatticePolytope polytope_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("vertices")) throw ParseError("polytope needs \"dim\" and \"vertices\"");
  if (!j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0) throw ParseError("\"dim\" must be a positive integer");
  if (!j["vertices"].is_array() || j["vertices"].empty()) throw ParseError("\"vertices\" must be a nonempty array");
  const auto n = j["dim"].get<std::size_t>();
  std::vector<LatticePoint> pts;
  for (const auto& v : j["vertices"]) pts.push_back(parse_point(v, n));
  try {
    return hull(std::move(pts));
  } catch (const NotFullDimensional& e) {
    throw ParseError(std::string("polytope is not full-dimensional: ") + e.what());
  }
}

inline Json polytope_to_json(const LatticePolytope& p) {
  Json v = Json::array();
  for (const auto& m : p.vertices()) v.push_back(m.coords());
  return Json{{"dim", p.dim()}, {"vertices", v}};
}

inline PolynomialSpec polynomial_spec_from_json(const Json& j, std::size_t dim) {
  if (!j.is_object() || !j.contains("mode") || !j["mode"].is_string()) throw ParseError("polynomial needs a \"mode\"");
  const auto mode = j["mode"].get<std::string>();
  if (mode == "random") {
    RandomCoefficients r;
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) throw ParseError("\"seed\" must be a nonnegative integer");
      r.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("bound")) {
      if (!j["bound"].is_number_integer() || j["bound"].get<std::int64_t>() < 1) throw ParseError("\"bound\" must be a positive integer");
      r.bound = j["bound"].get<std::int64_t>();
    }
    return r;
  }
  if (mode == "explicit") {
    if (!j.contains("terms") || !j["terms"].is_array()) throw ParseError("explicit polynomial needs \"terms\"");
    ExplicitTerms t;
    for (const auto& term : j["terms"]) {
      if (!term.contains("exp") || !term.contains("coeff")) throw ParseError("term needs \"exp\" and \"coeff\"");
      const auto& c = term["coeff"];
      Rational q;
      if (c.is_string()) q = parse_rational(c.get<std::string>());
      else if (c.is_number_integer()) q = Rational(c.get<long>());  // NOLINT(google-runtime-int)
      else throw ParseError("\"coeff\" must be an integer or a \"p/q\" string");
      t.terms.emplace_back(parse_point(term["exp"], dim), q);
    }
    return t;
  }
  throw ParseError("unknown polynomial mode \"" + mode + "\"");
}

inline Json polynomial_to_json(const LaurentPolynomial<Rational>& f) {
  Json terms = Json::array();
  for (const auto& [m, c] : f.terms()) terms.push_back(Json{{"exp", m.coords()}, {"coeff", c.get_str()}});
  return Json{{"mode", "explicit"}, {"terms", terms}};
}

/// Canonical form used for hashing: the realized polynomial is always
/// written out term by term, so a random spec and the explicit polynomial it
/// draws hash alike.
inline Json canonical_input(const LatticePolytope& p, const LaurentPolynomial<Rational>& f) {
  return Json{{"polytope", polytope_to_json(p)}, {"polynomial", polynomial_to_json(f)}};
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const GradedDims& d) {
  return Json{{"k", d.k},
              {"l", d.lattice_points},
              {"l_interior", d.interior_points},
              {"jacobian", d.jacobian},
              {"jacobian_interior", d.jacobian_interior},
              {"ring", d.ring},
              {"interior_module", d.interior_module}};
}

inline Json to_json(const HodgeReport& h) {
  Json dims = Json::array();
  for (const auto& d : h.dims) dims.push_back(to_json(d));
  return Json{{"n", h.n}, {"dims", dims}, {"hodge", h.hodge}, {"duality", h.duality ? "pass" : "fail"}};
}

inline Json to_json(const CertificateReport& c) {
  return Json{{"status", to_string(c.status)}, {"dims", c.dims}, {"trial_dims", c.trial_dims}, {"minimum", c.minimum}};
}

inline Json to_json(const PropositionReport& r) {
  Json j{{"k", r.k},
         {"generator_count", r.generator_count},
         {"generator_rank", r.generator_rank},
         {"intersection_dim", r.intersection_dim},
         {"span_equal", r.span_equal}};
  if (r.independence_checked) j["independent"] = r.independent;
  return j;
}

template <class F>
Json to_json(const KernelElement<F>& e) {
  return Json{{"facet", e.facet},
              {"w", e.shift.coords()},
              {"pairing", e.pairing},
              {"class", to_string(e.cls)},
              {"representative", e.representative.str()}};
}

template <class F>
Json to_json(const KernelSubspace<F>& s, std::size_t n) {
  Json elements = Json::array();
  for (const auto& e : s.elements) elements.push_back(to_json(e));
  return Json{{"k", s.k}, {"dim", s.dim}, {"dim_torus_convention", s.torus_convention_dim(n)}, {"elements", elements}};
}

template <class F>
Json to_json(const KernelComparison<F>& c, std::size_t n) {
  Json j{{"k", c.k}};
  if (c.theorem) {
    j["dim_theorem"] = c.theorem->dim;
  } else {
    j["dim_theorem"] = nullptr;
  }
  j["dim_bruteforce"] = c.bruteforce.dim;
  j["dim_bruteforce_torus_convention"] = c.bruteforce.torus_convention_dim(n);
  if (c.theorem) j["spans_equal"] = c.spans_equal;
  Json elements = Json::array();
  if (c.theorem)
    for (const auto& e : c.theorem->elements) elements.push_back(to_json(e));
  j["elements"] = elements;
  return j;
}

template <class F>
Json to_json(const IttReport<F>& r, std::size_t n) {
  Json by_degree = Json::array();
  for (const auto& c : r.by_degree) by_degree.push_back(to_json(c, n));
  Json obstructions = Json::array();
  for (const auto& e : r.obstructions) obstructions.push_back(to_json(e));
  return Json{{"verdict", to_string(r.verdict)},
              {"by_degree", by_degree},
              {"obstructions", obstructions},
              {"roots", r.root_count},
              {"kodaira_spencer_dim", r.kodaira_spencer_dim},
              {"kodaira_spencer_in_kernel", r.kodaira_spencer_contained},
              {"kernel_in_kodaira_spencer", r.kernel_in_kodaira_spencer}};
}

inline Json to_json(const WhiteAudit& a) {
  Json j{{"p", a.form.p}, {"q", a.form.q}, {"case", to_string(a.form.which)}, {"count", a.count}};
  if (a.witness) {
    j["witness"] = a.witness->coords();
    j["witness_rule"] = a.witness_rule;
    j["witness_ok"] = a.witness_ok;
  }
  if (a.lambda_mu_solvable) j["lambda_mu_solvable"] = *a.lambda_mu_solvable;
  return j;
}

inline Json to_json(const WhiteSweep& s) {
  Json white = Json::array();
  for (const auto& a : s.audits) white.push_back(to_json(a));
  Json violations = Json::array();
  for (const auto& a : s.violations) violations.push_back(to_json(a));
  return Json{{"q_max", s.q_max},
              {"triples", s.audits.size()},
              {"violations", violations},
              {"witnesses_checked", s.witnesses_checked},
              {"witnesses_failed", s.witnesses_failed},
              {"lambda_mu_cases", s.lambda_mu_cases},
              {"lambda_mu_unsolvable", s.lambda_mu_unsolvable},
              {"white", white}};
}

inline Json to_json(const StabilityReport& r) {
  Json inv = Json::array();
  for (const auto& d : r.stabilizer_invariants) inv.push_back(d.get_str());
  return Json{{"origin_interior", r.origin_interior},
              {"support_hull_fulldim", r.support_hull_fulldim},
              {"origin_in_support_hull_interior", r.origin_in_support_hull_interior},
              {"stabilizer_invariants", inv},
              {"stabilizer_trivial", r.stabilizer_trivial},
              {"stabilizer_scope", "torus only; overall scaling absorbed by projectivization"},
              {"stable", r.stable},
              {"smooth", r.smooth}};
}

inline Json to_json(const ScanEntry& e) {
  Json j{{"polytope", e.name}};
  if (e.skipped) {
    j["verdict"] = "SKIPPED";
    j["reason"] = "interior lattice points lie in an affine hyperplane";
  } else {
    j["verdict"] = to_string(*e.verdict);
    j["certificate"] = e.certificate;
    j["kernel_dims"] = e.kernel_dims;
    j["obstructions"] = e.obstructions;
  }
  j["roots"] = e.root_count;
  return j;
}

}  // namespace torelli
