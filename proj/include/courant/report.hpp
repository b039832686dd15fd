#pragma once

// JSON rendering of structures and verdicts. Polynomials appear as canonical
// strings, so reports are diffable and deterministic.

#include <string>
#include <vector>

#include <json.hpp>

#include "courant/intrinsic.hpp"
#include "courant/phsim.hpp"

namespace courant::report {

using Json = nlohmann::ordered_json;

inline Json poly(const Polynomial& p, const std::vector<std::string>& vars) { return p.to_string(vars); }

inline Json poly_map(const PolyMap& m, const std::vector<std::string>& vars) {
  Json out = Json::array();
  for (const auto& p : m.outputs()) out.push_back(p.to_string(vars));
  return out;
}

inline Json poly_matrix(const PolyMatrix& m, const std::vector<std::string>& vars) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string(vars));
    out.push_back(std::move(row));
  }
  return out;
}

inline Json rational_matrix(const RationalMatrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline Json rationals(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

/// A courant_structures entry that load_scene accepts as is.
inline Json structure(const std::string& name, const CourantStructure& s, const std::vector<std::string>& vars) {
  Json c = Json::object();
  for (const auto& [i, j, h] : s.nonzero_structure())
    c[std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + std::to_string(h + 1)] = s.c(i, j, h).to_string(vars);
  return Json{{"name", name},
              {"bundle", Json{{"base_dim", s.base_dim()}, {"rank", s.rank()}, {"variables", vars}}},
              {"anchor", poly_matrix(s.anchor(), vars)},
              {"metric", rational_matrix(s.metric())},
              {"structure_functions", std::move(c)}};
}

inline Json witness(const std::optional<Witness>& w, const std::vector<std::string>& vars) {
  if (!w) return nullptr;
  Json sections = Json::array();
  for (const auto& s : w->sections) sections.push_back(poly_map(s, vars));
  return Json{{"sections", std::move(sections)}, {"defect", poly_map(w->defect, vars)}};
}

inline Json axioms(const AxiomReport& rep, const std::vector<std::string>& vars) {
  Json out = Json::array();
  for (const auto& a : rep.axioms)
    out.push_back(Json{{"axiom", a.axiom}, {"passed", a.passed}, {"checked", a.checked}, {"witness", witness(a.witness, vars)}});
  return out;
}

inline Json leibniz(const LeibnizReport& rep, const std::vector<std::string>& vars) {
  Json out = Json::array();
  for (const auto* r : {&rep.eq1, &rep.eq2_corrected, &rep.eq2_printed})
    out.push_back(Json{{"rule", r->rule}, {"passed", r->passed}, {"checked", r->checked}, {"witness", witness(r->witness, vars)}});
  return out;
}

/// The first two witness sections live on the source, the others on the
/// target; defects are in source variables.
inline Json morphism(const MorphismVerdict& v, const std::vector<std::string>& src_vars,
                     const std::vector<std::string>& tgt_vars) {
  Json failures = Json::array();
  for (const auto& f : v.failures) {
    Json wit = Json::array();
    for (std::size_t i = 0; i < f.witness.size(); ++i)
      wit.push_back(poly_map(f.witness[i], i < 2 ? src_vars : tgt_vars));
    failures.push_back(Json{{"condition", to_string(f.condition)},
                            {"equation", f.equation},
                            {"witness", std::move(wit)},
                            {"defect", poly_matrix(f.defect, src_vars)}});
  }
  return Json{{"is_morphism", v.is_morphism}, {"failures", std::move(failures)}};
}

inline Json hypothesis(const HypothesisCheck& h, const std::vector<std::string>& src_vars,
                       const std::vector<std::string>& amb_vars) {
  Json wit = Json::array();
  for (const auto& w : h.witness) wit.push_back(poly_map(w, w.num_inputs() == src_vars.size() ? src_vars : amb_vars));
  return Json{{"passed", h.passed},
              {"detail", h.detail},
              {"witness", std::move(wit)},
              {"defect", poly_matrix(h.defect, src_vars)}};
}

inline Json hypotheses(const HypothesisReport& r, const std::vector<std::string>& src_vars,
                       const std::vector<std::string>& amb_vars) {
  return Json{{"anchor_tangent", hypothesis(r.anchor_tangent, src_vars, amb_vars)},
              {"pairing_nondegenerate", hypothesis(r.pairing_nondegenerate, src_vars, amb_vars)},
              {"sections_involutive", hypothesis(r.sections_involutive, src_vars, amb_vars)}};
}

inline Json monomials(const std::vector<std::vector<Exponent>>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(m);
  return out;
}

inline Json certificate(const NonExistenceCertificate& c) {
  return Json{{"degree_cap", c.degree_cap},
              {"component", c.component + 1},
              {"unknown_monomials", monomials(c.unknown_monomials)},
              {"equation_monomials", monomials(c.equation_monomials)},
              {"system", rational_matrix(c.system)},
              {"rhs", rationals(c.rhs)},
              {"multipliers", rationals(c.proof.multipliers)},
              {"verified", c.verify()}};
}

inline Json uniqueness(const UniquenessReport& r) {
  Json cands = Json::array();
  for (const auto& c : r.candidates)
    cands.push_back(Json{{"perturbation", c.perturbation}, {"rejected", c.rejected}, {"failing_equations", c.failing_equations}});
  return Json{{"unique", r.unique},
              {"well_definedness", Json{{"passed", r.well_definedness.passed},
                                        {"perturbations", r.well_definedness.perturbations},
                                        {"detail", r.well_definedness.detail}}},
              {"constructed_accepted", r.constructed_accepted},
              {"candidates", std::move(cands)}};
}

}  // namespace courant::report
