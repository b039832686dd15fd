// Command-line front end: loads a scene, runs one check or construction, and
// reports. Exit codes: 0 all verdicts pass, 1 verification failure, 2 input
// or schema error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "courant/report.hpp"
#include "courant/scene.hpp"

namespace {

using courant::report::Json;
namespace rep = courant::report;

struct Common {
  std::string scene_path;
  std::uint64_t seed = 0;
  unsigned degree_cap = 3;
  bool json = false;
  std::string out;
};

struct Outcome {
  Json body = Json::object();
  bool passed = true;
  std::vector<std::string> lines;  // human-readable summary
};

courant::Scene load(const Common& c) {
  if (c.scene_path.empty()) return {};
  return courant::load_scene(c.scene_path);
}

std::string verdict_word(bool ok) { return ok ? "PASS" : "FAIL"; }

std::vector<std::string> split_exprs(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

void describe_morphism(Outcome& o, const courant::MorphismVerdict& v) {
  o.lines.push_back(std::string("morphism: ") + verdict_word(v.is_morphism));
  for (const auto& f : v.failures)
    o.lines.push_back("  condition (" + std::to_string(f.equation) + ") " + courant::to_string(f.condition) + " fails");
}

// ---------------------------------------------------------------------------

struct AxiomsArgs {
  std::string structure;
  std::size_t random = 100;
};

Outcome run_axioms(const Common& c, const AxiomsArgs& a) {
  auto scene = load(c);
  auto s = scene.structure(a.structure);
  auto vars = scene.variables_of(a.structure);
  courant::AxiomOptions opt;
  opt.degree_cap = c.degree_cap;
  opt.random_sections = a.random;
  opt.seed = c.seed;
  auto r = courant::check_axioms(s, opt);
  Outcome o;
  o.passed = r.all_passed();
  o.body["structure"] = a.structure;
  o.body["axioms"] = rep::axioms(r, vars);
  for (const auto& ax : r.axioms)
    o.lines.push_back("axiom (" + ax.axiom + "): " + verdict_word(ax.passed) + " (" + std::to_string(ax.checked) + " checks)");
  return o;
}

struct LeibnizArgs {
  std::string structure;
  std::size_t samples = 100;
  unsigned degree = 2;
};

/// The printed variant of the second rule is expected to fail; the command
/// passes when the first rule and the corrected second rule hold.
Outcome run_leibniz(const Common& c, const LeibnizArgs& a) {
  auto scene = load(c);
  auto s = scene.structure(a.structure);
  courant::LeibnizOptions opt{a.samples, a.degree, c.seed};
  auto r = courant::check_leibniz(s, opt);
  Outcome o;
  o.passed = r.eq1.passed && r.eq2_corrected.passed;
  o.body["structure"] = a.structure;
  o.body["rules"] = rep::leibniz(r, scene.variables_of(a.structure));
  for (const auto* rule : {&r.eq1, &r.eq2_corrected, &r.eq2_printed})
    o.lines.push_back(rule->rule + ": " + verdict_word(rule->passed));
  return o;
}

struct MorphismArgs {
  std::string source, target, map;
  std::string pairs = "auto";
  std::size_t random = 20;
};

std::vector<courant::RelatedPair> load_pairs(const std::string& path, const courant::BundleMorphism& phi,
                                             const std::vector<std::string>& src_vars,
                                             const std::vector<std::string>& tgt_vars) {
  using namespace courant::scene_detail;
  auto doc = courant::read_json_file(path);
  std::vector<courant::RelatedPair> out;
  std::size_t idx = 0;
  for (const auto& e : array(doc, "pairs")) {
    const std::string where = "pairs[" + std::to_string(idx++) + "]";
    courant::Section f(phi.source(), poly_map(field(e, "f", where), src_vars, where + ".f"));
    courant::Section g(phi.target(), poly_map(field(e, "g", where), tgt_vars, where + ".g"));
    out.push_back({std::move(f), std::move(g)});
  }
  return out;
}

Outcome run_morphism(const Common& c, const MorphismArgs& a) {
  auto scene = load(c);
  auto s1 = scene.structure(a.source);
  auto s2 = scene.structure(a.target);
  const auto& phi = scene.morphism(a.map);
  auto src_vars = scene.variables_of(a.source);
  auto tgt_vars = scene.variables_of(a.target);
  courant::MorphismOptions opt;
  opt.degree_cap = c.degree_cap;
  opt.random_sections = a.random;
  opt.seed = c.seed;

  Outcome o;
  courant::MorphismVerdict v;
  const bool identity_base = phi.base_is_identity() && s1.base_dim() == s2.base_dim() && a.pairs == "auto";
  if (identity_base) {
    v = courant::check_identity_base(s1, s2, phi, opt);
  } else if (a.pairs == "auto") {
    v = courant::check_general_base(s1, s2, phi, std::nullopt, opt);
  } else {
    v = courant::check_general_base(s1, s2, phi, load_pairs(a.pairs, phi, src_vars, tgt_vars), opt);
  }
  o.passed = v.is_morphism;
  o.body["source"] = a.source;
  o.body["target"] = a.target;
  o.body["map"] = a.map;
  o.body["mode"] = identity_base ? "identity_base" : "general_base";
  o.body["verdict"] = rep::morphism(v, src_vars, tgt_vars);
  describe_morphism(o, v);
  return o;
}

struct PullbackArgs {
  std::string ambient, morphism, alt_retraction;
  std::string name = "pullback";
  bool verify_only = false;
};

Outcome run_pullback(const Common& c, const PullbackArgs& a) {
  auto scene = load(c);
  auto ambient = scene.structure(a.ambient);
  const auto& phi = scene.morphism(a.morphism);
  auto amb_vars = scene.variables_of(a.ambient);
  auto src_vars = scene.variables_for(phi.source());
  courant::PullbackProblem problem(ambient, phi);

  Outcome o;
  o.body["ambient"] = a.ambient;
  o.body["morphism"] = a.morphism;
  auto hyp = courant::check_hypotheses(problem);
  o.body["hypotheses"] = rep::hypotheses(hyp, src_vars, amb_vars);
  o.passed = hyp.all_passed();
  o.lines.push_back("anchor tangent: " + verdict_word(hyp.anchor_tangent.passed));
  o.lines.push_back("pairing nondegenerate: " + verdict_word(hyp.pairing_nondegenerate.passed));
  o.lines.push_back("sections involutive: " + verdict_word(hyp.sections_involutive.passed));
  if (!o.passed || a.verify_only) return o;

  auto pulled = courant::construct(problem);
  o.body["structure"] = rep::structure(a.name, pulled, src_vars);
  o.lines.push_back("constructed structure '" + a.name + "' of rank " + std::to_string(pulled.rank()));
  if (!a.alt_retraction.empty()) {
    auto r2 = courant::parse_map(split_exprs(a.alt_retraction), amb_vars);
    auto wd = courant::well_definedness_test(problem, r2, 3, c.seed);
    o.body["well_definedness"] = Json{{"passed", wd.passed}, {"perturbations", wd.perturbations}, {"detail", wd.detail}};
    o.passed = wd.passed;
    o.lines.push_back("well-definedness: " + verdict_word(wd.passed));
  }
  return o;
}

struct IntrinsicArgs {
  std::size_t n = 1, m = 1, perturbations = 5;
  std::string phi;
};

Outcome run_intrinsic(const Common& c, const IntrinsicArgs& a) {
  courant::SplittingIso iso = courant::canonical_splitting(a.n, a.m);
  if (!a.phi.empty()) {
    auto doc = courant::read_json_file(a.phi);
    const std::size_t k = 2 * (a.n + a.m);
    iso.matrix = courant::scene_detail::rational_matrix(courant::scene_detail::field(doc, "matrix", a.phi), k, k,
                                                        a.phi + ".matrix");
  }
  iso.validate();
  Outcome o;
  o.body["n"] = a.n;
  o.body["m"] = a.m;
  auto vars = courant::default_variable_names(a.n);
  try {
    courant::MorphismOptions opt;
    opt.degree_cap = c.degree_cap;
    opt.seed = c.seed;
    auto result = courant::build_intrinsic(iso, opt);
    o.body["structure"] = rep::structure("intrinsic", result.structure, vars);
    Json chain = Json::array();
    for (const auto& arrow : result.chain) {
      chain.push_back(Json{{"arrow", arrow.arrow},
                           {"verdict", rep::morphism(arrow.verdict, vars, courant::default_variable_names(a.n + a.m))}});
      o.lines.push_back("arrow " + arrow.arrow + ": " + verdict_word(arrow.verdict.is_morphism));
    }
    o.body["chain"] = std::move(chain);
    auto uq = courant::uniqueness_check(iso, a.perturbations, c.seed, opt);
    o.body["uniqueness"] = rep::uniqueness(uq);
    o.lines.push_back("unique: " + std::string(uq.unique ? "true" : "false"));
    o.passed = result.all_arrows_pass() && uq.unique;
  } catch (const courant::PullbackError& e) {
    o.passed = false;
    o.body["error"] = e.what();
    o.body["hypotheses"] = rep::hypotheses(e.report(), vars, courant::default_variable_names(a.n + a.m));
    o.lines.push_back(std::string("construction failed: ") + e.what());
    const auto& r = e.report();
    for (const auto& [label, h] : {std::pair{"anchor tangent", &r.anchor_tangent},
                                   std::pair{"pairing nondegenerate", &r.pairing_nondegenerate},
                                   std::pair{"sections involutive", &r.sections_involutive}})
      o.lines.push_back(std::string("  ") + label + ": " + verdict_word(h->passed) +
                        (h->detail.empty() ? "" : " (" + h->detail + ")"));
  }
  return o;
}

struct SimArgs {
  std::string system, input, csv;
  std::vector<double> x0, z0;
  double horizon = 1.0, h = 1e-3;
};

courant::InputSignal input_of(const courant::Scene& scene, const SimArgs& a, std::size_t m) {
  return a.input.empty() ? courant::InputSignal::zero(m) : scene.input(a.input);
}

Json doubles(const std::vector<double>& v) { return Json(v); }

void write_csv_file(const std::string& path, const courant::Trajectory& t) {
  std::ofstream out(path);
  if (!out) throw courant::InputError("cannot write '" + path + "'");
  courant::write_csv(out, t);
}

Outcome run_simulate(const Common& c, const SimArgs& a) {
  auto scene = load(c);
  const auto& sys = scene.ph_system(a.system);
  auto u = input_of(scene, a, sys.m());
  auto traj = courant::simulate_ph(sys, u, a.x0, a.horizon, a.h);
  auto balance = courant::energy_balance(sys, traj, u);
  if (!a.csv.empty()) write_csv_file(a.csv, traj);
  Outcome o;
  o.body["system"] = a.system;
  o.body["steps"] = traj.t.size() - 1;
  o.body["h"] = traj.h;
  o.body["final_state"] = doubles(traj.x.back());
  o.body["final_output"] = doubles(traj.y.back());
  o.body["energy_balance"] = Json{{"delta_h", balance.delta_h}, {"supplied", balance.supplied}, {"residual", balance.residual}};
  o.lines.push_back("steps: " + std::to_string(traj.t.size() - 1));
  o.lines.push_back("energy balance residual: " + std::to_string(balance.residual));
  return o;
}

Outcome run_project(const Common& c, const SimArgs& a) {
  auto scene = load(c);
  const auto& sys = scene.ph_system(a.system);
  auto u = input_of(scene, a, sys.m());
  std::vector<double> z0 = a.z0.empty() ? std::vector<double>(sys.m(), 0.0) : a.z0;
  auto inter = courant::simulate_interaction(sys, u, a.x0, z0, a.horizon, a.h);
  auto projected = courant::project_behavior(inter);
  auto direct = courant::simulate_ph(sys, u, a.x0, a.horizon, a.h);
  double deviation = 0.0;
  bool bitwise = projected.x == direct.x;
  for (std::size_t k = 0; k < projected.y.size(); ++k)
    for (std::size_t i = 0; i < projected.y[k].size(); ++i)
      deviation = std::max(deviation, std::abs(projected.y[k][i] - direct.y[k][i]));
  if (!a.csv.empty()) write_csv_file(a.csv, projected);
  Outcome o;
  o.passed = bitwise && deviation <= 1e-12;
  o.body["system"] = a.system;
  o.body["steps"] = inter.t.size() - 1;
  o.body["max_output_deviation"] = deviation;
  o.body["x_marginal_bitwise_equal"] = bitwise;
  o.body["interaction_drift"] = courant::interaction_drift(sys, u, inter);
  o.lines.push_back("max |(-zdot) - y|: " + std::to_string(deviation));
  o.lines.push_back(std::string("x-marginal bitwise equal: ") + (bitwise ? "true" : "false"));
  return o;
}

struct DiracArgs {
  std::string system, structure, subspace;
};

Outcome run_dirac(const Common& c, const DiracArgs& a) {
  auto scene = load(c);
  Outcome o;
  if (!a.system.empty()) {
    auto v = courant::dirac_structure_of(scene.ph_system(a.system));
    o.passed = v.is_dirac;
    o.body["system"] = a.system;
    o.body["dimension"] = v.subspace.dim();
  } else {
    if (a.subspace.empty()) throw courant::InputError("dirac needs --system or --subspace");
    const auto& d = scene.subspace(a.subspace);
    auto s = scene.structure(a.structure.empty() ? d.structure : a.structure);
    o.passed = courant::dirac_check(s, d.point, d.subspace);
    o.body["subspace"] = a.subspace;
    o.body["dimension"] = d.subspace.dim();
  }
  o.body["is_dirac"] = o.passed;
  o.lines.push_back(std::string("Dirac: ") + (o.passed ? "yes" : "no"));
  return o;
}

// ---------------------------------------------------------------------------

int emit(const Common& c, const std::string& command, Json body, int exit_code, const std::vector<std::string>& lines,
         double elapsed_ms) {
  Json report = Json::object();
  report["command"] = command;
  report["seed"] = c.seed;
  report["degree_cap"] = c.degree_cap;
  for (auto& [k, v] : body.items()) report[k] = v;
  report["exit_code"] = exit_code;
  const std::string text = report.dump(2) + "\n";
  if (!c.out.empty()) {
    std::ofstream out(c.out);
    if (!out) {
      std::cerr << "error: cannot write '" << c.out << "'\n";
      return 2;
    }
    out << text;
  }
  if (c.json) {
    std::cout << text;
  } else {
    std::cout << command << "\n";
    for (const auto& l : lines) std::cout << "  " << l << "\n";
    std::cout << "  time: " << static_cast<long long>(elapsed_ms) << " ms\n";
    std::cout << (exit_code == 0 ? "OK" : exit_code == 1 ? "FAILED" : "ERROR") << "\n";
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact workbench for Courant algebroids on trivial bundles over R^n"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--scene", common.scene_path, "scene file (JSON)");
  app.add_option("--seed", common.seed, "seed for random sections")->capture_default_str();
  app.add_option("--degree-cap", common.degree_cap, "degree cap for section families")->capture_default_str();
  app.add_flag("--json", common.json, "machine-readable report on standard output");
  app.add_option("--out", common.out, "also write the JSON report to this path");

  AxiomsArgs axioms;
  auto* ax = app.add_subcommand("axioms", "check the Courant algebroid axioms");
  ax->add_option("--structure", axioms.structure, "structure name (scene entry or standardN)")->required();
  ax->add_option("--random", axioms.random, "number of random sections")->capture_default_str();

  LeibnizArgs leibniz;
  auto* lb = app.add_subcommand("leibniz", "check the Leibniz rules of the bracket");
  lb->add_option("--structure", leibniz.structure, "structure name")->required();
  lb->add_option("--samples", leibniz.samples, "random tuples")->capture_default_str();
  lb->add_option("--degree", leibniz.degree, "degree of random data")->capture_default_str();

  MorphismArgs morphism;
  auto* mo = app.add_subcommand("morphism", "check a bundle map for the morphism conditions");
  mo->add_option("--source", morphism.source, "source structure")->required();
  mo->add_option("--target", morphism.target, "target structure")->required();
  mo->add_option("--map", morphism.map, "morphism name")->required();
  mo->add_option("--pairs", morphism.pairs, "auto, or a JSON file of related pairs")->capture_default_str();
  mo->add_option("--random", morphism.random, "random sections added to the family")->capture_default_str();

  PullbackArgs pullback;
  auto* pb = app.add_subcommand("pullback", "pull a structure back along an injective morphism");
  pb->add_option("--ambient", pullback.ambient, "ambient structure")->required();
  pb->add_option("--morphism", pullback.morphism, "morphism into the ambient bundle")->required();
  pb->add_flag("--verify-only", pullback.verify_only, "only check the hypotheses");
  pb->add_option("--alt-retraction", pullback.alt_retraction, "comma-separated alternative retraction");
  pb->add_option("--name", pullback.name, "name of the emitted structure")->capture_default_str();

  IntrinsicArgs intrinsic;
  auto* in = app.add_subcommand("intrinsic", "build the intrinsic structure on TM+T*M+E+E*");
  in->add_option("--n", intrinsic.n, "base dimension")->capture_default_str();
  in->add_option("--m", intrinsic.m, "rank of E")->capture_default_str();
  in->add_option("--phi", intrinsic.phi, "JSON file with a constant splitting matrix");
  in->add_option("--perturbations", intrinsic.perturbations, "perturbed candidates")->capture_default_str();

  SimArgs sim;
  auto add_sim = [&](CLI::App* sub, bool with_z) {
    sub->set_help_flag("--help", "Print this help message and exit");  // frees -h
    sub->add_option("--system", sim.system, "ph_system name")->required();
    sub->add_option("--input", sim.input, "input name (default u = 0)");
    sub->add_option("--x0", sim.x0, "initial state, comma separated")->delimiter(',')->required();
    if (with_z) sub->add_option("--z0", sim.z0, "initial z, comma separated")->delimiter(',');
    sub->add_option("--T", sim.horizon, "horizon")->capture_default_str();
    sub->add_option("--h", sim.h, "step")->capture_default_str();
    sub->add_option("--csv", sim.csv, "write the trajectory as CSV");
  };
  auto* si = app.add_subcommand("simulate", "simulate the port-Hamiltonian system");
  add_sim(si, false);
  auto* pr = app.add_subcommand("project", "simulate the interaction system and project its behavior");
  add_sim(pr, true);

  DiracArgs dirac;
  auto* di = app.add_subcommand("dirac", "check a linear Dirac structure");
  di->add_option("--system", dirac.system, "ph_system whose interconnection graph is checked");
  di->add_option("--structure", dirac.structure, "structure whose fiber pairing is used");
  di->add_option("--subspace", dirac.subspace, "subspace name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  try {
    Outcome o;
    if (command == "axioms") o = run_axioms(common, axioms);
    else if (command == "leibniz") o = run_leibniz(common, leibniz);
    else if (command == "morphism") o = run_morphism(common, morphism);
    else if (command == "pullback") o = run_pullback(common, pullback);
    else if (command == "intrinsic") o = run_intrinsic(common, intrinsic);
    else if (command == "simulate") o = run_simulate(common, sim);
    else if (command == "project") o = run_project(common, sim);
    else o = run_dirac(common, dirac);
    return emit(common, command, std::move(o.body), o.passed ? 0 : 1, o.lines, elapsed());
  } catch (const courant::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return emit(common, command, Json{{"error", e.what()}}, 2, {std::string("error: ") + e.what()}, elapsed());
  } catch (const courant::PullbackError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return emit(common, command, Json{{"error", e.what()}}, 1, {std::string("failed: ") + e.what()}, elapsed());
  } catch (const courant::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return emit(common, command, Json{{"error", e.what()}}, 1, {std::string("failed: ") + e.what()}, elapsed());
  }
}
