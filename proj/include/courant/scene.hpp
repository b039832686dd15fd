#pragma once

// JSON scene files: named bundles, sections, Courant structures, morphisms,
// port-Hamiltonian systems, inputs and fiber subspaces. Everything is parsed
// and cross-checked at load time.

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "courant/parse.hpp"
#include "courant/phsim.hpp"

namespace courant {

inline constexpr int kSchemaVersion = 1;

struct SceneBundle {
  TrivialBundle bundle;
  std::vector<std::string> variables;
};

struct SceneStructure {
  std::string bundle;  // name of its bundle entry
  CourantStructure structure;
};

struct SceneSubspace {
  std::string structure;
  std::vector<Rational> point;
  LinearSubspace subspace;
};

class Scene {
 public:
  std::map<std::string, SceneBundle> bundles;
  std::map<std::string, Section> sections;
  std::map<std::string, SceneStructure> structures;
  std::map<std::string, BundleMorphism> morphisms;
  std::map<std::string, PHSystem> ph_systems;
  std::map<std::string, InputSignal> inputs;
  std::map<std::string, SceneSubspace> subspaces;

  const SceneBundle& bundle(const std::string& name) const { return lookup(bundles, name, "bundle"); }
  const Section& section(const std::string& name) const { return lookup(sections, name, "section"); }
  const BundleMorphism& morphism(const std::string& name) const { return lookup(morphisms, name, "morphism"); }
  const PHSystem& ph_system(const std::string& name) const { return lookup(ph_systems, name, "ph_system"); }
  const InputSignal& input(const std::string& name) const { return lookup(inputs, name, "input"); }
  const SceneSubspace& subspace(const std::string& name) const { return lookup(subspaces, name, "subspace"); }

  /// Scene entry, or a built-in name "standard<N>".
  CourantStructure structure(const std::string& name) const {
    if (auto it = structures.find(name); it != structures.end()) return it->second.structure;
    if (auto n = builtin_dimension(name)) return standard_structure(*n);
    throw InputError("unknown structure '" + name + "'");
  }

  std::vector<std::string> variables_of(const std::string& structure_name) const {
    if (auto it = structures.find(structure_name); it != structures.end())
      return bundles.at(it->second.bundle).variables;
    return default_variable_names(structure(structure_name).base_dim());
  }

  /// Variable names for a bundle equal (by dimensions) to `b`.
  std::vector<std::string> variables_for(const TrivialBundle& b) const {
    for (const auto& [name, sb] : bundles)
      if (sb.bundle == b && sb.bundle.label == b.label) return sb.variables;
    return default_variable_names(b.base_dim);
  }

  static std::optional<std::size_t> builtin_dimension(const std::string& name) {
    const std::string stem = "standard";
    if (name.size() <= stem.size() || name.compare(0, stem.size(), stem) != 0) return std::nullopt;
    std::size_t n = 0;
    for (std::size_t i = stem.size(); i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9') return std::nullopt;
      n = n * 10 + static_cast<std::size_t>(name[i] - '0');
      if (n > 64) return std::nullopt;
    }
    return n;
  }

 private:
  template <class Map>
  static const typename Map::mapped_type& lookup(const Map& m, const std::string& name, const char* kind) {
    auto it = m.find(name);
    if (it == m.end()) throw InputError(std::string("unknown ") + kind + " '" + name + "'");
    return it->second;
  }
};

namespace scene_detail {

using nlohmann::json;

inline const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

inline std::string string_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) throw InputError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline std::size_t size_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_unsigned()) throw InputError(where + ": field '" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

/// Numbers may be JSON integers or strings "p/q".
inline Rational rational(const json& v, const std::string& where) {
  try {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return rational_from_string(v.get<std::string>());
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
  throw InputError(where + ": expected an integer or a rational string");
}

inline std::string expr_text(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long>());
  throw InputError(where + ": expected an expression string");
}

inline Polynomial poly(const json& v, const std::vector<std::string>& vars, const std::string& where) {
  try {
    return parse(expr_text(v, where), vars);
  } catch (const ParseError& e) {
    throw InputError(where + ": " + e.what());
  }
}

inline const json& array(const json& v, const std::string& where) {
  if (!v.is_array()) throw InputError(where + ": expected an array");
  return v;
}

inline PolyMap poly_map(const json& v, const std::vector<std::string>& vars, const std::string& where) {
  std::vector<Polynomial> out;
  std::size_t i = 0;
  for (const auto& e : array(v, where)) out.push_back(poly(e, vars, where + "[" + std::to_string(i++) + "]"));
  return PolyMap(vars.size(), std::move(out));
}

inline PolyMatrix poly_matrix(const json& v, std::size_t rows, std::size_t cols, const std::vector<std::string>& vars,
                              const std::string& where) {
  array(v, where);
  if (v.size() != rows) throw InputError(where + ": expected " + std::to_string(rows) + " rows");
  PolyMatrix m(rows, cols, vars.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!v[r].is_array() || v[r].size() != cols) throw InputError(rw + ": expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = poly(v[r][c], vars, rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline RationalMatrix rational_matrix(const json& v, std::size_t rows, std::size_t cols, const std::string& where) {
  array(v, where);
  if (v.size() != rows) throw InputError(where + ": expected " + std::to_string(rows) + " rows");
  RationalMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!v[r].is_array() || v[r].size() != cols) throw InputError(rw + ": expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rational(v[r][c], rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline std::vector<std::string> variables(const json& obj, std::size_t n, const std::string& where) {
  if (!obj.contains("variables")) return default_variable_names(n);
  std::vector<std::string> vars;
  for (const auto& v : array(obj.at("variables"), where + ".variables")) {
    if (!v.is_string()) throw InputError(where + ": variable names must be strings");
    vars.push_back(v.get<std::string>());
  }
  if (vars.size() != n) throw InputError(where + ": expected " + std::to_string(n) + " variable names");
  std::set<std::string> unique(vars.begin(), vars.end());
  if (unique.size() != vars.size()) throw InputError(where + ": repeated variable name");
  return vars;
}

inline SceneBundle bundle_entry(const json& obj, const std::string& name, const std::string& where) {
  std::size_t n = size_field(obj, "base_dim", where), k = size_field(obj, "rank", where);
  return {TrivialBundle{n, k, name}, variables(obj, n, where)};
}

/// Structure data in the bundle's variables; `structure_functions` maps
/// "i,j,h" (1-based) to c_ij^h, omitted entries being zero.
inline CourantStructure structure_entry(const json& obj, const SceneBundle& sb, const std::string& where) {
  const std::size_t n = sb.bundle.base_dim, k = sb.bundle.rank;
  PolyMatrix anchor = poly_matrix(field(obj, "anchor", where), n, k, sb.variables, where + ".anchor");
  RationalMatrix metric = rational_matrix(field(obj, "metric", where), k, k, where + ".metric");
  std::vector<Polynomial> c(k * k * k, Polynomial(n));
  if (obj.contains("structure_functions")) {
    const json& table = obj.at("structure_functions");
    if (!table.is_object()) throw InputError(where + ".structure_functions: expected an object keyed \"i,j,h\"");
    for (const auto& [key, value] : table.items()) {
      const std::string ew = where + ".structure_functions[\"" + key + "\"]";
      std::size_t idx[3];
      std::size_t pos = 0;
      for (int t = 0; t < 3; ++t) {
        std::size_t end = t < 2 ? key.find(',', pos) : key.size();
        std::string part = end == std::string::npos ? "" : key.substr(pos, end - pos);
        if (part.empty() || part.find_first_not_of("0123456789 ") != std::string::npos)
          throw InputError(ew + ": key must read \"i,j,h\"");
        idx[t] = std::stoul(part);
        if (idx[t] < 1 || idx[t] > k) throw InputError(ew + ": index out of range 1.." + std::to_string(k));
        pos = end == std::string::npos ? key.size() : end + 1;
      }
      c[((idx[0] - 1) * k + (idx[1] - 1)) * k + (idx[2] - 1)] = poly(value, sb.variables, ew);
    }
  }
  try {
    return CourantStructure(sb.bundle, std::move(anchor), std::move(metric), std::move(c));
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

}  // namespace scene_detail

/// Parses and validates a scene document.
inline Scene load_scene_json(const nlohmann::json& doc) {
  using namespace scene_detail;
  if (!doc.is_object()) throw InputError("scene: top level must be an object");
  if (!doc.contains("schema_version")) throw InputError("scene: missing schema_version");
  if (!doc.at("schema_version").is_number_integer() || doc.at("schema_version").get<long>() != kSchemaVersion)
    throw InputError("scene: unsupported schema_version (supported: " + std::to_string(kSchemaVersion) + ")");

  static const std::vector<std::string> collections = {"bundles",    "sections",   "courant_structures", "morphisms",
                                                       "ph_systems", "inputs",     "subspaces"};
  for (const auto& [key, value] : doc.items()) {
    if (key == "schema_version") continue;
    if (std::find(collections.begin(), collections.end(), key) == collections.end())
      throw InputError("scene: unknown field '" + key + "'");
    if (!value.is_array()) throw InputError("scene: '" + key + "' must be an array of named objects");
  }

  // Names share one namespace; collect collisions before building anything.
  std::map<std::string, std::vector<std::string>> seen;
  for (const auto& coll : collections) {
    if (!doc.contains(coll)) continue;
    std::size_t idx = 0;
    for (const auto& e : doc.at(coll)) {
      const std::string where = coll + "[" + std::to_string(idx++) + "]";
      seen[string_field(e, "name", where)].push_back(coll);
    }
  }
  std::string collisions;
  for (const auto& [name, where] : seen)
    if (where.size() > 1) {
      collisions += (collisions.empty() ? "" : ", ") + name + " (";
      for (std::size_t i = 0; i < where.size(); ++i) collisions += (i ? ", " : "") + where[i];
      collisions += ")";
    }
  if (!collisions.empty()) throw InputError("scene: duplicate names: " + collisions);

  Scene scene;
  auto each = [&](const char* coll, auto&& fn) {
    if (!doc.contains(coll)) return;
    for (const auto& e : doc.at(coll)) {
      std::string name = e.at("name").get<std::string>();
      fn(e, name, std::string(coll) + " '" + name + "'");
    }
  };
  auto bundle_ref = [&](const std::string& ref, const std::string& where) -> const SceneBundle& {
    if (auto it = scene.bundles.find(ref); it != scene.bundles.end()) return it->second;
    if (auto it = scene.structures.find(ref); it != scene.structures.end()) return scene.bundles.at(it->second.bundle);
    throw InputError(where + ": dangling reference to bundle '" + ref + "'");
  };

  each("bundles", [&](const json& e, const std::string& name, const std::string& where) {
    scene.bundles.emplace(name, bundle_entry(e, name, where));
  });

  each("courant_structures", [&](const json& e, const std::string& name, const std::string& where) {
    if (e.contains("builtin")) {
      const std::string kind = string_field(e, "builtin", where);
      CourantStructure s = [&] {
        if (kind == "standard") return standard_structure(size_field(e, "n", where));
        if (kind == "scaled") {
          const std::string of = string_field(e, "of", where);
          auto it = scene.structures.find(of);
          CourantStructure base = it != scene.structures.end() ? it->second.structure : [&] {
            auto n = Scene::builtin_dimension(of);
            if (!n) throw InputError(where + ": dangling reference to structure '" + of + "'");
            return standard_structure(*n);
          }();
          return scaled_structure(base, rational(field(e, "lambda", where), where + ".lambda"));
        }
        throw InputError(where + ": unknown builtin '" + kind + "'");
      }();
      std::string bundle_name = name;
      SceneBundle sb{TrivialBundle{s.base_dim(), s.rank(), name}, default_variable_names(s.base_dim())};
      scene.bundles.emplace(bundle_name, sb);
      scene.structures.emplace(name, SceneStructure{bundle_name, CourantStructure(sb.bundle, s.anchor(), s.metric(),
                                                                                   s.structure_functions())});
      return;
    }
    const json& b = field(e, "bundle", where);
    std::string bundle_name;
    if (b.is_object()) {
      bundle_name = name;
      scene.bundles.emplace(bundle_name, bundle_entry(b, name, where + ".bundle"));
    } else if (b.is_string()) {
      bundle_name = b.get<std::string>();
      if (!scene.bundles.count(bundle_name))
        throw InputError(where + ": dangling reference to bundle '" + bundle_name + "'");
    } else {
      throw InputError(where + ": 'bundle' must be a name or an object");
    }
    scene.structures.emplace(name, SceneStructure{bundle_name, structure_entry(e, scene.bundles.at(bundle_name), where)});
  });

  each("sections", [&](const json& e, const std::string& name, const std::string& where) {
    const SceneBundle& sb = bundle_ref(string_field(e, "bundle", where), where);
    PolyMap coeffs = poly_map(field(e, "coeffs", where), sb.variables, where + ".coeffs");
    try {
      scene.sections.emplace(name, Section(sb.bundle, std::move(coeffs)));
    } catch (const InputError& err) {
      throw InputError(where + ": " + err.what());
    }
  });

  each("morphisms", [&](const json& e, const std::string& name, const std::string& where) {
    const SceneBundle& src = bundle_ref(string_field(e, "source", where), where);
    const SceneBundle& tgt = bundle_ref(string_field(e, "target", where), where);
    PolyMap base = e.contains("base_map") ? poly_map(e.at("base_map"), src.variables, where + ".base_map")
                                          : PolyMap::identity(src.bundle.base_dim);
    PolyMatrix fiber = poly_matrix(field(e, "fiber_matrix", where), tgt.bundle.rank, src.bundle.rank, src.variables,
                                   where + ".fiber");
    std::optional<PolyMap> retraction;
    if (e.contains("retraction")) retraction = poly_map(e.at("retraction"), tgt.variables, where + ".retraction");
    else if (base.is_identity()) retraction = PolyMap::identity(src.bundle.base_dim);
    try {
      scene.morphisms.emplace(name, BundleMorphism(src.bundle, tgt.bundle, std::move(base), std::move(fiber),
                                                   std::move(retraction)));
    } catch (const InputError& err) {
      throw InputError(where + ": " + err.what());
    }
  });

  each("ph_systems", [&](const json& e, const std::string& name, const std::string& where) {
    std::size_t n = size_field(e, "n", where), m = size_field(e, "m", where);
    auto vars = variables(e, n, where);
    RationalMatrix j = rational_matrix(field(e, "J", where), n, n, where + ".J");
    RationalMatrix b = rational_matrix(field(e, "B", where), n, m, where + ".B");
    Polynomial h = poly(field(e, "H", where), vars, where + ".H");
    std::string label = e.contains("label") ? string_field(e, "label", where) : name;
    try {
      scene.ph_systems.emplace(name, PHSystem(std::move(j), std::move(b), std::move(h), std::move(label)));
    } catch (const InputError& err) {
      throw InputError(where + ": " + err.what());
    }
  });

  each("inputs", [&](const json& e, const std::string& name, const std::string& where) {
    scene.inputs.emplace(name, InputSignal(poly_map(field(e, "u", where), {"t"}, where + ".u")));
  });

  each("subspaces", [&](const json& e, const std::string& name, const std::string& where) {
    const std::string sname = string_field(e, "structure", where);
    CourantStructure s = [&] {
      try {
        return scene.structure(sname);
      } catch (const InputError&) {
        throw InputError(where + ": dangling reference to structure '" + sname + "'");
      }
    }();
    std::vector<Rational> point(s.base_dim());
    if (e.contains("point")) {
      const json& p = array(e.at("point"), where + ".point");
      if (p.size() != s.base_dim()) throw InputError(where + ": point has the wrong dimension");
      for (std::size_t i = 0; i < p.size(); ++i) point[i] = rational(p[i], where + ".point");
    }
    std::vector<std::vector<Rational>> basis;
    for (const auto& v : array(field(e, "basis", where), where + ".basis")) {
      std::vector<Rational> vec;
      for (const auto& q : array(v, where + ".basis")) vec.push_back(rational(q, where + ".basis"));
      basis.push_back(std::move(vec));
    }
    try {
      scene.subspaces.emplace(name, SceneSubspace{sname, std::move(point), LinearSubspace(s.rank(), std::move(basis))});
    } catch (const InputError& err) {
      throw InputError(where + ": " + err.what());
    }
  });
  return scene;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte, std::string("JSON in '") + path + "': " + e.what());
  }
}

inline Scene load_scene(const std::string& path) {
  try {
    return load_scene_json(read_json_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("scene '") + path + "': " + e.what());
  }
}

}  // namespace courant
