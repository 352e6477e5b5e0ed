#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "shellvib/post.hpp"

namespace shellvib {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ConfigError, where + ": " + what);
}

// Strict view of one JSON object: every key must be consumed.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail(where_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string path(const std::string& key) const { return where_ + "." + key; }

  const json& at(const std::string& key) {
    if (!j_.contains(key)) fail(where_, "missing field '" + key + "'");
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) fail(path(key), "expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  int integer(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_integer()) fail(path(key), "expected an integer");
    return v.get<int>();
  }
  int integer(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) fail(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) fail(path(key), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) { return has(key) ? string(key) : fallback; }

  Vec3 vec3(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array() || v.size() != 3) fail(path(key), "expected an array of three numbers");
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
      if (!v[i].is_number()) fail(path(key), "expected an array of three numbers");
      out[i] = v[i].get<double>();
    }
    return out;
  }
  Vec3 vec3(const std::string& key, const Vec3& fallback) { return has(key) ? vec3(key) : fallback; }

  /// Name of the single key present among `choices`.
  std::string one_of(std::initializer_list<const char*> choices) {
    std::string found;
    for (const char* c : choices) {
      if (!j_.contains(c)) continue;
      if (!found.empty()) fail(where_, "'" + found + "' and '" + c + "' are mutually exclusive");
      found = c;
    }
    if (found.empty()) {
      std::string list;
      for (const char* c : choices) list += (list.empty() ? "" : ", ") + std::string(c);
      fail(where_, "expected one of: " + list);
    }
    return found;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) fail(where_, "unknown field '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

template <int R, int C>
Eigen::Matrix<double, R, C> matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(R)) fail(where, "expected " + std::to_string(R) + " rows");
  Eigen::Matrix<double, R, C> m;
  for (int r = 0; r < R; ++r) {
    if (!j[r].is_array() || j[r].size() != static_cast<std::size_t>(C)) {
      fail(where, "expected " + std::to_string(C) + " columns in every row");
    }
    for (int c = 0; c < C; ++c) {
      if (!j[r][c].is_number()) fail(where, "expected numbers");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

template <class M>
json matrix_json(const M& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

MeshSource parse_mesh(const json& j, json& echo) {
  Fields f(j, "mesh");
  const std::string kind = f.one_of({"obj", "sphere", "roof"});
  MeshSource source;
  if (kind == "obj") {
    const std::string p = f.string("obj");
    source = ObjSource{p};
    echo = {{"obj", p}};
  } else if (kind == "sphere") {
    Fields s(f.at("sphere"), "mesh.sphere");
    SphereSpec spec{s.number("radius"), s.integer("level")};
    s.finish();
    if (!(spec.radius > 0.0)) fail("mesh.sphere.radius", "must be positive");
    if (spec.level < 2 || spec.level > 7) fail("mesh.sphere.level", "must lie in [2, 7]");
    source = spec;
    echo = {{"sphere", {{"radius", spec.radius}, {"level", spec.level}}}};
  } else {
    Fields r(f.at("roof"), "mesh.roof");
    RoofSpec spec{r.number("length"), r.number("radius"), 0.0, r.integer("n")};
    json roof = {{"length", spec.length}, {"radius", spec.radius}, {"n", spec.n}};
    if (r.one_of({"theta", "theta_deg"}) == "theta") {
      spec.theta = r.number("theta");
      roof["theta"] = spec.theta;
    } else {
      const double deg = r.number("theta_deg");
      spec.theta = deg * std::numbers::pi / 180.0;
      roof["theta_deg"] = deg;
    }
    r.finish();
    if (!(spec.length > 0.0) || !(spec.radius > 0.0)) fail("mesh.roof", "length and radius must be positive");
    if (!(spec.theta > 0.0 && spec.theta < std::numbers::pi)) fail("mesh.roof", "theta must lie in (0, pi)");
    if (spec.n < 8) fail("mesh.roof.n", "must be at least 8");
    source = spec;
    echo = {{"roof", roof}};
  }
  f.finish();
  return source;
}

MaterialSpec parse_material(const json& j, json& echo) {
  Fields f(j, "material");
  const std::string kind = f.one_of({"preset", "isotropic", "hexagonal_6mm", "voigt"});
  MaterialSpec m;
  if (kind == "preset") {
    const std::string name = f.string("preset");
    if (name != "BaTiO3") fail("material.preset", "unknown preset '" + name + "' (available: BaTiO3)");
    m = MaterialSpec::batio3();
    echo = {{"preset", name}};
  } else if (kind == "isotropic") {
    Fields i(f.at("isotropic"), "material.isotropic");
    m = MaterialSpec::isotropic(i.number("youngs_modulus"), i.number("poisson_ratio"), i.number("density"));
    i.finish();
    const auto& iso = std::get<IsotropicMaterial>(m.model);
    echo = {{"isotropic",
             {{"youngs_modulus", iso.youngs_modulus}, {"poisson_ratio", iso.poisson_ratio}, {"density", m.density}}}};
  } else if (kind == "hexagonal_6mm") {
    Fields h(f.at("hexagonal_6mm"), "material.hexagonal_6mm");
    const char* keys[] = {"c11", "c12", "c13", "c33", "c44", "c66", "e31", "e33", "e15", "kappa11", "kappa33", "density"};
    double v[12];
    json e;
    for (int k = 0; k < 12; ++k) {
      v[k] = h.number(keys[k]);
      e[keys[k]] = v[k];
    }
    h.finish();
    m = MaterialSpec::hexagonal_6mm(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11]);
    echo = {{"hexagonal_6mm", e}};
  } else {
    Fields g(f.at("voigt"), "material.voigt");
    PiezoMaterial p;
    p.elastic = matrix<6, 6>(g.at("C"), "material.voigt.C");
    p.piezo = matrix<3, 6>(g.at("e"), "material.voigt.e");
    p.permittivity = matrix<3, 3>(g.at("kappa"), "material.voigt.kappa");
    m.model = p;
    m.density = g.number("density");
    g.finish();
    echo = {{"voigt",
             {{"C", matrix_json(p.elastic)},
              {"e", matrix_json(p.piezo)},
              {"kappa", matrix_json(p.permittivity)},
              {"density", m.density}}}};
  }
  f.finish();
  try {
    m.validate();
  } catch (const Error& e) {
    fail("material", e.what());
  }
  return m;
}

Electric parse_electric(const json& j, json& echo) {
  Fields f(j, "electric");
  const std::string name = f.string("condition");
  Electric e;
  if (name == "elastic") {
    e.condition = ElectricCondition::Elastic;
  } else if (name == "unelectroded") {
    e.condition = ElectricCondition::Unelectroded;
  } else if (name == "short_circuited") {
    e.condition = ElectricCondition::ShortCircuited;
  } else if (name == "electroded") {
    e.condition = ElectricCondition::Electroded;
  } else {
    fail("electric.condition", "expected elastic, unelectroded, short_circuited or electroded");
  }
  e.voltage = f.number("voltage", 0.0);
  if (e.voltage != 0.0 && e.condition != ElectricCondition::Electroded) {
    fail("electric.voltage", "only the electroded condition takes a voltage");
  }
  f.finish();
  echo = {{"condition", name}, {"voltage", e.voltage}};
  return e;
}

Constraint parse_constraint(const json& j, const std::string& where, json& echo) {
  Fields f(j, where);
  Constraint c;
  Fields s(f.at("select"), where + ".select");
  const std::string kind = s.one_of({"all", "boundary", "ids", "plane", "nearest"});
  json sel;
  if (kind == "all" || kind == "boundary") {
    if (!s.boolean(kind, false)) fail(s.path(kind), "must be true");
    c.selector = kind == "all" ? VertexSelector(SelectAll{}) : VertexSelector(SelectBoundary{});
    sel[kind] = true;
  } else if (kind == "ids") {
    const json& ids = s.at("ids");
    if (!ids.is_array()) fail(s.path("ids"), "expected an array of vertex ids");
    SelectIds out;
    for (const json& id : ids) {
      if (!id.is_number_integer()) fail(s.path("ids"), "expected integers");
      out.ids.push_back(id.get<int>());
    }
    c.selector = out;
    sel["ids"] = out.ids;
  } else if (kind == "plane") {
    Fields p(s.at("plane"), s.path("plane"));
    SelectPlane plane;
    plane.normal = p.vec3("normal");
    plane.offset = p.number("offset", 0.0);
    plane.tolerance = p.number("tolerance", 1e-9);
    plane.boundary_only = p.boolean("boundary_only", false);
    p.finish();
    if (!(plane.normal.norm() > 0.0)) fail(s.path("plane.normal"), "must be nonzero");
    if (!(plane.tolerance >= 0.0)) fail(s.path("plane.tolerance"), "must be non-negative");
    c.selector = plane;
    sel["plane"] = {{"normal", vec_json(plane.normal)},
                    {"offset", plane.offset},
                    {"tolerance", plane.tolerance},
                    {"boundary_only", plane.boundary_only}};
  } else {
    Fields n(s.at("nearest"), s.path("nearest"));
    SelectNearest near;
    near.point = n.vec3("point");
    near.count = n.integer("count", 1);
    n.finish();
    if (near.count < 1) fail(s.path("nearest.count"), "must be at least 1");
    c.selector = near;
    sel["nearest"] = {{"point", vec_json(near.point)}, {"count", near.count}};
  }
  s.finish();

  const json& fix = f.at("fix");
  if (!fix.is_array() || fix.empty()) fail(where + ".fix", "expected a non-empty array of \"x\", \"y\", \"z\"");
  c.fix = {false, false, false};
  json fix_echo = json::array();
  for (const json& comp : fix) {
    const std::string name = comp.is_string() ? comp.get<std::string>() : "";
    if (name != "x" && name != "y" && name != "z") fail(where + ".fix", "expected \"x\", \"y\" or \"z\"");
    c.fix[name[0] - 'x'] = true;
  }
  for (int i = 0; i < 3; ++i) {
    if (c.fix[i]) fix_echo.push_back(std::string(1, static_cast<char>('x' + i)));
  }
  f.finish();
  echo = {{"select", sel}, {"fix", fix_echo}};
  return c;
}

int component_of(const std::string& name, const std::string& where) {
  if (name == "x" || name == "y" || name == "z") return name[0] - 'x';
  fail(where, "expected \"x\", \"y\" or \"z\"");
}

Probe parse_probe(const json& j, const std::string& where, const MeshSource& mesh, json& echo) {
  Fields f(j, where);
  Probe p;
  p.name = f.string("name");
  const std::string comp = f.string("component", "z");
  p.component = component_of(comp, where + ".component");
  echo = {{"name", p.name}, {"component", comp}};
  if (f.has("at")) {
    const std::string at = f.string("at");
    if (at != "roof_free_edge_midpoint") fail(where + ".at", "expected \"roof_free_edge_midpoint\"");
    const auto* roof = std::get_if<RoofSpec>(&mesh);
    if (!roof) fail(where + ".at", "roof_free_edge_midpoint needs a roof mesh");
    p.point = roof_free_edge_midpoint(*roof);
    echo["at"] = at;
  } else {
    p.point = FacePoint{f.integer("face"), f.number("xi"), f.number("eta")};
    if (p.point.face < 0) fail(where + ".face", "must be non-negative");
    if (!(p.point.xi >= 0.0 && p.point.xi <= 1.0 && p.point.eta >= 0.0 && p.point.eta <= 1.0)) {
      fail(where, "xi and eta must lie in [0, 1]");
    }
    echo["face"] = p.point.face;
    echo["xi"] = p.point.xi;
    echo["eta"] = p.point.eta;
  }
  f.finish();
  return p;
}

}  // namespace

RunConfig parse_config(const json& config) {
  Fields root(config, "config");
  RunConfig rc;
  json echo;

  rc.mesh = parse_mesh(root.at("mesh"), echo["mesh"]);
  rc.thickness = root.number("thickness");
  if (!(rc.thickness > 0.0)) fail("config.thickness", "must be positive");
  echo["thickness"] = rc.thickness;
  rc.material = parse_material(root.at("material"), echo["material"]);

  if (root.has("electric")) {
    rc.electric = parse_electric(root.at("electric"), echo["electric"]);
  } else {
    echo["electric"] = {{"condition", "elastic"}, {"voltage", 0.0}};
  }
  if (rc.electric.condition != ElectricCondition::Elastic && !rc.material.is_piezo()) {
    fail("config.electric", "a piezoelectric condition needs a piezoelectric material");
  }

  Fields analysis(root.at("analysis"), "analysis");
  if (analysis.one_of({"modal", "static"}) == "modal") {
    Fields m(analysis.at("modal"), "analysis.modal");
    ModalAnalysis a;
    a.options.num_modes = m.integer("num_modes", a.options.num_modes);
    a.options.shift_hz = m.number("shift_hz", a.options.shift_hz);
    a.options.tolerance = m.number("tolerance", a.options.tolerance);
    a.options.dense_threshold = m.integer("dense_threshold", a.options.dense_threshold);
    m.finish();
    if (a.options.num_modes < 1) fail("analysis.modal.num_modes", "must be at least 1");
    if (!(a.options.shift_hz > 0.0)) fail("analysis.modal.shift_hz", "must be positive");
    if (!(a.options.tolerance > 0.0)) fail("analysis.modal.tolerance", "must be positive");
    if (a.options.dense_threshold < 0) fail("analysis.modal.dense_threshold", "must be non-negative");
    rc.analysis = a;
    echo["analysis"] = {{"modal",
                         {{"num_modes", a.options.num_modes},
                          {"shift_hz", a.options.shift_hz},
                          {"tolerance", a.options.tolerance},
                          {"dense_threshold", a.options.dense_threshold}}}};
  } else {
    Fields s(analysis.at("static"), "analysis.static");
    StaticAnalysis a;
    json probes = json::array();
    if (s.has("probes")) {
      const json& list = s.at("probes");
      if (!list.is_array()) fail("analysis.static.probes", "expected an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        json e;
        a.probes.push_back(parse_probe(list[i], "analysis.static.probes[" + std::to_string(i) + "]", rc.mesh, e));
        probes.push_back(e);
      }
    }
    s.finish();
    rc.analysis = a;
    echo["analysis"] = {{"static", {{"probes", probes}}}};
  }
  analysis.finish();

  json constraints = json::array();
  if (root.has("constraints")) {
    const json& list = root.at("constraints");
    if (!list.is_array()) fail("config.constraints", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      json e;
      rc.constraints.push_back(parse_constraint(list[i], "constraints[" + std::to_string(i) + "]", e));
      constraints.push_back(e);
    }
  }
  echo["constraints"] = constraints;

  if (root.has("loads")) {
    Fields l(root.at("loads"), "loads");
    rc.areal_load = l.vec3("areal", Vec3::Zero());
    rc.body_force = l.vec3("body", Vec3::Zero());
    l.finish();
  }
  echo["loads"] = {{"areal", vec_json(rc.areal_load)}, {"body", vec_json(rc.body_force)}};

  if (root.has("output")) {
    Fields o(root.at("output"), "output");
    rc.output.directory = o.string("directory", rc.output.directory.string());
    rc.output.name = o.string("name", rc.output.name);
    rc.output.vtk = o.boolean("vtk", rc.output.vtk);
    rc.output.sampling = o.integer("sampling", rc.output.sampling);
    rc.output.vtk_modes = o.integer("vtk_modes", rc.output.vtk_modes);
    o.finish();
    if (rc.output.name.empty() || rc.output.name.find('/') != std::string::npos) {
      fail("output.name", "must be a plain file stem");
    }
    if (rc.output.sampling < 2) fail("output.sampling", "must be at least 2");
    if (rc.output.vtk_modes < 0) fail("output.vtk_modes", "must be non-negative");
  }
  echo["output"] = {{"directory", rc.output.directory.string()},
                    {"name", rc.output.name},
                    {"vtk", rc.output.vtk},
                    {"sampling", rc.output.sampling},
                    {"vtk_modes", rc.output.vtk_modes}};
  root.finish();
  rc.echo = echo;
  return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace shellvib
