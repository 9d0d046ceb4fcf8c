#include "config.hpp"

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

#include "checks.hpp"

namespace msk::cli {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  fail(ErrorKind::ConfigError, where + ": " + what);
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) bad(where, "unknown key \"" + k + "\"");
}

const json& object_at(const json& doc, const char* key, const std::string& where) {
  if (!doc.contains(key)) bad(where, std::string("missing \"") + key + "\"");
  const json& v = doc.at(key);
  if (!v.is_object()) bad(where + "." + key, "expected an object");
  return v;
}

double number(const json& obj, const char* key, const std::string& where, std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    bad(where, std::string("missing \"") + key + "\"");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) bad(where + "." + key, "expected a number");
  return v.get<double>();
}

int integer(const json& obj, const char* key, const std::string& where, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) bad(where + "." + key, "expected an integer");
  return v.get<int>();
}

std::string text(const json& obj, const char* key, const std::string& where, std::optional<std::string> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    bad(where, std::string("missing \"") + key + "\"");
  }
  const json& v = obj.at(key);
  if (!v.is_string()) bad(where + "." + key, "expected a string");
  return v.get<std::string>();
}

Vec3 vec3(const json& obj, const char* key, const std::string& where, const Vec3& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 3) bad(where + "." + key, "expected an array of 3 numbers");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) bad(where + "." + key, "expected an array of 3 numbers");
    out(i) = v[i].get<double>();
  }
  return out;
}

bool jet_source_fd(const json& obj, const std::string& where) {
  const std::string s = text(obj, "jet_source", where, std::string("analytic"));
  if (s == "analytic") return false;
  if (s == "fd") return true;
  bad(where + ".jet_source", "expected \"analytic\" or \"fd\"");
}

NormModel builtin_norm(const json& spec, const std::string& where) {
  const std::string family = text(spec, "family", where);
  if (family == "euclidean") return NormModel::euclidean();
  if (family == "lp") return NormModel::lp(number(spec, "p", where));
  if (family == "ellipsoid") {
    if (!spec.contains("A")) bad(where, "missing \"A\"");
    const json& a = spec.at("A");
    if (!a.is_array() || a.size() != 3) bad(where + ".A", "expected a 3x3 array");
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
      if (!a[i].is_array() || a[i].size() != 3) bad(where + ".A", "expected a 3x3 array");
      for (int k = 0; k < 3; ++k) {
        if (!a[i][k].is_number()) bad(where + ".A", "expected numbers");
        m(i, k) = a[i][k].get<double>();
      }
    }
    return NormModel::ellipsoid(m);
  }
  bad(where + ".family", "unknown norm family \"" + family + "\"");
}

NormModel build_norm(const json& spec, bool& fd) {
  const std::string where = "norm";
  allow_keys(spec, where, {"family", "A", "p", "jet_source", "fd_step", "fd_step_second", "gauge"});
  const std::string family = text(spec, "family", where);
  NormModel norm = NormModel::euclidean();
  if (family == "custom") {
    // A gauge-only norm: the dual jets of the underlying family are withheld,
    // so Birkhoff points come from the Newton fallback.
    const json& g = object_at(spec, "gauge", where);
    allow_keys(g, where + ".gauge", {"family", "A", "p"});
    const NormModel base = builtin_norm(g, where + ".gauge");
    HomogeneousJets jets;
    jets.value = [base](const Vec3& x) { return base.gauge(x); };
    jets.gradient = [base](const Vec3& x) { return base.gauge_gradient(x); };
    jets.hessian = [base](const Vec3& x) { return base.gauge_hessian(x); };
    norm = NormModel::custom(jets, std::nullopt, true);
  } else {
    norm = builtin_norm(spec, where);
  }
  fd = jet_source_fd(spec, where);
  if (fd)
    norm = norm.with_finite_differences(number(spec, "fd_step", where, 1e-5),
                                        number(spec, "fd_step_second", where, 1e-4));
  return norm;
}

ParamDomain domain_override(const json& spec, const std::string& where, ParamDomain d) {
  if (spec.contains("domain")) {
    const json& v = spec.at("domain");
    if (!v.is_array() || v.size() != 4) bad(where + ".domain", "expected [s0, s1, t0, t1]");
    for (const auto& x : v)
      if (!x.is_number()) bad(where + ".domain", "expected numbers");
    d.s0 = v[0].get<double>();
    d.s1 = v[1].get<double>();
    d.t0 = v[2].get<double>();
    d.t1 = v[3].get<double>();
    if (!(d.s0 < d.s1 && d.t0 < d.t1)) bad(where + ".domain", "empty parameter rectangle");
  }
  if (spec.contains("periodic")) {
    const json& v = spec.at("periodic");
    if (!v.is_array() || v.size() != 2 || !v[0].is_boolean() || !v[1].is_boolean())
      bad(where + ".periodic", "expected [bool, bool]");
    d.periodic_s = v[0].get<bool>();
    d.periodic_t = v[1].get<bool>();
  }
  return d;
}

SurfacePatch build_surface(const json& spec, const NormModel& norm, const NumericsConfig& cfg, bool& fd) {
  const std::string where = "surface";
  allow_keys(spec, where,
             {"family", "radius", "center", "axes", "R", "r", "c", "s_max", "rho", "terms", "domain", "periodic",
              "jet_source", "fd_step", "fd_step_second", "orientation"});
  const std::string family = text(spec, "family", where);
  std::optional<SurfacePatch> surface;
  if (family == "euclidean_sphere") {
    surface = euclidean_sphere(number(spec, "radius", where, 1.0), vec3(spec, "center", where, Vec3::Zero()));
  } else if (family == "ellipsoid") {
    const Vec3 axes = vec3(spec, "axes", where, Vec3::Ones());
    surface = ellipsoid_surface(axes(0), axes(1), axes(2));
  } else if (family == "torus") {
    surface = torus(number(spec, "R", where), number(spec, "r", where));
  } else if (family == "catenoid") {
    surface = catenoid(number(spec, "c", where, 1.0), number(spec, "s_max", where, 2.0));
  } else if (family == "minkowski_sphere") {
    surface = make_minkowski_sphere(norm, number(spec, "rho", where, 1.0), vec3(spec, "center", where, Vec3::Zero()),
                                    cfg);
  } else if (family == "graph") {
    if (!spec.contains("terms") || !spec.at("terms").is_array())
      bad(where + ".terms", "expected an array of [i, j, coefficient]");
    std::vector<std::tuple<int, int, double>> terms;
    for (const json& t : spec.at("terms")) {
      if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
          !t[2].is_number() || t[0].get<int>() < 0 || t[1].get<int>() < 0)
        bad(where + ".terms", "each term is [i >= 0, j >= 0, coefficient]");
      terms.emplace_back(t[0].get<int>(), t[1].get<int>(), t[2].get<double>());
    }
    if (!spec.contains("domain")) bad(where, "graph surfaces need a \"domain\"");
    surface = polynomial_graph(std::move(terms), domain_override(spec, where, {}));
  } else {
    bad(where + ".family", "unknown surface family \"" + family + "\"");
  }

  if (family != "graph" && (spec.contains("domain") || spec.contains("periodic"))) {
    const SurfacePatch base = *surface;
    surface = SurfacePatch(
        [base](double s, double t) { return base.evaluate_jet(s, t).f; },
        [base](double s, double t) { return base.evaluate_jet(s, t); },
        domain_override(spec, where, base.domain()), base.orientation(), base.info());
  }
  const int orientation = integer(spec, "orientation", where, 1);
  if (orientation != 1 && orientation != -1) bad(where + ".orientation", "expected 1 or -1");
  if (orientation == -1) surface = surface->flipped();
  fd = jet_source_fd(spec, where);
  if (fd)
    surface = surface->with_finite_differences(number(spec, "fd_step", where, 1e-5),
                                               number(spec, "fd_step_second", where, 1e-4));
  return *surface;
}

NumericsConfig build_numerics(const json& doc) {
  NumericsConfig n;
  if (!doc.contains("numerics")) return n;
  const json& spec = object_at(doc, "numerics", "config");
  const std::string where = "numerics";
  allow_keys(spec, where,
             {"fd_step", "fd_step_second", "richardson", "newton_max_iter", "newton_tol", "quad_nodes", "umbilic_tol",
              "critical_tol", "cond_guard", "immersion_guard", "axis_guard", "polar_margin"});
  n.fd_step = number(spec, "fd_step", where, n.fd_step);
  n.fd_step_second = number(spec, "fd_step_second", where, n.fd_step_second);
  if (spec.contains("richardson")) {
    if (!spec.at("richardson").is_boolean()) bad(where + ".richardson", "expected a boolean");
    n.richardson = spec.at("richardson").get<bool>();
  }
  n.newton_max_iter = integer(spec, "newton_max_iter", where, n.newton_max_iter);
  n.newton_tol = number(spec, "newton_tol", where, n.newton_tol);
  n.quad_nodes = integer(spec, "quad_nodes", where, n.quad_nodes);
  n.umbilic_tol = number(spec, "umbilic_tol", where, n.umbilic_tol);
  n.critical_tol = number(spec, "critical_tol", where, n.critical_tol);
  n.cond_guard = number(spec, "cond_guard", where, n.cond_guard);
  n.immersion_guard = number(spec, "immersion_guard", where, n.immersion_guard);
  n.axis_guard = number(spec, "axis_guard", where, n.axis_guard);
  n.polar_margin = number(spec, "polar_margin", where, n.polar_margin);
  try {
    n.validate();
  } catch (const Error& e) {
    bad(where, e.what());
  }
  return n;
}

PlanarSpec build_planar(const json& spec) {
  const std::string where = "planar";
  allow_keys(spec, where, {"support", "radius", "a", "b", "path", "nodes"});
  PlanarSpec p;
  p.support = text(spec, "support", where);
  p.nodes = integer(spec, "nodes", where, p.nodes);
  if (p.nodes < 4) bad(where + ".nodes", "expected at least 4");
  if (p.support == "circle" || p.support == "constant") {
    p.radius = number(spec, "radius", where, 1.0);
    if (!(p.radius > 0)) bad(where + ".radius", "expected a positive number");
  } else if (p.support == "ellipse") {
    p.a = number(spec, "a", where);
    p.b = number(spec, "b", where);
    if (!(p.a > 0 && p.b > 0)) bad(where, "ellipse semi-axes must be positive");
  } else if (p.support == "csv") {
    p.path = text(spec, "path", where);
  } else {
    bad(where + ".support", "expected circle, ellipse, constant or csv");
  }
  return p;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) bad("config", "expected a JSON object");
  allow_keys(doc, "config", {"norm", "surface", "grid", "checks", "numerics", "output", "seed", "center", "planar"});
  RunConfig rc;
  rc.raw = doc;
  rc.numerics = build_numerics(doc);

  bool norm_fd = false, surface_fd = false;
  try {
    rc.norm = build_norm(object_at(doc, "norm", "config"), norm_fd);
    rc.surface = build_surface(object_at(doc, "surface", "config"), rc.norm, rc.numerics, surface_fd);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    fail(ErrorKind::ConfigError, std::string("invalid norm or surface parameters: ") + e.what());
  }
  rc.fd_jets = norm_fd || surface_fd;

  if (doc.contains("grid")) {
    const json& g = object_at(doc, "grid", "config");
    allow_keys(g, "grid", {"ns", "nt", "margin_s", "margin_t"});
    rc.grid.ns = integer(g, "ns", "grid", rc.grid.ns);
    rc.grid.nt = integer(g, "nt", "grid", rc.grid.nt);
    rc.grid.margin_s = number(g, "margin_s", "grid", rc.numerics.polar_margin);
    rc.grid.margin_t = number(g, "margin_t", "grid", 0.0);
  } else {
    rc.grid.margin_s = rc.numerics.polar_margin;
  }
  if (rc.grid.ns < 2 || rc.grid.nt < 2) bad("grid", "ns and nt must be at least 2");
  if (rc.grid.margin_s < 0 || rc.grid.margin_t < 0) bad("grid", "margins must be non-negative");

  if (!doc.contains("checks") || !doc.at("checks").is_array() || doc.at("checks").empty())
    bad("checks", "expected a non-empty array of check ids");
  for (const json& c : doc.at("checks")) {
    if (!c.is_string()) bad("checks", "expected strings");
    const std::string id = c.get<std::string>();
    if (!find_check(id)) bad("checks", "unknown check \"" + id + "\"");
    rc.checks.push_back(id);
  }

  if (doc.contains("output")) {
    const json& o = object_at(doc, "output", "config");
    allow_keys(o, "output", {"format", "path"});
    rc.output.format = text(o, "format", "output", std::string("json"));
    rc.output.path = text(o, "path", "output", std::string());
    if (rc.output.format != "json" && rc.output.format != "csv") bad("output.format", "expected json or csv");
  }
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned()) bad("seed", "expected a non-negative integer");
    rc.seed = s.get<std::uint64_t>();
  }
  rc.center = vec3(doc, "center", "config", Vec3::Zero());
  if (doc.contains("planar")) rc.planar = build_planar(object_at(doc, "planar", "config"));
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, "config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

}  // namespace msk::cli
