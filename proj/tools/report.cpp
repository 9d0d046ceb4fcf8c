#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace msk::cli {
namespace {

using nlohmann::json;

json numerics_json(const NumericsConfig& n) {
  return {{"fd_step", n.fd_step},
          {"fd_step_second", n.fd_step_second},
          {"richardson", n.richardson},
          {"newton_max_iter", n.newton_max_iter},
          {"newton_tol", n.newton_tol},
          {"quad_nodes", n.quad_nodes},
          {"umbilic_tol", n.umbilic_tol},
          {"critical_tol", n.critical_tol},
          {"cond_guard", n.cond_guard},
          {"immersion_guard", n.immersion_guard},
          {"axis_guard", n.axis_guard},
          {"polar_margin", n.polar_margin}};
}

void write_string(std::string& out, const std::string& s) {
  out += json(s).dump();
}

void write(std::string& out, const json& v) {
  switch (v.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        write_string(out, k);
        out += ':';
        write(out, item);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        write(out, v[i]);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      out += format_number(v.get<double>());
      break;
    default:
      out += v.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

std::string format_number(double v) {
  // Infinite residuals (a failed bracket, say) are clamped to the largest
  // finite double so the report stays valid JSON.
  if (std::isnan(v)) v = std::numeric_limits<double>::max();
  if (std::isinf(v)) v = std::copysign(std::numeric_limits<double>::max(), v);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

json report_json(const RunConfig& config, const RunResult& result) {
  json checks = json::array();
  int passed = 0;
  for (const CheckResult& r : result.checks) {
    json c = {{"id", r.id},
              {"statement", r.statement},
              {"max_residual", r.max_residual},
              {"tolerance", r.tolerance},
              {"pass", r.pass},
              {"skipped", r.skipped},
              {"n_points", r.n_points},
              {"n_skipped", r.n_skipped}};
    c["worst_point"] = r.worst_point ? json::array({r.worst_point->first, r.worst_point->second}) : json(nullptr);
    if (!r.note.empty()) c["note"] = r.note;
    checks.push_back(std::move(c));
    passed += r.pass ? 1 : 0;
  }
  const int total = static_cast<int>(result.checks.size());
  return {{"environment",
           {{"config", config.raw},
            {"seed", config.seed},
            {"version", version},
            {"numerics", numerics_json(config.numerics)}}},
          {"grid",
           {{"ns", config.grid.ns},
            {"nt", config.grid.nt},
            {"margin_s", config.grid.margin_s},
            {"margin_t", config.grid.margin_t},
            {"n_points", result.fields.size()}}},
          {"checks", checks},
          {"summary", {{"n_checks", total}, {"n_passed", passed}, {"n_failed", total - passed}, {"all_passed", passed == total}}}};
}

std::string dump_json(const json& doc) {
  std::string out;
  write(out, doc);
  out += '\n';
  return out;
}

void write_report_csv(std::ostream& out, const RunResult& result) {
  out << "id,statement,max_residual,tolerance,pass,skipped,worst_s,worst_t,n_points,n_skipped\r\n";
  for (const CheckResult& r : result.checks) {
    out << csv_field(r.id) << ',' << csv_field(r.statement) << ',' << format_number(r.max_residual) << ','
        << format_number(r.tolerance) << ',' << (r.pass ? "true" : "false") << ',' << (r.skipped ? "true" : "false")
        << ',';
    if (r.worst_point) out << format_number(r.worst_point->first) << ',' << format_number(r.worst_point->second);
    else out << ',';
    out << ',' << r.n_points << ',' << r.n_skipped << "\r\n";
  }
}

void write_fields_csv(std::ostream& out, const RunResult& result) {
  out << "s,t,x,y,z,lambda1,lambda2,K,H,pairing,blaschke_ratio\r\n";
  for (const PointFields& f : result.fields) {
    for (double v : {f.s, f.t, f.p(0), f.p(1), f.p(2), f.lambda1, f.lambda2, f.K, f.H, f.pairing})
      out << format_number(v) << ',';
    if (f.blaschke_ratio) out << format_number(*f.blaschke_ratio);
    out << "\r\n";
  }
}

}  // namespace msk::cli
