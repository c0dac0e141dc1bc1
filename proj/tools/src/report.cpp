#include "report.hpp"

#include <fstream>

#include "cmk/error.hpp"

namespace cmk::cli {

json to_json(const TraceStep& s) {
  return {{"t", s.t},       {"newton_iterations", s.newton_iterations},
          {"residual", s.residual}, {"min_b_eig", s.min_b_eig},
          {"R", s.R},       {"r", s.r},
          {"ratio", s.ratio}};
}

json to_json(const AfCheck& a) {
  return {{"lhs", a.lhs},
          {"rhs", a.rhs},
          {"slack", a.slack},
          {"subtracted_mean", a.subtracted_mean},
          {"equality_case", a.equality_case}};
}

json to_json(const DiagnosticsReport& d) {
  json j = {{"R", d.R},
            {"r", d.r},
            {"ratio", d.ratio},
            {"c2_quantity", d.c2_quantity},
            {"min_b_eig", d.min_b_eig},
            {"f1_satisfied", d.f1_satisfied},
            {"notes", d.notes}};
  if (d.zeta_max) j["zeta_max"] = *d.zeta_max;
  if (d.zeta_bound_ratio) j["zeta_bound_ratio"] = *d.zeta_bound_ratio;
  if (d.gamma_used) j["gamma_used"] = *d.gamma_used;
  if (d.af_check) j["af_check"] = to_json(*d.af_check);
  return j;
}

json to_json(const ResidualReport& r) { return {{"linf", r.linf}, {"l2", r.l2}}; }

json parameters_json(const ProblemSpec& spec) {
  const auto& res = spec.grid()->resolution();
  json grid = {{"n", res.n}};
  if (res.n == 1) {
    grid["m_theta"] = res.m_theta;
  } else {
    grid["m_lat"] = res.m_lat;
    grid["m_lon"] = res.m_lon;
    grid["scheme"] = res.scheme == LatitudeScheme::kSpectral ? "spectral" : "second_order";
  }
  return {{"n", spec.n},
          {"k", spec.k},
          {"p", spec.p},
          {"q", spec.q},
          {"grid", grid},
          {"tol_newton", spec.tol_newton},
          {"max_newton", spec.max_newton}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << j.dump(2) << '\n';
}

void write_trace_jsonl(const std::string& path, const SolveTrace& trace) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  for (const auto& s : trace.steps) os << to_json(s).dump() << '\n';
}

}  // namespace cmk::cli
