#include "ergo/export.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ergo {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

std::string grid_csv(const GridFunction& g) {
  std::ostringstream os;
  g.write_csv(os);
  return os.str();
}

std::string kernel_csv(const Kernel& W, int n) {
  std::ostringstream os;
  os << "x,y,W\n";
  for (int i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    for (int j = 0; j <= n; ++j) {
      const double y = static_cast<double>(j) / n;
      os << format_real(x) << ',' << format_real(y) << ',' << format_real(W(x, y)) << '\n';
    }
  }
  return os.str();
}

Json real_json(double x) {
  if (std::isfinite(x)) return x;
  return format_real(x);
}

Json to_json(const PeriodicOrbit& orbit) {
  Json j;
  j["period"] = orbit.period();
  j["points"] = orbit.points;
  j["itinerary"] = orbit.itinerary;
  j["birkhoff_average"] = real_json(orbit.birkhoff_average);
  return j;
}

Json to_json(const SubactionResult& r) {
  Json j;
  j["m"] = r.m;
  j["residual"] = r.residual;
  j["calibration_gap"] = r.calibration_gap;
  j["subaction_gap"] = r.subaction_gap;
  j["calibrated"] = r.calibrated;
  j["iterations"] = r.iterations;
  j["n_grid"] = r.V.n_grid();
  j["orbit"] = to_json(r.orbit);
  return j;
}

Json to_json(const TwistReport& r) {
  Json j;
  j["is_twist"] = r.is_twist;
  j["method"] = to_string(r.method);
  j["margin"] = real_json(r.margin);
  j["margin_tol"] = r.margin_tol;
  j["witness"] = {{"a", r.witness[0]}, {"b", r.witness[1]}, {"a_prime", r.witness[2]}, {"b_prime", r.witness[3]}};
  if (r.method == TwistMethod::MixedPartial) {
    j["mixed_partial_max"] = r.mixed_partial_max;
    j["mixed_partial_min"] = r.mixed_partial_min;
  }
  return j;
}

Json to_json(const TransportPlan& plan) {
  Json j;
  Json atoms = Json::array();
  for (const auto& [p, w] : plan.atoms()) atoms.push_back({{"x", p.x}, {"y", p.y}, {"w", w}});
  j["atoms"] = atoms;
  j["value"] = real_json(plan.value);
  j["method"] = plan.method;
  return j;
}

Json to_json(const DualityReport& r) {
  Json j;
  j["passed"] = r.passed;
  j["admissible"] = r.admissible;
  j["worst_violation"] = real_json(r.worst_violation);
  j["violation_at"] = {r.violation_at.x, r.violation_at.y};
  j["slackness"] = r.slackness;
  j["worst_slack"] = r.worst_slack;
  j["slack_at"] = {r.slack_at.x, r.slack_at.y};
  j["constant"] = r.constant;
  j["dual_value"] = r.dual_value;
  j["primal_value"] = r.primal_value;
  j["gap"] = r.gap;
  return j;
}

Json to_json(const MonotonicityReport& r) {
  Json j;
  j["passed"] = r.passed;
  j["worst_slack"] = real_json(r.worst_slack);
  j["subset"] = r.subset;
  j["permutation"] = r.permutation;
  j["checked"] = r.checked;
  return j;
}

Json to_json(const GraphReport& r) {
  Json j;
  j["is_graph"] = r.is_graph;
  j["nonincreasing"] = r.nonincreasing;
  j["witnesses"] = r.witnesses;
  return j;
}

}  // namespace ergo
