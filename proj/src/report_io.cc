#include "mor/report_io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

namespace mor {
namespace {

nlohmann::json Num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string Fmt(double v, const char* spec = "%.6e") {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string Ranks(const std::vector<int>& ranks) {
  std::string out = "[";
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(ranks[i]);
  }
  return out + "]";
}

}  // namespace

std::string FormatReport(const ReductionReport& report, bool hz) {
  const double unit = hz ? 2.0 * std::numbers::pi : 1.0;
  const char* unit_name = hz ? "Hz" : "rad/s";
  std::ostringstream out;
  out << "method: " << report.method << '\n';
  if (report.dualized) out << "dualized: yes\n";
  for (const auto& rec : report.iterations) {
    out << "iter " << rec.iteration << ": ";
    if (rec.action == "init") {
      out << "start R = D";
    } else {
      out << (rec.action == "grow" ? "grow rank at omega = "
                                   : "new point at omega = ")
          << Fmt(rec.omega / unit, "%.6g") << ' ' << unit_name;
    }
    out << "  order " << rec.order << "  linf " << Fmt(rec.linf_error)
        << "  h2 " << Fmt(rec.h2_metric) << "  "
        << (rec.stable ? "stable" : "UNSTABLE x");
    if (rec.action != "init") {
      out << "  cond(W0) " << Fmt(rec.w0_condition, "%.3e") << "  cond(Wk) "
          << Fmt(rec.wk_condition, "%.3e");
      if (!rec.ranks.empty()) out << "  ranks " << Ranks(rec.ranks);
      if (rec.degenerate_spectrum) out << "  (repeated eigenvalues)";
    }
    out << '\n';
  }
  const auto& best = report.iterations.at(report.returned_iteration);
  out << "termination: " << report.termination << '\n';
  out << "returned: iteration " << report.returned_iteration << ", order "
      << best.order << ", linf " << Fmt(best.linf_error) << ", h2 "
      << Fmt(best.h2_metric) << ", " << (best.stable ? "stable" : "unstable")
      << '\n';
  for (const auto& note : report.notes) out << "note: " << note << '\n';
  return out.str();
}

nlohmann::json ReportToJson(const ReductionReport& report,
                            const nlohmann::json& options) {
  nlohmann::json iters = nlohmann::json::array();
  for (const auto& rec : report.iterations) {
    iters.push_back({
        {"iteration", rec.iteration},
        {"action", rec.action},
        {"omega_rad_s", rec.action == "init" ? nlohmann::json(nullptr)
                                             : Num(rec.omega)},
        {"point_index", rec.point_index},
        {"order", rec.order},
        {"linf_error", Num(rec.linf_error)},
        {"h2_metric", Num(rec.h2_metric)},
        {"stable", rec.stable},
        {"w0_condition", Num(rec.w0_condition)},
        {"wk_condition", Num(rec.wk_condition)},
        {"degenerate_spectrum", rec.degenerate_spectrum},
        {"ranks", rec.ranks},
    });
  }
  const auto& best = report.iterations.at(report.returned_iteration);
  return {
      {"method", report.method},
      {"options", options},
      {"dualized", report.dualized},
      {"iterations", std::move(iters)},
      {"termination", report.termination},
      {"summary",
       {{"returned_iteration", report.returned_iteration},
        {"order", best.order},
        {"linf_error", Num(best.linf_error)},
        {"h2_metric", Num(best.h2_metric)},
        {"stable", best.stable}}},
      {"notes", report.notes},
  };
}

std::vector<double> DefaultSigmaGrid(const StateSpace& g, int points) {
  double lo = 0.0;
  double hi = 0.0;
  for (const Complex& z : Poles(g)) {
    const double mag = std::abs(z);
    if (mag <= 0.0) continue;
    lo = lo == 0.0 ? mag : std::min(lo, mag);
    hi = std::max(hi, mag);
  }
  const double center = lo > 0.0 ? std::sqrt(lo * hi) : 1.0;
  const double start = std::log10(center) - 2.0;
  std::vector<double> grid(std::max(points, 2));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = std::pow(10.0, start + 4.0 * static_cast<double>(i) /
                                         static_cast<double>(grid.size() - 1));
  }
  return grid;
}

void WriteSigmaCsv(std::ostream& out, const StateSpace& g, const StateSpace& r,
                   std::span<const double> grid) {
  const StateSpace err = Subtract(g, r);
  out << "omega_rad_s,sigma_max_G,sigma_max_R,sigma_max_error\n";
  char buf[128];
  for (double w : grid) {
    std::snprintf(buf, sizeof(buf), "%.10e,%.10e,%.10e,%.10e\n", w,
                  SigmaMax(g, w), SigmaMax(r, w), SigmaMax(err, w));
    out << buf;
  }
}

}  // namespace mor
