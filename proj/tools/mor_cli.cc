// mor: batch model-order reduction of LTI state-space models.
//
//   mor reduce  MODEL --method sys-aaa|lowrank-aaa|balanced [options]
//   mor compare MODEL --max-order K [--methods a,b,c]
//   mor convert --a A.txt --b B.txt --c C.txt [--d D.txt] -o MODEL
//   mor info    MODEL
//
// Exit codes: 0 ok, 1 usage, 2 ParseError, 3 DimensionMismatch,
// 4 SolverFailure, 5 UnstableInput.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mor/balred.h"
#include "mor/compare.h"
#include "mor/errors.h"
#include "mor/lowrank.h"
#include "mor/model_io.h"
#include "mor/norms.h"
#include "mor/report_io.h"
#include "mor/sysaaa.h"

namespace {

enum Exit {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kDimension = 3,
  kSolver = 4,
  kUnstable = 5,
};

int ExitFor(mor::ErrorCode code) {
  switch (code) {
    case mor::ErrorCode::kParseError: return kParse;
    case mor::ErrorCode::kDimensionMismatch: return kDimension;
    case mor::ErrorCode::kUnstableInput: return kUnstable;
    case mor::ErrorCode::kInvalidArgument: return kUsage;
    default: return kSolver;
  }
}

std::string_view Category(int exit_code) {
  switch (exit_code) {
    case kParse: return "ParseError";
    case kDimension: return "DimensionMismatch";
    case kUnstable: return "UnstableInput";
    case kUsage: return "UsageError";
    default: return "SolverFailure";
  }
}

struct CommonOptions {
  std::string model;
  std::optional<int> iters;
  std::optional<int> order;
  std::optional<double> target_linf;
  double min_dist = 0.02;
  bool keep_best = true;
  double tol_bisect = mor::kDefaultBisectTol;
  double tol_minreal = mor::kDefaultMinRealTol;
  std::string report_json;
  bool hz = false;
};

mor::ReduceOptions ToReduceOptions(const CommonOptions& o) {
  mor::ReduceOptions opts;
  opts.max_iterations = o.iters;
  opts.target_order = o.order;
  opts.target_linf = o.target_linf;
  opts.min_dist = o.min_dist;
  opts.keep_best = o.keep_best;
  opts.bisect_tol = o.tol_bisect;
  opts.minreal_tol = o.tol_minreal;
  return opts;
}

nlohmann::json Echo(const CommonOptions& o, const std::string& method) {
  auto opt = [](const auto& v) -> nlohmann::json {
    if (v) return *v;
    return nullptr;
  };
  return {{"model", o.model},         {"method", method},
          {"iters", opt(o.iters)},    {"order", opt(o.order)},
          {"target_linf", opt(o.target_linf)},
          {"min_dist", o.min_dist},   {"keep_best", o.keep_best},
          {"tol_bisect", o.tol_bisect},
          {"tol_minreal", o.tol_minreal}};
}

void AddCommon(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("model", o.model, "Model file (ss n q p format)")
      ->required();
  cmd->add_option("--iters", o.iters, "Maximum interpolation iterations");
  cmd->add_option("--target-linf", o.target_linf,
                  "Stop once the L-infinity error is at or below this");
  cmd->add_option("--min-dist", o.min_dist,
                  "Low-rank: relative distance for growing an existing point")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--keep-best", o.keep_best,
                  "Return the lowest-error iterate (true/false)");
  cmd->add_option("--tol-bisect", o.tol_bisect,
                  "Relative tolerance of the L-infinity bisection")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-minreal", o.tol_minreal,
                  "Relative tolerance of the minimal realization")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--report-json", o.report_json,
                  "Write the machine-readable report here");
  cmd->add_flag("--hz", o.hz, "Display frequencies in Hz");
}

void WriteJson(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) {
    throw mor::Error(mor::ErrorCode::kInvalidArgument, "cannot write " + path);
  }
  out << doc.dump(2) << '\n';
}

mor::ReductionResult ReduceBalanced(const mor::StateSpace& g, int order,
                                    const mor::ReduceOptions& opts) {
  mor::ReductionResult res;
  res.report.method = "balanced";
  res.report.termination = "target-order";
  const auto measure = [&](const mor::StateSpace& r, int iteration) {
    const mor::StateSpace err = mor::Subtract(g, r);
    mor::IterationRecord rec;
    rec.iteration = iteration;
    rec.action = iteration == 0 ? "init" : "truncate";
    rec.order = r.states();
    rec.linf_error = mor::LinfNorm(err, opts.bisect_tol).gamma;
    try {
      rec.h2_metric = mor::H2ErrorMetric(err);
    } catch (const mor::Error&) {
      rec.h2_metric = std::nan("");
    }
    rec.stable = mor::IsStable(r);
    return rec;
  };
  const mor::BalancedResult bal = mor::BalancedTruncate(g, order);
  res.report.iterations.push_back(measure(mor::StateSpace::Static(g.d()), 0));
  res.report.iterations.push_back(measure(bal.sys, 1));
  res.report.returned_iteration = 1;
  std::string hsv = "hankel singular values:";
  for (double s : bal.hsv) hsv += " " + std::to_string(s);
  res.report.notes.push_back(hsv);
  res.interpolant.sys = bal.sys;
  res.interpolant.order = bal.sys.states();
  return res;
}

int RunReduce(const CommonOptions& o, const std::string& method_name,
              const std::string& output, const std::string& sigma_csv,
              int sigma_points) {
  const auto method = mor::ParseMethod(method_name);
  if (!method) {
    std::cerr << "UsageError: unknown method '" << method_name << "'\n";
    return kUsage;
  }
  if (*method == mor::Method::kBalanced && !o.order) {
    std::cerr << "UsageError: --order is required for balanced\n";
    return kUsage;
  }

  const mor::StateSpace g = mor::ReadModelFile(o.model);
  const mor::ReduceOptions opts = ToReduceOptions(o);
  mor::ReductionResult res;
  switch (*method) {
    case mor::Method::kSysAaa: res = mor::Reduce(g, opts); break;
    case mor::Method::kLowRankAaa: res = mor::ReduceLowRank(g, opts); break;
    case mor::Method::kBalanced: res = ReduceBalanced(g, *o.order, opts); break;
  }

  std::cout << mor::FormatReport(res.report, o.hz);
  const std::string out_path =
      output.empty() ? std::string("reduced.ss") : output;
  mor::WriteModelFile(out_path, res.interpolant.sys);
  std::cout << "wrote " << out_path << '\n';
  if (!o.report_json.empty()) {
    WriteJson(o.report_json,
              mor::ReportToJson(res.report, Echo(o, method_name)));
  }
  if (!sigma_csv.empty()) {
    std::ofstream csv(sigma_csv);
    mor::WriteSigmaCsv(csv, g, res.interpolant.sys,
                       mor::DefaultSigmaGrid(g, sigma_points));
  }
  return kOk;
}

int RunCompare(const CommonOptions& o, const std::vector<std::string>& names,
               int max_order) {
  std::vector<mor::Method> methods;
  for (const auto& name : names) {
    const auto m = mor::ParseMethod(name);
    if (!m) {
      std::cerr << "UsageError: unknown method '" << name << "'\n";
      return kUsage;
    }
    methods.push_back(*m);
  }
  const mor::StateSpace g = mor::ReadModelFile(o.model);
  const auto rows =
      mor::Compare(g, methods, max_order, ToReduceOptions(o));
  std::cout << mor::FormatCompareTable(rows);
  if (!o.report_json.empty()) {
    nlohmann::json echo = Echo(o, "compare");
    echo["max_order"] = max_order;
    echo["methods"] = names;
    WriteJson(o.report_json,
              {{"options", echo}, {"rows", mor::CompareToJson(rows)}});
  }
  return kOk;
}

int RunInfo(const std::string& model, double tol_bisect) {
  const mor::StateSpace g = mor::ReadModelFile(model);
  std::cout << "states " << g.states() << "  inputs " << g.inputs()
            << "  outputs " << g.outputs() << '\n';
  const bool stable = mor::IsStable(g);
  std::cout << "stable " << (stable ? "yes" : "no") << '\n';
  const mor::LinfResult linf = mor::LinfNorm(g, tol_bisect);
  std::cout << "linf " << linf.gamma << " at omega " << linf.omega_peak
            << " rad/s\n";
  if (stable) {
    const mor::StateSpace strictly_proper(g.a(), g.b(), g.c(),
                                          mor::Matrix::Zero(g.outputs(),
                                                            g.inputs()));
    std::cout << "h2 (strictly proper part) "
              << mor::H2ErrorMetric(strictly_proper) << '\n';
    std::cout << "hankel singular values:";
    for (double s : mor::HankelSingularValues(g)) std::cout << ' ' << s;
    std::cout << '\n';
  }
  return kOk;
}

int RunConvert(const std::string& a, const std::string& b,
               const std::string& c, const std::string& d,
               const std::string& output) {
  std::optional<mor::Matrix> dm;
  if (!d.empty()) dm = mor::ReadRawMatrixFile(d);
  const mor::StateSpace sys = mor::FromRawMatrices(
      mor::ReadRawMatrixFile(a), mor::ReadRawMatrixFile(b),
      mor::ReadRawMatrixFile(c), dm);
  mor::WriteModelFile(output, sys);
  std::cout << "wrote " << output << " (n=" << sys.states()
            << ", q=" << sys.inputs() << ", p=" << sys.outputs() << ")\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-order reduction of continuous-time LTI systems"};
  app.require_subcommand(1);

  CommonOptions reduce_opts;
  std::string method = "sys-aaa";
  std::string output;
  std::string sigma_csv;
  int sigma_points = 2000;
  auto* reduce = app.add_subcommand("reduce", "Reduce one model");
  AddCommon(reduce, reduce_opts);
  reduce->add_option("--method", method, "sys-aaa, lowrank-aaa or balanced");
  reduce->add_option("--order", reduce_opts.order,
                     "Target order (required for balanced)");
  reduce->add_option("-o,--output", output, "Reduced model path")
      ->default_str("reduced.ss");
  reduce->add_option("--sigma-csv", sigma_csv,
                     "Write a sigma-plot CSV of G, R and G - R");
  reduce->add_option("--sigma-points", sigma_points, "Grid size of the CSV")
      ->check(CLI::Range(2, 1000000));

  CommonOptions compare_opts;
  std::vector<std::string> methods = {"sys-aaa", "lowrank-aaa", "balanced"};
  int max_order = 0;
  auto* compare =
      app.add_subcommand("compare", "Error versus order for several methods");
  AddCommon(compare, compare_opts);
  compare->add_option("--methods", methods, "Comma separated method list")
      ->delimiter(',');
  compare->add_option("--max-order", max_order, "Largest order to tabulate")
      ->required();

  std::string a_path, b_path, c_path, d_path, convert_out;
  auto* convert = app.add_subcommand(
      "convert", "Assemble raw whitespace matrix dumps into a model file");
  convert->add_option("--a", a_path, "A matrix dump")->required();
  convert->add_option("--b", b_path, "B matrix dump")->required();
  convert->add_option("--c", c_path, "C matrix dump")->required();
  convert->add_option("--d", d_path, "D matrix dump (zero if omitted)");
  convert->add_option("-o,--output", convert_out, "Model path")->required();

  std::string info_model;
  double info_tol = mor::kDefaultBisectTol;
  auto* info = app.add_subcommand("info", "Dimensions, stability and norms");
  info->add_option("model", info_model, "Model file")->required();
  info->add_option("--tol-bisect", info_tol, "Bisection tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*reduce) {
      return RunReduce(reduce_opts, method, output, sigma_csv, sigma_points);
    }
    if (*compare) return RunCompare(compare_opts, methods, max_order);
    if (*convert) {
      return RunConvert(a_path, b_path, c_path, d_path, convert_out);
    }
    if (*info) return RunInfo(info_model, info_tol);
  } catch (const mor::Error& e) {
    const int rc = ExitFor(e.code());
    std::cerr << Category(rc) << ": " << e.what() << '\n';
    return rc;
  }
  return kUsage;
}
