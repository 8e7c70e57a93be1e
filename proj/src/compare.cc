#include "mor/compare.h"

#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <string>

#include "mor/balred.h"
#include "mor/errors.h"
#include "mor/lowrank.h"
#include "mor/norms.h"

namespace mor {
namespace {

std::vector<CompareRow> InterpolationRows(Method method, const StateSpace& g,
                                          int max_order, ReduceOptions opts) {
  opts.target_order = max_order;
  opts.keep_best = false;
  const ReductionResult res = method == Method::kSysAaa
                                  ? Reduce(g, opts)
                                  : ReduceLowRank(g, opts);
  std::vector<CompareRow> rows;
  for (const auto& rec : res.report.iterations) {
    if (rec.iteration == 0 || rec.order > max_order) continue;
    rows.push_back(
        {method, rec.order, rec.linf_error, rec.h2_metric, rec.stable});
  }
  return rows;
}

std::vector<CompareRow> BalancedRows(const StateSpace& g, int max_order,
                                     const ReduceOptions& opts) {
  std::vector<CompareRow> rows;
  for (int k = 1; k <= max_order; ++k) {
    const StateSpace r = BalancedTruncate(g, k).sys;
    const StateSpace err = Subtract(g, r);
    double h2 = std::numeric_limits<double>::quiet_NaN();
    try {
      h2 = H2ErrorMetric(err);
    } catch (const Error&) {
    }
    rows.push_back({Method::kBalanced, k,
                    LinfNorm(err, opts.bisect_tol).gamma, h2, IsStable(r)});
  }
  return rows;
}

}  // namespace

std::string_view ToString(Method method) {
  switch (method) {
    case Method::kSysAaa: return "sys-aaa";
    case Method::kLowRankAaa: return "lowrank-aaa";
    case Method::kBalanced: return "balanced";
  }
  return "unknown";
}

std::optional<Method> ParseMethod(std::string_view name) {
  if (name == "sys-aaa") return Method::kSysAaa;
  if (name == "lowrank-aaa") return Method::kLowRankAaa;
  if (name == "balanced") return Method::kBalanced;
  return std::nullopt;
}

std::vector<CompareRow> Compare(const StateSpace& g,
                                std::span<const Method> methods,
                                int max_order, const ReduceOptions& opts) {
  if (max_order < 1 || max_order > g.states()) {
    throw Error(ErrorCode::kInvalidArgument,
                "max order " + std::to_string(max_order) + " outside [1, " +
                    std::to_string(g.states()) + "]");
  }
  std::vector<std::future<std::vector<CompareRow>>> jobs;
  for (Method m : methods) {
    jobs.push_back(std::async(std::launch::async, [&g, m, max_order, &opts] {
      return m == Method::kBalanced ? BalancedRows(g, max_order, opts)
                                    : InterpolationRows(m, g, max_order, opts);
    }));
  }
  std::vector<CompareRow> rows;
  for (auto& job : jobs) {
    auto part = job.get();
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

std::string FormatCompareTable(std::span<const CompareRow> rows) {
  std::string out = "method        order   linf_error      h2_metric       stable\n";
  char buf[160];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%-12s  %5d   %-14.6e  %-14.6e  %s\n",
                  std::string(ToString(row.method)).c_str(), row.order,
                  row.linf_error, row.h2_metric, row.stable ? "yes" : "x");
    out += buf;
  }
  return out;
}

nlohmann::json CompareToJson(std::span<const CompareRow> rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows) {
    out.push_back({
        {"method", ToString(row.method)},
        {"order", row.order},
        {"linf_error", std::isfinite(row.linf_error)
                           ? nlohmann::json(row.linf_error)
                           : nlohmann::json(nullptr)},
        {"h2_metric", std::isfinite(row.h2_metric)
                          ? nlohmann::json(row.h2_metric)
                          : nlohmann::json(nullptr)},
        {"stable", row.stable},
    });
  }
  return out;
}

}  // namespace mor
