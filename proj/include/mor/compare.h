#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mor/state_space.h"
#include "mor/sysaaa.h"

namespace mor {

enum class Method { kSysAaa, kLowRankAaa, kBalanced };

std::string_view ToString(Method method);
std::optional<Method> ParseMethod(std::string_view name);

struct CompareRow {
  Method method = Method::kSysAaa;
  int order = 0;
  double linf_error = 0.0;
  double h2_metric = 0.0;
  bool stable = true;
};

/// Error-versus-order table. The interpolation methods contribute one row per
/// iterate (orders they can reach up to max_order, run with keep_best off);
/// balanced truncation contributes every order 1..max_order. Methods run
/// concurrently; rows come back sorted by (method as given, order).
std::vector<CompareRow> Compare(const StateSpace& g,
                                std::span<const Method> methods,
                                int max_order, const ReduceOptions& opts = {});

/// Fixed-width table; unstable rows carry an 'x' marker.
std::string FormatCompareTable(std::span<const CompareRow> rows);

nlohmann::json CompareToJson(std::span<const CompareRow> rows);

}  // namespace mor
