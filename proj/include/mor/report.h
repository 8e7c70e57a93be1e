#pragma once

#include <string>
#include <vector>

namespace mor {

/// One row of a reduction log. Iteration 0 is the static start R = D.
struct IterationRecord {
  int iteration = 0;
  /// "init", "new" (support point added) or "grow" (rank of an existing
  /// low-rank point increased).
  std::string action = "init";
  double omega = 0.0;  // rad/s; meaningless for "init"
  int point_index = -1;
  int order = 0;
  double linf_error = 0.0;
  double h2_metric = 0.0;  // NaN when the Gramian equation is ill-posed
  bool stable = true;
  double w0_condition = 1.0;
  /// Largest condition number over the per-point weights W_k.
  double wk_condition = 1.0;
  bool degenerate_spectrum = false;
  std::vector<int> ranks;
};

struct ReductionReport {
  std::string method;
  std::vector<IterationRecord> iterations;
  /// Index into `iterations` of the returned interpolant.
  int returned_iteration = 0;
  /// Why the loop stopped: "max-iterations", "exact", "target-linf", "target-order",
  /// "duplicate-support-point", "saturated", "peak-at-infinity", or
  /// "error: <category>".
  std::string termination;
  bool dualized = false;
  std::vector<std::string> notes;
};

}  // namespace mor
