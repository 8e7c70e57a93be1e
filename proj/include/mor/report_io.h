#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mor/report.h"
#include "mor/state_space.h"

namespace mor {

/// Line-oriented report. Frequencies are printed in rad/s, or in Hz when
/// `hz` is set.
std::string FormatReport(const ReductionReport& report, bool hz = false);

/// Machine-readable mirror of ReductionReport. `options` is echoed verbatim
/// under "options". Non-finite numbers are written as null.
nlohmann::json ReportToJson(const ReductionReport& report,
                            const nlohmann::json& options = nullptr);

/// `points` log-spaced frequencies spanning four decades centred
/// (geometrically) on the pole magnitudes of `g`.
std::vector<double> DefaultSigmaGrid(const StateSpace& g, int points = 2000);

/// CSV with header omega_rad_s,sigma_max_G,sigma_max_R,sigma_max_error.
void WriteSigmaCsv(std::ostream& out, const StateSpace& g, const StateSpace& r,
                   std::span<const double> grid);

}  // namespace mor
