#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "mor/state_space.h"

namespace mor {

/// Model text format:
///
///   ss n q p
///   <n rows of n reals>   A
///   <n rows of q reals>   B
///   <p rows of n reals>   C
///   <p rows of q reals>   D
///
/// ASCII decimal, whitespace separated. Parsing is token based, so line
/// breaks inside the matrix data are not significant; non-finite values,
/// missing values and trailing garbage are kParseError.
StateSpace ParseModel(std::istream& in);
StateSpace ReadModelFile(const std::filesystem::path& path);

/// Writes with 17 significant digits so ParseModel(WriteModel(sys)) == sys.
void WriteModel(std::ostream& out, const StateSpace& sys);
void WriteModelFile(const std::filesystem::path& path, const StateSpace& sys);

/// Whitespace-delimited matrix dump, one row per line. Blank lines and lines
/// starting with '#' or '%' are skipped; all rows must have equal length.
Matrix ParseRawMatrix(std::istream& in);
Matrix ReadRawMatrixFile(const std::filesystem::path& path);

/// Assembles separate A, B, C (and optional D, zero by default) dumps.
StateSpace FromRawMatrices(const Matrix& a, const Matrix& b, const Matrix& c,
                           const std::optional<Matrix>& d = std::nullopt);

}  // namespace mor
