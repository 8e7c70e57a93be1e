#include "mor/model_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "mor/errors.h"

namespace mor {
namespace {

double ParseReal(const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::kParseError, "not a number: '" + token + "'");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kParseError, "non-finite value: '" + token + "'");
  }
  return value;
}

int ParseDim(const std::string& token, const char* name) {
  int value = -1;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value < 0) {
    throw Error(ErrorCode::kParseError,
                std::string("bad dimension ") + name + ": '" + token + "'");
  }
  return value;
}

Matrix ReadBlock(std::istream& in, int rows, int cols, const char* name) {
  Matrix m(rows, cols);
  std::string token;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (!(in >> token)) {
        throw Error(ErrorCode::kParseError,
                    std::string("unexpected end of data in ") + name);
      }
      m(i, j) = ParseReal(token);
    }
  }
  return m;
}

void WriteBlock(std::ostream& out, const Matrix& m) {
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), m(i, j),
                                           std::chars_format::general, 17);
      if (j > 0) out << ' ';
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParseError, "cannot open " + path.string());
  }
  return in;
}

}  // namespace

StateSpace ParseModel(std::istream& in) {
  std::string tag, sn, sq, sp;
  if (!(in >> tag >> sn >> sq >> sp) || tag != "ss") {
    throw Error(ErrorCode::kParseError, "expected header 'ss n q p'");
  }
  const int n = ParseDim(sn, "n");
  const int q = ParseDim(sq, "q");
  const int p = ParseDim(sp, "p");
  Matrix a = ReadBlock(in, n, n, "A");
  Matrix b = ReadBlock(in, n, q, "B");
  Matrix c = ReadBlock(in, p, n, "C");
  Matrix d = ReadBlock(in, p, q, "D");
  std::string extra;
  if (in >> extra) {
    throw Error(ErrorCode::kParseError, "trailing data: '" + extra + "'");
  }
  return StateSpace(std::move(a), std::move(b), std::move(c), std::move(d));
}

StateSpace ReadModelFile(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ParseModel(in);
}

void WriteModel(std::ostream& out, const StateSpace& sys) {
  out << "ss " << sys.states() << ' ' << sys.inputs() << ' ' << sys.outputs()
      << '\n';
  WriteBlock(out, sys.a());
  WriteBlock(out, sys.b());
  WriteBlock(out, sys.c());
  WriteBlock(out, sys.d());
}

void WriteModelFile(const std::filesystem::path& path, const StateSpace& sys) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  }
  WriteModel(out, sys);
}

Matrix ParseRawMatrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> tokens{std::istream_iterator<std::string>(ls),
                                    std::istream_iterator<std::string>()};
    if (tokens.empty() || tokens.front()[0] == '#' ||
        tokens.front()[0] == '%') {
      continue;
    }
    std::vector<double> row;
    row.reserve(tokens.size());
    for (const auto& t : tokens) row.push_back(ParseReal(t));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::kParseError,
                  "ragged matrix dump: row " + std::to_string(rows.size() + 1) +
                      " has " + std::to_string(row.size()) + " entries, " +
                      "expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  const auto cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix ReadRawMatrixFile(const std::filesystem::path& path) {
  std::ifstream in = OpenOrThrow(path);
  return ParseRawMatrix(in);
}

StateSpace FromRawMatrices(const Matrix& a, const Matrix& b, const Matrix& c,
                           const std::optional<Matrix>& d) {
  Matrix dd = d ? *d : Matrix::Zero(c.rows(), b.cols());
  return StateSpace(a, b, c, std::move(dd));
}

}  // namespace mor
