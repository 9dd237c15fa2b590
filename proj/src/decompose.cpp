#include "wavesense/decompose.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wavesense {

DecompositionResult decompose(const Vec& v, int decimal_digits, double epsilon) {
  const Eigen::Index n = v.size();
  if (n == 0) throw std::invalid_argument("decompose: empty vector");
  if (decimal_digits < 1 || decimal_digits > 9)
    throw std::invalid_argument("decompose: decimal_digits must be in [1, 9]");
  if (epsilon < 0.0) throw std::invalid_argument("decompose: epsilon must be >= 0");
  if (!v.allFinite()) throw std::invalid_argument("decompose: entries must be finite");

  DecompositionResult r;
  r.decimal_digits = decimal_digits;
  r.epsilon = epsilon;
  r.S = v.minCoeff();
  r.D = (v.array() - r.S).maxCoeff();

  if (r.D == 0.0) {
    // All-equal input: a single zero row with unit weight and D = U = 1.
    r.B = BitMatrix::Zero(1, n);
    r.s = {1};
    r.D = 1.0;
    r.U = 1.0;
    return r;
  }

  const double scale = std::pow(10.0, decimal_digits);
  r.U = scale;

  using IntVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
  IntVec w(n);
  for (Eigen::Index i = 0; i < n; ++i)
    w(i) = static_cast<std::int64_t>(std::llround((v(i) - r.S) / r.D * scale));

  std::vector<std::uint8_t> row(static_cast<size_t>(n));
  std::vector<std::vector<std::uint8_t>> rows;

  while (true) {
    std::int64_t min_pos = std::numeric_limits<std::int64_t>::max();
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (w(i) > 0) {
        ++count;
        if (w(i) < min_pos) min_pos = w(i);
      }
    }
    if (count == 0 || static_cast<double>(count) / static_cast<double>(n) < epsilon)
      break;
    for (Eigen::Index i = 0; i < n; ++i) row[static_cast<size_t>(i)] = w(i) > 0 ? 1 : 0;
    rows.push_back(row);
    r.s.push_back(min_pos);
    for (Eigen::Index i = 0; i < n; ++i)
      if (w(i) > 0) w(i) -= min_pos;
  }

  r.B = BitMatrix(static_cast<Eigen::Index>(rows.size()), n);
  for (size_t k = 0; k < rows.size(); ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      r.B(static_cast<Eigen::Index>(k), i) = rows[k][static_cast<size_t>(i)];
  return r;
}

Vec recompose(const DecompositionResult& r) {
  const Eigen::Index n = r.B.cols();
  Vec acc = Vec::Zero(n);
  for (Eigen::Index k = 0; k < r.B.rows(); ++k)
    acc += static_cast<double>(r.s[static_cast<size_t>(k)]) *
           r.B.row(k).cast<double>().transpose();
  return (acc * (r.D / r.U)).array() + r.S;
}

std::string DecompositionResult::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"S\":" << S << ",\"D\":" << D << ",\"U\":" << U
     << ",\"I_e\":" << decimal_digits << ",\"epsilon\":" << epsilon << ",\"s\":[";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) os << ',';
    os << s[i];
  }
  os << "],\"B\":[";
  for (Eigen::Index i = 0; i < B.rows(); ++i) {
    if (i) os << ',';
    os << '[';
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
      if (j) os << ',';
      os << int(B(i, j));
    }
    os << ']';
  }
  os << "]}";
  return os.str();
}

}  // namespace wavesense
