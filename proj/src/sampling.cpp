#include "wavesense/sampling.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace wavesense {

double SeededRng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

int SeededRng::bernoulli_bit() { return static_cast<int>(engine_() >> 63); }

std::uint64_t SeededRng::below(std::uint64_t bound) {
  // Rejection sampling keeps the draw unbiased and seed-stable.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

const char* to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::kGaussian: return "gaussian";
    case MatrixKind::kUniform01: return "uniform01";
    case MatrixKind::kBernoulli: return "bernoulli";
  }
  return "gaussian";
}

MatrixKind matrix_kind_from_string(const std::string& s) {
  if (s == "gaussian") return MatrixKind::kGaussian;
  if (s == "uniform01") return MatrixKind::kUniform01;
  if (s == "bernoulli") return MatrixKind::kBernoulli;
  throw std::invalid_argument("unknown matrix kind: " + s);
}

SamplingMatrix generate_sampling_matrix(int K, int N, MatrixKind kind,
                                        std::uint64_t seed) {
  if (K < 1 || N < 1)
    throw std::invalid_argument("generate_sampling_matrix: K and N must be >= 1");
  SamplingMatrix A;
  A.kind = kind;
  A.seed = seed;
  A.entries.resize(K, N);
  SeededRng rng(seed);
  // Row-major fill order is part of the reproducibility contract.
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < N; ++j) {
      switch (kind) {
        case MatrixKind::kGaussian: A.entries(i, j) = rng.normal(); break;
        case MatrixKind::kUniform01: A.entries(i, j) = rng.uniform01(); break;
        case MatrixKind::kBernoulli:
          A.entries(i, j) = static_cast<double>(rng.bernoulli_bit());
          break;
      }
    }
  }
  if (kind == MatrixKind::kGaussian) {
    for (int j = 0; j < N; ++j) {
      const double nrm = A.entries.col(j).norm();
      if (nrm > 0.0) A.entries.col(j) /= nrm;
    }
  }
  return A;
}

std::string to_csv(const SamplingMatrix& A) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (j) os << ',';
      os << A.entries(i, j);
    }
    os << '\n';
  }
  return os.str();
}

Mat matrix_from_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("matrix_from_csv: empty input");
  const size_t cols = rows.front().size();
  Mat out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw std::invalid_argument("matrix_from_csv: ragged rows");
    for (size_t j = 0; j < cols; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return out;
}

}  // namespace wavesense
