#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>

#include "wavesense/types.hpp"

namespace wavesense {

enum class MatrixKind { kGaussian, kUniform01, kBernoulli };

const char* to_string(MatrixKind kind);
MatrixKind matrix_kind_from_string(const std::string& s);

/// K-by-N sampling matrix, reproducible from (kind, seed, K, N).
struct SamplingMatrix {
  Mat entries;
  MatrixKind kind = MatrixKind::kGaussian;
  std::uint64_t seed = 0;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

/// Deterministic generation:
///  gaussian  — i.i.d. standard normal, then columns scaled to unit L2 norm
///  uniform01 — i.i.d. uniform on [0, 1)
///  bernoulli — i.i.d. {0, 1} equiprobable
SamplingMatrix generate_sampling_matrix(int K, int N, MatrixKind kind,
                                        std::uint64_t seed);

// Full-precision CSV round-trip so runs are replayable.
std::string to_csv(const SamplingMatrix& A);
Mat matrix_from_csv(std::istream& in);

/// Seeded draws built on the mt19937_64 bit stream (which the standard pins
/// exactly), with the value transforms done here rather than through the
/// library distributions, so a seed reproduces the same entries everywhere.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01();

  /// Standard normal via Box-Muller on uniform01 pairs.
  double normal();

  /// Fair bit.
  int bernoulli_bit();

  /// Integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace wavesense
