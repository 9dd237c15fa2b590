#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "wavesense/grid.hpp"
#include "wavesense/types.hpp"

namespace wavesense {

namespace detail {
inline void check_binary(const BitMatrix& bits, const char* what) {
  for (Eigen::Index i = 0; i < bits.rows(); ++i)
    for (Eigen::Index j = 0; j < bits.cols(); ++j)
      if (bits(i, j) > 1)
        throw std::invalid_argument(std::string(what) + ": entries must be 0 or 1");
}
}  // namespace detail

/// Full-surface actuation state, one bit per cell.
struct HsfConfiguration {
  BitMatrix bits;

  HsfConfiguration() = default;
  explicit HsfConfiguration(BitMatrix b) : bits(std::move(b)) {
    if (bits.rows() != bits.cols())
      throw std::invalid_argument("HsfConfiguration: bits must be square");
    detail::check_binary(bits, "HsfConfiguration");
  }

  static HsfConfiguration zeros(int n) {
    return HsfConfiguration(BitMatrix::Zero(n, n));
  }

  int side() const { return static_cast<int>(bits.rows()); }
};

/// Half-resolution sensing pattern deployed at the masked cells.
struct SensingConfiguration {
  BitMatrix bits;

  SensingConfiguration() = default;
  explicit SensingConfiguration(BitMatrix b) : bits(std::move(b)) {
    if (bits.rows() != bits.cols())
      throw std::invalid_argument("SensingConfiguration: bits must be square");
    detail::check_binary(bits, "SensingConfiguration");
  }

  int side() const { return static_cast<int>(bits.rows()); }
};

/// The fixed interleaving mask: ones exactly at cells whose 1-based row and
/// column indices are both even.
struct Mask {
  BitMatrix bits;

  int side() const { return static_cast<int>(bits.rows()); }
  int popcount() const {
    return static_cast<int>(bits.cast<int>().sum());
  }

  HsfConfiguration as_configuration() const { return HsfConfiguration(bits); }
};

Mask make_mask(const CellGrid& grid);

/// Write the sensing pattern into the masked cells of c_f. Mask positions are
/// filled in row-major order with the row-major elements of c_s.
HsfConfiguration interleave(const HsfConfiguration& c_f,
                            const SensingConfiguration& c_s);

/// Read the masked cells back out of a full configuration, row-major.
SensingConfiguration extract_sensing(const HsfConfiguration& c);

/// Split a length-m^2 vector into m consecutive runs and stack them as the
/// rows of an m-by-m array.
template <typename Derived>
Mat reshape_rows(const Eigen::MatrixBase<Derived>& v, int m) {
  if (v.size() != static_cast<Eigen::Index>(m) * m)
    throw std::invalid_argument("reshape_rows: vector length must be m^2");
  Mat out(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) out(r, c) = v(r * m + c);
  return out;
}

/// Inverse of reshape_rows.
template <typename Derived>
Vec flatten_rows(const Eigen::MatrixBase<Derived>& a) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  Vec out(rows * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out(r * cols + c) = a(r, c);
  return out;
}

/// Binary pattern from a real vector: nonzero -> 1. Used to deploy
/// decomposition rows, which are already 0/1 valued.
BitMatrix bits_from_vector(const Vec& v, int m);

// CSV form: n rows of n comma-separated 0/1 digits, each line newline-terminated.
std::string to_csv(const BitMatrix& bits);
BitMatrix bits_from_csv(std::istream& in);

}  // namespace wavesense
