#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace wavesense {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;

// Binary actuation states. Row-major so that flattening a configuration
// matches the row-major vector order used throughout.
using BitMatrix =
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kSpeedOfLight = 299792458.0;  // m/s

}  // namespace wavesense
