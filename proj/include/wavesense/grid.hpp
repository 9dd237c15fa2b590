#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavesense/types.hpp"

namespace wavesense {

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wrap an angle to [-pi, pi).
inline double wrap_pi(double x) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(x + std::numbers::pi, two_pi);
  if (w < 0) w += two_pi;
  return w - std::numbers::pi;
}

/// Direction in the hemisphere above the surface: phi is the polar angle
/// from the surface normal (+z), theta the azimuth in the surface plane
/// measured from +x.
struct SphericalDirection {
  double phi_deg = 0.0;
  double theta_deg = 0.0;

  Vec3 unit() const {
    const double p = deg2rad(phi_deg);
    const double t = deg2rad(theta_deg);
    return {std::sin(p) * std::cos(t), std::sin(p) * std::sin(t), std::cos(p)};
  }
};

/// A point position given as direction plus range from the surface origin.
struct SphericalPoint {
  SphericalDirection direction;
  double radius_m = 0.0;

  Vec3 position() const { return radius_m * direction.unit(); }
};

/// Angular separation between two directions, in degrees.
inline double angular_distance_deg(const SphericalDirection& a,
                                   const SphericalDirection& b) {
  double c = a.unit().dot(b.unit());
  c = std::clamp(c, -1.0, 1.0);
  return rad2deg(std::acos(c));
}

/// Square cell lattice in the z=0 plane, centered on the origin.
/// Cell (i, j) is 0-based with i the row (top to bottom, decreasing y)
/// and j the column (left to right, increasing x).
class CellGrid {
 public:
  CellGrid(int n, double cell_pitch_m) : n_(n), pitch_(cell_pitch_m) {
    if (n < 1) throw std::invalid_argument("CellGrid: n must be >= 1");
    if (!(cell_pitch_m > 0.0))
      throw std::invalid_argument("CellGrid: cell pitch must be positive");
  }

  int n() const { return n_; }
  double pitch() const { return pitch_; }
  double side_length() const { return n_ * pitch_; }
  bool even() const { return n_ % 2 == 0; }

  Vec3 cell_center(int i, int j) const {
    const double half = (n_ - 1) / 2.0;
    return {(j - half) * pitch_, (half - i) * pitch_, 0.0};
  }

 private:
  int n_;
  double pitch_;
};

}  // namespace wavesense
