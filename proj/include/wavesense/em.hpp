#pragma once

#include <string>
#include <vector>

#include "wavesense/config.hpp"
#include "wavesense/grid.hpp"
#include "wavesense/types.hpp"

namespace wavesense {

/// Point source, single observing detector and the surface between them.
struct SourceScene {
  SphericalPoint source;
  SphericalPoint detector;
  double frequency_hz = 15e9;
  CellGrid grid{40, 0.01};

  double wavelength() const { return kSpeedOfLight / frequency_hz; }

  void validate() const {
    if (!(source.radius_m > 0.0) || !(detector.radius_m > 0.0))
      throw std::invalid_argument("SourceScene: source and detector ranges must be positive");
    if (!(frequency_hz > 0.0))
      throw std::invalid_argument("SourceScene: frequency must be positive");
  }
};

/// Per-cell complex field amplitudes, dimensionless relative units.
struct ComplexFieldMap {
  CMat values;
};

/// Per-cell nonnegative power map on the half-resolution sensing lattice.
struct WavefrontPower {
  Mat values;
};

/// Unit-amplitude isotropic spherical wave sampled at the cell centers:
/// E = (1/d) * exp(-j * 2*pi*d / lambda) with d the source-to-cell distance.
ComplexFieldMap incident_field(const SourceScene& scene);

/// Coherent array-factor sum over all cells toward a far-field direction.
/// Bit 1 reflects with +1, bit 0 with -1.
Complex far_field(const HsfConfiguration& config, const ComplexFieldMap& incident,
                  const SphericalDirection& dir, const CellGrid& grid,
                  double wavelength_m);

/// Detector power for a deployed configuration under the scene's source.
double measure_power_physical(const HsfConfiguration& config, const SourceScene& scene);

/// One-bit steering synthesis: quantize the continuous compensation phase
/// psi = (2*pi/lambda) * (d_source - p . u_target) to the half-plane around
/// zero; bit 1 <-> reflection +1, bit 0 <-> reflection -1.
HsfConfiguration synthesize_steering_config(const SourceScene& scene,
                                            const SphericalDirection& target);

struct DiagramSample {
  double phi_deg;
  double theta_deg;
  double power;
};

/// Reflected power over the hemisphere above the surface at a fixed angular
/// resolution, phi in [0, 90], theta in [0, 360).
struct ScatteringDiagram {
  double resolution_deg = 1.0;
  std::vector<DiagramSample> samples;

  DiagramSample peak() const;
  double total_power() const;

  /// CSV with header theta_deg,phi_deg,power,power_db; power_db is
  /// normalized to 0 dB at the global peak.
  std::string to_csv() const;
};

ScatteringDiagram scattering_diagram(const HsfConfiguration& config,
                                     const SourceScene& scene,
                                     double resolution_deg);

/// Largest sample more than exclusion_deg away from the diagram's peak,
/// in dB relative to the peak.
double worst_lobe_db(const ScatteringDiagram& diagram, double exclusion_deg);

}  // namespace wavesense
