#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wavesense/pipeline.hpp"

namespace wavesense {

/// One experiment: grid, scene, sampling and solver settings, outputs.
/// The defaults are the 40x40-cell, 15 GHz, K=300 reference setup with the
/// detector at boresight and the steering target at (45, 0).
struct ExperimentConfig {
  int n = 40;
  double pitch_m = 0.01;
  double frequency_hz = 15e9;
  SphericalPoint source{{0.0, 0.0}, 4.0};
  SphericalPoint detector{{0.0, 0.0}, 4.0};
  SphericalDirection target{45.0, 0.0};
  int K = 300;
  int decimal_digits = 2;
  double epsilon = 1e-3;
  std::uint64_t seed = 1;
  MatrixKind matrix_kind = MatrixKind::kGaussian;
  ReconstructionOptions solver;
  std::string backend = "physical";  // "physical" | "ideal"
  std::filesystem::path output_dir = "out";

  void validate() const;
  SourceScene scene() const;
  int m() const { return n / 2; }

  std::string to_json() const;
  static ExperimentConfig from_json_text(const std::string& text);
  std::string hash() const;
};

/// P / P_max.
double compute_efficiency(double P, double P_max);

/// Ground-truth impinging power at the sensed cells: |E_inc|^2 sampled at
/// the mask positions, as an m-by-m map.
WavefrontPower ground_truth_wavefront(const SourceScene& scene);

struct EfficiencyRow {
  double phi_deg = 0.0;
  double theta_deg = 0.0;
  double efficiency = 0.0;      // mean over all deployed configurations
  double baseline_ratio = 0.0;  // (n^2 - m^2) / n^2
  double sigma = 0.0;           // std of the per-measurement efficiency
};

struct SweepResult {
  std::vector<EfficiencyRow> rows;
  std::vector<WavefrontPower> wavefronts;
  std::vector<RunManifest> manifests;
};

/// For each source position: synthesize the steering configuration, measure
/// P_max toward the target without sensing, run the joint sensing loop while
/// logging the power toward the target at every deployed configuration, and
/// reconstruct the wavefront. Writes per-position wavefront CSV/PGM and
/// manifest under output_dir unless it is empty.
SweepResult run_sweep(const ExperimentConfig& config,
                      const std::vector<SphericalDirection>& positions);

/// Run a single sensing experiment per the config (physical or ideal
/// backend); writes wavefront.csv, wavefront.pgm and manifest.json under
/// output_dir unless it is empty.
JointSensingResult run_sensing_experiment(const ExperimentConfig& config);

/// The nine reference source positions of the efficiency study.
std::vector<SphericalDirection> table1_positions();

/// CSV with header phi_deg,theta_deg,efficiency,baseline_ratio,sigma.
std::string sweep_to_csv(const std::vector<EfficiencyRow>& rows);

}  // namespace wavesense
