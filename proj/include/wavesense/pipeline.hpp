#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wavesense/config.hpp"
#include "wavesense/decompose.hpp"
#include "wavesense/em.hpp"
#include "wavesense/solvers.hpp"

namespace wavesense {

/// A single-detector power measurement for a deployed configuration.
/// Implementations must be deterministic: same configuration, same power.
class MeasurementBackend {
 public:
  virtual ~MeasurementBackend() = default;
  virtual double measure(const HsfConfiguration& config) const = 0;
};

/// Full EM path: incident spherical wave, binary-phase reflection, detector
/// power. The incident field is cached per scene.
class PhysicalBackend : public MeasurementBackend {
 public:
  explicit PhysicalBackend(SourceScene scene);
  double measure(const HsfConfiguration& config) const override;
  const SourceScene& scene() const { return scene_; }
  const ComplexFieldMap& incident() const { return incident_; }

 private:
  SourceScene scene_;
  ComplexFieldMap incident_;
};

/// Validation oracle: exactly linear in the ground-truth power map. Returns
/// the sum of ground-truth power over mask positions whose deployed bit is 1;
/// all other cells are ignored.
class IdealLinearBackend : public MeasurementBackend {
 public:
  IdealLinearBackend(WavefrontPower ground_truth, Mask mask);
  double measure(const HsfConfiguration& config) const override;
  const WavefrontPower& ground_truth() const { return truth_; }

 private:
  WavefrontPower truth_;
  Mask mask_;
};

/// The one-off measurement with the mask itself deployed: every sensed cell
/// ON, everything else OFF. Estimates X, the sum of the impinging power over
/// the sensed cells.
double estimate_X(const MeasurementBackend& backend, const Mask& mask);

/// Combine one row's per-pattern measurements into a single observation:
/// o = (sum_j s_j * P_j) * D / U + S * X.
double assemble_observation(const DecompositionResult& r,
                            const std::vector<double>& P, double X);

struct SolverSettings {
  ReconstructionOptions options;
  MatrixKind matrix_kind = MatrixKind::kGaussian;
};

/// Everything needed to replay a run plus the measurement bookkeeping.
struct RunManifest {
  int n = 0;
  int m = 0;
  int K = 0;
  int decimal_digits = 2;
  double epsilon = 1e-3;
  std::uint64_t seed = 0;
  double X = 0.0;
  std::vector<int> per_row_measurements;
  long long total_measurements = 0;
  std::string backend;
  std::string solver;
  std::string basis;
  bool nonnegative = true;
  int max_iterations = 0;
  double residual_tolerance = 0.0;
  bool solver_converged = false;
  std::string matrix_kind;
  // Filled by efficiency-traced runs; empty otherwise.
  double efficiency_mean = 0.0;
  double efficiency_sigma = 0.0;
  long long efficiency_samples = 0;
  std::string config_hash;

  std::string to_json() const;
};

struct JointSensingResult {
  WavefrontPower wavefront;
  RunManifest manifest;
  Vec observations;
};

/// Called at every deployed combined configuration, in deployment order.
using DeployHook = std::function<void(const HsfConfiguration&)>;

/// The joint sense-and-manipulate loop: build the mask, take the X
/// measurement, then per sampling row decompose, deploy each binary pattern
/// interleaved with c_f, measure, assemble the observation, and finally
/// reconstruct the wavefront and reshape it to m-by-m.
JointSensingResult run_joint_sensing(const MeasurementBackend& backend,
                                     const HsfConfiguration& c_f,
                                     const SamplingMatrix& A, int decimal_digits,
                                     double epsilon,
                                     const ReconstructionOptions& opts,
                                     const DeployHook& on_deploy = {});

}  // namespace wavesense
