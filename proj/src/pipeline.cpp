#include "wavesense/pipeline.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wavesense {

PhysicalBackend::PhysicalBackend(SourceScene scene)
    : scene_(std::move(scene)), incident_(incident_field(scene_)) {}

double PhysicalBackend::measure(const HsfConfiguration& config) const {
  const Complex e = far_field(config, incident_, scene_.detector.direction,
                              scene_.grid, scene_.wavelength());
  return std::norm(e);
}

IdealLinearBackend::IdealLinearBackend(WavefrontPower ground_truth, Mask mask)
    : truth_(std::move(ground_truth)), mask_(std::move(mask)) {
  const int m = mask_.side() / 2;
  if (truth_.values.rows() != m || truth_.values.cols() != m)
    throw std::invalid_argument("IdealLinearBackend: ground truth must be m x m");
  if (truth_.values.minCoeff() < 0.0)
    throw std::invalid_argument("IdealLinearBackend: ground truth must be nonnegative");
}

double IdealLinearBackend::measure(const HsfConfiguration& config) const {
  if (config.side() != mask_.side())
    throw std::invalid_argument("IdealLinearBackend: configuration size mismatch");
  const int m = mask_.side() / 2;
  double sum = 0.0;
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      if (config.bits(2 * r + 1, 2 * c + 1)) sum += truth_.values(r, c);
  return sum;
}

double estimate_X(const MeasurementBackend& backend, const Mask& mask) {
  return backend.measure(mask.as_configuration());
}

double assemble_observation(const DecompositionResult& r,
                            const std::vector<double>& P, double X) {
  if (static_cast<Eigen::Index>(P.size()) != r.rows())
    throw std::invalid_argument(
        "assemble_observation: one measurement per decomposition row required");
  double acc = 0.0;
  for (size_t j = 0; j < P.size(); ++j)
    acc += static_cast<double>(r.s[j]) * P[j];
  return acc * (r.D / r.U) + r.S * X;
}

JointSensingResult run_joint_sensing(const MeasurementBackend& backend,
                                     const HsfConfiguration& c_f,
                                     const SamplingMatrix& A, int decimal_digits,
                                     double epsilon,
                                     const ReconstructionOptions& opts,
                                     const DeployHook& on_deploy) {
  const int n = c_f.side();
  if (n % 2 != 0)
    throw std::invalid_argument("run_joint_sensing: configuration side must be even");
  const int m = n / 2;
  const Eigen::Index N = A.cols();
  if (N != static_cast<Eigen::Index>(m) * m)
    throw std::invalid_argument("run_joint_sensing: sampling columns must equal m^2");
  opts.validate();

  const CellGrid grid(n, 1.0);  // mask construction only depends on n
  const Mask mask = make_mask(grid);

  JointSensingResult result;
  RunManifest& man = result.manifest;
  man.n = n;
  man.m = m;
  man.K = static_cast<int>(A.rows());
  man.decimal_digits = decimal_digits;
  man.epsilon = epsilon;
  man.seed = A.seed;
  man.matrix_kind = to_string(A.kind);
  man.solver = to_string(opts.solver);
  man.basis = to_string(opts.basis);
  man.nonnegative = opts.nonnegative;
  man.max_iterations = opts.max_iterations;
  man.residual_tolerance = opts.residual_tolerance;

  man.X = estimate_X(backend, mask);

  const Eigen::Index K = A.rows();
  Vec o(K);
  std::vector<double> P;
  for (Eigen::Index i = 0; i < K; ++i) {
    const DecompositionResult dec =
        decompose(A.entries.row(i).transpose(), decimal_digits, epsilon);
    P.clear();
    P.reserve(static_cast<size_t>(dec.rows()));
    for (Eigen::Index j = 0; j < dec.rows(); ++j) {
      const SensingConfiguration pattern(
          BitMatrix(Eigen::Map<const BitMatrix>(dec.B.row(j).data(), m, m)));
      const HsfConfiguration deployed = interleave(c_f, pattern);
      if (on_deploy) on_deploy(deployed);
      P.push_back(backend.measure(deployed));
    }
    o(i) = assemble_observation(dec, P, man.X);
    man.per_row_measurements.push_back(static_cast<int>(dec.rows()));
  }
  man.total_measurements = 1;
  for (int c : man.per_row_measurements) man.total_measurements += c;

  const ReconstructionResult rec = reconstruct(A, o, opts);
  man.solver_converged = rec.converged;

  result.wavefront.values = reshape_rows(rec.x, m);
  result.observations = std::move(o);
  return result;
}

std::string RunManifest::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\n";
  os << "  \"manifest_version\": 1,\n";
  os << "  \"n\": " << n << ",\n";
  os << "  \"m\": " << m << ",\n";
  os << "  \"K\": " << K << ",\n";
  os << "  \"decimal_digits\": " << decimal_digits << ",\n";
  os << "  \"epsilon\": " << epsilon << ",\n";
  os << "  \"seed\": " << seed << ",\n";
  os << "  \"matrix_kind\": \"" << matrix_kind << "\",\n";
  os << "  \"X\": " << X << ",\n";
  os << "  \"per_row_measurements\": [";
  for (size_t i = 0; i < per_row_measurements.size(); ++i) {
    if (i) os << ',';
    os << per_row_measurements[i];
  }
  os << "],\n";
  os << "  \"total_measurements\": " << total_measurements << ",\n";
  os << "  \"backend\": \"" << backend << "\",\n";
  os << "  \"solver\": {\n";
  os << "    \"kind\": \"" << solver << "\",\n";
  os << "    \"basis\": \"" << basis << "\",\n";
  os << "    \"nonnegative\": " << (nonnegative ? "true" : "false") << ",\n";
  os << "    \"max_iterations\": " << max_iterations << ",\n";
  os << "    \"residual_tolerance\": " << residual_tolerance << ",\n";
  os << "    \"converged\": " << (solver_converged ? "true" : "false") << "\n";
  os << "  },\n";
  os << "  \"efficiency_trace\": {\n";
  os << "    \"samples\": " << efficiency_samples << ",\n";
  os << "    \"mean\": " << efficiency_mean << ",\n";
  os << "    \"sigma\": " << efficiency_sigma << "\n";
  os << "  },\n";
  os << "  \"config_hash\": \"" << config_hash << "\"\n";
  os << "}\n";
  return os.str();
}

}  // namespace wavesense
