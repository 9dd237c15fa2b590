#include "wavesense/experiment.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "wavesense/io.hpp"
#include "wavesense/sampling.hpp"

namespace wavesense {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("config.grid.n: must be even and >= 2");
  if (!(pitch_m > 0.0)) throw std::invalid_argument("config.grid.pitch_m: must be positive");
  if (!(frequency_hz > 0.0)) throw std::invalid_argument("config.frequency_hz: must be positive");
  if (!(source.radius_m > 0.0)) throw std::invalid_argument("config.source.radius_m: must be positive");
  if (!(detector.radius_m > 0.0)) throw std::invalid_argument("config.detector.radius_m: must be positive");
  if (K < 1) throw std::invalid_argument("config.K: must be >= 1");
  if (decimal_digits < 1 || decimal_digits > 9)
    throw std::invalid_argument("config.decimal_digits: must be in [1, 9]");
  if (epsilon < 0.0) throw std::invalid_argument("config.epsilon: must be >= 0");
  if (backend != "physical" && backend != "ideal")
    throw std::invalid_argument("config.backend: must be \"physical\" or \"ideal\"");
  solver.validate();
}

SourceScene ExperimentConfig::scene() const {
  SourceScene s;
  s.source = source;
  s.detector = detector;
  s.frequency_hz = frequency_hz;
  s.grid = CellGrid(n, pitch_m);
  return s;
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["grid"] = {{"n", n}, {"pitch_m", pitch_m}};
  j["frequency_hz"] = frequency_hz;
  j["source"] = {{"phi_deg", source.direction.phi_deg},
                 {"theta_deg", source.direction.theta_deg},
                 {"radius_m", source.radius_m}};
  j["detector"] = {{"phi_deg", detector.direction.phi_deg},
                   {"theta_deg", detector.direction.theta_deg},
                   {"radius_m", detector.radius_m}};
  j["target"] = {{"phi_deg", target.phi_deg}, {"theta_deg", target.theta_deg}};
  j["K"] = K;
  j["decimal_digits"] = decimal_digits;
  j["epsilon"] = epsilon;
  j["seed"] = seed;
  j["matrix_kind"] = to_string(matrix_kind);
  j["solver"] = {{"kind", to_string(solver.solver)},
                 {"max_iterations", solver.max_iterations},
                 {"residual_tolerance", solver.residual_tolerance},
                 {"nonnegative", solver.nonnegative},
                 {"basis", to_string(solver.basis)}};
  j["backend"] = backend;
  j["output_dir"] = output_dir.string();
  return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  ExperimentConfig c;
  json j = json::parse(text);
  if (j.contains("grid")) {
    c.n = j["grid"].value("n", c.n);
    c.pitch_m = j["grid"].value("pitch_m", c.pitch_m);
  }
  c.frequency_hz = j.value("frequency_hz", c.frequency_hz);
  auto read_point = [&](const char* key, SphericalPoint& p) {
    if (!j.contains(key)) return;
    p.direction.phi_deg = j[key].value("phi_deg", p.direction.phi_deg);
    p.direction.theta_deg = j[key].value("theta_deg", p.direction.theta_deg);
    p.radius_m = j[key].value("radius_m", p.radius_m);
  };
  read_point("source", c.source);
  read_point("detector", c.detector);
  if (j.contains("target")) {
    c.target.phi_deg = j["target"].value("phi_deg", c.target.phi_deg);
    c.target.theta_deg = j["target"].value("theta_deg", c.target.theta_deg);
  }
  c.K = j.value("K", c.K);
  c.decimal_digits = j.value("decimal_digits", c.decimal_digits);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.seed = j.value("seed", c.seed);
  if (j.contains("matrix_kind"))
    c.matrix_kind = matrix_kind_from_string(j["matrix_kind"].get<std::string>());
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    if (s.contains("kind"))
      c.solver.solver = solver_kind_from_string(s["kind"].get<std::string>());
    c.solver.max_iterations = s.value("max_iterations", c.solver.max_iterations);
    c.solver.residual_tolerance =
        s.value("residual_tolerance", c.solver.residual_tolerance);
    c.solver.nonnegative = s.value("nonnegative", c.solver.nonnegative);
    if (s.contains("basis"))
      c.solver.basis = basis_kind_from_string(s["basis"].get<std::string>());
  }
  c.backend = j.value("backend", c.backend);
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  c.validate();
  return c;
}

std::string ExperimentConfig::hash() const {
  // The hash covers everything that affects the numbers; where the files
  // land does not.
  ExperimentConfig c = *this;
  c.output_dir.clear();
  return fnv1a_hex(c.to_json());
}

double compute_efficiency(double P, double P_max) {
  if (!(P_max > 0.0)) throw std::invalid_argument("compute_efficiency: P_max must be positive");
  return P / P_max;
}

WavefrontPower ground_truth_wavefront(const SourceScene& scene) {
  const ComplexFieldMap inc = incident_field(scene);
  const int m = scene.grid.n() / 2;
  WavefrontPower truth;
  truth.values.resize(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      truth.values(r, c) = std::norm(inc.values(2 * r + 1, 2 * c + 1));
  return truth;
}

std::vector<SphericalDirection> table1_positions() {
  return {{20, 0}, {20, 45}, {20, 90}, {40, 0}, {40, 45},
          {40, 90}, {60, 0}, {60, 45}, {0, 0}};
}

namespace {

std::string position_tag(const SphericalDirection& d) {
  std::ostringstream os;
  os << "phi" << std::lround(d.phi_deg) << "_theta" << std::lround(d.theta_deg);
  return os.str();
}

void write_run_outputs(const std::filesystem::path& dir,
                       const JointSensingResult& result) {
  write_file_atomic(dir / "wavefront.csv", matrix_to_csv(result.wavefront.values));
  write_file_atomic(dir / "wavefront.pgm", matrix_to_pgm(result.wavefront.values));
  write_file_atomic(dir / "manifest.json", result.manifest.to_json());
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config,
                      const std::vector<SphericalDirection>& positions) {
  config.validate();
  SweepResult out;
  const int m = config.m();
  const double baseline =
      static_cast<double>(config.n * config.n - m * m) / (config.n * config.n);

  for (const SphericalDirection& pos : positions) {
    ExperimentConfig local = config;
    local.source.direction = pos;
    const SourceScene scene = local.scene();

    const HsfConfiguration c_f = synthesize_steering_config(scene, local.target);
    PhysicalBackend backend(scene);
    const double p_max = std::norm(far_field(
        c_f, backend.incident(), local.target, scene.grid, scene.wavelength()));

    std::vector<double> effs;
    DeployHook hook = [&](const HsfConfiguration& deployed) {
      const double p = std::norm(far_field(deployed, backend.incident(), local.target,
                                           scene.grid, scene.wavelength()));
      effs.push_back(compute_efficiency(p, p_max));
    };

    const SamplingMatrix A =
        generate_sampling_matrix(local.K, m * m, local.matrix_kind, local.seed);
    JointSensingResult run = run_joint_sensing(
        backend, c_f, A, local.decimal_digits, local.epsilon, local.solver, hook);

    double mean = 0.0;
    for (double e : effs) mean += e;
    mean /= static_cast<double>(effs.size());
    double var = 0.0;
    for (double e : effs) var += (e - mean) * (e - mean);
    var /= static_cast<double>(effs.size());

    run.manifest.backend = "physical";
    run.manifest.efficiency_mean = mean;
    run.manifest.efficiency_sigma = std::sqrt(var);
    run.manifest.efficiency_samples = static_cast<long long>(effs.size());
    run.manifest.config_hash = local.hash();

    out.rows.push_back({pos.phi_deg, pos.theta_deg, mean, baseline, std::sqrt(var)});
    if (!config.output_dir.empty())
      write_run_outputs(config.output_dir / position_tag(pos), run);
    out.wavefronts.push_back(std::move(run.wavefront));
    out.manifests.push_back(std::move(run.manifest));
  }
  return out;
}

JointSensingResult run_sensing_experiment(const ExperimentConfig& config) {
  config.validate();
  const SourceScene scene = config.scene();
  const int m = config.m();
  const HsfConfiguration c_f = synthesize_steering_config(scene, config.target);
  const SamplingMatrix A =
      generate_sampling_matrix(config.K, m * m, config.matrix_kind, config.seed);

  JointSensingResult run;
  if (config.backend == "ideal") {
    const IdealLinearBackend backend(ground_truth_wavefront(scene),
                                     make_mask(scene.grid));
    run = run_joint_sensing(backend, c_f, A, config.decimal_digits, config.epsilon,
                            config.solver);
  } else {
    const PhysicalBackend backend(scene);
    run = run_joint_sensing(backend, c_f, A, config.decimal_digits, config.epsilon,
                            config.solver);
  }
  run.manifest.backend = config.backend;
  run.manifest.config_hash = config.hash();
  if (!config.output_dir.empty()) write_run_outputs(config.output_dir, run);
  return run;
}

std::string sweep_to_csv(const std::vector<EfficiencyRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "phi_deg,theta_deg,efficiency,baseline_ratio,sigma\n";
  for (const auto& r : rows)
    os << r.phi_deg << ',' << r.theta_deg << ',' << r.efficiency << ','
       << r.baseline_ratio << ',' << r.sigma << '\n';
  return os.str();
}

}  // namespace wavesense
