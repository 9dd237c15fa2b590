#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "wavesense/experiment.hpp"
#include "wavesense/io.hpp"

namespace ws = wavesense;
namespace fs = std::filesystem;

namespace {

struct SceneFlags {
  std::string config_path;
  ws::ExperimentConfig cfg;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file (flags override it)");
    cmd->add_option("--n", cfg.n, "cells per side (even)");
    cmd->add_option("--pitch", cfg.pitch_m, "cell pitch in meters");
    cmd->add_option("--frequency", cfg.frequency_hz, "carrier frequency in Hz");
    cmd->add_option("--source-phi", cfg.source.direction.phi_deg, "source polar angle, deg");
    cmd->add_option("--source-theta", cfg.source.direction.theta_deg, "source azimuth, deg");
    cmd->add_option("--source-r", cfg.source.radius_m, "source range, m");
    cmd->add_option("--detector-phi", cfg.detector.direction.phi_deg, "detector polar angle, deg");
    cmd->add_option("--detector-theta", cfg.detector.direction.theta_deg, "detector azimuth, deg");
    cmd->add_option("--detector-r", cfg.detector.radius_m, "detector range, m");
    cmd->add_option("--target-phi", cfg.target.phi_deg, "steering target polar angle, deg");
    cmd->add_option("--target-theta", cfg.target.theta_deg, "steering target azimuth, deg");
    cmd->add_option("--K", cfg.K, "number of sampling rows");
    cmd->add_option("--digits", cfg.decimal_digits, "decimal digits preserved by the peel");
    cmd->add_option("--epsilon", cfg.epsilon, "peel termination threshold");
    cmd->add_option("--seed", cfg.seed, "sampling matrix seed");
    cmd->add_option("--matrix-kind", matrix_kind, "gaussian | uniform01 | bernoulli");
    cmd->add_option("--solver", solver_kind, "greedy-pursuit | iterative-shrinkage");
    cmd->add_option("--basis", basis_kind, "identity | dct2d");
    cmd->add_option("--max-iterations", cfg.solver.max_iterations, "solver iteration cap");
    cmd->add_option("--residual-tolerance", cfg.solver.residual_tolerance,
                    "relative residual stop");
    cmd->add_flag("--no-nonnegative", no_nonneg, "drop the nonnegativity constraint");
    cmd->add_option("--backend", cfg.backend, "physical | ideal");
  }

  ws::ExperimentConfig resolve(CLI::App* cmd) {
    ws::ExperimentConfig out;
    if (!config_path.empty())
      out = ws::ExperimentConfig::from_json_text(ws::read_file(config_path));
    // Flags the user actually passed win over the file.
    auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (passed("--n")) out.n = cfg.n;
    if (passed("--pitch")) out.pitch_m = cfg.pitch_m;
    if (passed("--frequency")) out.frequency_hz = cfg.frequency_hz;
    if (passed("--source-phi")) out.source.direction.phi_deg = cfg.source.direction.phi_deg;
    if (passed("--source-theta")) out.source.direction.theta_deg = cfg.source.direction.theta_deg;
    if (passed("--source-r")) out.source.radius_m = cfg.source.radius_m;
    if (passed("--detector-phi")) out.detector.direction.phi_deg = cfg.detector.direction.phi_deg;
    if (passed("--detector-theta"))
      out.detector.direction.theta_deg = cfg.detector.direction.theta_deg;
    if (passed("--detector-r")) out.detector.radius_m = cfg.detector.radius_m;
    if (passed("--target-phi")) out.target.phi_deg = cfg.target.phi_deg;
    if (passed("--target-theta")) out.target.theta_deg = cfg.target.theta_deg;
    if (passed("--K")) out.K = cfg.K;
    if (passed("--digits")) out.decimal_digits = cfg.decimal_digits;
    if (passed("--epsilon")) out.epsilon = cfg.epsilon;
    if (passed("--seed")) out.seed = cfg.seed;
    if (passed("--matrix-kind")) out.matrix_kind = ws::matrix_kind_from_string(matrix_kind);
    if (passed("--solver")) out.solver.solver = ws::solver_kind_from_string(solver_kind);
    if (passed("--basis")) out.solver.basis = ws::basis_kind_from_string(basis_kind);
    if (passed("--max-iterations")) out.solver.max_iterations = cfg.solver.max_iterations;
    if (passed("--residual-tolerance"))
      out.solver.residual_tolerance = cfg.solver.residual_tolerance;
    if (no_nonneg) out.solver.nonnegative = false;
    if (passed("--backend")) out.backend = cfg.backend;
    return out;
  }

  std::string matrix_kind = "gaussian";
  std::string solver_kind = "greedy-pursuit";
  std::string basis_kind = "identity";
  bool no_nonneg = false;
};

ws::Vec read_vector_file(const fs::path& path) {
  std::istringstream in(ws::read_file(path));
  std::vector<double> vals;
  double v;
  while (in >> v) vals.push_back(v);
  if (vals.empty())
    throw std::invalid_argument("vector file holds no numbers: " + path.string());
  ws::Vec out(static_cast<Eigen::Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) out(static_cast<Eigen::Index>(i)) = vals[i];
  return out;
}

int run_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "PASS " : "FAIL ") << what << "\n";
    if (!ok) ++failures;
  };

  {
    const ws::CellGrid grid(16, 0.01);
    const ws::Mask mask = ws::make_mask(grid);
    check(mask.popcount() == 64, "mask popcount = (n/2)^2");
  }
  {
    ws::SeededRng rng(99);
    ws::Vec v(36);
    for (int i = 0; i < 36; ++i) v(i) = rng.normal();
    const ws::DecompositionResult r = ws::decompose(v, 2, 0.0);
    const ws::Vec back = ws::recompose(r);
    check((back - v).cwiseAbs().maxCoeff() <= 0.5 * r.D * 1e-2 + 1e-12,
          "decompose/recompose within the rounding bound");
  }
  {
    const int n = 16, m = 8;
    ws::SourceScene scene;
    scene.grid = ws::CellGrid(n, 0.01);
    scene.source = {{20.0, 0.0}, 4.0};
    scene.detector = {{0.0, 0.0}, 4.0};
    const ws::WavefrontPower truth = ws::ground_truth_wavefront(scene);
    const ws::Mask mask = ws::make_mask(scene.grid);
    const ws::IdealLinearBackend backend(truth, mask);
    const double X = ws::estimate_X(backend, mask);
    check(std::abs(X - truth.values.sum()) <= 1e-12 * truth.values.sum(),
          "ideal backend X equals the ground-truth sum");

    const ws::SamplingMatrix A =
        ws::generate_sampling_matrix(48, m * m, ws::MatrixKind::kGaussian, 7);
    ws::ReconstructionOptions opts;
    opts.max_iterations = 48;
    opts.residual_tolerance = 1e-5;
    const ws::JointSensingResult run = ws::run_joint_sensing(
        backend, ws::HsfConfiguration::zeros(n), A, 2, 0.0, opts);
    const ws::Vec x = ws::flatten_rows(truth.values);
    bool bounds_ok = true;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      const ws::DecompositionResult dec = ws::decompose(A.entries.row(i).transpose(), 2, 0.0);
      const double bound = 0.5e-2 * dec.D * x.sum() * (1.0 + 1e-9) + 1e-12;
      if (std::abs(run.observations(i) - A.entries.row(i).dot(x)) > bound) bounds_ok = false;
    }
    check(bounds_ok, "assembled observations match A*x within the rounding bound");
    check(run.manifest.total_measurements ==
              1 + std::accumulate(run.manifest.per_row_measurements.begin(),
                                  run.manifest.per_row_measurements.end(), 0LL),
          "measurement budget bookkeeping");
  }
  {
    // Sparse recovery sanity through the full ideal loop.
    const int n = 16, m = 8;
    ws::Mat truth_map = ws::Mat::Zero(m, m);
    ws::SeededRng rng(3);
    for (int t = 0; t < 4; ++t)
      truth_map(static_cast<int>(rng.below(m)), static_cast<int>(rng.below(m))) =
          0.25 + rng.uniform01();
    const ws::Mask mask = ws::make_mask(ws::CellGrid(n, 0.01));
    const ws::IdealLinearBackend backend(ws::WavefrontPower{truth_map}, mask);
    const ws::SamplingMatrix A =
        ws::generate_sampling_matrix(48, m * m, ws::MatrixKind::kGaussian, 11);
    ws::ReconstructionOptions opts;
    opts.max_iterations = 48;
    opts.residual_tolerance = 1e-5;
    const ws::JointSensingResult run = ws::run_joint_sensing(
        backend, ws::HsfConfiguration::zeros(n), A, 2, 0.0, opts);
    const ws::Vec x = ws::flatten_rows(truth_map);
    const ws::Vec w = ws::flatten_rows(run.wavefront.values);
    check((w - x).norm() <= 0.05 * x.norm(), "ideal-loop sparse wavefront recovery");
  }
  std::cout << (failures == 0 ? "selftest OK\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint compressed sensing and beam steering on a binary metasurface"};
  app.require_subcommand(1);

  SceneFlags synth_flags, sense_flags, scatter_flags, sweep_flags;

  auto* synth = app.add_subcommand("synthesize", "write a steering configuration CSV");
  synth_flags.attach(synth);
  std::string synth_out = "steering.csv";
  synth->add_option("--out", synth_out, "output CSV path");

  auto* dec = app.add_subcommand("decompose", "run the binary peel on a vector file");
  std::string dec_in;
  int dec_digits = 2;
  double dec_eps = 0.0;
  dec->add_option("--in", dec_in, "text file of reals")->required();
  dec->add_option("--digits", dec_digits, "decimal digits to preserve");
  dec->add_option("--epsilon", dec_eps, "termination threshold");

  auto* sense = app.add_subcommand("sense", "run the joint sensing loop end to end");
  sense_flags.attach(sense);
  std::string sense_out = "out";
  sense->add_option("--out-dir", sense_out, "output directory");

  auto* scatter = app.add_subcommand("scatter", "scattering diagram for a configuration");
  scatter_flags.attach(scatter);
  std::string scatter_config, scatter_out = "diagram.csv";
  double scatter_res = 1.0;
  scatter->add_option("--config-csv", scatter_config,
                      "configuration CSV (defaults to the synthesized steering)");
  scatter->add_option("--resolution", scatter_res, "angular resolution, deg");
  scatter->add_option("--out", scatter_out, "output CSV path");

  auto* sweep = app.add_subcommand("sweep", "efficiency sweep over source positions");
  sweep_flags.attach(sweep);
  std::string sweep_out = "out";
  sweep->add_option("--out-dir", sweep_out, "output directory");

  app.add_subcommand("selftest", "run the ideal-backend oracle suite");

  try {
    app.parse(argc, argv);

    if (synth->parsed()) {
      ws::ExperimentConfig cfg = synth_flags.resolve(synth);
      cfg.validate();
      const ws::HsfConfiguration c =
          ws::synthesize_steering_config(cfg.scene(), cfg.target);
      ws::write_file_atomic(synth_out, ws::to_csv(c.bits));
      std::cout << "wrote " << synth_out << "\n";
    } else if (dec->parsed()) {
      const ws::Vec v = read_vector_file(dec_in);
      std::cout << ws::decompose(v, dec_digits, dec_eps).to_json() << "\n";
    } else if (sense->parsed()) {
      ws::ExperimentConfig cfg = sense_flags.resolve(sense);
      cfg.output_dir = sense_out;
      cfg.validate();
      const ws::JointSensingResult run = ws::run_sensing_experiment(cfg);
      std::cout << "wrote " << (fs::path(sense_out) / "wavefront.csv").string() << " ("
                << run.manifest.total_measurements << " measurements)\n";
    } else if (scatter->parsed()) {
      ws::ExperimentConfig cfg = scatter_flags.resolve(scatter);
      cfg.validate();
      const ws::SourceScene scene = cfg.scene();
      ws::HsfConfiguration c;
      if (scatter_config.empty()) {
        c = ws::synthesize_steering_config(scene, cfg.target);
      } else {
        std::istringstream in(ws::read_file(scatter_config));
        c = ws::HsfConfiguration(ws::bits_from_csv(in));
      }
      const ws::ScatteringDiagram d = ws::scattering_diagram(c, scene, scatter_res);
      ws::write_file_atomic(scatter_out, d.to_csv());
      const ws::DiagramSample pk = d.peak();
      std::cout << "wrote " << scatter_out << " (peak at phi=" << pk.phi_deg
                << ", theta=" << pk.theta_deg << ")\n";
    } else if (sweep->parsed()) {
      ws::ExperimentConfig cfg = sweep_flags.resolve(sweep);
      cfg.output_dir = sweep_out;
      cfg.validate();
      const ws::SweepResult res = ws::run_sweep(cfg, ws::table1_positions());
      ws::write_file_atomic(fs::path(sweep_out) / "sweep.csv", ws::sweep_to_csv(res.rows));
      std::cout << "wrote " << (fs::path(sweep_out) / "sweep.csv").string() << "\n";
    } else {
      return run_selftest();
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ws::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
