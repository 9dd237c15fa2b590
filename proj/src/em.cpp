#include "wavesense/em.hpp"

#include <cmath>
#include <sstream>

namespace wavesense {

ComplexFieldMap incident_field(const SourceScene& scene) {
  scene.validate();
  const int n = scene.grid.n();
  const double k = 2.0 * std::numbers::pi / scene.wavelength();
  const Vec3 src = scene.source.position();
  ComplexFieldMap field;
  field.values.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = (src - scene.grid.cell_center(i, j)).norm();
      field.values(i, j) = std::polar(1.0 / d, -k * d);
    }
  }
  return field;
}

Complex far_field(const HsfConfiguration& config, const ComplexFieldMap& incident,
                  const SphericalDirection& dir, const CellGrid& grid,
                  double wavelength_m) {
  const int n = grid.n();
  if (config.side() != n || incident.values.rows() != n || incident.values.cols() != n)
    throw std::invalid_argument("far_field: dimension mismatch");
  const double k = 2.0 * std::numbers::pi / wavelength_m;
  const Vec3 u = dir.unit();
  Complex sum{0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec3 p = grid.cell_center(i, j);
      const double gamma = config.bits(i, j) ? 1.0 : -1.0;
      sum += gamma * incident.values(i, j) *
             std::polar(1.0, k * (p.x() * u.x() + p.y() * u.y()));
    }
  }
  return sum;
}

double measure_power_physical(const HsfConfiguration& config, const SourceScene& scene) {
  const ComplexFieldMap inc = incident_field(scene);
  const Complex e =
      far_field(config, inc, scene.detector.direction, scene.grid, scene.wavelength());
  return std::norm(e);
}

HsfConfiguration synthesize_steering_config(const SourceScene& scene,
                                            const SphericalDirection& target) {
  scene.validate();
  const int n = scene.grid.n();
  const double k = 2.0 * std::numbers::pi / scene.wavelength();
  const Vec3 src = scene.source.position();
  const Vec3 u = target.unit();
  BitMatrix bits(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec3 p = scene.grid.cell_center(i, j);
      const double d = (src - p).norm();
      const double psi = k * (d - (p.x() * u.x() + p.y() * u.y()));
      const double w = wrap_pi(psi);
      bits(i, j) = (w >= -std::numbers::pi / 2 && w < std::numbers::pi / 2) ? 1 : 0;
    }
  }
  return HsfConfiguration(std::move(bits));
}

ScatteringDiagram scattering_diagram(const HsfConfiguration& config,
                                     const SourceScene& scene,
                                     double resolution_deg) {
  if (!(resolution_deg > 0.0) ||
      std::abs(90.0 / resolution_deg - std::round(90.0 / resolution_deg)) > 1e-9)
    throw std::invalid_argument(
        "scattering_diagram: resolution must divide the hemisphere evenly");
  const ComplexFieldMap inc = incident_field(scene);
  const int n = scene.grid.n();
  const double k = 2.0 * std::numbers::pi / scene.wavelength();

  // Signed effective field per cell, with separable x/y phase factors per
  // direction so each sample costs two small matrix products.
  CMat eff(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      eff(i, j) = (config.bits(i, j) ? 1.0 : -1.0) * inc.values(i, j);

  Vec xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs(i) = scene.grid.cell_center(0, i).x();
    ys(i) = scene.grid.cell_center(i, 0).y();
  }

  const int n_phi = static_cast<int>(std::round(90.0 / resolution_deg)) + 1;
  const int n_theta = static_cast<int>(std::round(360.0 / resolution_deg));

  ScatteringDiagram diagram;
  diagram.resolution_deg = resolution_deg;
  diagram.samples.reserve(static_cast<size_t>(n_phi) * n_theta);
  CVec ax(n), ay(n);
  for (int a = 0; a < n_phi; ++a) {
    const double phi = a * resolution_deg;
    for (int b = 0; b < n_theta; ++b) {
      const double theta = b * resolution_deg;
      const Vec3 u = SphericalDirection{phi, theta}.unit();
      for (int i = 0; i < n; ++i) {
        ax(i) = std::polar(1.0, k * xs(i) * u.x());
        ay(i) = std::polar(1.0, k * ys(i) * u.y());
      }
      const Complex e = ay.transpose() * eff * ax;
      diagram.samples.push_back({phi, theta, std::norm(e)});
    }
  }
  return diagram;
}

DiagramSample ScatteringDiagram::peak() const {
  DiagramSample best{0.0, 0.0, -1.0};
  for (const auto& s : samples)
    if (s.power > best.power) best = s;
  return best;
}

double ScatteringDiagram::total_power() const {
  double t = 0.0;
  for (const auto& s : samples) t += s.power;
  return t;
}

std::string ScatteringDiagram::to_csv() const {
  const double p0 = peak().power;
  std::ostringstream os;
  os.precision(17);
  os << "theta_deg,phi_deg,power,power_db\n";
  for (const auto& s : samples) {
    const double db = 10.0 * std::log10(s.power / p0 + 1e-300);
    os << s.theta_deg << ',' << s.phi_deg << ',' << s.power << ',' << db << '\n';
  }
  return os.str();
}

double worst_lobe_db(const ScatteringDiagram& diagram, double exclusion_deg) {
  const DiagramSample pk = diagram.peak();
  const SphericalDirection pk_dir{pk.phi_deg, pk.theta_deg};
  double worst = -1e30;
  for (const auto& s : diagram.samples) {
    if (angular_distance_deg({s.phi_deg, s.theta_deg}, pk_dir) <= exclusion_deg)
      continue;
    const double db = 10.0 * std::log10(s.power / pk.power + 1e-300);
    if (db > worst) worst = db;
  }
  return worst;
}

}  // namespace wavesense
