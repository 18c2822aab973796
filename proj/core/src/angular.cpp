#include "polsel/errors.hpp"
#include "polsel/spectrum.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace polsel {

AngularModel::AngularModel(double amplitude, double modulation) : a_(amplitude), b_(modulation) {
  if (!(amplitude >= 0) || !std::isfinite(amplitude))
    throw InvalidArgument("angular amplitude must be non-negative");
  if (!(std::abs(modulation) <= 1))
    throw InvalidArgument("angular modulation must lie in [-1, 1]");
}

double AngularModel::operator()(double phi_deg) const {
  return a_ * (1.0 + b_ * cos_deg(2.0 * phi_deg));
}

double AngularModel::min_intensity() const { return a_ * (1.0 - std::abs(b_)); }
double AngularModel::max_intensity() const { return a_ * (1.0 + std::abs(b_)); }

std::vector<double> angle_grid(double step_deg) {
  if (!(step_deg > 0)) throw InvalidArgument("angle step must be positive");
  std::vector<double> out;
  for (int k = 0; k * step_deg < 180.0 - 1e-9; ++k) out.push_back(k * step_deg);
  return out;
}

std::vector<AngularSample> angular_scan(const AngularModel& model,
                                        const std::vector<double>& phi_deg,
                                        std::optional<NoiseSpec> noise) {
  std::vector<AngularSample> out;
  out.reserve(phi_deg.size());
  std::mt19937_64 rng(noise ? noise->seed : 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double sigma = noise ? noise->relative_sigma * model.amplitude() : 0.0;
  for (double phi : phi_deg) {
    AngularSample s{phi, model(phi), std::nullopt};
    if (noise && sigma > 0) {
      s.intensity += sigma * gauss(rng);
      s.uncertainty = sigma;
    }
    out.push_back(s);
  }
  return out;
}

AngularFit fit_angular(const std::vector<AngularSample>& samples) {
  if (samples.size() < 3) throw InvalidArgument("angular fit needs at least 3 samples");
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd y(n);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    if (!std::isfinite(s.phi_deg) || !std::isfinite(s.intensity))
      throw InvalidArgument("angular samples must be finite");
    double c = cos_deg(2.0 * s.phi_deg);
    design(i, 0) = 1.0;
    design(i, 1) = c;
    y(i) = s.intensity;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  if (hi - lo < 1e-9)
    throw RankDeficientFit("all samples share one value of cos 2phi; A and B are not separable");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 2) throw RankDeficientFit("design matrix is rank deficient");
  Eigen::Vector2d coef = qr.solve(y);
  double a = coef(0);
  if (!(a > 0)) throw DegenerateFit("fitted amplitude A <= 0");
  double b_raw = coef(1) / a;
  double residual = (design * coef - y).norm();
  return {AngularModel(a, std::clamp(b_raw, -1.0, 1.0)), b_raw, residual};
}

ScanGeometry parse_scan_geometry(std::string_view text) {
  if (text == "toward-c") return ScanGeometry::TowardC;
  if (text == "in-plane") return ScanGeometry::InPlane;
  throw InvalidArgument("unknown scan geometry '" + std::string(text) +
                        "' (expected toward-c or in-plane)");
}

Geometry classify_geometry(const AngularModel& model, ScanGeometry geometry,
                           const ClassifyOptions& options) {
  if (geometry == ScanGeometry::TowardC)
    return model.modulation() >= options.axial_threshold ? Geometry::Axial : Geometry::Basal;
  double max = model.max_intensity();
  if (!(max > 0)) return Geometry::Basal;
  return model.min_intensity() / max <= options.vanishing_ratio ? Geometry::Basal
                                                                 : Geometry::Axial;
}

double OrientedResponse::operator()(double phi_deg) const {
  return mean + amplitude * cos_deg(2.0 * (phi_deg - phase_deg));
}

AngularModel ensemble_average(const OrientedResponse& single, int n_orientations) {
  if (n_orientations < 2) throw InvalidArgument("an ensemble needs at least 2 orientations");
  // sum_k exp(2i k 180/n) = 0 for n >= 2: only the mean survives.
  return AngularModel(single.mean, 0.0);
}

std::vector<double> ensemble_response(const OrientedResponse& single,
                                      const std::vector<double>& phi_deg, int n_orientations) {
  if (n_orientations < 1) throw InvalidArgument("need at least one orientation");
  std::vector<double> out;
  out.reserve(phi_deg.size());
  const double spacing = 180.0 / n_orientations;
  for (double phi : phi_deg) {
    double sum = 0;
    for (int k = 0; k < n_orientations; ++k) {
      OrientedResponse rotated{single.mean, single.amplitude, single.phase_deg + k * spacing};
      sum += rotated(phi);
    }
    out.push_back(sum / n_orientations);
  }
  return out;
}

double modulation_depth(const std::vector<double>& values) {
  if (values.empty()) return 0;
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double denom = *mx + *mn;
  return denom > 0 ? (*mx - *mn) / denom : 0.0;
}

std::string fit_to_json(const AngularFit& fit, std::optional<Geometry> geometry) {
  nlohmann::ordered_json doc;
  doc["A"] = fit.model.amplitude();
  doc["B"] = fit.model.modulation();
  doc["B_raw"] = fit.raw_modulation;
  doc["residual"] = fit.residual_norm;
  if (geometry) doc["geometry"] = to_string(*geometry);
  return doc.dump(2) + "\n";
}

}  // namespace polsel
