#pragma once

// Synthetic polarized photoluminescence experiments: which lines a laser
// excites, rendered spectra, Debye-Waller factors, angular scans and fits.

#include "polsel/catalog.hpp"
#include "polsel/selection.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace polsel {

enum class ExcitationMode { NonResonant, Resonant };

ExcitationMode parse_excitation_mode(std::string_view text);
std::string to_string(ExcitationMode m);

/// Polarizer angle phi follows the convention phi = 0 is E_L perpendicular
/// to c and phi = 90 is E_L parallel to c.
struct LaserConfig {
  double photon_energy_meV = 0;
  double polarizer_angle_deg = 0;
  ExcitationMode mode = ExcitationMode::NonResonant;

  static LaserConfig from_wavelength(double nm, Medium medium, double phi_deg,
                                     ExcitationMode mode = ExcitationMode::NonResonant);
  /// Throws InvalidArgument unless energy > 0 and 0 <= phi < 180.
  void validate() const;
};

/// I(phi) = A (1 + B cos 2 phi), A >= 0, |B| <= 1.
class AngularModel {
 public:
  AngularModel(double amplitude, double modulation);

  double amplitude() const { return a_; }
  double modulation() const { return b_; }
  double operator()(double phi_deg) const;
  double min_intensity() const;
  double max_intensity() const;

 private:
  double a_;
  double b_;
};

/// cos(deg) with exact results at multiples of 30 degrees (0, +-1/2, +-1).
double cos_deg(double deg);
double sin_deg(double deg);

struct SidebandComponent {
  double offset_meV;  // below the ZPL
  double fwhm_meV;
  double weight;      // relative; normalized across components
};

struct LineShapeParams {
  double zpl_fwhm_meV = 1.0;
  std::vector<SidebandComponent> sideband = {{40.0, 20.0, 1.0}, {90.0, 30.0, 1.0}};
  double debye_waller = 0.25;

  void validate() const;
};

struct ExcitationOptions {
  /// Modulation used for basal lines unless overridden per label.
  double basal_modulation = 0.33;
  std::map<std::string, double> modulation_override;
  /// Resonant excitation matches within half of this width.
  double zpl_fwhm_meV = 1.0;
  Policy policy = Policy::PhysicalOverride;
};

/// Modulation B of a line's excitation efficiency versus phi. Axial lines
/// take B = 1 when the selection rules leave no allowed channel for E_L||c,
/// otherwise 0; basal lines use the configured value.
double line_modulation(const ZplLine& line, ExcitationMode mode,
                       const ExcitationOptions& options = {});

/// (1 + B cos 2phi) / (1 + B) when the laser can reach the line, else 0.
double excitation_efficiency(const ZplLine& line, const LaserConfig& laser,
                             const ExcitationOptions& options = {});

struct ExcitedLine {
  ZplLine line;
  double efficiency;
};

/// Lines with efficiency > 0, ascending energy.
std::vector<ExcitedLine> excited_lines(const std::vector<ZplLine>& lines,
                                       const LaserConfig& laser,
                                       const ExcitationOptions& options = {});

struct GridSpec {
  double start_meV = 850.0;
  double stop_meV = 1250.0;
  double step_meV = 0.05;

  std::vector<double> points() const;
};

struct Spectrum {
  std::vector<double> energy_meV;
  std::vector<double> intensity;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> metadata;
};

/// Each line adds efficiency x (DW * ZPL Gaussian + (1 - DW) * sideband
/// Gaussians on the low-energy side); every Gaussian has unit area, so a
/// line's band integrates to its efficiency. Spacing above zpl_fwhm/4 adds a
/// warning. With threads > 1 the grid is split into contiguous chunks; the
/// result is bit-identical to the sequential evaluation.
Spectrum synthesize_spectrum(const std::vector<ExcitedLine>& lines,
                             const LineShapeParams& shape, const GridSpec& grid,
                             unsigned threads = 1);

/// Same with a shape per line (shapes.size() == lines.size()).
Spectrum synthesize_spectrum(const std::vector<ExcitedLine>& lines,
                             const std::vector<LineShapeParams>& shapes,
                             const GridSpec& grid, unsigned threads = 1);

struct EnergyWindow {
  double lo;
  double hi;
};

/// Trapezoidal integral over grid points inside the window.
double integrate(const Spectrum& s, EnergyWindow window);

/// ZPL-window integral over band-window integral. Throws InvalidArgument for
/// windows holding fewer than two grid points, a ZPL window outside the
/// band window, or a band window outside the grid.
double debye_waller(const Spectrum& s, EnergyWindow zpl, EnergyWindow band);

struct AngularSample {
  double phi_deg;
  double intensity;
  std::optional<double> uncertainty;
};

struct NoiseSpec {
  double relative_sigma = 0;  // Gaussian sigma as a fraction of A
  std::uint64_t seed = 0;
};

std::vector<AngularSample> angular_scan(const AngularModel& model,
                                        const std::vector<double>& phi_deg,
                                        std::optional<NoiseSpec> noise = std::nullopt);

/// phi = 0, step, 2 step, ... below 180.
std::vector<double> angle_grid(double step_deg);

struct AngularFit {
  AngularModel model;
  double raw_modulation;  // before clamping into [-1, 1]
  double residual_norm;   // Euclidean norm of intensity residuals
};

/// Linear least squares on the basis {1, cos 2phi}. Throws InvalidArgument
/// for fewer than 3 samples, RankDeficientFit when all samples share one
/// cos 2phi, and DegenerateFit when the fitted A <= 0.
AngularFit fit_angular(const std::vector<AngularSample>& samples);

enum class ScanGeometry {
  TowardC,  // polarization rotated from the basal plane toward c
  InPlane   // polarization rotated within the basal plane
};

ScanGeometry parse_scan_geometry(std::string_view text);

struct ClassifyOptions {
  double axial_threshold = 0.95;
  /// In-plane: basal iff min I / max I is at or below this ratio.
  double vanishing_ratio = 0.05;
};

/// TowardC: axial iff B >= axial_threshold. InPlane (single emitter): basal
/// iff the response nearly vanishes at some angle, else axial.
Geometry classify_geometry(const AngularModel& model, ScanGeometry geometry,
                           const ClassifyOptions& options = {});

/// Single-emitter response mean + amplitude cos 2(phi - phase).
struct OrientedResponse {
  double mean;
  double amplitude;
  double phase_deg;

  double operator()(double phi_deg) const;
};

/// Average over n equivalent orientations whose axes are spaced by 180/n
/// degrees (three orientations give 0, 60, 120 which as axes equal 0, 120,
/// 240). Analytic: the cos 2phi harmonic cancels for n >= 2, so B = 0.
AngularModel ensemble_average(const OrientedResponse& single, int n_orientations = 3);

/// Direct summation of the rotated copies at the given angles.
std::vector<double> ensemble_response(const OrientedResponse& single,
                                      const std::vector<double>& phi_deg,
                                      int n_orientations = 3);

/// (max - min) / (max + min) of a sampled response; 0 for an empty or zero
/// response.
double modulation_depth(const std::vector<double>& values);

/// Two-column text with a '#' provenance header.
std::string format_spectrum(const Spectrum& s);
Spectrum parse_spectrum(std::string_view text);
std::string format_angular(const std::vector<AngularSample>& samples,
                           const std::map<std::string, std::string>& metadata = {});
/// Rows "phi intensity [uncertainty]"; '#' comments. Throws ParseError with
/// the offending line number.
std::vector<AngularSample> parse_angular(std::string_view text);
std::string fit_to_json(const AngularFit& fit, std::optional<Geometry> geometry = std::nullopt);

}  // namespace polsel
