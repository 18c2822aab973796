#include "polsel/spectrum.hpp"

#include "polsel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace polsel {

ExcitationMode parse_excitation_mode(std::string_view text) {
  if (text == "nonresonant" || text == "non-resonant") return ExcitationMode::NonResonant;
  if (text == "resonant") return ExcitationMode::Resonant;
  throw InvalidArgument("unknown excitation mode '" + std::string(text) +
                        "' (expected nonresonant or resonant)");
}

std::string to_string(ExcitationMode m) {
  return m == ExcitationMode::Resonant ? "resonant" : "nonresonant";
}

LaserConfig LaserConfig::from_wavelength(double nm, Medium medium, double phi_deg,
                                         ExcitationMode mode) {
  return {nm_to_meV(nm, medium), phi_deg, mode};
}

void LaserConfig::validate() const {
  if (!(photon_energy_meV > 0) || !std::isfinite(photon_energy_meV))
    throw InvalidArgument("laser photon energy must be positive");
  if (!(polarizer_angle_deg >= 0 && polarizer_angle_deg < 180))
    throw InvalidArgument("polarizer angle must lie in [0, 180)");
}

void LineShapeParams::validate() const {
  if (!(zpl_fwhm_meV > 0)) throw InvalidArgument("ZPL FWHM must be positive");
  if (!(debye_waller > 0 && debye_waller <= 1))
    throw InvalidArgument("Debye-Waller factor must lie in (0, 1]");
  double total = 0;
  for (const auto& c : sideband) {
    if (!(c.fwhm_meV > 0) || !(c.weight >= 0))
      throw InvalidArgument("sideband components need positive width and non-negative weight");
    total += c.weight;
  }
  if (debye_waller < 1 && !(total > 0))
    throw InvalidArgument("Debye-Waller factor below 1 needs a weighted sideband");
}

namespace {

// Returns the exact value when deg is a multiple of 30 with a rational
// cosine, otherwise NaN.
double exact_cos(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0) r += 360.0;
  if (r == 0) return 1.0;
  if (r == 60 || r == 300) return 0.5;
  if (r == 90 || r == 270) return 0.0;
  if (r == 120 || r == 240) return -0.5;
  if (r == 180) return -1.0;
  return std::numeric_limits<double>::quiet_NaN();
}

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

double cos_deg(double deg) {
  double e = exact_cos(deg);
  return std::isnan(e) ? std::cos(deg * kDeg) : e;
}

double sin_deg(double deg) { return cos_deg(90.0 - deg); }

double line_modulation(const ZplLine& line, ExcitationMode mode,
                       const ExcitationOptions& options) {
  if (auto it = options.modulation_override.find(line.label);
      it != options.modulation_override.end())
    return it->second;
  if (line.geometry == Geometry::Basal) return options.basal_modulation;

  // Axial VV and NV share the 3A2 <-> 3E rules in C3v.
  SelectionTable t = selection_table(DefectClass::TripletAxial, options.policy);
  auto any_allowed = [&](const SelectionRow& row) {
    if (mode == ExcitationMode::Resonant) return row.cells[0].value == Outcome::Allowed;
    return std::any_of(row.cells.begin() + 1, row.cells.end(),
                       [](const Verdict& v) { return v.value == Outcome::Allowed; });
  };
  bool perp = any_allowed(t.rows[0]);
  bool par = any_allowed(t.rows[1]);
  if (perp && !par) return 1.0;
  if (par && !perp) return -1.0;
  return 0.0;
}

double excitation_efficiency(const ZplLine& line, const LaserConfig& laser,
                             const ExcitationOptions& options) {
  laser.validate();
  if (laser.mode == ExcitationMode::NonResonant) {
    if (!(laser.photon_energy_meV > line.energy_meV)) return 0.0;
  } else if (std::abs(laser.photon_energy_meV - line.energy_meV) > options.zpl_fwhm_meV / 2) {
    return 0.0;
  }
  double b = line_modulation(line, laser.mode, options);
  if (!(std::abs(b) <= 1)) throw InvalidArgument("line modulation must lie in [-1, 1]");
  double eff = (1.0 + b * cos_deg(2.0 * laser.polarizer_angle_deg)) / (1.0 + std::abs(b));
  return eff > 0 ? eff : 0.0;
}

std::vector<ExcitedLine> excited_lines(const std::vector<ZplLine>& lines,
                                       const LaserConfig& laser,
                                       const ExcitationOptions& options) {
  std::vector<ExcitedLine> out;
  for (const auto& l : lines) {
    double e = excitation_efficiency(l, laser, options);
    if (e > 0) out.push_back({l, e});
  }
  std::stable_sort(out.begin(), out.end(), [](const ExcitedLine& a, const ExcitedLine& b) {
    return a.line.energy_meV < b.line.energy_meV;
  });
  return out;
}

std::vector<double> GridSpec::points() const {
  if (!(step_meV > 0) || !(stop_meV > start_meV))
    throw InvalidArgument("grid needs start < stop and step > 0");
  auto n = static_cast<std::size_t>(std::floor((stop_meV - start_meV) / step_meV + 1e-9)) + 1;
  std::vector<double> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = start_meV + static_cast<double>(i) * step_meV;
  return pts;
}

namespace {

constexpr double kFwhmToSigma = 1.0 / 2.3548200450309493;  // 1 / (2 sqrt(2 ln 2))

double gaussian(double x, double center, double fwhm) {
  double s = fwhm * kFwhmToSigma;
  double z = (x - center) / s;
  return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
}

struct PreparedLine {
  double center;
  double efficiency;
  double zpl_weight;
  double zpl_fwhm;
  std::vector<SidebandComponent> sideband;  // weights already scaled
};

double evaluate(const std::vector<PreparedLine>& lines, double x) {
  double total = 0.0;
  for (const auto& l : lines) {
    double v = l.zpl_weight * gaussian(x, l.center, l.zpl_fwhm);
    for (const auto& c : l.sideband) v += c.weight * gaussian(x, l.center - c.offset_meV, c.fwhm_meV);
    total += l.efficiency * v;
  }
  return total;
}

}  // namespace

Spectrum synthesize_spectrum(const std::vector<ExcitedLine>& lines,
                             const LineShapeParams& shape, const GridSpec& grid,
                             unsigned threads) {
  return synthesize_spectrum(lines, std::vector<LineShapeParams>(lines.size(), shape), grid,
                             threads);
}

Spectrum synthesize_spectrum(const std::vector<ExcitedLine>& lines,
                             const std::vector<LineShapeParams>& shapes, const GridSpec& grid,
                             unsigned threads) {
  if (shapes.size() != lines.size())
    throw InvalidArgument("need one line shape per excited line");

  Spectrum s;
  s.energy_meV = grid.points();
  s.intensity.assign(s.energy_meV.size(), 0.0);

  std::vector<PreparedLine> prepared;
  double narrowest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto& shape = shapes[k];
    shape.validate();
    narrowest = std::min(narrowest, shape.zpl_fwhm_meV);
    PreparedLine p{lines[k].line.energy_meV, lines[k].efficiency, shape.debye_waller,
                   shape.zpl_fwhm_meV, {}};
    double total = 0;
    for (const auto& c : shape.sideband) total += c.weight;
    if (shape.debye_waller < 1)
      for (auto c : shape.sideband) {
        c.weight = (1.0 - shape.debye_waller) * c.weight / total;
        p.sideband.push_back(c);
      }
    prepared.push_back(std::move(p));
  }
  if (grid.step_meV > narrowest / 4) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "grid step %.4g meV exceeds ZPL FWHM/4 (%.4g meV)",
                  grid.step_meV, narrowest / 4);
    s.warnings.emplace_back(buf);
  }

  const std::size_t n = s.energy_meV.size();
  auto fill = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) s.intensity[i] = evaluate(prepared, s.energy_meV[i]);
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    fill(0, n);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
      if (lo < hi) pool.emplace_back(fill, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return s;
}

double integrate(const Spectrum& s, EnergyWindow w) {
  double sum = 0;
  std::size_t used = 0;
  for (std::size_t i = 0; i + 1 < s.energy_meV.size(); ++i) {
    double x0 = s.energy_meV[i], x1 = s.energy_meV[i + 1];
    if (x0 >= w.lo && x1 <= w.hi) {
      sum += 0.5 * (x1 - x0) * (s.intensity[i] + s.intensity[i + 1]);
      ++used;
    }
  }
  if (used == 0) throw InvalidArgument("integration window holds fewer than two grid points");
  return sum;
}

double debye_waller(const Spectrum& s, EnergyWindow zpl, EnergyWindow band) {
  if (s.energy_meV.size() < 2) throw InvalidArgument("spectrum has fewer than two points");
  if (!(zpl.lo < zpl.hi) || !(band.lo < band.hi)) throw InvalidArgument("empty window");
  constexpr double eps = 1e-9;
  if (zpl.lo < band.lo - eps || zpl.hi > band.hi + eps)
    throw InvalidArgument("ZPL window must lie inside the band window");
  if (band.lo < s.energy_meV.front() - eps || band.hi > s.energy_meV.back() + eps)
    throw InvalidArgument("band window must lie inside the spectrum grid");
  double total = integrate(s, band);
  if (!(total > 0)) throw InvalidArgument("band window holds no intensity");
  return integrate(s, zpl) / total;
}

std::string format_spectrum(const Spectrum& s) {
  std::ostringstream out;
  for (const auto& [k, v] : s.metadata) out << "# " << k << ": " << v << "\n";
  for (const auto& w : s.warnings) out << "# warning: " << w << "\n";
  out << "# energy_meV\tintensity\n";
  char buf[64];
  for (std::size_t i = 0; i < s.energy_meV.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f\t%.12e\n", s.energy_meV[i], s.intensity[i]);
    out << buf;
  }
  return out.str();
}

namespace {

bool parse_doubles(const std::string& line, std::vector<double>& out) {
  std::string t = line;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream ls(t);
  out.clear();
  std::string tok;
  while (ls >> tok) {
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size() || !std::isfinite(v)) return false;
      out.push_back(v);
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

}  // namespace

Spectrum parse_spectrum(std::string_view text) {
  Spectrum s;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  std::vector<double> vals;
  while (std::getline(in, raw)) {
    ++lineno;
    if (raw.empty()) continue;
    if (raw.front() == '#') {
      auto colon = raw.find(": ");
      if (colon != std::string::npos && colon > 2) {
        std::string key = raw.substr(2, colon - 2);
        std::string value = raw.substr(colon + 2);
        if (key == "warning") {
          s.warnings.push_back(value);
        } else {
          s.metadata[key] = value;
        }
      }
      continue;
    }
    if (!parse_doubles(raw, vals) || vals.size() != 2)
      throw ParseError("expected 'energy_meV intensity'", lineno);
    if (!s.energy_meV.empty() && !(vals[0] > s.energy_meV.back()))
      throw ParseError("energy grid must be strictly ascending", lineno);
    if (vals[1] < 0) throw ParseError("negative intensity", lineno);
    s.energy_meV.push_back(vals[0]);
    s.intensity.push_back(vals[1]);
  }
  return s;
}

std::string format_angular(const std::vector<AngularSample>& samples,
                           const std::map<std::string, std::string>& metadata) {
  std::ostringstream out;
  for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << "\n";
  bool unc = std::any_of(samples.begin(), samples.end(),
                         [](const AngularSample& a) { return a.uncertainty.has_value(); });
  out << "# phi_deg\tintensity" << (unc ? "\tuncertainty" : "") << "\n";
  char buf[96];
  for (const auto& a : samples) {
    std::snprintf(buf, sizeof buf, "%.6f\t%.17g", a.phi_deg, a.intensity);
    out << buf;
    if (unc) {
      std::snprintf(buf, sizeof buf, "\t%.17g", a.uncertainty.value_or(0.0));
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

std::vector<AngularSample> parse_angular(std::string_view text) {
  std::vector<AngularSample> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  std::vector<double> vals;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto first = raw.find_first_not_of(" \t");
    if (first == std::string::npos || raw[first] == '#') continue;
    if (!parse_doubles(raw, vals) || vals.size() < 2 || vals.size() > 3)
      throw ParseError("expected 'phi_deg intensity [uncertainty]'", lineno);
    AngularSample a{vals[0], vals[1], std::nullopt};
    if (vals.size() == 3) a.uncertainty = vals[2];
    out.push_back(a);
  }
  return out;
}

}  // namespace polsel
