#pragma once

// Zero-phonon line catalog for the divacancy and the nitrogen-vacancy pair
// in 4H- and 6H-SiC, plus wavelength/energy conversion.

#include "polsel/group.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polsel {

enum class Polytype { FourH, SixH };
enum class Defect { Divacancy, NitrogenVacancy };
enum class Geometry { Axial, Basal };
enum class Site { h, k, k1, k2 };

Polytype parse_polytype(std::string_view text);
Defect parse_defect(std::string_view text);
Geometry parse_geometry(std::string_view text);
std::string to_string(Polytype p);
std::string to_string(Defect d);
std::string to_string(Geometry g);
std::string to_string(Site s);

struct SitePair {
  Site first = Site::h;
  Site second = Site::h;

  std::string to_string() const;
  /// Parses concatenated tokens such as "hk1", "k2k2", "kh".
  static SitePair parse(std::string_view text);
  friend bool operator==(const SitePair&, const SitePair&) = default;
};

/// True for the pairings that lie along c: hh, kk, k1k2, k2k1.
bool is_axial_pair(const SitePair& sites);

struct ZplLine {
  std::string label;
  Polytype polytype = Polytype::FourH;
  Defect defect = Defect::Divacancy;
  double wavelength_nm = 0;  // as recorded
  double energy_meV = 0;     // as recorded
  Geometry geometry = Geometry::Axial;
  SitePair sites;
  std::string tags;   // provenance footnote tags, comma separated
  std::string notes;  // free text
};

/// Site symmetry handed to the selection rules: C3v for axial, C1h for basal.
PointGroup site_symmetry(const ZplLine& line);

class Catalog {
 public:
  Catalog() = default;
  /// Validates label uniqueness, positive values and the axial/site-pair rule.
  explicit Catalog(std::vector<ZplLine> lines);

  const std::vector<ZplLine>& lines() const { return lines_; }
  std::size_t size() const { return lines_.size(); }

  /// Throws InvalidArgument if absent.
  const ZplLine& lookup(Polytype p, Defect d, std::string_view label) const;
  std::optional<ZplLine> find(std::string_view label) const;

 private:
  std::vector<ZplLine> lines_;
};

/// All 20 recorded lines, parsed from the embedded canonical catalog file.
const Catalog& builtin_catalog();
std::string_view builtin_catalog_text();

/// Tab-separated catalog file; '#' starts a comment line.
Catalog parse_catalog(std::string_view text);
std::string format_catalog(const Catalog& catalog);
std::string catalog_to_json(const std::vector<ZplLine>& lines);

/// Filters by polytype and defect, optionally geometry; ascending energy.
std::vector<ZplLine> lines_for(const Catalog& catalog, Polytype p, Defect d,
                               std::optional<Geometry> geometry = std::nullopt);

/// Refractive index used for recorded wavelengths unless stated otherwise.
/// Least-squares fit over all recorded (nm, meV) pairs.
inline constexpr double kDefaultAirIndex = 1.000276;

/// hc in meV nm.
inline constexpr double kHcMeVNm = 1239841.98;

class Medium {
 public:
  static Medium vacuum() { return Medium(1.0); }
  static Medium air(double refractive_index = kDefaultAirIndex);
  double index() const { return index_; }
  bool is_vacuum() const { return index_ == 1.0; }
  std::string to_string() const;

 private:
  explicit Medium(double n) : index_(n) {}
  double index_;
};

/// Parses "vacuum", "air" or "air:<n>".
Medium parse_medium(std::string_view text);

double nm_to_meV(double wavelength_nm, Medium medium);
double meV_to_nm(double energy_meV, Medium medium);

struct UnitResidual {
  std::string label;
  double wavelength_nm;
  double recorded_meV;
  double vacuum_residual_meV;  // converted minus recorded
  double air_residual_meV;
};

struct UnitReport {
  double fitted_index;  // least-squares over all lines
  double used_index;
  double tolerance_meV;
  std::vector<UnitResidual> residuals;

  double max_abs_air_residual() const;
  double max_abs_vacuum_residual() const;
  bool within_tolerance() const { return max_abs_air_residual() <= tolerance_meV; }
};

/// Least-squares refractive index: minimizes sum (hc/(n lambda) - E)^2,
/// which is linear in 1/n.
double fit_air_index(const std::vector<ZplLine>& lines);

UnitReport verify_units(const Catalog& catalog, double index = kDefaultAirIndex,
                        double tolerance_meV = 0.15);

}  // namespace polsel
