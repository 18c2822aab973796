#include "polsel/catalog.hpp"

#include "embedded_data.hpp"
#include "polsel/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace polsel {

Polytype parse_polytype(std::string_view t) {
  if (t == "4H" || t == "4h") return Polytype::FourH;
  if (t == "6H" || t == "6h") return Polytype::SixH;
  throw InvalidArgument("unknown polytype '" + std::string(t) + "' (expected 4H or 6H)");
}

Defect parse_defect(std::string_view t) {
  if (t == "VV" || t == "vv" || t == "divacancy") return Defect::Divacancy;
  if (t == "NV" || t == "nv" || t == "nitrogen-vacancy") return Defect::NitrogenVacancy;
  throw InvalidArgument("unknown defect '" + std::string(t) + "' (expected vv or nv)");
}

Geometry parse_geometry(std::string_view t) {
  if (t == "axial" || t == "Axial") return Geometry::Axial;
  if (t == "basal" || t == "Basal") return Geometry::Basal;
  throw InvalidArgument("unknown geometry '" + std::string(t) + "' (expected axial or basal)");
}

std::string to_string(Polytype p) { return p == Polytype::FourH ? "4H" : "6H"; }
std::string to_string(Defect d) { return d == Defect::Divacancy ? "VV" : "NV"; }
std::string to_string(Geometry g) { return g == Geometry::Axial ? "axial" : "basal"; }

std::string to_string(Site s) {
  switch (s) {
    case Site::h:
      return "h";
    case Site::k:
      return "k";
    case Site::k1:
      return "k1";
    case Site::k2:
      return "k2";
  }
  return "?";
}

std::string SitePair::to_string() const {
  return polsel::to_string(first) + polsel::to_string(second);
}

SitePair SitePair::parse(std::string_view text) {
  std::vector<Site> sites;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == 'h') {
      sites.push_back(Site::h);
      ++i;
    } else if (c == 'k') {
      if (i + 1 < text.size() && text[i + 1] == '1') {
        sites.push_back(Site::k1);
        i += 2;
      } else if (i + 1 < text.size() && text[i + 1] == '2') {
        sites.push_back(Site::k2);
        i += 2;
      } else {
        sites.push_back(Site::k);
        ++i;
      }
    } else {
      throw ParseError("bad site token in '" + std::string(text) + "'", 0);
    }
  }
  if (sites.size() != 2) throw ParseError("site pair '" + std::string(text) + "' needs two sites", 0);
  return {sites[0], sites[1]};
}

bool is_axial_pair(const SitePair& s) {
  return (s.first == Site::h && s.second == Site::h) ||
         (s.first == Site::k && s.second == Site::k) ||
         (s.first == Site::k1 && s.second == Site::k2) ||
         (s.first == Site::k2 && s.second == Site::k1);
}

PointGroup site_symmetry(const ZplLine& line) {
  return builtin_group(line.geometry == Geometry::Axial ? "C3v" : "C1h");
}

Catalog::Catalog(std::vector<ZplLine> lines) : lines_(std::move(lines)) {
  std::set<std::tuple<Polytype, Defect, std::string>> seen;
  for (const auto& l : lines_) {
    if (l.label.empty()) throw InvalidArgument("catalog line without label");
    if (!(l.wavelength_nm > 0) || !(l.energy_meV > 0))
      throw InvalidArgument("line " + l.label + ": wavelength and energy must be positive");
    if ((l.geometry == Geometry::Axial) != is_axial_pair(l.sites))
      throw InvalidArgument("line " + l.label + ": geometry " + to_string(l.geometry) +
                            " inconsistent with site pair " + l.sites.to_string());
    if (!seen.insert({l.polytype, l.defect, l.label}).second)
      throw InvalidArgument("duplicate line label " + l.label);
  }
}

const ZplLine& Catalog::lookup(Polytype p, Defect d, std::string_view label) const {
  for (const auto& l : lines_)
    if (l.polytype == p && l.defect == d && l.label == label) return l;
  throw InvalidArgument("no line " + std::string(label) + " for " + to_string(p) + " " +
                        to_string(d));
}

std::optional<ZplLine> Catalog::find(std::string_view label) const {
  for (const auto& l : lines_)
    if (l.label == label) return l;
  return std::nullopt;
}

namespace {

std::vector<std::string> split_tabs(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto tab = s.find('\t', start);
    out.push_back(s.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

double parse_positive(const std::string& s, const char* what, std::size_t lineno) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size() && v > 0 && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(std::string("bad ") + what + " '" + s + "'", lineno);
}

std::string fixed1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

Catalog parse_catalog(std::string_view text) {
  std::vector<ZplLine> lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw.front() == '#') continue;
    auto f = split_tabs(raw);
    if (f.size() < 7 || f.size() > 9)
      throw ParseError("expected 7 to 9 tab-separated fields, got " + std::to_string(f.size()),
                       lineno);
    ZplLine l;
    try {
      l.label = f[0];
      l.polytype = parse_polytype(f[1]);
      l.defect = parse_defect(f[2]);
      l.wavelength_nm = parse_positive(f[3], "wavelength", lineno);
      l.energy_meV = parse_positive(f[4], "energy", lineno);
      l.geometry = parse_geometry(f[5]);
      l.sites = SitePair::parse(f[6]);
    } catch (const ParseError& e) {
      if (e.line()) throw;
      throw ParseError(e.what(), lineno);
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
    if (f.size() > 7) l.tags = f[7];
    if (f.size() > 8) l.notes = f[8];
    lines.push_back(std::move(l));
  }
  return Catalog(std::move(lines));
}

std::string format_catalog(const Catalog& catalog) {
  std::ostringstream out;
  out << "# label\tpolytype\tdefect\twavelength_nm\tenergy_meV\tgeometry\tsites\ttags\tnotes\n";
  for (const auto& l : catalog.lines())
    out << l.label << '\t' << to_string(l.polytype) << '\t' << to_string(l.defect) << '\t'
        << fixed1(l.wavelength_nm) << '\t' << fixed1(l.energy_meV) << '\t'
        << to_string(l.geometry) << '\t' << l.sites.to_string() << '\t' << l.tags << '\t'
        << l.notes << '\n';
  return out.str();
}

std::string catalog_to_json(const std::vector<ZplLine>& lines) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& l : lines) {
    arr.push_back({{"label", l.label},
                   {"polytype", to_string(l.polytype)},
                   {"defect", to_string(l.defect)},
                   {"wavelength_nm", l.wavelength_nm},
                   {"energy_meV", l.energy_meV},
                   {"geometry", to_string(l.geometry)},
                   {"sites", l.sites.to_string()},
                   {"site_symmetry", site_symmetry(l).name()},
                   {"tags", l.tags},
                   {"notes", l.notes}});
  }
  return arr.dump(2) + "\n";
}

std::string_view builtin_catalog_text() { return detail::embedded_catalog(); }

const Catalog& builtin_catalog() {
  static const Catalog catalog = parse_catalog(builtin_catalog_text());
  return catalog;
}

std::vector<ZplLine> lines_for(const Catalog& catalog, Polytype p, Defect d,
                               std::optional<Geometry> geometry) {
  std::vector<ZplLine> out;
  for (const auto& l : catalog.lines())
    if (l.polytype == p && l.defect == d && (!geometry || l.geometry == *geometry))
      out.push_back(l);
  std::stable_sort(out.begin(), out.end(),
                   [](const ZplLine& a, const ZplLine& b) { return a.energy_meV < b.energy_meV; });
  return out;
}

Medium Medium::air(double n) {
  if (!(n >= 1.0) || !std::isfinite(n))
    throw InvalidArgument("refractive index must be >= 1");
  return Medium(n);
}

std::string Medium::to_string() const {
  if (is_vacuum()) return "vacuum";
  char buf[48];
  std::snprintf(buf, sizeof buf, "air:%.6f", index_);
  return buf;
}

Medium parse_medium(std::string_view text) {
  if (text == "vacuum") return Medium::vacuum();
  if (text == "air") return Medium::air();
  if (text.rfind("air:", 0) == 0) {
    std::string num(text.substr(4));
    try {
      std::size_t used = 0;
      double n = std::stod(num, &used);
      if (used == num.size()) return Medium::air(n);
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
  }
  throw InvalidArgument("unknown medium '" + std::string(text) +
                        "' (expected vacuum, air or air:<n>)");
}

double nm_to_meV(double wavelength_nm, Medium medium) {
  if (!(wavelength_nm > 0)) throw InvalidArgument("wavelength must be positive");
  return kHcMeVNm / (medium.index() * wavelength_nm);
}

double meV_to_nm(double energy_meV, Medium medium) {
  if (!(energy_meV > 0)) throw InvalidArgument("energy must be positive");
  return kHcMeVNm / (medium.index() * energy_meV);
}

double UnitReport::max_abs_air_residual() const {
  double m = 0;
  for (const auto& r : residuals) m = std::max(m, std::abs(r.air_residual_meV));
  return m;
}

double UnitReport::max_abs_vacuum_residual() const {
  double m = 0;
  for (const auto& r : residuals) m = std::max(m, std::abs(r.vacuum_residual_meV));
  return m;
}

double fit_air_index(const std::vector<ZplLine>& lines) {
  // E = (hc/lambda) u with u = 1/n; least squares in u.
  double num = 0, den = 0;
  for (const auto& l : lines) {
    double x = kHcMeVNm / l.wavelength_nm;
    num += x * l.energy_meV;
    den += x * x;
  }
  if (den == 0) throw InvalidArgument("no lines to fit");
  return den / num;
}

UnitReport verify_units(const Catalog& catalog, double index, double tolerance_meV) {
  UnitReport rep{fit_air_index(catalog.lines()), index, tolerance_meV, {}};
  Medium air = Medium::air(index);
  for (const auto& l : catalog.lines()) {
    rep.residuals.push_back({l.label, l.wavelength_nm, l.energy_meV,
                             nm_to_meV(l.wavelength_nm, Medium::vacuum()) - l.energy_meV,
                             nm_to_meV(l.wavelength_nm, air) - l.energy_meV});
  }
  return rep;
}

}  // namespace polsel
