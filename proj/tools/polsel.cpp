// polsel: command-line front end for the polarization selection-rule library.
//
// Exit status: 0 success, 2 usage error (bad flags or values), 1 computation
// error (unreadable input, failed fit, unwritable output).

#include "polsel/catalog.hpp"
#include "polsel/errors.hpp"
#include "polsel/group.hpp"
#include "polsel/selection.hpp"
#include "polsel/spectrum.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace polsel;
using json = nlohmann::ordered_json;

namespace {

// Usage problems detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failures outside the library (files).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input data that cannot be processed; exits 1 like other computation errors.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Printed and exported numbers go through the same rounding so text and JSON
// carry identical values.
double rounded(double v, const char* f = "%.6f") { return std::stod(fmt(f, v)); }

fs::path output_path(const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("POLSEL_OUTPUT_DIR"); dir && *dir) return fs::path(dir) / path;
  }
  return path;
}

void write_file(const std::string& p, const std::string& content) {
  fs::path path = output_path(p);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_file(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read '" + p + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (format == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw UsageError("unknown format '" + format + "' (expected " + list + ")");
}

PointGroup resolve_group(const std::string& name, const std::string& table_file) {
  if (!table_file.empty()) return load_group(read_file(table_file));
  return builtin_group(name);
}

// ---------------------------------------------------------------- product

struct ProductArgs {
  std::string group;
  std::vector<std::string> irreps;
  std::string table_file;
  bool ascii = false;
};

int run_product(const ProductArgs& a) {
  if (a.irreps.size() < 2) throw UsageError("product needs at least two irrep labels");
  auto g = resolve_group(a.group, a.table_file);
  auto rep = product_of(g, a.irreps);
  auto m = decompose(rep);
  const auto& trivial = g.irrep(g.trivial_index()).label;
  std::cout << m.to_string(a.ascii ? " + " : " ⊕ ") << " (contains " << trivial << ": "
            << (m.counts()[g.trivial_index()] > 0 ? "yes" : "no") << ")\n";
  return 0;
}

// -------------------------------------------------------------- selection

struct SelectionArgs {
  std::string defect_class;
  std::string policy = "physical-override";
  std::string format = "text";
  std::string group = "C3v";
  std::string table_file;
  std::string initial, final_state, polarization = "perp", phonon;
};

int run_selection(const SelectionArgs& a) {
  check_format(a.format, {"text", "tsv", "csv", "json"});
  Policy policy = parse_policy(a.policy);
  if (!a.defect_class.empty()) {
    if (!a.initial.empty() || !a.final_state.empty())
      throw UsageError("give either a defect class or --initial/--final, not both");
    auto t = selection_table(parse_defect_class(a.defect_class), policy);
    if (a.format == "json") std::cout << to_json(t);
    else if (a.format == "tsv") std::cout << to_delimited(t, '\t');
    else if (a.format == "csv") std::cout << to_delimited(t, ',');
    else std::cout << to_text(t);
    return 0;
  }
  if (a.initial.empty() || a.final_state.empty())
    throw UsageError("give a defect class (triplet-axial, vsi-single-group) or --initial and --final");
  auto g = resolve_group(a.group, a.table_file);
  TransitionQuery q{g, a.initial, a.final_state, parse_polarization(a.polarization), std::nullopt};
  if (!a.phonon.empty()) q.phonon = phonon_mode(g, a.phonon);
  Verdict v = evaluate(q, policy);
  if (a.format == "json") {
    json doc{{"group", g.name()},
             {"initial", a.initial},
             {"final", a.final_state},
             {"polarization", q.polarization.to_string()},
             {"phonon", a.phonon.empty() ? json(nullptr) : json(a.phonon)},
             {"policy", to_string(policy)},
             {"verdict", v.symbol()},
             {"group_theory_allowed", v.group_theory_allowed},
             {"physical_coupling", v.physical_coupling}};
    std::cout << doc.dump(2) << "\n";
  } else {
    char d = a.format == "csv" ? ',' : '\t';
    if (a.format == "text") {
      std::cout << g.name() << " " << a.initial << " -> " << a.final_state << ", "
                << q.polarization.to_string();
      if (!a.phonon.empty()) std::cout << ", " << a.phonon << " phonon";
      std::cout << ": " << v.symbol() << " (group theory: "
                << (v.group_theory_allowed ? "allowed" : "forbidden")
                << ", field couples: " << (v.physical_coupling ? "yes" : "no") << ")\n";
    } else {
      std::cout << "verdict" << d << "group_theory_allowed" << d << "physical_coupling\n"
                << v.symbol() << d << v.group_theory_allowed << d << v.physical_coupling << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------- kramers

struct KramersArgs {
  std::string initial, final_state, polarization = "perp";
};

int run_kramers(const KramersArgs& a) {
  auto i = parse_kramers_level(a.initial), f = parse_kramers_level(a.final_state);
  auto pol = parse_polarization(a.polarization);
  Verdict v = kramers_verdict(i, f, pol);
  std::cout << "C3v_double " << a.initial << " <-> " << a.final_state << ", " << pol.to_string()
            << ": " << v.symbol() << " (trivial-irrep count " << kramers_trivial_count(i, f, pol)
            << ")\n";
  return 0;
}

// ------------------------------------------------- excitation (shared flags)

struct LaserArgs {
  std::string polytype, defect;
  std::optional<double> laser_nm, laser_meV;
  double phi = 0;
  std::string medium = "air";
  std::string mode = "nonresonant";
  std::string policy = "physical-override";
  double basal_b = 0.33;
  std::vector<std::string> overrides;  // LABEL=B
  double zpl_fwhm = 1.0;
  std::string catalog_file;
};

void add_laser_flags(CLI::App* cmd, LaserArgs& a) {
  cmd->add_option("polytype", a.polytype, "4H or 6H")->required();
  cmd->add_option("defect", a.defect, "vv (divacancy) or nv")->required();
  auto* nm = cmd->add_option("--laser-nm", a.laser_nm, "laser wavelength in nm (see --medium)");
  auto* mev = cmd->add_option("--laser-mev", a.laser_meV, "laser photon energy in meV");
  nm->excludes(mev);
  cmd->add_option("--phi", a.phi, "polarizer angle in degrees; 0 = E_L perpendicular to c")
      ->capture_default_str();
  cmd->add_option("--medium", a.medium, "wavelength medium: vacuum, air or air:<n>")
      ->capture_default_str();
  cmd->add_option("--mode", a.mode, "nonresonant or resonant")->capture_default_str();
  cmd->add_option("--policy", a.policy, "physical-override or group-theory-only")
      ->capture_default_str();
  cmd->add_option("--basal-B", a.basal_b, "excitation modulation B for basal lines")
      ->capture_default_str();
  cmd->add_option("--B", a.overrides, "per-line modulation override LABEL=B (repeatable)");
  cmd->add_option("--zpl-fwhm", a.zpl_fwhm, "ZPL FWHM in meV (resonant window and line shape)")
      ->capture_default_str();
  cmd->add_option("--catalog", a.catalog_file, "catalog file instead of the built-in one");
}

struct Scenario {
  std::vector<ZplLine> lines;
  LaserConfig laser;
  ExcitationOptions options;
  Medium medium = Medium::air();
  Catalog catalog;
};

Scenario build_scenario(const LaserArgs& a) {
  if (!a.laser_nm && !a.laser_meV) throw UsageError("give --laser-nm or --laser-mev");
  Scenario s;
  s.catalog = a.catalog_file.empty() ? builtin_catalog() : parse_catalog(read_file(a.catalog_file));
  s.lines = lines_for(s.catalog, parse_polytype(a.polytype), parse_defect(a.defect));
  s.medium = parse_medium(a.medium);
  auto mode = parse_excitation_mode(a.mode);
  s.laser = a.laser_nm ? LaserConfig::from_wavelength(*a.laser_nm, s.medium, a.phi, mode)
                       : LaserConfig{*a.laser_meV, a.phi, mode};
  s.laser.validate();
  s.options.basal_modulation = a.basal_b;
  if (!(std::abs(a.basal_b) <= 1)) throw UsageError("--basal-B must lie in [-1, 1]");
  s.options.zpl_fwhm_meV = a.zpl_fwhm;
  s.options.policy = parse_policy(a.policy);
  for (const auto& o : a.overrides) {
    auto eq = o.find('=');
    if (eq == std::string::npos) throw UsageError("--B expects LABEL=value, got '" + o + "'");
    double b = 0;
    try {
      b = std::stod(o.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("bad modulation in '" + o + "'");
    }
    if (!(std::abs(b) <= 1)) throw UsageError("modulation in '" + o + "' must lie in [-1, 1]");
    s.options.modulation_override[o.substr(0, eq)] = b;
  }
  return s;
}

std::map<std::string, std::string> scenario_metadata(const LaserArgs& a, const Scenario& s) {
  std::map<std::string, std::string> m;
  m["polytype"] = a.polytype;
  m["defect"] = a.defect;
  m["laser_meV"] = fmt("%.4f", s.laser.photon_energy_meV);
  if (a.laser_nm) m["laser_nm"] = fmt("%.4f", *a.laser_nm);
  m["medium"] = s.medium.to_string();
  m["phi_deg"] = fmt("%g", s.laser.polarizer_angle_deg);
  m["mode"] = to_string(s.laser.mode);
  m["policy"] = to_string(s.options.policy);
  m["basal_B"] = fmt("%g", s.options.basal_modulation);
  std::string ov;
  for (const auto& [k, v] : s.options.modulation_override) ov += (ov.empty() ? "" : ",") + k + "=" + fmt("%g", v);
  m["B_overrides"] = ov.empty() ? "none" : ov;
  m["zpl_fwhm_meV"] = fmt("%g", s.options.zpl_fwhm_meV);
  return m;
}

// ----------------------------------------------------------------- excite

struct ExciteArgs {
  LaserArgs laser;
  std::string format = "text";
};

int run_excite(const ExciteArgs& a) {
  check_format(a.format, {"text", "json"});
  auto s = build_scenario(a.laser);
  auto excited = excited_lines(s.lines, s.laser, s.options);
  auto meta = scenario_metadata(a.laser, s);
  if (a.format == "json") {
    json doc;
    json m;
    for (const auto& [k, v] : meta) m[k] = v;
    doc["settings"] = m;
    doc["lines"] = json::array();
    for (const auto& e : excited)
      doc["lines"].push_back({{"label", e.line.label},
                              {"energy_meV", e.line.energy_meV},
                              {"geometry", to_string(e.line.geometry)},
                              {"modulation_B", rounded(line_modulation(e.line, s.laser.mode, s.options))},
                              {"efficiency", rounded(e.efficiency)}});
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  for (const auto& [k, v] : meta) std::cout << "# " << k << ": " << v << "\n";
  std::cout << "# label\tenergy_meV\tgeometry\tmodulation_B\tefficiency\n";
  for (const auto& e : excited)
    std::cout << e.line.label << '\t' << fmt("%.1f", e.line.energy_meV) << '\t'
              << to_string(e.line.geometry) << '\t'
              << fmt("%.6f", line_modulation(e.line, s.laser.mode, s.options)) << '\t'
              << fmt("%.6f", e.efficiency) << '\n';
  return 0;
}

// --------------------------------------------------------------- spectrum

struct SpectrumArgs {
  LaserArgs laser;
  std::string output;
  double dw = 0.25;
  GridSpec grid;
  unsigned threads = 1;
  double noise = 0;
  std::uint64_t seed = 0;
};

int run_spectrum(const SpectrumArgs& a) {
  auto s = build_scenario(a.laser);
  auto excited = excited_lines(s.lines, s.laser, s.options);
  LineShapeParams shape;
  shape.debye_waller = a.dw;
  shape.zpl_fwhm_meV = a.laser.zpl_fwhm;
  shape.validate();
  if (a.noise < 0) throw UsageError("--noise must be non-negative");

  Spectrum sp = synthesize_spectrum(excited, shape, a.grid, std::max(1u, a.threads));
  if (a.noise > 0) {
    double peak = sp.intensity.empty() ? 0.0 : *std::max_element(sp.intensity.begin(), sp.intensity.end());
    std::mt19937_64 rng(a.seed);
    std::normal_distribution<double> gauss(0.0, a.noise * peak);
    for (auto& v : sp.intensity) v = std::max(0.0, v + gauss(rng));
  }
  sp.metadata = scenario_metadata(a.laser, s);
  sp.metadata["debye_waller"] = fmt("%g", shape.debye_waller);
  std::string sb;
  for (const auto& c : shape.sideband)
    sb += (sb.empty() ? "" : ",") + fmt("-%g", c.offset_meV) + "/" + fmt("%g", c.fwhm_meV) + "/" + fmt("%g", c.weight);
  sp.metadata["sideband_offset/fwhm/weight"] = sb;
  sp.metadata["grid_meV"] = fmt("%g", a.grid.start_meV) + ":" + fmt("%g", a.grid.step_meV) + ":" + fmt("%g", a.grid.stop_meV);
  sp.metadata["noise_rel_sigma"] = fmt("%g", a.noise);
  sp.metadata["seed"] = std::to_string(a.seed);
  std::string names;
  for (const auto& e : excited) names += (names.empty() ? "" : ",") + e.line.label + "=" + fmt("%.6f", e.efficiency);
  sp.metadata["lines"] = names.empty() ? "none" : names;
  if (excited.empty()) {
    // Header-only file: an empty line set is a valid result.
    sp.energy_meV.clear();
    sp.intensity.clear();
  }
  write_file(a.output, format_spectrum(sp));
  for (const auto& w : sp.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "wrote " << output_path(a.output).string() << " (" << sp.energy_meV.size()
            << " points, lines: " << sp.metadata["lines"] << ")\n";
  return 0;
}

// ----------------------------------------------------------- debye-waller

struct DwArgs {
  std::string input;
  std::string zpl, band;
  std::optional<double> center;
  double zpl_half = 3.0;
  double band_below = 250.0;
  double band_above = 30.0;
  std::string format = "text";
};

EnergyWindow parse_window(const std::string& text, const char* flag) {
  auto colon = text.find(':');
  try {
    if (colon != std::string::npos) {
      EnergyWindow w{std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
      if (w.lo < w.hi) return w;
    }
  } catch (const std::exception&) {
  }
  throw UsageError(std::string(flag) + " expects LO:HI in meV with LO < HI, got '" + text + "'");
}

int run_debye_waller(const DwArgs& a) {
  check_format(a.format, {"text", "json"});
  EnergyWindow zpl{}, band{};
  if (a.center) {
    if (!a.zpl.empty() || !a.band.empty()) throw UsageError("give --center or --zpl/--band, not both");
    zpl = {*a.center - a.zpl_half, *a.center + a.zpl_half};
    band = {*a.center - a.band_below, *a.center + a.band_above};
  } else {
    if (a.zpl.empty() || a.band.empty()) throw UsageError("give --center or both --zpl and --band");
    zpl = parse_window(a.zpl, "--zpl");
    band = parse_window(a.band, "--band");
  }
  auto sp = parse_spectrum(read_file(a.input));
  double dw = debye_waller(sp, zpl, band);
  if (a.format == "json") {
    json doc{{"debye_waller", rounded(dw)},
             {"zpl_window_meV", {zpl.lo, zpl.hi}},
             {"band_window_meV", {band.lo, band.hi}}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "debye_waller " << fmt("%.6f", dw) << " (zpl " << fmt("%g", zpl.lo) << ":"
              << fmt("%g", zpl.hi) << ", band " << fmt("%g", band.lo) << ":" << fmt("%g", band.hi)
              << " meV)\n";
  }
  return 0;
}

// ----------------------------------------------------------- angular-scan

struct ScanArgs {
  double a = 1.0, b = 1.0, step = 15.0, noise = 0.0;
  std::uint64_t seed = 0;
  std::string output;
};

int run_angular_scan(const ScanArgs& a) {
  AngularModel model(a.a, a.b);
  if (a.noise < 0) throw UsageError("--noise must be non-negative");
  std::optional<NoiseSpec> noise;
  if (a.noise > 0) noise = NoiseSpec{a.noise, a.seed};
  auto samples = angular_scan(model, angle_grid(a.step), noise);
  std::map<std::string, std::string> meta{{"model", "I(phi) = A (1 + B cos 2phi)"},
                                          {"A", fmt("%.17g", a.a)},
                                          {"B", fmt("%.17g", a.b)},
                                          {"step_deg", fmt("%g", a.step)},
                                          {"noise_rel_sigma", fmt("%g", a.noise)},
                                          {"seed", std::to_string(a.seed)}};
  std::string text = format_angular(samples, meta);
  if (a.output.empty()) {
    std::cout << text;
  } else {
    write_file(a.output, text);
    std::cout << "wrote " << output_path(a.output).string() << " (" << samples.size() << " angles)\n";
  }
  return 0;
}

// -------------------------------------------------------------- fit-angle

struct FitArgs {
  std::string input;
  std::string geometry = "toward-c";
  double threshold = 0.95;
  double vanishing_ratio = 0.05;
  std::string format = "text";
};

int run_fit_angle(const FitArgs& a) {
  check_format(a.format, {"text", "json"});
  auto geometry = parse_scan_geometry(a.geometry);
  auto samples = parse_angular(read_file(a.input));
  AngularFit fit = [&] {
    try {
      return fit_angular(samples);
    } catch (const InvalidArgument& e) {
      throw DataError(e.what());
    }
  }();
  auto cls = classify_geometry(fit.model, geometry, {a.threshold, a.vanishing_ratio});
  if (a.format == "json") {
    json doc{{"A", rounded(fit.model.amplitude(), "%.12g")},
             {"B", rounded(fit.model.modulation(), "%.12g")},
             {"B_raw", rounded(fit.raw_modulation, "%.12g")},
             {"residual", rounded(fit.residual_norm, "%.6g")},
             {"samples", samples.size()},
             {"scan_geometry", a.geometry},
             {"axial_threshold", a.threshold},
             {"vanishing_ratio", a.vanishing_ratio},
             {"geometry", to_string(cls)}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "A " << fmt("%.12g", fit.model.amplitude()) << "\n"
              << "B " << fmt("%.12g", fit.model.modulation()) << "\n";
    if (fit.raw_modulation != fit.model.modulation())
      std::cout << "B_raw " << fmt("%.12g", fit.raw_modulation) << " (clamped into [-1, 1])\n";
    std::cout << "residual " << fmt("%.6g", fit.residual_norm) << "\n"
              << "samples " << samples.size() << "\n"
              << "geometry " << to_string(cls) << " (" << a.geometry << ", threshold "
              << fmt("%g", a.threshold) << ", vanishing ratio " << fmt("%g", a.vanishing_ratio) << ")\n";
  }
  return 0;
}

// ---------------------------------------------------------------- catalog

struct CatalogArgs {
  std::string polytype, defect, geometry;
  std::string format = "text";
  bool verify_units = false;
  std::optional<double> index;
  std::string export_path;
  std::string file;
};

int run_catalog(const CatalogArgs& a) {
  check_format(a.format, {"text", "tsv", "json"});
  Catalog cat = a.file.empty() ? builtin_catalog() : parse_catalog(read_file(a.file));

  if (a.verify_units) {
    auto rep = verify_units(cat, a.index.value_or(kDefaultAirIndex));
    if (a.format == "json") {
      json doc{{"used_index", rep.used_index},
               {"fitted_index", rounded(rep.fitted_index, "%.9f")},
               {"tolerance_meV", rep.tolerance_meV},
               {"max_abs_air_residual_meV", rounded(rep.max_abs_air_residual(), "%.4f")},
               {"max_abs_vacuum_residual_meV", rounded(rep.max_abs_vacuum_residual(), "%.4f")},
               {"within_tolerance", rep.within_tolerance()},
               {"lines", json::array()}};
      for (const auto& r : rep.residuals)
        doc["lines"].push_back({{"label", r.label},
                                {"wavelength_nm", r.wavelength_nm},
                                {"recorded_meV", r.recorded_meV},
                                {"vacuum_residual_meV", rounded(r.vacuum_residual_meV, "%.4f")},
                                {"air_residual_meV", rounded(r.air_residual_meV, "%.4f")}});
      std::cout << doc.dump(2) << "\n";
    } else {
      std::cout << "# used index " << fmt("%.6f", rep.used_index) << ", least-squares index "
                << fmt("%.9f", rep.fitted_index) << ", tolerance " << fmt("%g", rep.tolerance_meV)
                << " meV\n# label\twavelength_nm\trecorded_meV\tvacuum_residual_meV\tair_residual_meV\n";
      for (const auto& r : rep.residuals)
        std::cout << r.label << '\t' << fmt("%.1f", r.wavelength_nm) << '\t' << fmt("%.1f", r.recorded_meV)
                  << '\t' << fmt("%.4f", r.vacuum_residual_meV) << '\t' << fmt("%.4f", r.air_residual_meV)
                  << '\n';
      std::cout << "max |air residual| " << fmt("%.4f", rep.max_abs_air_residual()) << " meV: "
                << (rep.within_tolerance() ? "within tolerance" : "OUT OF TOLERANCE") << "\n";
    }
    return rep.within_tolerance() ? 0 : 1;
  }

  std::vector<ZplLine> lines;
  std::optional<Geometry> geo;
  if (!a.geometry.empty()) geo = parse_geometry(a.geometry);
  if (!a.defect.empty() && a.polytype.empty()) throw UsageError("defect filter needs a polytype");
  for (auto p : {Polytype::FourH, Polytype::SixH}) {
    if (!a.polytype.empty() && parse_polytype(a.polytype) != p) continue;
    for (auto d : {Defect::Divacancy, Defect::NitrogenVacancy}) {
      if (!a.defect.empty() && parse_defect(a.defect) != d) continue;
      auto part = lines_for(cat, p, d, geo);
      lines.insert(lines.end(), part.begin(), part.end());
    }
  }

  std::string out;
  if (a.format == "json") {
    out = catalog_to_json(lines);
  } else if (a.format == "tsv") {
    out = format_catalog(Catalog(lines));
  } else {
    std::ostringstream os;
    os << "label  polytype  defect  nm       meV      geometry  sites  symmetry\n";
    for (const auto& l : lines) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-6s %-9s %-7s %-8.1f %-8.1f %-9s %-6s %s\n", l.label.c_str(),
                    to_string(l.polytype).c_str(), to_string(l.defect).c_str(), l.wavelength_nm,
                    l.energy_meV, to_string(l.geometry).c_str(), l.sites.to_string().c_str(),
                    site_symmetry(l).name().c_str());
      os << buf;
    }
    out = os.str();
  }
  if (a.export_path.empty()) {
    std::cout << out;
  } else {
    write_file(a.export_path, out);
    std::cout << "wrote " << output_path(a.export_path).string() << " (" << lines.size() << " lines)\n";
  }
  return 0;
}

// ------------------------------------------------------------------ table

struct TableArgs {
  std::string action;
  std::string target;
};

int run_table(const TableArgs& a) {
  bool builtin = false;
  for (const auto& n : builtin_group_names()) builtin = builtin || n == a.target;
  std::string text = builtin ? std::string(builtin_table_text(a.target)) : read_file(a.target);
  CharacterTable t = parse_table(text);
  if (a.action == "show") {
    PointGroup g = PointGroup::from_table(t);
    std::cout << format_table(g.table());
    return 0;
  }
  auto rep = verify_table(t);
  for (const auto& c : rep.checks)
    std::cout << (c.passed ? "ok    " : "FAIL  ") << c.name << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
  std::cout << t.name << ": " << (rep.ok() ? "valid" : "INVALID") << "\n";
  return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polarization selection rules and synthetic polarized PL for SiC color centers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "polsel 0.1.0");

  ProductArgs product;
  auto* c_product = app.add_subcommand("product", "decompose a product of irreps");
  c_product->add_option("group", product.group, "C3v, C1h or C3v_double")->required();
  c_product->add_option("irreps", product.irreps, "two or more irrep labels")->required();
  c_product->add_option("--table", product.table_file, "character table file (overrides group)");
  c_product->add_flag("--ascii", product.ascii, "use ' + ' instead of the direct-sum sign");

  SelectionArgs sel;
  auto* c_sel = app.add_subcommand("selection", "selection-rule grid or single transition verdict");
  c_sel->add_option("class", sel.defect_class, "triplet-axial or vsi-single-group");
  c_sel->add_option("--policy", sel.policy, "physical-override or group-theory-only")->capture_default_str();
  c_sel->add_option("--format", sel.format, "text, tsv, csv or json")->capture_default_str();
  c_sel->add_option("--group", sel.group, "group for a single query")->capture_default_str();
  c_sel->add_option("--table", sel.table_file, "character table file for a single query");
  c_sel->add_option("--initial", sel.initial, "initial-state irrep");
  c_sel->add_option("--final", sel.final_state, "final-state irrep");
  c_sel->add_option("--pol", sel.polarization, "par, perp or inplane:<deg>")->capture_default_str();
  c_sel->add_option("--phonon", sel.phonon, "phonon irrep for a phonon-assisted transition");

  KramersArgs kr;
  auto* c_kr = app.add_subcommand("kramers", "double-group verdict between spin sublevel classes");
  c_kr->add_option("initial", kr.initial, "1/2 or 3/2")->required();
  c_kr->add_option("final", kr.final_state, "1/2 or 3/2")->required();
  c_kr->add_option("--pol", kr.polarization, "par or perp")->capture_default_str();

  ExciteArgs ex;
  auto* c_ex = app.add_subcommand("excite", "lines excited by a polarized laser");
  add_laser_flags(c_ex, ex.laser);
  c_ex->add_option("--format", ex.format, "text or json")->capture_default_str();

  SpectrumArgs spec;
  auto* c_spec = app.add_subcommand("spectrum", "write a synthetic PL spectrum");
  add_laser_flags(c_spec, spec.laser);
  c_spec->add_option("-o,--output", spec.output, "output file")->required();
  c_spec->add_option("--dw", spec.dw, "Debye-Waller factor in (0, 1]")->capture_default_str();
  c_spec->add_option("--grid-start", spec.grid.start_meV, "grid start, meV")->capture_default_str();
  c_spec->add_option("--grid-stop", spec.grid.stop_meV, "grid stop, meV")->capture_default_str();
  c_spec->add_option("--grid-step", spec.grid.step_meV, "grid step, meV")->capture_default_str();
  c_spec->add_option("--threads", spec.threads, "worker threads for grid evaluation")->capture_default_str();
  c_spec->add_option("--noise", spec.noise, "Gaussian noise sigma relative to the peak")->capture_default_str();
  c_spec->add_option("--seed", spec.seed, "noise seed")->capture_default_str();

  DwArgs dw;
  auto* c_dw = app.add_subcommand("debye-waller", "ZPL fraction of a spectrum file");
  c_dw->add_option("input", dw.input, "spectrum file")->required();
  c_dw->add_option("--zpl", dw.zpl, "ZPL window LO:HI (meV)");
  c_dw->add_option("--band", dw.band, "band window LO:HI (meV)");
  c_dw->add_option("--center", dw.center, "ZPL energy; derives both windows");
  c_dw->add_option("--zpl-half", dw.zpl_half, "half width of the derived ZPL window")->capture_default_str();
  c_dw->add_option("--band-below", dw.band_below, "derived band extent below the ZPL")->capture_default_str();
  c_dw->add_option("--band-above", dw.band_above, "derived band extent above the ZPL")->capture_default_str();
  c_dw->add_option("--format", dw.format, "text or json")->capture_default_str();

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("angular-scan", "sample I(phi) = A (1 + B cos 2phi)");
  c_scan->add_option("--A", scan.a, "amplitude")->capture_default_str();
  c_scan->add_option("--B", scan.b, "modulation in [-1, 1]")->capture_default_str();
  c_scan->add_option("--step", scan.step, "angle step in degrees over [0, 180)")->capture_default_str();
  c_scan->add_option("--noise", scan.noise, "Gaussian sigma relative to A")->capture_default_str();
  c_scan->add_option("--seed", scan.seed, "noise seed")->capture_default_str();
  c_scan->add_option("-o,--output", scan.output, "output file (default stdout)");

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit-angle", "fit A, B to an angular scan and classify");
  c_fit->add_option("input", fit.input, "file of 'phi intensity [uncertainty]' rows")->required();
  c_fit->add_option("--geometry", fit.geometry, "toward-c or in-plane")->capture_default_str();
  c_fit->add_option("--threshold", fit.threshold, "axial threshold on B (toward-c)")->capture_default_str();
  c_fit->add_option("--vanishing-ratio", fit.vanishing_ratio, "basal if min/max at or below (in-plane)")
      ->capture_default_str();
  c_fit->add_option("--format", fit.format, "text or json")->capture_default_str();

  CatalogArgs cat;
  auto* c_cat = app.add_subcommand("catalog", "list, export or check the ZPL catalog");
  c_cat->add_option("polytype", cat.polytype, "4H or 6H");
  c_cat->add_option("defect", cat.defect, "vv or nv");
  c_cat->add_option("--geometry", cat.geometry, "axial or basal");
  c_cat->add_option("--format", cat.format, "text, tsv or json")->capture_default_str();
  c_cat->add_flag("--verify-units", cat.verify_units, "nm/meV residual report");
  c_cat->add_option("--index", cat.index, "air refractive index for --verify-units");
  c_cat->add_option("--export", cat.export_path, "write to a file instead of stdout");
  c_cat->add_option("--file", cat.file, "catalog file instead of the built-in one");

  TableArgs tab;
  auto* c_tab = app.add_subcommand("table", "show or verify a character table");
  c_tab->add_option("action", tab.action, "show or verify")->required()->check(CLI::IsMember({"show", "verify"}));
  c_tab->add_option("target", tab.target, "built-in group name or table file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c_product->parsed()) return run_product(product);
    if (c_sel->parsed()) return run_selection(sel);
    if (c_kr->parsed()) return run_kramers(kr);
    if (c_ex->parsed()) return run_excite(ex);
    if (c_spec->parsed()) return run_spectrum(spec);
    if (c_dw->parsed()) return run_debye_waller(dw);
    if (c_scan->parsed()) return run_angular_scan(scan);
    if (c_fit->parsed()) return run_fit_angle(fit);
    if (c_cat->parsed()) return run_catalog(cat);
    if (c_tab->parsed()) return run_table(tab);
  } catch (const UsageError& e) {
    std::cerr << "polsel: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "polsel: " << e.what() << "\n";
    return 2;
  } catch (const UnknownGroup& e) {
    std::cerr << "polsel: " << e.what() << "\n";
    return 2;
  } catch (const UnknownIrrep& e) {
    std::cerr << "polsel: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedPolarization& e) {
    std::cerr << "polsel: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "polsel: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
