#include "polsel/errors.hpp"
#include "polsel/spectrum.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace polsel;

namespace {

const Catalog& cat() { return builtin_catalog(); }

ZplLine line(const char* label) { return *cat().find(label); }

std::vector<ZplLine> four_h_vv() { return lines_for(cat(), Polytype::FourH, Defect::Divacancy); }

std::vector<std::string> labels(const std::vector<ExcitedLine>& lines) {
  std::vector<std::string> out;
  for (const auto& l : lines) out.push_back(l.line.label);
  return out;
}

LaserConfig laser_nm(double nm, double phi) {
  return LaserConfig::from_wavelength(nm, Medium::air(), phi);
}

// Exact area of a unit-area Gaussian between lo and hi.
double gauss_area(double center, double fwhm, double lo, double hi) {
  double s = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  return 0.5 * (std::erf((hi - center) / (s * std::sqrt(2.0))) -
                std::erf((lo - center) / (s * std::sqrt(2.0))));
}

ZplLine synthetic(const char* label, double e, Geometry g) {
  ZplLine l;
  l.label = label;
  l.energy_meV = e;
  l.wavelength_nm = kHcMeVNm / e;
  l.geometry = g;
  l.sites = g == Geometry::Axial ? SitePair{Site::h, Site::h} : SitePair{Site::h, Site::k};
  return l;
}

using V = std::vector<std::string>;

}  // namespace

TEST(Trig, ExactAtSpecialAngles) {
  EXPECT_EQ(cos_deg(180), -1.0);
  EXPECT_EQ(cos_deg(90), 0.0);
  EXPECT_EQ(cos_deg(-90), 0.0);
  EXPECT_EQ(cos_deg(120), -0.5);
  EXPECT_EQ(cos_deg(720), 1.0);
  EXPECT_EQ(sin_deg(30), 0.5);
  EXPECT_NEAR(cos_deg(45), std::sqrt(0.5), 1e-15);
}

TEST(Excitation, EfficiencyExamples) {
  const auto& pl1 = line("PL1");
  EXPECT_EQ(excitation_efficiency(pl1, laser_nm(930, 90)), 0.0);
  EXPECT_EQ(excitation_efficiency(pl1, laser_nm(930, 0)), 1.0);
  auto l1090 = laser_nm(1090, 0);
  EXPECT_NEAR(l1090.photon_energy_meV, 1137.1, 0.1);
  for (double phi : {0.0, 30.0, 90.0, 135.0}) {
    EXPECT_GT(excitation_efficiency(line("PL3"), laser_nm(1090, phi)), 0.0);
    EXPECT_EQ(excitation_efficiency(line("PL4"), laser_nm(1090, phi)), 0.0);
  }
}

TEST(Excitation, BasalEfficiency) {
  const auto& pl3 = line("PL3");
  EXPECT_DOUBLE_EQ(excitation_efficiency(pl3, laser_nm(930, 0)), 1.0);
  EXPECT_DOUBLE_EQ(excitation_efficiency(pl3, laser_nm(930, 90)), (1 - 0.33) / (1 + 0.33));
  ExcitationOptions opt;
  opt.modulation_override["PL3"] = 0.0;
  EXPECT_DOUBLE_EQ(excitation_efficiency(pl3, laser_nm(930, 90), opt), 1.0);
  opt.modulation_override["PL3"] = 1.5;
  EXPECT_THROW(excitation_efficiency(pl3, laser_nm(930, 90), opt), InvalidArgument);
}

TEST(Excitation, AxialModulationFromSelectionRules) {
  EXPECT_EQ(line_modulation(line("PL1"), ExcitationMode::NonResonant), 1.0);
  EXPECT_EQ(line_modulation(line("PL1"), ExcitationMode::Resonant), 1.0);
  // Without the physical override the E-phonon channel is open for E||c.
  ExcitationOptions gto;
  gto.policy = Policy::GroupTheoryOnly;
  EXPECT_EQ(line_modulation(line("PL1"), ExcitationMode::NonResonant, gto), 0.0);
  EXPECT_EQ(line_modulation(line("PL3"), ExcitationMode::NonResonant), 0.33);
}

TEST(Excitation, SelectiveSets) {
  EXPECT_EQ(labels(excited_lines(four_h_vv(), laser_nm(1090, 90))), (V{"PL3"}));
  EXPECT_EQ(labels(excited_lines(four_h_vv(), laser_nm(930, 0))), (V{"PL1", "PL2", "PL3", "PL4"}));
  EXPECT_EQ(labels(excited_lines(four_h_vv(), laser_nm(930, 90))), (V{"PL3", "PL4"}));
  EXPECT_TRUE(excited_lines(four_h_vv(), laser_nm(1200, 0)).empty());
  auto nv = lines_for(cat(), Polytype::FourH, Defect::NitrogenVacancy);
  EXPECT_EQ(labels(excited_lines(nv, laser_nm(930, 90))), (V{"NV1", "NV4"}));
}

TEST(Excitation, ResonantWindow) {
  const auto& pl3 = line("PL3");
  LaserConfig on{pl3.energy_meV + 0.4, 0, ExcitationMode::Resonant};
  LaserConfig off{pl3.energy_meV + 0.6, 0, ExcitationMode::Resonant};
  EXPECT_GT(excitation_efficiency(pl3, on), 0.0);
  EXPECT_EQ(excitation_efficiency(pl3, off), 0.0);
  // Non-resonant gating is strict.
  LaserConfig equal{pl3.energy_meV, 0, ExcitationMode::NonResonant};
  EXPECT_EQ(excitation_efficiency(pl3, equal), 0.0);
}

TEST(Excitation, InvalidLaser) {
  EXPECT_THROW(excitation_efficiency(line("PL1"), {1000, 180}), InvalidArgument);
  EXPECT_THROW(excitation_efficiency(line("PL1"), {1000, -1}), InvalidArgument);
  EXPECT_THROW(excitation_efficiency(line("PL1"), {0, 0}), InvalidArgument);
  EXPECT_THROW(parse_excitation_mode("pulsed"), InvalidArgument);
}

TEST(ExcitationProperty, AxialVanishingAndBasalPersistence) {
  for (const auto& l : cat().lines()) {
    auto hi = LaserConfig{l.energy_meV + 50.0, 90};
    auto lo = LaserConfig{l.energy_meV + 50.0, 0};
    if (l.geometry == Geometry::Axial) {
      EXPECT_EQ(excitation_efficiency(l, hi), 0.0) << l.label;
    } else {
      EXPECT_GT(excitation_efficiency(l, hi), 0.0) << l.label;
    }
    EXPECT_GT(excitation_efficiency(l, lo), 0.0) << l.label;
  }
}

TEST(ExcitationProperty, MonotoneGating) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> energy(950, 1200), phi(0, 179.9);
  for (int k = 0; k < 300; ++k) {
    double a = energy(rng), b = energy(rng), p = phi(rng);
    if (a < b) std::swap(a, b);
    for (auto poly : {Polytype::FourH, Polytype::SixH}) {
      for (auto d : {Defect::Divacancy, Defect::NitrogenVacancy}) {
        auto lines = lines_for(cat(), poly, d);
        auto hi = labels(excited_lines(lines, {a, p}));
        auto lo = labels(excited_lines(lines, {b, p}));
        for (const auto& l : lo) EXPECT_NE(std::find(hi.begin(), hi.end(), l), hi.end());
      }
    }
  }
}

TEST(Synthesis, SingleLineDwOneIntegratesToEfficiency) {
  LineShapeParams shape;
  shape.debye_waller = 1.0;
  auto s = synthesize_spectrum({{line("PL3"), 0.7}}, shape, GridSpec{});
  EXPECT_TRUE(s.warnings.empty());
  EXPECT_NEAR(integrate(s, {850, 1250}), 0.7, 1e-9);
  EXPECT_NEAR(debye_waller(s, {1116.1, 1122.1}, {900, 1250}), 1.0, 1e-9);
}

TEST(Synthesis, BandIntegralsMatchAnalyticGaussians) {
  LineShapeParams shape;
  shape.debye_waller = 0.3;
  GridSpec grid{400, 1600, 0.05};
  auto a = synthetic("X1", 700, Geometry::Basal), b = synthetic("X2", 1200, Geometry::Basal);
  auto s = synthesize_spectrum({{a, 0.42}, {b, 0.9}}, shape, grid);
  for (const auto& [l, eff] : std::vector<std::pair<ZplLine, double>>{{a, 0.42}, {b, 0.9}}) {
    EnergyWindow band{l.energy_meV - 250, l.energy_meV + 50};
    double expected = eff * (0.3 * gauss_area(l.energy_meV, 1.0, band.lo, band.hi) +
                             0.35 * gauss_area(l.energy_meV - 40, 20, band.lo, band.hi) +
                             0.35 * gauss_area(l.energy_meV - 90, 30, band.lo, band.hi));
    EXPECT_NEAR(integrate(s, band), expected, 1e-9) << l.label;
    EXPECT_NEAR(integrate(s, band), eff, 1e-9) << l.label;
  }
}

TEST(Synthesis, LinearityIsExact) {
  auto lines = excited_lines(four_h_vv(), laser_nm(930, 0));
  LineShapeParams shape;
  auto whole = synthesize_spectrum(lines, shape, GridSpec{});
  std::vector<double> sum(whole.intensity.size(), 0.0);
  for (const auto& l : lines) {
    auto part = synthesize_spectrum({l}, shape, GridSpec{});
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += part.intensity[i];
  }
  EXPECT_EQ(sum, whole.intensity);
}

TEST(Synthesis, ThreadedIsBitIdentical) {
  auto lines = excited_lines(four_h_vv(), laser_nm(930, 0));
  auto seq = synthesize_spectrum(lines, LineShapeParams{}, GridSpec{}, 1);
  for (unsigned t : {2u, 3u, 7u}) {
    auto par = synthesize_spectrum(lines, LineShapeParams{}, GridSpec{}, t);
    EXPECT_EQ(par.intensity, seq.intensity) << t;
  }
}

TEST(Synthesis, SelectiveSpectrumIsolatesPl3) {
  auto selective = excited_lines(four_h_vv(), laser_nm(1090, 90));
  ASSERT_EQ(labels(selective), (V{"PL3"}));
  auto windows_clear = [&](const Spectrum& s, std::initializer_list<const char*> names) {
    for (const char* name : names) {
      double c = line(name).energy_meV;
      for (std::size_t i = 0; i < s.energy_meV.size(); ++i)
        if (std::abs(s.energy_meV[i] - c) <= 3.0) EXPECT_EQ(s.intensity[i], 0.0) << name;
    }
  };
  LineShapeParams zpl_only;
  zpl_only.debye_waller = 1.0;
  windows_clear(synthesize_spectrum(selective, zpl_only, GridSpec{}), {"PL1", "PL2", "PL4"});
  // With sidebands PL3's own phonon band reaches below it and only a far
  // Gaussian tail (8 sigma) reaches PL4; the spectrum is exactly the PL3-only one.
  auto with_psb = synthesize_spectrum(selective, LineShapeParams{}, GridSpec{});
  double peak = *std::max_element(with_psb.intensity.begin(), with_psb.intensity.end());
  double pl4 = line("PL4").energy_meV;
  for (std::size_t i = 0; i < with_psb.energy_meV.size(); ++i)
    if (std::abs(with_psb.energy_meV[i] - pl4) <= 3.0) EXPECT_LT(with_psb.intensity[i], 1e-12 * peak);
  auto pl3_only = synthesize_spectrum({{line("PL3"), selective.front().efficiency}},
                                      LineShapeParams{}, GridSpec{});
  EXPECT_EQ(with_psb.intensity, pl3_only.intensity);
}

TEST(Synthesis, CoarseGridWarns) {
  auto s = synthesize_spectrum({{line("PL3"), 1.0}}, LineShapeParams{}, GridSpec{850, 1250, 0.3});
  ASSERT_EQ(s.warnings.size(), 1u);
  EXPECT_NE(s.warnings[0].find("FWHM/4"), std::string::npos);
}

TEST(Synthesis, ShapeValidation) {
  LineShapeParams bad;
  bad.debye_waller = 0;
  EXPECT_THROW(synthesize_spectrum({{line("PL3"), 1.0}}, bad, GridSpec{}), InvalidArgument);
  bad = {};
  bad.zpl_fwhm_meV = -1;
  EXPECT_THROW(synthesize_spectrum({{line("PL3"), 1.0}}, bad, GridSpec{}), InvalidArgument);
  EXPECT_THROW(synthesize_spectrum({{line("PL3"), 1.0}}, std::vector<LineShapeParams>{}, GridSpec{}),
               InvalidArgument);
  EXPECT_THROW(GridSpec({10, 5, 1}).points(), InvalidArgument);
}

TEST(DebyeWaller, RoundTrip) {
  for (double dw : {0.05, 0.25, 0.6}) {
    LineShapeParams shape;
    shape.debye_waller = dw;
    auto s = synthesize_spectrum({{line("PL3"), 1.0}}, shape, GridSpec{});
    double e = line("PL3").energy_meV;
    EXPECT_NEAR(debye_waller(s, {e - 3, e + 3}, {e - 250, e + 30}), dw, 1e-3) << dw;
  }
}

TEST(DebyeWaller, PerLineShapesInMixture) {
  auto lines = excited_lines(four_h_vv(), laser_nm(930, 0));
  std::vector<LineShapeParams> shapes(lines.size());
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    shapes[k].debye_waller = 0.1 + 0.2 * static_cast<double>(k);
    shapes[k].sideband = {{10.0, 3.0, 1.0}};
  }
  GridSpec grid{800, 1300, 0.05};
  auto s = synthesize_spectrum(lines, shapes, grid);
  // PL1 and PL2 overlap; the isolated PL4 band is checked.
  double e = line("PL4").energy_meV;
  EXPECT_NEAR(debye_waller(s, {e - 3, e + 3}, {e - 20, e + 5}), shapes[3].debye_waller, 1e-3);
}

TEST(DebyeWaller, WindowErrors) {
  auto s = synthesize_spectrum({{line("PL3"), 1.0}}, LineShapeParams{}, GridSpec{});
  EXPECT_THROW(debye_waller(s, {1000, 1010}, {1100, 1200}), InvalidArgument);
  EXPECT_THROW(debye_waller(s, {1100, 1101}, {800, 1200}), InvalidArgument);
  EXPECT_THROW(debye_waller(s, {1100.01, 1100.02}, {1000, 1200}), InvalidArgument);
}

TEST(SpectrumIo, RoundTrip) {
  auto s = synthesize_spectrum({{line("PL3"), 1.0}}, LineShapeParams{}, GridSpec{1100, 1130, 0.5});
  s.metadata["laser_meV"] = "1137.1";
  auto back = parse_spectrum(format_spectrum(s));
  EXPECT_EQ(back.metadata, s.metadata);
  EXPECT_EQ(back.warnings, s.warnings);
  ASSERT_EQ(back.energy_meV.size(), s.energy_meV.size());
  for (std::size_t i = 0; i < s.energy_meV.size(); ++i)
    EXPECT_NEAR(back.intensity[i], s.intensity[i], 1e-11 * std::max(1.0, s.intensity[i]));
}

TEST(SpectrumIo, HeaderOnlyFileIsValid) {
  Spectrum empty;
  empty.metadata["lines"] = "";
  auto text = format_spectrum(empty);
  EXPECT_NE(text.find("# energy_meV\tintensity"), std::string::npos);
  EXPECT_TRUE(parse_spectrum(text).energy_meV.empty());
}

TEST(SpectrumIo, ParseErrors) {
  try {
    parse_spectrum("# x: y\n1 2\n0.5 3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_spectrum("1 -2\n"), ParseError);
  EXPECT_THROW(parse_spectrum("1 2 3\n"), ParseError);
}
