// End-to-end tests that run the polsel binary.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run polsel(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string("'") + POLSEL_CLI_PATH + "' " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("polsel_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return "'" + (dir_ / name).string() + "'"; }
  fs::path dir_;
};

// Value of the data row nearest to energy e in a spectrum file.
double intensity_at(const std::string& file_text, double e) {
  std::istringstream in(file_text);
  std::string line;
  double best = 1e9, value = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double x, y;
    ls >> x >> y;
    if (std::abs(x - e) < best) best = std::abs(x - e), value = y;
  }
  return value;
}

std::vector<std::string> labels_of(const std::string& excite_text) {
  std::vector<std::string> out;
  std::istringstream in(excite_text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(line.substr(0, line.find('\t')));
  return out;
}

}  // namespace

TEST(CliProduct, WorkedExamples) {
  auto r = polsel("product C3v E E");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "A1 ⊕ A2 ⊕ E (contains A1: yes)\n");
  EXPECT_EQ(polsel("product C3v E E A2").out, "A1 ⊕ A2 ⊕ E (contains A1: yes)\n");
  EXPECT_EQ(polsel("product C3v E A1 A2").out, "E (contains A1: no)\n");
  EXPECT_EQ(polsel("product C1h \"A''\" \"A''\"").out, "A' (contains A': yes)\n");
  EXPECT_EQ(polsel("product C3v A2 E --ascii").out, "E (contains A1: no)\n");
  auto bad = polsel("product C3v E X", true);
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("A1, A2, E"), std::string::npos);
  EXPECT_EQ(polsel("product C3v E").code, 2);
  EXPECT_EQ(polsel("product D6h E E").code, 2);
}

TEST(CliSelection, GridAndPolicy) {
  auto r = polsel("selection triplet-axial --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("par,F,F,F,A*"), std::string::npos);
  auto g = polsel("selection triplet-axial --format csv --policy group-theory-only");
  EXPECT_NE(g.out.find("par,F,F,F,A"), std::string::npos);
  EXPECT_EQ(g.out.find("A*"), std::string::npos);
  EXPECT_EQ(polsel("selection vsi-single-group --format json").code, 0);
  EXPECT_EQ(polsel("selection nonsense").code, 2);
  EXPECT_EQ(polsel("selection triplet-axial --format yaml").code, 2);
}

TEST(CliSelection, SingleQuery) {
  auto r = polsel("selection --group C3v --initial A2 --final E --pol perp");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(": A "), std::string::npos);
  EXPECT_NE(polsel("selection --group C3v --initial A2 --final E --pol par").out.find(": F "),
            std::string::npos);
  EXPECT_NE(polsel("selection --group C3v --initial A2 --final E --pol par --phonon E").out.find(": A* "),
            std::string::npos);
  EXPECT_EQ(polsel("selection --group C3v --initial A2 --final Z").code, 2);
}

TEST(CliKramers, Rules) {
  EXPECT_NE(polsel("kramers 1/2 3/2 --pol perp").out.find(": A "), std::string::npos);
  EXPECT_NE(polsel("kramers 1/2 3/2 --pol par").out.find(": F "), std::string::npos);
  EXPECT_NE(polsel("kramers 3/2 3/2 --pol par").out.find(": A "), std::string::npos);
  EXPECT_EQ(polsel("kramers 5/2 1/2").code, 2);
}

TEST(CliExcite, SelectiveExcitation) {
  auto r = polsel("excite 4H vv --laser-nm 1090 --phi 90");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(labels_of(r.out), (std::vector<std::string>{"PL3"}));
  EXPECT_NE(r.out.find("# medium: air:1.000276"), std::string::npos);
  EXPECT_EQ(labels_of(polsel("excite 4H vv --laser-nm 930 --phi 0").out),
            (std::vector<std::string>{"PL1", "PL2", "PL3", "PL4"}));
  EXPECT_EQ(labels_of(polsel("excite 4H nv --laser-nm 930 --phi 90").out),
            (std::vector<std::string>{"NV1", "NV4"}));
}

TEST(CliExcite, TextAndJsonCarrySameValues) {
  auto text = polsel("excite 6H vv --laser-mev 1150 --phi 30");
  auto json = polsel("excite 6H vv --laser-mev 1150 --phi 30 --format json");
  ASSERT_EQ(text.code, 0);
  ASSERT_EQ(json.code, 0);
  std::istringstream in(text.out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string label, energy, geometry, b, eff;
    ls >> label >> energy >> geometry >> b >> eff;
    auto at = json.out.find("\"label\": \"" + label + "\"");
    ASSERT_NE(at, std::string::npos) << label;
    auto eff_at = json.out.find("\"efficiency\": ", at);
    double json_eff = std::stod(json.out.substr(eff_at + 14));
    EXPECT_EQ(json_eff, std::stod(eff)) << label;
    ++rows;
  }
  EXPECT_GT(rows, 0);
}

TEST(CliExcite, Errors) {
  EXPECT_EQ(polsel("excite 4H vv").code, 2);
  EXPECT_EQ(polsel("excite 3C vv --laser-nm 900").code, 2);
  EXPECT_EQ(polsel("excite 4H vv --laser-nm -5").code, 2);
  EXPECT_EQ(polsel("excite 4H vv --laser-nm 900 --laser-mev 1300").code, 2);
  EXPECT_EQ(polsel("excite 4H vv --laser-nm 900 --basal-B 2").code, 2);
}

TEST_F(Cli, SpectrumHasNoIntensityAtUnexcitedLine) {
  auto r = polsel("spectrum 4H vv --laser-nm 1090 --phi 90 --dw 1 -o " + path("s.txt"));
  ASSERT_EQ(r.code, 0);
  auto text = slurp(dir_ / "s.txt");
  EXPECT_NE(text.find("# debye_waller: 1"), std::string::npos);
  EXPECT_NE(text.find("# grid_meV: 850:0.05:1250"), std::string::npos);
  EXPECT_GT(intensity_at(text, 1119.1), 0.1);
  EXPECT_EQ(intensity_at(text, 1149.3), 0.0);
  EXPECT_EQ(intensity_at(text, 1095.0), 0.0);
}

TEST_F(Cli, DebyeWallerRoundTrip) {
  ASSERT_EQ(polsel("spectrum 4H vv --laser-nm 1090 --phi 90 --dw 0.6 -o " + path("s.txt")).code, 0);
  auto r = polsel("debye-waller " + path("s.txt") + " --center 1119.1");
  ASSERT_EQ(r.code, 0);
  double dw = std::stod(r.out.substr(std::string("debye_waller ").size()));
  EXPECT_NEAR(dw, 0.6, 1e-3);
  EXPECT_EQ(polsel("debye-waller " + path("s.txt") + " --zpl 5:1").code, 2);
  EXPECT_EQ(polsel("debye-waller " + path("missing.txt") + " --center 1119.1").code, 1);
}

TEST_F(Cli, EmptySelectionWritesHeaderOnly) {
  auto r = polsel("spectrum 4H vv --laser-nm 2000 -o " + path("e.txt"));
  ASSERT_EQ(r.code, 0);
  auto text = slurp(dir_ / "e.txt");
  EXPECT_NE(text.find("# lines: none"), std::string::npos);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) EXPECT_TRUE(line.empty() || line[0] == '#') << line;
}

TEST_F(Cli, SpectrumIsDeterministic) {
  std::string base = "spectrum 6H vv --laser-nm 1000 --phi 20 --noise 0.01 --seed 7 --grid-step 0.5 ";
  ASSERT_EQ(polsel(base + "-o " + path("a.txt")).code, 0);
  ASSERT_EQ(polsel(base + "--threads 4 -o " + path("b.txt")).code, 0);
  EXPECT_EQ(slurp(dir_ / "a.txt"), slurp(dir_ / "b.txt"));
}

TEST_F(Cli, CoarseGridWarnsOnStderr) {
  auto r = polsel("spectrum 4H vv --laser-nm 1090 --grid-step 2 -o " + path("c.txt"), true);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("warning:"), std::string::npos);
}

TEST_F(Cli, OutputDirectoryVariable) {
  std::string cmd = "spectrum 4H vv --laser-nm 1090 -o rel.txt";
  std::string env = "POLSEL_OUTPUT_DIR='" + dir_.string() + "' ";
  std::string full = env + "'" + POLSEL_CLI_PATH + "' " + cmd + " >/dev/null 2>&1";
  EXPECT_EQ(std::system(full.c_str()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "rel.txt"));
}

TEST_F(Cli, AngularScanAndFit) {
  ASSERT_EQ(polsel("angular-scan --A 1 --B 1 -o " + path("ax.txt")).code, 0);
  auto ax = polsel("fit-angle " + path("ax.txt"));
  ASSERT_EQ(ax.code, 0);
  EXPECT_NE(ax.out.find("B 1\n"), std::string::npos);
  EXPECT_NE(ax.out.find("geometry axial"), std::string::npos);

  ASSERT_EQ(polsel("angular-scan --A 2 --B 0.37 -o " + path("b.txt")).code, 0);
  auto b = polsel("fit-angle " + path("b.txt") + " --format json");
  ASSERT_EQ(b.code, 0);
  EXPECT_NE(b.out.find("\"B\": 0.37"), std::string::npos);
  EXPECT_NE(b.out.find("\"geometry\": \"basal\""), std::string::npos);
}

TEST_F(Cli, NoisyScanIsReproducible) {
  ASSERT_EQ(polsel("angular-scan --B 0.5 --noise 0.01 --seed 3 -o " + path("x.txt")).code, 0);
  ASSERT_EQ(polsel("angular-scan --B 0.5 --noise 0.01 --seed 3 -o " + path("y.txt")).code, 0);
  EXPECT_EQ(slurp(dir_ / "x.txt"), slurp(dir_ / "y.txt"));
}

TEST_F(Cli, FitErrorsExitNonZero) {
  std::ofstream(dir_ / "one.txt") << "0 1\n";
  auto r = polsel("fit-angle " + path("one.txt"), true);
  EXPECT_EQ(r.code, 1);
  std::ofstream(dir_ / "same.txt") << "0 1\n0 1\n0 2\n";
  auto s = polsel("fit-angle " + path("same.txt"), true);
  EXPECT_EQ(s.code, 1);
  EXPECT_NE(s.out.find("not separable"), std::string::npos);
  std::ofstream(dir_ / "bad.txt") << "0 1\n45 x\n";
  auto bad = polsel("fit-angle " + path("bad.txt"), true);
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("line 2"), std::string::npos) << bad.out;
}

TEST(CliCatalog, AxialFilter) {
  auto r = polsel("catalog 6H vv --geometry axial --format json");
  ASSERT_EQ(r.code, 0);
  for (const char* l : {"QL1", "QL2", "QL5"}) EXPECT_NE(r.out.find(std::string("\"") + l + "\""), std::string::npos);
  for (const char* l : {"QL3", "QL4", "QL6"}) EXPECT_EQ(r.out.find(std::string("\"") + l + "\""), std::string::npos);
  EXPECT_EQ(polsel("catalog vv").code, 2);
}

TEST(CliCatalog, VerifyUnits) {
  auto r = polsel("catalog --verify-units");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("within tolerance"), std::string::npos);
  EXPECT_EQ(polsel("catalog --verify-units --index 1").code, 1);
}

TEST_F(Cli, CatalogExportRoundTrip) {
  ASSERT_EQ(polsel("catalog --format tsv --export " + path("c.tsv")).code, 0);
  auto again = polsel("catalog --format tsv --file " + path("c.tsv"));
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(again.out, slurp(dir_ / "c.tsv"));
}

TEST_F(Cli, TableVerifyAndShow) {
  EXPECT_EQ(polsel("table verify C3v").code, 0);
  auto shown = polsel("table show C3v_double");
  ASSERT_EQ(shown.code, 0);
  std::ofstream(dir_ / "g.table") << shown.out;
  EXPECT_EQ(polsel("table verify " + path("g.table")).code, 0);
  std::string broken = shown.out;
  broken.replace(broken.find("irrep A2 single 1 1"), 19, "irrep A2 single 1 2");
  std::ofstream(dir_ / "bad.table") << broken;
  auto r = polsel("table verify " + path("bad.table"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(CliUsage, ExitCodes) {
  EXPECT_EQ(polsel("").code, 2);
  EXPECT_EQ(polsel("frobnicate").code, 2);
  EXPECT_EQ(polsel("--help").code, 0);
  EXPECT_EQ(polsel("excite --help").code, 0);
}
