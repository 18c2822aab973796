#include "polsel/catalog.hpp"
#include "polsel/group.hpp"
#include "polsel/selection.hpp"
#include "polsel/spectrum.hpp"

#include <benchmark/benchmark.h>

using namespace polsel;

static void BM_DecomposeDoubleGroupProduct(benchmark::State& state) {
  const PointGroup& g = builtin_group("C3v_double");
  std::vector<std::string> labels{"E1/2", "E", "1E3/2", "E1/2"};
  for (auto _ : state) benchmark::DoNotOptimize(decompose(product_of(g, labels)));
}
BENCHMARK(BM_DecomposeDoubleGroupProduct);

static void BM_SelectionTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(selection_table(DefectClass::TripletAxial));
}
BENCHMARK(BM_SelectionTable);

static void BM_SynthesizeSpectrum(benchmark::State& state) {
  auto lines = lines_for(builtin_catalog(), Polytype::SixH, Defect::Divacancy);
  LaserConfig laser{1300.0, 30.0, ExcitationMode::NonResonant};
  auto excited = excited_lines(lines, laser, ExcitationOptions{});
  LineShapeParams shape;
  GridSpec grid;
  auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_spectrum(excited, shape, grid, threads));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.points().size()));
}
BENCHMARK(BM_SynthesizeSpectrum)->Arg(1)->Arg(4)->Unit(benchmark::kMicrosecond);

static void BM_FitAngular(benchmark::State& state) {
  auto samples = angular_scan(AngularModel(2.0, 0.37), angle_grid(180.0 / static_cast<double>(state.range(0))),
                              NoiseSpec{0.01, 1});
  for (auto _ : state) benchmark::DoNotOptimize(fit_angular(samples));
}
BENCHMARK(BM_FitAngular)->Arg(12)->Arg(360);

BENCHMARK_MAIN();
