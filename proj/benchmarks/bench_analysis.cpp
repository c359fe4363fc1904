#include <benchmark/benchmark.h>

#include "nematic/admissibility.hpp"
#include "nematic/besov.hpp"
#include "nematic/diagnostics.hpp"
#include "nematic/initial_data.hpp"

using namespace nematic;

namespace {

void BM_DyadicDecompose(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  const int n = static_cast<int>(st.range(1));
  const auto g = Grid::make(d, std::vector<int>(d, n));
  const ScalarField f = random_band_limited(g, 3, 1.0, std::vector<int>(d, n / 2));
  for (auto _ : st) benchmark::DoNotOptimize(dyadic_decompose(f));
}
BENCHMARK(BM_DyadicDecompose)->Args({2, 64})->Args({3, 32});

void BM_BonyDecompose(benchmark::State& st) {
  const auto g = Grid::make(2, {64, 64});
  const ScalarField a = random_band_limited(g, 3, 1.0, {16, 16});
  const ScalarField b = random_band_limited(g, 4, 1.0, {16, 16});
  for (auto _ : st) benchmark::DoNotOptimize(bony_decompose(a, b));
}
BENCHMARK(BM_BonyDecompose);

void BM_DissipationOracle(benchmark::State& st) {
  ViscositySample s;
  s.alpha = {0.0, 0.2, -0.5, 0.5, 1.0, 0.3, 0.1, 0.0, 0.0};
  s.lambda1 = 1.0;
  const bool compressible = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(dissipation_quadratic_min(s, 3, compressible, 1000));
}
BENCHMARK(BM_DissipationOracle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_StructuredDet(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(structured_det(1.3, 0.4, 2.1, N));
}
BENCHMARK(BM_StructuredDet)->Arg(3)->Arg(8);

void BM_Diagnose(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  const auto g = Grid::make(d, std::vector<int>(d, d == 2 ? 64 : 32));
  const CoefficientSet c = isotropic_coefficients(d);
  const SimState prev = random_small(g, c, 1e-2, 1);
  SimState next = prev;
  next.t += 1e-3;
  const StepReport report;
  for (auto _ : st) benchmark::DoNotOptimize(diagnose(1, next, &prev, c, report));
}
BENCHMARK(BM_Diagnose)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
