#include <benchmark/benchmark.h>

#include <cmath>

#include "nematic/grid.hpp"

using namespace nematic;

namespace {

GridPtr grid_for(int dim, int n) { return Grid::make(dim, std::vector<int>(dim, n)); }

ScalarField smooth(const GridPtr& g, double shift) {
  return ScalarField::from_function(g, [&](const Point& x) { return std::sin(x[0] + shift) * std::cos(2 * x[1]) + x[2]; });
}

void BM_ForwardInverse(benchmark::State& st) {
  const auto g = grid_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const ScalarField f = smooth(g, 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(inverse(forward(f)));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(g->size()));
}
BENCHMARK(BM_ForwardInverse)->Args({2, 64})->Args({2, 256})->Args({3, 32})->Args({3, 64});

void BM_DealiasedProduct(benchmark::State& st) {
  const auto g = grid_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const ScalarField a = smooth(g, 0.1), b = smooth(g, 0.7);
  for (auto _ : st) benchmark::DoNotOptimize(dealiased_product(a, b));
}
BENCHMARK(BM_DealiasedProduct)->Args({2, 64})->Args({3, 32});

void BM_LerayProject(benchmark::State& st) {
  const auto g = grid_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const VectorField v = VectorField::from_function(
      g, [](const Point& x) { return Point{std::sin(x[1]), std::cos(x[0]) * std::sin(x[1]), std::cos(x[0])}; });
  for (auto _ : st) benchmark::DoNotOptimize(leray_project(v));
}
BENCHMARK(BM_LerayProject)->Args({2, 64})->Args({3, 32});

}  // namespace
