// Serial reference kernels against their OpenMP counterparts.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "raterel/agreement.hpp"
#include "raterel/kernels.hpp"

using namespace raterel;

namespace {

RatingMatrix random_matrix(std::size_t units, std::size_t raters, ScaleKind kind) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> label(0, 4);
  std::bernoulli_distribution missing(0.2);
  std::vector<std::string> unit_ids(units), rater_ids(raters);
  for (std::size_t u = 0; u < units; ++u) unit_ids[u] = "u" + std::to_string(u);
  for (std::size_t r = 0; r < raters; ++r) rater_ids[r] = "r" + std::to_string(r);
  std::vector<std::optional<double>> cells(units * raters);
  for (auto& c : cells) {
    if (!missing(rng)) c = label(rng) + (kind == ScaleKind::interval ? 1.0 : 0.0);
  }
  const std::vector<std::string> cats{"1", "2", "3", "4", "5"};
  Scale scale = kind == ScaleKind::nominal   ? Scale::nominal(cats)
                : kind == ScaleKind::ordinal ? Scale::ordinal(cats)
                                             : Scale::interval(1, 5);
  return RatingMatrix::from_cells(unit_ids, rater_ids, std::move(cells), scale);
}

Execution exec_of(const benchmark::State& state) {
  return state.range(1) ? Execution::parallel : Execution::serial;
}

void BM_Alpha(benchmark::State& state) {
  const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 8, ScaleKind::ordinal);
  const auto exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(krippendorff_alpha(m, ExpectedMode::with_replacement, exec).alpha);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_UnitDisagreements(benchmark::State& state) {
  const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 8, ScaleKind::interval);
  const auto table = kernels::TallyTable::from_matrix(m);
  const auto distance = DistanceFunction::interval();
  std::vector<double> out(table.unit_count());
  const auto exec = exec_of(state);
  for (auto _ : state) {
    kernels::unit_disagreements(table, distance, out, exec);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Bootstrap(benchmark::State& state) {
  const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 4, ScaleKind::nominal);
  const auto table = kernels::TallyTable::from_matrix(m);
  const auto exec = exec_of(state);
  for (auto _ : state) {
    auto alphas = kernels::bootstrap_alphas(table, m.scale(), ExpectedMode::with_replacement, 200, 7, exec);
    benchmark::DoNotOptimize(alphas.data());
  }
  state.SetItemsProcessed(state.iterations() * 200);
}

}  // namespace

BENCHMARK(BM_Alpha)->ArgsProduct({{1000, 100000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UnitDisagreements)->ArgsProduct({{1000, 100000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bootstrap)->ArgsProduct({{1000, 10000}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
