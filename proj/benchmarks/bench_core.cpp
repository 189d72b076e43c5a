#include <benchmark/benchmark.h>

#include "herm/catalog.hpp"
#include "herm/search.hpp"
#include "herm/suite.hpp"

using namespace herm;

namespace {

void BM_SampleChart(benchmark::State& state, const char* name) {
  const HermitianManifold m = catalog_entry(name);
  const Point p = sample_points(m, 2, 1).back();
  for (auto _ : state) benchmark::DoNotOptimize(sample(m, p));
}
BENCHMARK_CAPTURE(BM_SampleChart, hopf, "hopf");
BENCHMARK_CAPTURE(BM_SampleChart, fubini_study_2, "fubini_study_2");

void BM_SampleLie(benchmark::State& state) {
  const HermitianManifold m = catalog_entry("iwasawa");
  for (auto _ : state) benchmark::DoNotOptimize(sample(m, Point{}));
}
BENCHMARK(BM_SampleLie);

void BM_Suite(benchmark::State& state, const char* name) {
  const HermitianManifold m = catalog_entry(name);
  const auto pts = sample_points(m, static_cast<int>(state.range(0)), 42);
  SuiteOptions opt;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_suite(m, pts, opt));
}
BENCHMARK_CAPTURE(BM_Suite, hopf, "hopf")->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Suite, su2xr, "su2xr")->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Defect(benchmark::State& state) {
  const MetricFamily f = load_family(std::string(HERM_SOURCE_DIR) + "/data/families/fubini_study_conformal.json");
  SearchConfig cfg;
  cfg.findings_dir.clear();
  const DefectEvaluator eval(f, cfg);
  const std::vector<double> x{0.1, -0.2};
  for (auto _ : state) benchmark::DoNotOptimize(eval(x));
}
BENCHMARK(BM_Defect)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
