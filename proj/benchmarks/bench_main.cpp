#include <cmath>

#include <benchmark/benchmark.h>

#include "malab/expansion.hpp"
#include "malab/exterior_poisson.hpp"
#include "malab/mve.hpp"
#include "malab/quad_extract.hpp"
#include "malab/rate_fit.hpp"
#include "malab/source_catalog.hpp"

using namespace malab;

namespace {

radial::RadialProfile half_profile() {
  radial::RadialProfile p;
  p.n = 3;
  p.zeta = Rational(1, 2);
  return p;
}

void BM_RadialSolutionSetup(benchmark::State& state) {
  const auto p = half_profile();
  for (auto _ : state) benchmark::DoNotOptimize(radial::RadialSolution(p));
}
BENCHMARK(BM_RadialSolutionSetup)->Unit(benchmark::kMicrosecond);

void BM_RadialDeviation(benchmark::State& state) {
  const radial::RadialSolution s(half_profile());
  const double r = std::exp2(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(s.deviation(r));
}
BENCHMARK(BM_RadialDeviation)->Arg(1)->Arg(8)->Arg(32);

void BM_ExpansionConstants(benchmark::State& state) {
  const radial::RadialSolution s(half_profile());
  for (auto _ : state) benchmark::DoNotOptimize(radial::compute_constants(s));
}
BENCHMARK(BM_ExpansionConstants)->Unit(benchmark::kMillisecond);

void BM_RateFit(benchmark::State& state) {
  std::vector<rates::Sample> samples;
  for (double r : rates::dyadic_radii(4.0, std::exp2(24), 4))
    samples.push_back({r, 2.0 * std::pow(r, 0.5) * std::log(r)});
  for (auto _ : state) benchmark::DoNotOptimize(rates::fit_rate(samples));
}
BENCHMARK(BM_RateFit);

void BM_ExteriorSolve(benchmark::State& state) {
  const auto spec = poisson::catalog_source("mixed_k15");
  poisson::SolveOptions o;
  o.r_max = std::exp2(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(poisson::solve_exterior(spec, o));
}
BENCHMARK(BM_ExteriorSolve)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Mve(benchmark::State& state) {
  const auto dirs = extract::ray_directions(3, static_cast<int>(state.range(0)));
  std::vector<Eigen::VectorXd> pts;
  for (const auto& d : dirs) pts.push_back(Eigen::Vector3d(2.0, 1.0, 0.5).asDiagonal() * d);
  for (auto _ : state) benchmark::DoNotOptimize(geometry::mve_ellipsoid(pts, 1e-13));
}
BENCHMARK(BM_Mve)->Arg(64)->Arg(266)->Unit(benchmark::kMillisecond);

void BM_ExtractA(benchmark::State& state) {
  extract::OracleSpec o;
  o.profile.n = 2;
  o.profile.zeta = Rational(3, 2);
  const auto s = extract::radial_oracle(o);
  extract::ExtractOptions e;
  e.K = extract::default_ladder_depth(o.profile.zeta);
  for (auto _ : state) benchmark::DoNotOptimize(extract::extract_A(s, e));
}
BENCHMARK(BM_ExtractA)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
