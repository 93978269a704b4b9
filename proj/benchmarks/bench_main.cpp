#include <benchmark/benchmark.h>

#include "qpw/green_dyson.hpp"
#include "qpw/hartree_fock.hpp"
#include "qpw/many_body_oracle.hpp"

namespace {

void BM_ScfSolve(benchmark::State& state) {
  qpw::SystemSpec spec;
  spec.grid_points = state.range(0);
  spec.spacing = 16.0 / static_cast<double>(spec.grid_points);
  const auto sys = qpw::build_soft_coulomb_system(spec);
  for (auto _ : state) benchmark::DoNotOptimize(qpw::scf_solve(sys).total_energy);
}
BENCHMARK(BM_ScfSolve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_FullCi(benchmark::State& state) {
  qpw::SystemSpec spec;
  spec.grid_points = 32;
  spec.spacing = 0.3;
  spec.electrons = static_cast<int>(state.range(0));
  const auto sys = qpw::build_soft_coulomb_system(spec);
  qpw::CiOptions opts;
  opts.orbital_cutoff = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(qpw::full_ci_ground_state(sys, opts).energy);
}
BENCHMARK(BM_FullCi)->Args({2, 8})->Args({3, 8})->Args({4, 8})->Unit(benchmark::kMillisecond);

void BM_BandStructure(benchmark::State& state) {
  qpw::SystemSpec spec;
  spec.boundary = qpw::Boundary::periodic;
  spec.k_points = state.range(0);
  const auto sys = qpw::build_soft_coulomb_system(spec);
  for (auto _ : state) benchmark::DoNotOptimize(qpw::band_structure(sys).symmetry_error);
}
BENCHMARK(BM_BandStructure)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_DysonDirect(benchmark::State& state) {
  const qpw::Index dim = state.range(0);
  qpw::RealVector levels = qpw::RealVector::LinSpaced(dim, -2.0, 3.0);
  const qpw::ComplexMatrix h = levels.cast<qpw::Complex>().asDiagonal();
  const auto grid = qpw::FrequencyGrid::spanning(levels, 1.0, static_cast<std::size_t>(state.range(1)), 1e-3);
  const auto g0 = qpw::free_green(h, grid);
  const auto sigma = qpw::SelfEnergyModel::scaled_identity(dim, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(qpw::dyson_solve(g0, sigma).max_residual());
}
BENCHMARK(BM_DysonDirect)->Args({16, 2000})->Args({32, 500})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
