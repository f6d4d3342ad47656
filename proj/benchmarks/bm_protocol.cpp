#include <benchmark/benchmark.h>

#include "tpjc/dynamics.hpp"
#include "tpjc/experiment.hpp"
#include "tpjc/fock.hpp"

namespace {

void BM_PassAdd(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  auto rho = tpjc::DensityMatrix::pure(tpjc::make_coherent(5.0, dim));
  for (auto _ : state) {
    auto next = tpjc::pass_add(rho, 1.0);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(BM_PassAdd)->Arg(96)->Arg(256)->Arg(512);

void BM_PassSubtract(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  auto rho = tpjc::DensityMatrix::pure(tpjc::make_coherent(12.0, dim));
  for (auto _ : state) {
    auto next = tpjc::pass_subtract(rho, 1.0);
    benchmark::DoNotOptimize(next);
  }
}
BENCHMARK(BM_PassSubtract)->Arg(256)->Arg(320);

void BM_ClosedFormEvolution(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  auto psi = tpjc::QubitFieldState::with_excited(tpjc::make_coherent(3.0, dim));
  for (auto _ : state) {
    auto out = tpjc::evolve_closed_form(psi, tpjc::TpjcParams::pi_pulse());
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ClosedFormEvolution)->Arg(64)->Arg(256);

void BM_OracleDiagonalization(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    tpjc::HamiltonianEigensystem eig(dim, 1.0);
    benchmark::DoNotOptimize(eig);
  }
}
BENCHMARK(BM_OracleDiagonalization)->Arg(32)->Arg(64)->Arg(128);

void BM_Figure1Protocol(benchmark::State& state) {
  auto psi0 = tpjc::make_coherent(5.0, 256);
  for (auto _ : state) {
    auto r = tpjc::run_protocol(psi0, 50, tpjc::Mode::Add);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Figure1Protocol)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
