#include <benchmark/benchmark.h>

#include "memsfield/diagnostics.hpp"
#include "memsfield/solver.hpp"

using namespace memsfield;

namespace {

void BM_build_mesh(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "cosine(-0.5)", n);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_mesh(prof, n, n));
}
BENCHMARK(BM_build_mesh)->Arg(64)->Arg(128);

void BM_assemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "cosine(-0.5)", n);
  const LayeredMesh mesh = build_mesh(prof, n, n);
  const LiftSpec lift = LiftSpec::from(p);
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble(mesh, lift, prof));
}
BENCHMARK(BM_assemble)->Arg(32)->Arg(64)->Arg(128);

void BM_solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "cosine(-0.5)", n);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_problem(prof, n, n, 1e-10));
}
BENCHMARK(BM_solve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_h2_surrogate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "cosine(-0.5)", n);
  const SolveResult res = solve_problem(prof, n, n, 1e-10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        h2_surrogate(res.psi, res.mesh, prof, Layer::Lower));
    benchmark::DoNotOptimize(
        h2_surrogate(res.psi, res.mesh, prof, Layer::Upper));
  }
}
BENCHMARK(BM_h2_surrogate)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
