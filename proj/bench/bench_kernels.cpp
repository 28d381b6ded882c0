// Serial reference vs OpenMP kernel for each parallel routine.
// Run with QUADREG_THREADS=<k> to fix the worker count.

#include <benchmark/benchmark.h>

#include "quadreg/birkhoff.hpp"
#include "quadreg/erdos.hpp"
#include "quadreg/parallel.hpp"
#include "quadreg/polytope.hpp"
#include "quadreg/qot.hpp"

using namespace quadreg;

namespace {

void BM_FacesSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_faces_serial(static_cast<std::size_t>(state.range(0))));
}
void BM_FacesParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_faces(static_cast<std::size_t>(state.range(0))));
}

void BM_ErdosSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_erdos_serial(static_cast<std::size_t>(state.range(0))));
}
void BM_ErdosParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_erdos(static_cast<std::size_t>(state.range(0))));
}

std::vector<FaceRef> pi_faces(const VPolytope& poly, std::size_t n) {
  std::vector<FaceRef> faces;
  for (const auto& f : enumerate_faces(n)) faces.push_back(to_face_ref(f, poly));
  return faces;
}

void BM_MonotoneSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto poly = birkhoff_polytope(n);
  const auto faces = pi_faces(poly, n);
  for (auto _ : state) benchmark::DoNotOptimize(check_monotone_serial(poly, faces));
}
void BM_MonotoneParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto poly = birkhoff_polytope(n);
  const auto faces = pi_faces(poly, n);
  for (auto _ : state) benchmark::DoNotOptimize(check_monotone(poly, faces));
}

void BM_WeightCurveSerial(benchmark::State& state) {
  const auto p = counterexample_cost();
  const auto grid = default_reg_grid();
  for (auto _ : state) benchmark::DoNotOptimize(weight_curve_serial(p, 0, 0, grid));
}
void BM_WeightCurveParallel(benchmark::State& state) {
  const auto p = counterexample_cost();
  const auto grid = default_reg_grid();
  for (auto _ : state) benchmark::DoNotOptimize(weight_curve(p, 0, 0, grid));
}

}  // namespace

BENCHMARK(BM_FacesSerial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FacesParallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ErdosSerial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ErdosParallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonotoneSerial)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonotoneParallel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightCurveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightCurveParallel)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  configure_threads();
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
