#include <benchmark/benchmark.h>

#include "speedid/grid.hpp"
#include "speedid/solver.hpp"
#include "speedid/track.hpp"

namespace {

using namespace speedid;

Diagram chicane_diagram(std::size_t n) {
  const VehicleParams f1;
  const Track track = synth_track({SynthKind::chicane, 10, 5.0, 30.0, 5}, f1);
  return build_diagram(track, make_grids(n, n, n), f1);
}

void BM_Solve(benchmark::State& state, Backend backend) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Diagram d = chicane_diagram(n);
  for (auto _ : state) {
    SolveResult r = solve(d, backend);
    benchmark::DoNotOptimize(r.value.data());
  }
  // Work per segment for the sparse backend is proportional to |V| (|A| + |U|).
  state.counters["v_a_plus_u"] = static_cast<double>(n * (n + n));
}

void BM_BuildDiagram(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    Diagram d = chicane_diagram(n);
    benchmark::DoNotOptimize(d.accel.rows.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Solve, sparse, Backend::sparse)->Arg(25)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, dense, Backend::dense)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildDiagram)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
