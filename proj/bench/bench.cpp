// Benchmark: serial reference vs OpenMP runners for replicated simulation
// and total-age curve evaluation. Verifies both paths agree bit for bit
// before timing them.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aoi/analysis.hpp"
#include "aoi/simulator.hpp"

using namespace aoi;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_seconds(F&& run) {
  const auto start = Clock::now();
  run();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool same_estimate(const SimEstimate& a, const SimEstimate& b) {
  if (a.per_stream_age != b.per_stream_age) return false;
  return a.total_age == b.total_age;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled (serial build)\n");
#endif

  SimConfig sim;
  sim.system.lambda = 1.0;
  sim.system.mu = 1.0;
  sim.system.streams = 3;
  sim.horizon = 2e5;
  sim.replications = 16;
  sim.seed = 20;

  SimEstimate serial_est, parallel_est;
  {
    SimConfig warm = sim;
    warm.replications = 2;
    simulate_serial(warm);
    simulate(warm);
  }
  const double sim_serial = time_seconds([&] { serial_est = simulate_serial(sim); });
  const double sim_parallel = time_seconds([&] { parallel_est = simulate(sim); });
  if (!same_estimate(serial_est, parallel_est)) {
    std::printf("FAIL: simulation runners disagree\n");
    return EXIT_FAILURE;
  }
  std::printf("simulate      16 replications  serial %.3f s  parallel %.3f s  speedup %.2fx\n",
              sim_serial, sim_parallel, sim_serial / sim_parallel);

  const auto grid = rate_grid(0.05, 5.0, 2000, true);
  std::vector<CurvePoint> serial_curve, parallel_curve;
  {
    const auto warm = rate_grid(0.05, 5.0, 64, true);
    total_age_curve_serial(8, 1.0, warm, Discipline::NQ);
    total_age_curve(8, 1.0, warm, Discipline::NQ);
  }
  const double curve_serial = time_seconds(
      [&] { serial_curve = total_age_curve_serial(8, 1.0, grid, Discipline::NQ); });
  const double curve_parallel = time_seconds(
      [&] { parallel_curve = total_age_curve(8, 1.0, grid, Discipline::NQ); });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (serial_curve[i].report.total != parallel_curve[i].report.total) {
      std::printf("FAIL: curve runners disagree\n");
      return EXIT_FAILURE;
    }
  }
  std::printf("age curve     2000 rate points  serial %.3f s  parallel %.3f s  speedup %.2fx\n",
              curve_serial, curve_parallel, curve_serial / curve_parallel);
  return EXIT_SUCCESS;
}
