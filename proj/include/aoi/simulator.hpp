#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "aoi/models.hpp"

namespace aoi {

// Remaining-service handling when a preempted packet re-enters service.
// Resume keeps the frozen remainder; RestartFresh draws a new exponential.
// With exponential service the two are statistically indistinguishable;
// RestartFresh exists for that consistency check.
enum class ResumePolicy { Resume, RestartFresh };

struct SimConfig {
  SystemConfig system;
  Discipline discipline = Discipline::WQ;
  double horizon = 1e6;
  double warmup_fraction = 0.1;
  std::uint64_t seed = 987654321;
  unsigned replications = 5;
  ResumePolicy resume_policy = ResumePolicy::Resume;
};

void validate_sim_config(const SimConfig& config);

// One independent sample path. `age[k]` is area[k] / measured_time, the
// time-average age of stream k+1 over the post-warmup window.
struct ReplicationResult {
  unsigned replication = 0;
  std::vector<double> age;
  std::vector<double> area;
  double measured_time = 0.0;
};

// Replication means, standard errors and the convergence flag. `converged`
// is false when std_error/mean exceeds 5% on any stream.
struct SimEstimate {
  std::vector<double> per_stream_age;
  std::vector<double> std_error;
  double total_age = 0.0;
  bool converged = true;
};

// Runs config.replications independent sample paths and merges them by
// replication index; replications run in parallel when OpenMP is enabled.
SimEstimate simulate(const SimConfig& config);

// Serial reference: identical output bit for bit, one replication at a time.
SimEstimate simulate_serial(const SimConfig& config);

// As simulate(), also returning the per-replication results.
SimEstimate simulate_detailed(const SimConfig& config,
                              std::vector<ReplicationResult>& replications);

// One simulate() per config with the effective seed shifted by the config
// index, so a singleton list reproduces simulate(configs[0]) exactly.
std::vector<SimEstimate> sweep_simulate(std::span<const SimConfig> configs);

// Per-replication CSV rows:
//   replication,stream,discipline,lambda,mu,N,age,area,measured_time
void write_replication_csv(std::ostream& out, const SimConfig& config,
                           std::span<const ReplicationResult> replications);

// Deterministic substream derivation: one generator per (seed, replication,
// stream, purpose) tuple, decoupling arrival and service randomness.
std::mt19937_64 make_substream(std::uint64_t seed, std::uint64_t replication,
                               std::uint64_t stream, std::uint64_t purpose);

// Exponential draw with a fixed, implementation-independent mapping from
// generator output to variate (bit-reproducible across platforms).
double draw_exponential(std::mt19937_64& rng, double rate);

}  // namespace aoi
