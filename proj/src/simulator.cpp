#include "aoi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <queue>

#include "aoi/error.hpp"
#include "format.hpp"

namespace aoi {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kPurposeArrival = 1;
constexpr std::uint64_t kPurposeService = 2;
constexpr std::uint64_t kPurposeResume = 3;

// Completion sorts before arrival at equal timestamps, then lower stream
// index; float collisions are measure-zero but replay must be deterministic.
enum EventKind : int { kCompletion = 0, kArrival = 1 };

struct Event {
  double time = 0.0;
  int kind = kArrival;
  int stream = 0;
  std::uint64_t service_gen = 0;  // completions only: staleness check
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.kind != b.kind) return a.kind > b.kind;
    return a.stream > b.stream;
  }
};

struct Packet {
  double gen_time = 0.0;
  double remaining = 0.0;
  bool present = false;
};

ReplicationResult run_replication(const SimConfig& cfg, unsigned rep,
                                  std::uint64_t seed) {
  const int n = static_cast<int>(cfg.system.streams);
  const double lambda = cfg.system.lambda;
  const double mu = cfg.system.mu;
  const double horizon = cfg.horizon;
  const double warmup = horizon * cfg.warmup_fraction;
  const bool with_queues = cfg.discipline == Discipline::WQ;

  std::vector<std::mt19937_64> arrival_rng, service_rng, resume_rng;
  arrival_rng.reserve(n);
  service_rng.reserve(n);
  resume_rng.reserve(n);
  for (int k = 0; k < n; ++k) {
    arrival_rng.push_back(make_substream(seed, rep, k, kPurposeArrival));
    service_rng.push_back(make_substream(seed, rep, k, kPurposeService));
    resume_rng.push_back(make_substream(seed, rep, k, kPurposeResume));
  }

  std::priority_queue<Event, std::vector<Event>, EventAfter> events;
  std::vector<Packet> packet(n);
  std::vector<double> delivered_gen(n, 0.0);  // timestamp of last delivery
  std::vector<double> boundary(n, 0.0);       // end of last accounted segment
  std::vector<double> area(n, 0.0);

  int serving = -1;
  double service_start = 0.0;
  std::uint64_t service_gen = 0;

  for (int k = 0; k < n; ++k)
    events.push({draw_exponential(arrival_rng[k], lambda), kArrival, k, 0});

  // Age of stream k is piecewise linear with unit slope between deliveries;
  // the area over [start, end] with fixed last-delivery timestamp u is the
  // exact integral of (t - u).
  auto account_segment = [&](int k, double end) {
    const double start = std::max(boundary[k], warmup);
    if (end > start)
      area[k] += (end - start) * (0.5 * (start + end) - delivered_gen[k]);
    boundary[k] = end;
  };

  auto start_service = [&](int k, double now, double remaining) {
    serving = k;
    service_start = now;
    ++service_gen;
    events.push({now + remaining, kCompletion, k, service_gen});
  };

  while (!events.empty()) {
    const Event ev = events.top();
    events.pop();
    if (ev.kind == kCompletion && (ev.service_gen != service_gen || serving != ev.stream))
      continue;  // superseded by a preemption or replacement
    if (ev.time >= horizon) break;
    const double now = ev.time;

    if (ev.kind == kArrival) {
      const int k = ev.stream;
      events.push({now + draw_exponential(arrival_rng[k], lambda), kArrival, k, 0});
      // Service demand is drawn per arrival so WQ and NQ runs with the same
      // seed see identical packet sequences (common random numbers).
      const double demand = draw_exponential(service_rng[k], mu);

      if (with_queues) {
        // The fresh packet replaces the stream's packet wherever it sits.
        if (serving > k || serving == -1) {
          if (serving != -1) {  // preempt: freeze the remainder, keep buffered
            packet[serving].remaining -= now - service_start;
            ++service_gen;
          }
          packet[k] = {now, demand, true};
          start_service(k, now, demand);
        } else if (serving == k) {
          packet[k] = {now, demand, true};
          start_service(k, now, demand);
        } else {
          packet[k] = {now, demand, true};  // waits in the stream's slot
        }
      } else {
        if (serving > k || serving == -1) {
          if (serving != -1) {
            packet[serving].present = false;  // preempted packets are dropped
            ++service_gen;
          }
          packet[k] = {now, demand, true};
          start_service(k, now, demand);
        } else if (serving == k) {
          packet[k] = {now, demand, true};
          start_service(k, now, demand);
        }
        // else: a higher-priority packet is in service, the arrival is lost
      }
    } else {
      const int k = ev.stream;
      account_segment(k, now);
      delivered_gen[k] = packet[k].gen_time;
      packet[k].present = false;
      serving = -1;
      ++service_gen;
      if (with_queues) {
        for (int w = 0; w < n; ++w) {
          if (!packet[w].present) continue;
          const double remaining = cfg.resume_policy == ResumePolicy::Resume
                                       ? packet[w].remaining
                                       : draw_exponential(resume_rng[w], mu);
          start_service(w, now, remaining);
          break;
        }
      }
      // NQ leaves the server idle: nothing else can be in the system.
    }
  }

  ReplicationResult result;
  result.replication = rep;
  result.measured_time = horizon - warmup;
  result.area.resize(n);
  result.age.resize(n);
  for (int k = 0; k < n; ++k) {
    account_segment(k, horizon);
    result.area[k] = area[k];
    result.age[k] = area[k] / result.measured_time;
  }
  return result;
}

SimEstimate merge_replications(const SimConfig& cfg,
                               const std::vector<ReplicationResult>& reps) {
  const std::size_t n = cfg.system.streams;
  const std::size_t r = reps.size();
  SimEstimate est;
  est.per_stream_age.assign(n, 0.0);
  est.std_error.assign(n, 0.0);
  for (const auto& rep : reps)
    for (std::size_t k = 0; k < n; ++k) est.per_stream_age[k] += rep.age[k];
  for (double& m : est.per_stream_age) m /= static_cast<double>(r);
  if (r > 1) {
    for (std::size_t k = 0; k < n; ++k) {
      double ss = 0.0;
      for (const auto& rep : reps) {
        const double d = rep.age[k] - est.per_stream_age[k];
        ss += d * d;
      }
      est.std_error[k] = std::sqrt(ss / static_cast<double>(r - 1))
                         / std::sqrt(static_cast<double>(r));
    }
  }
  est.total_age = 0.0;
  for (double m : est.per_stream_age) est.total_age += m;
  est.converged = true;
  for (std::size_t k = 0; k < n; ++k)
    if (est.std_error[k] > 0.05 * est.per_stream_age[k]) est.converged = false;
  return est;
}

SimEstimate run_impl(const SimConfig& cfg, std::vector<ReplicationResult>* out,
                     bool parallel) {
  validate_sim_config(cfg);
  const int r = static_cast<int>(cfg.replications);
  std::vector<ReplicationResult> reps(r);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < r; ++i) reps[i] = run_replication(cfg, i, cfg.seed);
  } else {
    for (int i = 0; i < r; ++i) reps[i] = run_replication(cfg, i, cfg.seed);
  }
  SimEstimate est = merge_replications(cfg, reps);
  if (out) *out = std::move(reps);
  return est;
}

}  // namespace

void validate_sim_config(const SimConfig& config) {
  validate_config(config.system);
  if (!(config.horizon > 0.0) || !std::isfinite(config.horizon))
    throw InvalidConfig("horizon must be positive and finite");
  if (!(config.warmup_fraction >= 0.0) || !(config.warmup_fraction < 1.0))
    throw InvalidConfig("warmup_fraction must lie in [0, 1)");
  if (config.replications == 0) throw InvalidConfig("replications must be at least 1");
}

SimEstimate simulate(const SimConfig& config) { return run_impl(config, nullptr, true); }

SimEstimate simulate_serial(const SimConfig& config) {
  return run_impl(config, nullptr, false);
}

SimEstimate simulate_detailed(const SimConfig& config,
                              std::vector<ReplicationResult>& replications) {
  return run_impl(config, &replications, true);
}

std::vector<SimEstimate> sweep_simulate(std::span<const SimConfig> configs) {
  if (configs.empty()) throw InvalidConfig("sweep requires at least one configuration");
  std::vector<SimEstimate> estimates;
  estimates.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    SimConfig shifted = configs[i];
    shifted.seed = configs[i].seed + i;
    estimates.push_back(simulate(shifted));
  }
  return estimates;
}

void write_replication_csv(std::ostream& out, const SimConfig& config,
                           std::span<const ReplicationResult> replications) {
  out << "replication,stream,discipline,lambda,mu,N,age,area,measured_time\n";
  for (const ReplicationResult& rep : replications) {
    for (std::size_t k = 0; k < rep.age.size(); ++k) {
      out << rep.replication << ',' << (k + 1) << ',' << to_string(config.discipline)
          << ',' << format_rate(config.system.lambda) << ','
          << format_rate(config.system.mu) << ',' << config.system.streams << ','
          << format_value(rep.age[k]) << ',' << format_value(rep.area[k]) << ','
          << format_value(rep.measured_time) << '\n';
    }
  }
}

std::mt19937_64 make_substream(std::uint64_t seed, std::uint64_t replication,
                               std::uint64_t stream, std::uint64_t purpose) {
  std::uint64_t s = seed;
  s = splitmix64(s + 0x632be59bd9b4e019ULL * (replication + 1));
  s = splitmix64(s + 0x9e3779b97f4a7c15ULL * (stream + 1));
  s = splitmix64(s + 0xd1b54a32d192ed03ULL * (purpose + 1));
  return std::mt19937_64(s);
}

double draw_exponential(std::mt19937_64& rng, double rate) {
  // 53-bit mantissa uniform in [0, 1); log1p keeps the tail exact and the
  // draw is identical on every platform, unlike std::exponential_distribution.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return -std::log1p(-u) / rate;
}

}  // namespace aoi
