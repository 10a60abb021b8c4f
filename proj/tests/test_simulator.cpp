#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "aoi/analysis.hpp"
#include "aoi/closed_form.hpp"
#include "aoi/error.hpp"
#include "aoi/simulator.hpp"

using namespace aoi;

namespace {

SimConfig make_config(unsigned streams, double lambda, double mu, Discipline d,
                      double horizon, unsigned replications, std::uint64_t seed = 101) {
  SimConfig cfg;
  cfg.system.lambda = lambda;
  cfg.system.mu = mu;
  cfg.system.streams = streams;
  cfg.discipline = d;
  cfg.horizon = horizon;
  cfg.replications = replications;
  cfg.seed = seed;
  return cfg;
}

bool within_three_sigma(const SimEstimate& est, unsigned stream, double exact) {
  const double err = std::abs(est.per_stream_age[stream] - exact);
  return err <= 3.0 * est.std_error[stream];
}

// Welch's t statistic for equal-means testing between two replication sets.
double welch_t(const std::vector<double>& a, const std::vector<double>& b) {
  auto moments = [](const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.size() - 1);
    return std::pair{mean, var};
  };
  const auto [ma, va] = moments(a);
  const auto [mb, vb] = moments(b);
  return (ma - mb) / std::sqrt(va / a.size() + vb / b.size());
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("single stream at unit rates approaches age 2") {
  const SimConfig cfg = make_config(1, 1.0, 1.0, Discipline::WQ, 5e5, 5);
  const SimEstimate est = simulate(cfg);
  CHECK(within_three_sigma(est, 0, 2.0));
  CHECK(std::abs(est.per_stream_age[0] - 2.0) <= 0.02 * 2.0);
  CHECK(est.total_age == est.per_stream_age[0]);
}

TEST_CASE("two streams at unit rates match the exact ages") {
  const SimConfig wq = make_config(2, 1.0, 1.0, Discipline::WQ, 5e5, 5);
  const SimEstimate wq_est = simulate(wq);
  CHECK(within_three_sigma(wq_est, 1, 3.5));
  CHECK(std::abs(wq_est.per_stream_age[1] - 3.5) <= 0.02 * 3.5);

  const SimConfig nq = make_config(2, 1.0, 1.0, Discipline::NQ, 5e5, 5);
  const SimEstimate nq_est = simulate(nq);
  CHECK(within_three_sigma(nq_est, 1, 6.5));
  CHECK(std::abs(nq_est.per_stream_age[1] - 6.5) <= 0.02 * 6.5);
}

TEST_CASE("fixed seeds reproduce estimates bit for bit") {
  const SimConfig cfg = make_config(3, 0.7, 1.0, Discipline::WQ, 2e4, 4);
  const SimEstimate a = simulate(cfg);
  const SimEstimate b = simulate(cfg);
  REQUIRE(a.per_stream_age.size() == b.per_stream_age.size());
  for (std::size_t k = 0; k < a.per_stream_age.size(); ++k) {
    CHECK(a.per_stream_age[k] == b.per_stream_age[k]);
    CHECK(a.std_error[k] == b.std_error[k]);
  }
  CHECK(a.total_age == b.total_age);
}

TEST_CASE("parallel and serial replication runners agree bit for bit") {
  const SimConfig cfg = make_config(3, 1.3, 0.9, Discipline::NQ, 2e4, 8);
  const SimEstimate par = simulate(cfg);
  const SimEstimate ser = simulate_serial(cfg);
  for (std::size_t k = 0; k < par.per_stream_age.size(); ++k) {
    CHECK(par.per_stream_age[k] == ser.per_stream_age[k]);
    CHECK(par.std_error[k] == ser.std_error[k]);
  }
  CHECK(par.total_age == ser.total_age);
}

TEST_CASE("top-priority stream is oblivious to the discipline") {
  // Same seed means identical stream-1 sample paths under both disciplines,
  // so its age estimates are not merely close but equal.
  const SimConfig wq = make_config(3, 0.8, 1.0, Discipline::WQ, 5e4, 3);
  SimConfig nq = wq;
  nq.discipline = Discipline::NQ;
  const SimEstimate a = simulate(wq);
  const SimEstimate b = simulate(nq);
  CHECK(a.per_stream_age[0] == b.per_stream_age[0]);
}

TEST_CASE("resume and fresh-exponential restart are statistically alike") {
  const SimConfig resume = make_config(3, 1.0, 1.0, Discipline::WQ, 5e4, 30);
  SimConfig restart = resume;
  restart.resume_policy = ResumePolicy::RestartFresh;

  std::vector<ReplicationResult> reps_resume, reps_restart;
  simulate_detailed(resume, reps_resume);
  simulate_detailed(restart, reps_restart);
  std::vector<double> deep_resume, deep_restart;
  for (const auto& r : reps_resume) deep_resume.push_back(r.age[2]);
  for (const auto& r : reps_restart) deep_restart.push_back(r.age[2]);
  // Two-sided test at the 1% level; critical value for the realized degrees
  // of freedom (29..58) is at most 2.76.
  CHECK(std::abs(welch_t(deep_resume, deep_restart)) < 2.76);
}

TEST_CASE("bufferless chain ages match simulation across a rate grid") {
  for (double lambda : {0.3, 1.0, 2.5}) {
    for (unsigned n : {2u, 3u}) {
      const AgeReport chain = age_report(n, lambda, 1.0, Discipline::NQ);
      const SimEstimate est =
          simulate(make_config(n, lambda, 1.0, Discipline::NQ, 2e5, 4));
      for (unsigned k = 0; k < n; ++k)
        CHECK(std::abs(est.per_stream_age[k] - chain.per_stream[k]) <=
              3.0 * est.std_error[k] + 0.01 * chain.per_stream[k]);
    }
  }
}

TEST_CASE("estimates flag nonconvergence on short noisy runs") {
  const SimConfig cfg = make_config(3, 0.1, 1.0, Discipline::WQ, 300.0, 2, 5);
  const SimEstimate est = simulate(cfg);
  CHECK_FALSE(est.converged);
}

TEST_CASE("sweep requires at least one configuration") {
  CHECK_THROWS_AS(sweep_simulate({}), InvalidConfig);
}

TEST_CASE("singleton sweep equals a direct run") {
  const SimConfig cfg = make_config(2, 0.5, 1.0, Discipline::WQ, 2e4, 3);
  const std::vector<SimConfig> grid{cfg};
  const auto swept = sweep_simulate(grid);
  const SimEstimate direct = simulate(cfg);
  REQUIRE(swept.size() == 1);
  for (std::size_t k = 0; k < direct.per_stream_age.size(); ++k)
    CHECK(swept[0].per_stream_age[k] == direct.per_stream_age[k]);
}

TEST_CASE("sweep over a rate grid tracks the top-priority closed form") {
  std::vector<SimConfig> grid;
  for (double lambda : {0.5, 1.0, 2.0})
    grid.push_back(make_config(3, lambda, 1.0, Discipline::WQ, 4e5, 2));
  const auto estimates = sweep_simulate(grid);
  REQUIRE(estimates.size() == 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double exact = 1.0 / grid[i].system.lambda + 1.0;
    CHECK(std::abs(estimates[i].per_stream_age[0] - exact) <= 0.02 * exact);
  }
}

TEST_CASE("per-replication CSV carries the documented columns") {
  const SimConfig cfg = make_config(2, 1.0, 1.0, Discipline::NQ, 1e4, 3);
  std::vector<ReplicationResult> reps;
  simulate_detailed(cfg, reps);
  std::ostringstream out;
  write_replication_csv(out, cfg, reps);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "replication,stream,discipline,lambda,mu,N,age,area,measured_time");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.find(",nq,") != std::string::npos);
  }
  CHECK(rows == 3 * 2);  // replications x streams
}

TEST_CASE("bad simulation configs are rejected") {
  SimConfig cfg = make_config(2, 1.0, 1.0, Discipline::WQ, 1e4, 3);
  SUBCASE("zero horizon") {
    cfg.horizon = 0.0;
    CHECK_THROWS_AS(simulate(cfg), InvalidConfig);
  }
  SUBCASE("warmup fraction at one") {
    cfg.warmup_fraction = 1.0;
    CHECK_THROWS_AS(simulate(cfg), InvalidConfig);
  }
  SUBCASE("zero replications") {
    cfg.replications = 0;
    CHECK_THROWS_AS(simulate(cfg), InvalidConfig);
  }
  SUBCASE("zero rate") {
    cfg.system.lambda = 0.0;
    CHECK_THROWS_AS(simulate(cfg), InvalidConfig);
  }
}

}  // TEST_SUITE
