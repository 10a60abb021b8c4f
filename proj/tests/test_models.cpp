#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "aoi/error.hpp"
#include "aoi/models.hpp"
#include "aoi/shs.hpp"

using namespace aoi;

namespace {

SystemConfig depth_config(double lambda, double mu, unsigned depth) {
  SystemConfig c;
  c.lambda = lambda;
  c.mu = mu;
  c.depth = depth;
  return c;
}

bool has_transition(const ShsModel& m, int from, int to, double rate) {
  return std::any_of(m.transitions.begin(), m.transitions.end(),
                     [&](const Transition& t) {
                       return t.from == from && t.to == to && t.rate == rate;
                     });
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("depth 0 buffered chain is the two-self-loop M/M/1/1 chain") {
  const ShsModel m = build_wq_chain(depth_config(0.7, 1.9, 0));
  CHECK(m.num_states == 1);
  REQUIRE(m.transitions.size() == 2);
  CHECK(has_transition(m, 0, 0, 0.7));
  CHECK(has_transition(m, 0, 0, 1.9));
}

TEST_CASE("depth 1 buffered chain has the five documented transitions") {
  const double lambda = 0.3, mu = 1.1;
  const ShsModel m = build_wq_chain(depth_config(lambda, mu, 1));
  CHECK(m.num_states == 2);
  REQUIRE(m.transitions.size() == 5);
  CHECK(has_transition(m, 0, 0, lambda));  // own arrival, packet replaced
  CHECK(has_transition(m, 1, 1, lambda));
  CHECK(has_transition(m, 0, 1, lambda));  // one higher-priority stream
  CHECK(has_transition(m, 1, 0, mu));
  CHECK(has_transition(m, 0, 0, mu));  // delivery
}

TEST_CASE("depth 2 escalation rates fall from 2*lambda to lambda") {
  const ShsModel m = build_wq_chain(depth_config(1.0, 1.0, 2));
  CHECK(m.num_states == 3);
  CHECK(m.transitions.size() == 8);
  CHECK(has_transition(m, 0, 1, 2.0));
  CHECK(has_transition(m, 1, 2, 1.0));
}

TEST_CASE("buffered chain size and validity across depths") {
  for (unsigned depth = 0; depth <= 20; ++depth) {
    const ShsModel m = build_wq_chain(depth_config(0.4, 2.3, depth));
    CHECK(m.num_states == static_cast<int>(depth) + 1);
    CHECK(m.transitions.size() == 3 * depth + 2);
    CHECK_NOTHROW(validate_model(m));
    for (const auto& b : m.drift) {
      CHECK(b[0] == 1.0);
      CHECK(b[1] == 1.0);
    }
  }
}

TEST_CASE("disciplines coincide for the top-priority stream") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rate(0.1, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double lambda = rate(rng), mu = rate(rng);
    const SystemConfig cfg = depth_config(lambda, mu, 0);
    const double wq = average_age(build_wq_chain(cfg), 0);
    const double nq = average_age(build_nq_chain(cfg), 0);
    CHECK(wq == doctest::Approx(1.0 / lambda + 1.0 / mu).epsilon(1e-12));
    CHECK(nq == doctest::Approx(1.0 / lambda + 1.0 / mu).epsilon(1e-12));
  }
}

TEST_CASE("bufferless chain at depth 1 gives age 6.5 at unit rates") {
  CHECK(average_age(build_nq_chain(depth_config(1.0, 1.0, 1)), 0) ==
        doctest::Approx(6.5).epsilon(1e-12));
}

TEST_CASE("bufferless chain shape") {
  const ShsModel m = build_nq_chain(depth_config(0.5, 1.0, 3));
  CHECK(m.num_states == 2);
  REQUIRE(m.transitions.size() == 4);
  CHECK(has_transition(m, 0, 1, 1.5));  // 3 * lambda, preempt and discard
  CHECK(has_transition(m, 1, 0, 1.0));
  CHECK_NOTHROW(validate_model(m));
}

TEST_CASE("buffering helps the second stream at every rate") {
  for (double lambda : {0.1, 0.3, 0.62, 1.0, 2.0, 5.0}) {
    const SystemConfig cfg = depth_config(lambda, 1.0, 1);
    const double wq = average_age(build_wq_chain(cfg), 0);
    const double nq = average_age(build_nq_chain(cfg), 0);
    CHECK(nq >= wq);
  }
}

TEST_CASE("three-stream bufferless total at the tabulated optimum") {
  double total = 0.0;
  for (unsigned depth = 0; depth < 3; ++depth)
    total += average_age(build_nq_chain(depth_config(0.62, 1.0, depth)), 0);
  CHECK(total == doctest::Approx(19.71).epsilon(0.01));
}

TEST_CASE("builders reject nonpositive rates") {
  CHECK_THROWS_AS(build_wq_chain(depth_config(0.0, 1.0, 1)), InvalidConfig);
  CHECK_THROWS_AS(build_wq_chain(depth_config(1.0, -2.0, 1)), InvalidConfig);
  CHECK_THROWS_AS(build_nq_chain(depth_config(-1.0, 1.0, 1)), InvalidConfig);
}

TEST_CASE("builders emit the solver's JSON schema") {
  const ShsModel wq = build_wq_chain(depth_config(1.0, 1.0, 1));
  const ShsModel parsed = model_from_json(model_to_json(wq));
  CHECK(average_age(parsed, 0) == doctest::Approx(3.5).epsilon(1e-12));
}

}  // TEST_SUITE
