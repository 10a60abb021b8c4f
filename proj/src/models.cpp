#include "aoi/models.hpp"

#include <cmath>

#include "aoi/error.hpp"

namespace aoi {

std::string to_string(Discipline d) { return d == Discipline::WQ ? "wq" : "nq"; }

Discipline discipline_from_string(const std::string& s) {
  if (s == "wq" || s == "WQ") return Discipline::WQ;
  if (s == "nq" || s == "NQ") return Discipline::NQ;
  throw InvalidConfig("unknown discipline '" + s + "' (expected wq or nq)");
}

void validate_config(const SystemConfig& config) {
  if (!(config.lambda > 0.0) || !std::isfinite(config.lambda))
    throw InvalidConfig("lambda must be a positive finite rate");
  if (!(config.mu > 0.0) || !std::isfinite(config.mu))
    throw InvalidConfig("mu must be a positive finite rate");
  if (config.streams == 0) throw InvalidConfig("streams must be at least 1");
}

namespace {

// x' = [x0, 0]: a fresh packet of the stream of interest replaces whatever
// packet the stream had in the system.
Matrix own_arrival_reset() {
  Matrix a(2, 2);
  a(0, 0) = 1.0;
  return a;
}

// x' = [x1, x1]: delivery hands the system packet's age to the monitor and
// leaves a fake update with the same timestamp behind.
Matrix delivery_reset() {
  Matrix a(2, 2);
  a(1, 0) = 1.0;
  a(1, 1) = 1.0;
  return a;
}

// x' = [x0, x0]: the server frees up with no packet of the stream of
// interest left, so a fake update carrying the last delivered timestamp
// takes the system slot.
Matrix fake_install_reset() {
  Matrix a(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 1.0;
  return a;
}

}  // namespace

ShsModel build_wq_chain(const SystemConfig& config) {
  validate_config(config);
  const int i = static_cast<int>(config.depth);
  const double lambda = config.lambda;
  const double mu = config.mu;

  ShsModel model;
  model.num_states = i + 1;
  model.age_dim = 2;
  model.drift.assign(model.num_states, {1.0, 1.0});

  // Own arrivals: self-loop in every state, the new packet replaces the
  // stream's packet wherever it sits.
  for (int q = 0; q <= i; ++q)
    model.transitions.push_back({q, q, lambda, own_arrival_reset()});
  // Higher-priority arrivals from streams with no packet in the system.
  for (int q = 0; q < i; ++q)
    model.transitions.push_back({q, q + 1, (i - q) * lambda, Matrix::identity(2)});
  // A higher-priority service completes.
  for (int q = i; q >= 1; --q)
    model.transitions.push_back({q, q - 1, mu, Matrix::identity(2)});
  // Delivery of the stream of interest.
  model.transitions.push_back({0, 0, mu, delivery_reset()});
  return model;
}

ShsModel build_nq_chain(const SystemConfig& config) {
  validate_config(config);
  const int i = static_cast<int>(config.depth);
  const double lambda = config.lambda;
  const double mu = config.mu;

  ShsModel model;
  model.age_dim = 2;
  if (i == 0) {
    // Preemptive M/M/1/1: the top-priority stream never sees anyone else.
    model.num_states = 1;
    model.drift.assign(1, {1.0, 1.0});
    model.transitions.push_back({0, 0, lambda, own_arrival_reset()});
    model.transitions.push_back({0, 0, mu, delivery_reset()});
    return model;
  }

  model.num_states = 2;
  model.drift.assign(2, {1.0, 1.0});
  // State 0: serving the stream of interest (real or fake packet).
  model.transitions.push_back({0, 0, lambda, own_arrival_reset()});
  // Any higher-priority arrival preempts and the packet is discarded.
  model.transitions.push_back({0, 1, i * lambda, Matrix::identity(2)});
  // Higher-priority work drains; arrivals of the stream of interest during
  // state 1 are discarded, so no self-loop exists there.
  model.transitions.push_back({1, 0, mu, fake_install_reset()});
  model.transitions.push_back({0, 0, mu, delivery_reset()});
  return model;
}

}  // namespace aoi
