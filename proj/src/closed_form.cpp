#include "aoi/closed_form.hpp"

#include <cassert>
#include <cmath>

#include "aoi/error.hpp"

namespace aoi {

std::vector<double> stationary_distribution(const SystemConfig& config) {
  validate_config(config);
  const int i = static_cast<int>(config.depth);
  // pi_k / pi_{k-1} = lambda * (i - k + 1) / mu; accumulate unnormalized
  // weights multiplicatively, factorial ratios never materialize.
  std::vector<double> pi(i + 1);
  pi[0] = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= i; ++k) {
    pi[k] = pi[k - 1] * config.lambda * (i - k + 1) / config.mu;
    sum += pi[k];
  }
  for (double& p : pi) p /= sum;
  return pi;
}

std::vector<double> a_sequence(const SystemConfig& config) {
  validate_config(config);
  const int i = static_cast<int>(config.depth);
  const double lambda = config.lambda;
  const double mu = config.mu;
  std::vector<double> a(i + 1);
  if (i == 0) {
    a[0] = lambda;
    return a;
  }
  a[i] = lambda + mu;
  for (int h = i - 1; h >= 1; --h)
    a[h] = (i - h + 1) * lambda + mu - (i - h) * lambda * mu / a[h + 1];
  a[0] = (i + 1) * lambda - i * lambda * mu / a[1];
  return a;
}

ClosedFormBreakdown wq_age(const SystemConfig& config) {
  validate_config(config);
  const int i = static_cast<int>(config.depth);
  const double lambda = config.lambda;
  const double mu = config.mu;

  ClosedFormBreakdown out;
  out.pi = stationary_distribution(config);
  out.a_seq = a_sequence(config);
  out.v_row0.resize(i + 1);

  // v_00 = 1/mu + sum_j mu^j pi_j / prod_{h<=j} a_h. The term for j follows
  // from the term for j-1 by the factor lambda * (i - j + 1) / a_j, so a
  // single running product covers the whole sum.
  double term = out.pi[0] / out.a_seq[0];
  double v01 = term;
  for (int j = 1; j <= i; ++j) {
    term *= lambda * (i - j + 1) / out.a_seq[j];
    v01 += term;
  }
  out.v_row0[0] = 1.0 / mu + v01;

  if (i == 0) {
    // Top priority sees a preemptive M/M/1/1 server; the sum above collapses
    // to 1/lambda and the age is 1/lambda + 1/mu.
    assert(std::abs(out.v_row0[0] - (1.0 / lambda + 1.0 / mu)) <=
           1e-12 * out.v_row0[0]);
  }

  // Suffix sums of pi feed the forward recursion
  // v_k0 = sum_{j=k..i} pi_j / mu + (i - k + 1) * lambda / mu * v_{k-1,0}.
  double suffix = 0.0;
  std::vector<double> pi_suffix(i + 2, 0.0);
  for (int j = i; j >= 0; --j) {
    suffix += out.pi[j];
    pi_suffix[j] = suffix;
  }
  for (int k = 1; k <= i; ++k)
    out.v_row0[k] = pi_suffix[k] / mu + (i - k + 1) * lambda / mu * out.v_row0[k - 1];

  out.age = 0.0;
  for (double v : out.v_row0) out.age += v;
  return out;
}

AgeReport total_wq_age(const SystemConfig& config) {
  validate_config(config);
  AgeReport report;
  report.discipline = Discipline::WQ;
  report.lambda = config.lambda;
  report.mu = config.mu;
  report.per_stream.reserve(config.streams);
  for (unsigned i = 0; i < config.streams; ++i) {
    SystemConfig per_stream = config;
    per_stream.depth = i;
    report.per_stream.push_back(wq_age(per_stream).age);
  }
  report.total = 0.0;
  for (double age : report.per_stream) report.total += age;
  return report;
}

}  // namespace aoi
