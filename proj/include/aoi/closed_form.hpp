#pragma once

#include <vector>

#include "aoi/models.hpp"

namespace aoi {

// Exact per-stream WQ age with its intermediate quantities: the stationary
// vector, the backward coefficient sequence a_0..a_i, and the per-state
// monitor-age correlations v_00..v_i0 whose sum is the age.
struct ClosedFormBreakdown {
  std::vector<double> pi;
  std::vector<double> a_seq;
  std::vector<double> v_row0;
  double age = 0.0;
};

// Stationary distribution of the WQ chain at depth i, computed by the ratio
// recursion pi_k = pi_{k-1} * lambda * (i - k + 1) / mu (no factorials).
std::vector<double> stationary_distribution(const SystemConfig& config);

// Backward recursion a_i = lambda + mu, a_h = (i-h+1)*lambda + mu -
// (i-h)*lambda*mu / a_{h+1}, a_0 = (i+1)*lambda - i*lambda*mu / a_1.
// Depth 0 collapses to the single value a_0 = lambda.
std::vector<double> a_sequence(const SystemConfig& config);

// Exact average WQ age of a stream with `depth` higher-priority streams.
ClosedFormBreakdown wq_age(const SystemConfig& config);

// Whole-system WQ report: per-stream ages for depths 0..streams-1 and their
// sum.
AgeReport total_wq_age(const SystemConfig& config);

}  // namespace aoi
