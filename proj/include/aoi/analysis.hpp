#pragma once

#include <span>
#include <string>
#include <vector>

#include "aoi/models.hpp"

namespace aoi {

// Total age and per-stream breakdown for one (N, lambda, mu, discipline)
// evaluation. WQ uses the closed forms; NQ solves the bufferless chain per
// priority depth and sums.
AgeReport age_report(unsigned streams, double lambda, double mu, Discipline discipline);

struct CurvePoint {
  double lambda = 0.0;
  AgeReport report;
};

// Evaluates the total-age curve over a rate grid. Points are independent
// and run in parallel when OpenMP is enabled.
std::vector<CurvePoint> total_age_curve(unsigned streams, double mu,
                                        std::span<const double> lambdas,
                                        Discipline discipline);

// Serial reference for total_age_curve; identical output.
std::vector<CurvePoint> total_age_curve_serial(unsigned streams, double mu,
                                               std::span<const double> lambdas,
                                               Discipline discipline);

// Log- or linearly-spaced grid helper for sweeps.
std::vector<double> rate_grid(double lo, double hi, unsigned points, bool log_spaced);

struct OptimumResult {
  double lambda_opt = 0.0;
  double age_opt = 0.0;
  Discipline discipline = Discipline::WQ;
};

// Golden-section search for the arrival rate minimizing total age, guarded
// by a coarse grid scan (the curve is assumed unimodal but not proven so).
// Throws BracketError when [lo, hi] does not enclose an interior minimum.
OptimumResult find_optimum(unsigned streams, double mu, Discipline discipline,
                           double lo, double hi, double tol = 1e-4);

struct CrossingResult {
  double lambda_pass = 0.0;
  double lo = 0.0;           // validated sign-change bracket actually bisected
  double hi = 0.0;
  double achieved_tolerance = 0.0;  // |total_wq - total_nq| at lambda_pass
};

// Bisection on total_wq(lambda) - total_nq(lambda). A sign-change scan
// first validates that the bracket holds exactly one crossing. Throws
// NoSignChange when the endpoints have the same sign, BracketError when the
// scan sees more than one crossing.
CrossingResult find_crossing(unsigned streams, double mu, double lo, double hi,
                             double tol = 1e-4);

// JSON forms used by the CLI:
//   {"N":..., "mu":..., "discipline":..., "lambda_opt":..., "age_opt":...}
//   {"lambda_pass":..., "bracket":[lo,hi]}
std::string optimum_to_json(unsigned streams, double mu, const OptimumResult& result);
std::string crossing_to_json(const CrossingResult& result);

}  // namespace aoi
