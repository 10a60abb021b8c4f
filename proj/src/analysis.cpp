#include "aoi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <nlohmann/json.hpp>

#include "aoi/closed_form.hpp"
#include "aoi/error.hpp"
#include "aoi/shs.hpp"

namespace aoi {

namespace {

void validate_rates(unsigned streams, double mu) {
  SystemConfig probe;
  probe.mu = mu;
  probe.streams = streams;
  validate_config(probe);  // lambda defaulted to a valid value
}

double total_age(unsigned streams, double mu, Discipline discipline, double lambda) {
  return age_report(streams, lambda, mu, discipline).total;
}

// Coarse scan used both to guard golden-section against non-unimodal curves
// and to detect brackets without an interior minimum.
constexpr int kScanPoints = 33;

}  // namespace

AgeReport age_report(unsigned streams, double lambda, double mu, Discipline discipline) {
  SystemConfig config;
  config.lambda = lambda;
  config.mu = mu;
  config.streams = streams;
  validate_config(config);
  if (discipline == Discipline::WQ) return total_wq_age(config);

  AgeReport report;
  report.discipline = Discipline::NQ;
  report.lambda = lambda;
  report.mu = mu;
  for (unsigned i = 0; i < streams; ++i) {
    SystemConfig per_stream = config;
    per_stream.depth = i;
    report.per_stream.push_back(average_age(build_nq_chain(per_stream), 0));
  }
  report.total = 0.0;
  for (double age : report.per_stream) report.total += age;
  return report;
}

std::vector<CurvePoint> total_age_curve(unsigned streams, double mu,
                                        std::span<const double> lambdas,
                                        Discipline discipline) {
  validate_rates(streams, mu);
  // Rejecting bad rates up front keeps exceptions out of the parallel region.
  for (double lambda : lambdas)
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw InvalidConfig("grid rates must be positive and finite");
  const int count = static_cast<int>(lambdas.size());
  std::vector<CurvePoint> points(count);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i)
    points[i] = {lambdas[i], age_report(streams, lambdas[i], mu, discipline)};
  return points;
}

std::vector<CurvePoint> total_age_curve_serial(unsigned streams, double mu,
                                               std::span<const double> lambdas,
                                               Discipline discipline) {
  validate_rates(streams, mu);
  std::vector<CurvePoint> points;
  points.reserve(lambdas.size());
  for (double lambda : lambdas)
    points.push_back({lambda, age_report(streams, lambda, mu, discipline)});
  return points;
}

std::vector<double> rate_grid(double lo, double hi, unsigned points, bool log_spaced) {
  if (!(lo > 0.0) || !(hi > lo)) throw InvalidConfig("grid requires 0 < lo < hi");
  if (points == 0) throw InvalidConfig("grid requires at least one point");
  if (points == 1) return {lo};
  std::vector<double> grid(points);
  for (unsigned i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    grid[i] = log_spaced ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo);
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

OptimumResult find_optimum(unsigned streams, double mu, Discipline discipline,
                           double lo, double hi, double tol) {
  validate_rates(streams, mu);
  if (!(lo > 0.0) || !(hi > lo)) throw InvalidConfig("bracket requires 0 < lo < hi");
  if (!(tol > 0.0)) throw InvalidConfig("tolerance must be positive");

  auto f = [&](double lambda) { return total_age(streams, mu, discipline, lambda); };

  // Unimodality is assumed, not proven: scan first, so a minimum sitting on
  // an endpoint (monotone curve) is rejected and golden-section gets checked
  // against the scan afterwards.
  std::vector<double> scan_x(kScanPoints), scan_y(kScanPoints);
  int best = 0;
  for (int i = 0; i < kScanPoints; ++i) {
    const double t = static_cast<double>(i) / (kScanPoints - 1);
    scan_x[i] = lo + t * (hi - lo);
    scan_y[i] = f(scan_x[i]);
    if (scan_y[i] < scan_y[best]) best = i;
  }
  if (best == 0)
    throw BracketError("total age is increasing at the lower bracket endpoint");
  if (best == kScanPoints - 1)
    throw BracketError("total age is decreasing at the upper bracket endpoint");

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  OptimumResult result;
  result.discipline = discipline;
  result.lambda_opt = 0.5 * (a + b);
  result.age_opt = f(result.lambda_opt);

  // Guard: golden-section must not have been trapped away from the scan's
  // basin. If it was, refine around the scan minimum instead.
  if (result.age_opt > scan_y[best]) {
    double ga = scan_x[best - 1], gb = scan_x[best + 1];
    while (gb - ga > tol) {
      const int refine = 9;
      double rx = ga;
      double ry = std::numeric_limits<double>::infinity();
      for (int i = 0; i < refine; ++i) {
        const double x = ga + (gb - ga) * i / (refine - 1);
        const double y = f(x);
        if (y < ry) {
          rx = x;
          ry = y;
        }
      }
      const double step = (gb - ga) / (refine - 1);
      ga = std::max(lo, rx - step);
      gb = std::min(hi, rx + step);
    }
    result.lambda_opt = 0.5 * (ga + gb);
    result.age_opt = f(result.lambda_opt);
  }
  return result;
}

CrossingResult find_crossing(unsigned streams, double mu, double lo, double hi,
                             double tol) {
  validate_rates(streams, mu);
  if (!(lo > 0.0) || !(hi > lo)) throw InvalidConfig("bracket requires 0 < lo < hi");
  if (!(tol > 0.0)) throw InvalidConfig("tolerance must be positive");

  auto diff = [&](double lambda) {
    return total_age(streams, mu, Discipline::WQ, lambda) -
           total_age(streams, mu, Discipline::NQ, lambda);
  };

  const double f_lo = diff(lo), f_hi = diff(hi);
  if (f_lo == 0.0 || f_hi == 0.0 || (f_lo > 0.0) == (f_hi > 0.0))
    throw NoSignChange("total-age difference has the same sign at both endpoints");

  // The two total-age curves are expected to cross once in a usable bracket;
  // verify that before trusting bisection.
  double a = lo, fa = f_lo;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  int changes = 0;
  for (int i = 1; i < kScanPoints; ++i) {
    const double x = lo + (hi - lo) * i / (kScanPoints - 1);
    const double fx = diff(x);
    if ((fa > 0.0) != (fx > 0.0)) {
      ++changes;
      bracket_lo = a;
      bracket_hi = x;
    }
    a = x;
    fa = fx;
  }
  if (changes != 1)
    throw BracketError("bracket holds more than one crossing of the age curves");

  double blo = bracket_lo, bhi = bracket_hi;
  double f_blo = diff(blo);
  double mid = 0.5 * (blo + bhi), f_mid = diff(mid);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (blo + bhi);
    f_mid = diff(mid);
    if ((f_blo > 0.0) == (f_mid > 0.0)) {
      blo = mid;
      f_blo = f_mid;
    } else {
      bhi = mid;
    }
    const double scale = total_age(streams, mu, Discipline::WQ, mid);
    if (bhi - blo <= tol && std::abs(f_mid) <= 1e-6 * scale) break;
    if (bhi - blo <= std::numeric_limits<double>::epsilon() * mid) break;
  }

  CrossingResult result;
  result.lambda_pass = mid;
  result.lo = bracket_lo;
  result.hi = bracket_hi;
  result.achieved_tolerance = std::abs(f_mid);
  return result;
}

std::string optimum_to_json(unsigned streams, double mu, const OptimumResult& result) {
  nlohmann::json j;
  j["N"] = streams;
  j["mu"] = mu;
  j["discipline"] = to_string(result.discipline);
  j["lambda_opt"] = result.lambda_opt;
  j["age_opt"] = result.age_opt;
  return j.dump();
}

std::string crossing_to_json(const CrossingResult& result) {
  nlohmann::json j;
  j["lambda_pass"] = result.lambda_pass;
  j["bracket"] = {result.lo, result.hi};
  return j.dump();
}

}  // namespace aoi
