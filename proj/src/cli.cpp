#include "aoi/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <ostream>
#include <span>
#include <vector>

#include "aoi/analysis.hpp"
#include "aoi/closed_form.hpp"
#include "aoi/error.hpp"
#include "aoi/models.hpp"
#include "aoi/simulator.hpp"
#include "format.hpp"

namespace aoi {

namespace {

enum class Format { Table, Json, Csv };

Format parse_format(const std::string& s) {
  if (s == "table") return Format::Table;
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw InvalidConfig("unknown format '" + s + "' (expected table, json or csv)");
}

void add_format_flag(CLI::App* cmd, std::string& format,
                     const std::string& default_format = "table") {
  cmd->add_option("--format", format, "Output format: table, json or csv")
      ->default_val(default_format)
      ->check(CLI::IsMember({"table", "json", "csv"}));
}

void emit_report_rows(const AgeReport& report, double lambda, std::ostream& out) {
  for (std::size_t k = 0; k < report.per_stream.size(); ++k)
    out << format_rate(lambda) << ',' << to_string(report.discipline) << ',' << (k + 1)
        << ',' << format_value(report.per_stream[k]) << '\n';
  out << format_rate(lambda) << ',' << to_string(report.discipline) << ",total,"
      << format_value(report.total) << '\n';
}

void emit_sweep_csv(std::span<const CurvePoint> points, std::ostream& out) {
  out << "lambda,discipline,stream,age\n";
  for (const CurvePoint& point : points)
    emit_report_rows(point.report, point.lambda, out);
}

nlohmann::json report_to_json(const AgeReport& report, unsigned streams) {
  return {{"N", streams},
          {"lambda", report.lambda},
          {"mu", report.mu},
          {"discipline", to_string(report.discipline)},
          {"per_stream", report.per_stream},
          {"total", report.total}};
}

struct EvalArgs {
  unsigned streams = 1;
  double lambda = 1.0;
  double mu = 1.0;
  std::string discipline = "wq";
  std::string format = "table";
};

int run_eval(const EvalArgs& args, std::ostream& out) {
  const Discipline d = discipline_from_string(args.discipline);
  const AgeReport report = age_report(args.streams, args.lambda, args.mu, d);
  switch (parse_format(args.format)) {
    case Format::Json:
      out << report_to_json(report, args.streams).dump() << '\n';
      break;
    case Format::Csv: {
      out << "lambda,discipline,stream,age\n";
      emit_report_rows(report, args.lambda, out);
      break;
    }
    case Format::Table: {
      out << "discipline=" << to_string(report.discipline) << " N=" << args.streams
          << " lambda=" << format_rate(args.lambda) << " mu=" << format_rate(args.mu)
          << '\n';
      for (std::size_t k = 0; k < report.per_stream.size(); ++k)
        out << "stream " << (k + 1) << "  " << format_value(report.per_stream[k])
            << '\n';
      out << "total     " << format_value(report.total) << '\n';
      break;
    }
  }
  return kExitOk;
}

struct SimulateArgs {
  unsigned streams = 1;
  double lambda = 1.0;
  double mu = 1.0;
  std::string discipline = "wq";
  double horizon = 1e6;
  double warmup = 0.1;
  unsigned replications = 5;
  std::uint64_t seed = SimConfig{}.seed;
  std::string format = "table";
};

int run_simulate(const SimulateArgs& args, std::ostream& out) {
  SimConfig config;
  config.system.lambda = args.lambda;
  config.system.mu = args.mu;
  config.system.streams = args.streams;
  config.discipline = discipline_from_string(args.discipline);
  config.horizon = args.horizon;
  config.warmup_fraction = args.warmup;
  config.replications = args.replications;
  config.seed = args.seed;

  std::vector<ReplicationResult> reps;
  const SimEstimate est = simulate_detailed(config, reps);
  switch (parse_format(args.format)) {
    case Format::Json: {
      nlohmann::json j = {{"N", args.streams},
                          {"lambda", args.lambda},
                          {"mu", args.mu},
                          {"discipline", to_string(config.discipline)},
                          {"horizon", args.horizon},
                          {"warmup_fraction", args.warmup},
                          {"replications", args.replications},
                          {"seed", args.seed},
                          {"per_stream_age", est.per_stream_age},
                          {"std_error", est.std_error},
                          {"total_age", est.total_age},
                          {"converged", est.converged}};
      out << j.dump() << '\n';
      break;
    }
    case Format::Csv:
      write_replication_csv(out, config, reps);
      break;
    case Format::Table: {
      out << "discipline=" << to_string(config.discipline) << " N=" << args.streams
          << " lambda=" << format_rate(args.lambda) << " mu=" << format_rate(args.mu)
          << " horizon=" << format_rate(args.horizon)
          << " replications=" << args.replications << " seed=" << args.seed << '\n';
      for (std::size_t k = 0; k < est.per_stream_age.size(); ++k)
        out << "stream " << (k + 1) << "  " << format_value(est.per_stream_age[k])
            << " +/- " << format_value(est.std_error[k]) << '\n';
      out << "total     " << format_value(est.total_age) << '\n';
      if (!est.converged) out << "warning: not converged (std error above 5%)\n";
      break;
    }
  }
  return kExitOk;
}

struct SweepArgs {
  unsigned streams = 1;
  double mu = 1.0;
  double lambda_min = 0.1;
  double lambda_max = 5.0;
  unsigned points = 40;
  bool log_spaced = false;
  std::string discipline = "both";
};

int run_sweep(const SweepArgs& args, std::ostream& out) {
  const std::vector<double> grid =
      rate_grid(args.lambda_min, args.lambda_max, args.points, args.log_spaced);
  std::vector<CurvePoint> points;
  if (args.discipline == "wq" || args.discipline == "both") {
    auto wq = total_age_curve(args.streams, args.mu, grid, Discipline::WQ);
    points.insert(points.end(), wq.begin(), wq.end());
  }
  if (args.discipline == "nq" || args.discipline == "both") {
    auto nq = total_age_curve(args.streams, args.mu, grid, Discipline::NQ);
    points.insert(points.end(), nq.begin(), nq.end());
  }
  if (points.empty())
    throw InvalidConfig("unknown discipline '" + args.discipline +
                        "' (expected wq, nq or both)");
  emit_sweep_csv(points, out);
  return kExitOk;
}

struct SearchArgs {
  unsigned streams = 1;
  double mu = 1.0;
  std::string discipline = "wq";
  double lo = 0.01;
  double hi = 3.0;
  double tol = 1e-4;
  std::string format = "json";
};

int run_optimum(const SearchArgs& args, std::ostream& out) {
  const Discipline d = discipline_from_string(args.discipline);
  const OptimumResult result =
      find_optimum(args.streams, args.mu, d, args.lo, args.hi, args.tol);
  if (parse_format(args.format) == Format::Table)
    out << "discipline=" << to_string(d) << " N=" << args.streams
        << " lambda_opt=" << format_value(result.lambda_opt)
        << " age_opt=" << format_value(result.age_opt) << '\n';
  else
    out << optimum_to_json(args.streams, args.mu, result) << '\n';
  return kExitOk;
}

int run_crossing(const SearchArgs& args, std::ostream& out) {
  const CrossingResult result =
      find_crossing(args.streams, args.mu, args.lo, args.hi, args.tol);
  if (parse_format(args.format) == Format::Table)
    out << "N=" << args.streams << " lambda_pass=" << format_value(result.lambda_pass)
        << " bracket=[" << format_value(result.lo) << ", " << format_value(result.hi)
        << "]\n";
  else
    out << crossing_to_json(result) << '\n';
  return kExitOk;
}

struct Table2Args {
  double mu = 1.0;
  std::string format = "table";
};

int run_table2(const Table2Args& args, std::ostream& out) {
  struct Row {
    unsigned streams;
    OptimumResult wq;
    OptimumResult nq;
    CrossingResult crossing;
  };
  std::vector<Row> rows;
  for (unsigned n : {3u, 5u, 8u}) {
    Row row;
    row.streams = n;
    row.wq = find_optimum(n, args.mu, Discipline::WQ, 0.01 * args.mu, 3.0 * args.mu);
    row.nq = find_optimum(n, args.mu, Discipline::NQ, 0.01 * args.mu, 3.0 * args.mu);
    row.crossing = find_crossing(n, args.mu, 0.05 * args.mu, 5.0 * args.mu);
    rows.push_back(row);
  }
  switch (parse_format(args.format)) {
    case Format::Json: {
      nlohmann::json j = nlohmann::json::array();
      for (const Row& row : rows)
        j.push_back({{"N", row.streams},
                     {"wq", {{"age_opt", row.wq.age_opt}, {"lambda_opt", row.wq.lambda_opt}}},
                     {"nq", {{"age_opt", row.nq.age_opt}, {"lambda_opt", row.nq.lambda_opt}}},
                     {"lambda_pass", row.crossing.lambda_pass}});
      out << j.dump() << '\n';
      break;
    }
    case Format::Csv:
      out << "N,wq_age_opt,wq_lambda_opt,nq_age_opt,nq_lambda_opt,lambda_pass\n";
      for (const Row& row : rows)
        out << row.streams << ',' << format_value(row.wq.age_opt) << ','
            << format_value(row.wq.lambda_opt) << ',' << format_value(row.nq.age_opt)
            << ',' << format_value(row.nq.lambda_opt) << ','
            << format_value(row.crossing.lambda_pass) << '\n';
      break;
    case Format::Table:
      out << "N    wq_age_opt  wq_lambda   nq_age_opt  nq_lambda   lambda_pass\n";
      for (const Row& row : rows) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-4u %-11.4g %-11.4g %-11.4g %-11.4g %-.4g\n",
                      row.streams, row.wq.age_opt, row.wq.lambda_opt, row.nq.age_opt,
                      row.nq.lambda_opt, row.crossing.lambda_pass);
        out << line;
      }
      break;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Average age of information for prioritized preemptive streams"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "Exact per-stream and total average age for one configuration");
  eval->add_option("--N", eval_args.streams, "Number of streams")->required();
  eval->add_option("--lambda", eval_args.lambda, "Arrival rate per stream")->required();
  eval->add_option("--mu", eval_args.mu, "Service rate")->default_val(1.0);
  eval->add_option("--discipline", eval_args.discipline, "wq or nq")
      ->default_val("wq")
      ->check(CLI::IsMember({"wq", "nq"}));
  add_format_flag(eval, eval_args.format);

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate",
                                     "Discrete-event estimate of the average ages");
  sim->add_option("--N", sim_args.streams, "Number of streams")->required();
  sim->add_option("--lambda", sim_args.lambda, "Arrival rate per stream")->required();
  sim->add_option("--mu", sim_args.mu, "Service rate")->default_val(1.0);
  sim->add_option("--discipline", sim_args.discipline, "wq or nq")
      ->default_val("wq")
      ->check(CLI::IsMember({"wq", "nq"}));
  sim->add_option("--horizon", sim_args.horizon, "Simulated time units")
      ->default_val(1e6);
  sim->add_option("--warmup", sim_args.warmup, "Warm-up fraction discarded")
      ->default_val(0.1);
  sim->add_option("--replications", sim_args.replications, "Independent sample paths")
      ->default_val(5);
  sim->add_option("--seed", sim_args.seed, "Base RNG seed");
  add_format_flag(sim, sim_args.format);

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "Total-age curves over a rate grid (CSV)");
  sweep->add_option("--N", sweep_args.streams, "Number of streams")->required();
  sweep->add_option("--mu", sweep_args.mu, "Service rate")->default_val(1.0);
  sweep->add_option("--lambda-min", sweep_args.lambda_min, "Grid start")->required();
  sweep->add_option("--lambda-max", sweep_args.lambda_max, "Grid end")->required();
  sweep->add_option("--points", sweep_args.points, "Grid size")->default_val(40);
  sweep->add_flag("--log", sweep_args.log_spaced, "Log-spaced grid");
  sweep->add_option("--discipline", sweep_args.discipline, "wq, nq or both")
      ->default_val("both")
      ->check(CLI::IsMember({"wq", "nq", "both"}));

  SearchArgs opt_args;
  CLI::App* optimum = app.add_subcommand("optimum",
                                         "Arrival rate minimizing the total age");
  optimum->add_option("--N", opt_args.streams, "Number of streams")->required();
  optimum->add_option("--mu", opt_args.mu, "Service rate")->default_val(1.0);
  optimum->add_option("--discipline", opt_args.discipline, "wq or nq")
      ->default_val("wq")
      ->check(CLI::IsMember({"wq", "nq"}));
  optimum->add_option("--lo", opt_args.lo, "Bracket lower end")->default_val(0.01);
  optimum->add_option("--hi", opt_args.hi, "Bracket upper end")->default_val(3.0);
  optimum->add_option("--tol", opt_args.tol, "Rate tolerance")->default_val(1e-4);
  add_format_flag(optimum, opt_args.format, "json");

  SearchArgs cross_args;
  cross_args.lo = 0.05;
  cross_args.hi = 5.0;
  CLI::App* crossing = app.add_subcommand(
      "crossing", "Arrival rate where total WQ and NQ ages intersect");
  crossing->add_option("--N", cross_args.streams, "Number of streams")->required();
  crossing->add_option("--mu", cross_args.mu, "Service rate")->default_val(1.0);
  crossing->add_option("--lo", cross_args.lo, "Bracket lower end")->default_val(0.05);
  crossing->add_option("--hi", cross_args.hi, "Bracket upper end")->default_val(5.0);
  crossing->add_option("--tol", cross_args.tol, "Rate tolerance")->default_val(1e-4);
  add_format_flag(crossing, cross_args.format, "json");

  Table2Args table_args;
  CLI::App* table2 = app.add_subcommand(
      "table2", "Optima and crossover rates for N = 3, 5, 8");
  table2->add_option("--mu", table_args.mu, "Service rate")->default_val(1.0);
  add_format_flag(table2, table_args.format);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (eval->parsed()) return run_eval(eval_args, out);
    if (sim->parsed()) return run_simulate(sim_args, out);
    if (sweep->parsed()) return run_sweep(sweep_args, out);
    if (optimum->parsed()) return run_optimum(opt_args, out);
    if (crossing->parsed()) return run_crossing(cross_args, out);
    if (table2->parsed()) return run_table2(table_args, out);
  } catch (const Error& e) {
    err << e.name() << ": " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  err << "usage error: no subcommand given\n";
  return kExitUsage;
}

}  // namespace aoi
