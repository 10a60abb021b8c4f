#include "aoi/shs.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "aoi/error.hpp"

namespace aoi {

namespace {

constexpr double kResidualTolerance = 1e-9;

// Relative infinity-norm residual of A x = b.
double relative_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  const double num = (a * x - b).cwiseAbs().maxCoeff();
  const double scale =
      std::max(b.cwiseAbs().maxCoeff(),
               a.cwiseAbs().maxCoeff() * std::max(x.cwiseAbs().maxCoeff(), 1.0));
  return scale > 0.0 ? num / scale : num;
}

// Dense partial-pivot LU solve with mixed-precision iterative refinement:
// residuals accumulate in extended precision so solutions whose entries span
// many orders of magnitude still come out accurate. Reports failure through
// the returned flag; callers translate into the module-appropriate error.
bool lu_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::VectorXd& x) {
  const Eigen::Index n = a.rows();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double cond_floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  if (lu.rcond() <= cond_floor) return false;
  x = lu.solve(b);
  for (int step = 0; step < 3; ++step) {
    Eigen::VectorXd residual(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      long double sum = b(i);
      for (Eigen::Index j = 0; j < n; ++j)
        sum -= static_cast<long double>(a(i, j)) * static_cast<long double>(x(j));
      residual(i) = static_cast<double>(sum);
    }
    const Eigen::VectorXd correction = lu.solve(residual);
    x += correction;
    if (correction.cwiseAbs().maxCoeff() <=
        std::numeric_limits<double>::epsilon() * x.cwiseAbs().maxCoeff())
      break;
  }
  return relative_residual(a, x, b) <= kResidualTolerance;
}

// Strong connectivity of the directed state graph, self-loops ignored.
bool strongly_connected(const ShsModel& model) {
  const int n = model.num_states;
  if (n <= 1) return true;
  std::vector<std::vector<int>> fwd(n), rev(n);
  for (const Transition& t : model.transitions) {
    if (t.from == t.to) continue;
    fwd[t.from].push_back(t.to);
    rev[t.to].push_back(t.from);
  }
  auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : adj[u]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == n;
  };
  return reaches_all(fwd) && reaches_all(rev);
}

}  // namespace

void validate_model(const ShsModel& model) {
  if (model.num_states <= 0) throw InvalidModel("num_states must be positive");
  if (model.age_dim <= 0) throw InvalidModel("age_dim must be positive");
  const std::size_t n = static_cast<std::size_t>(model.age_dim);
  if (model.drift.size() != static_cast<std::size_t>(model.num_states))
    throw InvalidModel("drift must have one vector per state");
  for (const auto& b : model.drift) {
    if (b.size() != n) throw InvalidModel("drift vector length must equal age_dim");
    for (double e : b)
      if (e != 0.0 && e != 1.0) throw InvalidModel("drift entries must be 0 or 1");
  }
  for (const Transition& t : model.transitions) {
    if (t.from < 0 || t.from >= model.num_states || t.to < 0 || t.to >= model.num_states)
      throw InvalidModel("transition state index out of range");
    if (!(t.rate > 0.0) || !std::isfinite(t.rate))
      throw InvalidModel("transition rates must be strictly positive");
    if (t.reset.rows() != n || t.reset.cols() != n)
      throw InvalidModel("reset matrix must be age_dim x age_dim");
  }
}

std::vector<double> solve_stationary(const ShsModel& model) {
  validate_model(model);
  if (!strongly_connected(model))
    throw SingularChain("state graph is not strongly connected");

  const int m = model.num_states;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (const Transition& t : model.transitions) {
    if (t.from == t.to) continue;  // self-loops cancel in the balance equations
    a(t.from, t.from) -= t.rate;
    a(t.to, t.from) += t.rate;
  }
  // Rank repair: the balance equations carry one redundancy; the last row is
  // replaced by normalization.
  a.row(m - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b(m - 1) = 1.0;

  Eigen::VectorXd x;
  if (!lu_solve(a, b, x))
    throw SingularChain("balance system is rank-deficient beyond the expected redundancy");
  return {x.data(), x.data() + m};
}

std::vector<std::vector<double>> solve_correlations(const ShsModel& model,
                                                    const std::vector<double>& pi) {
  validate_model(model);
  if (pi.size() != static_cast<std::size_t>(model.num_states))
    throw InvalidModel("pi length must equal num_states");

  const int m = model.num_states;
  const int n = model.age_dim;
  const int dim = m * n;
  auto idx = [n](int state, int comp) { return state * n + comp; };

  std::vector<double> outflow(m, 0.0);
  for (const Transition& t : model.transitions) outflow[t.from] += t.rate;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  for (int q = 0; q < m; ++q) {
    for (int j = 0; j < n; ++j) {
      a(idx(q, j), idx(q, j)) += outflow[q];
      b(idx(q, j)) = model.drift[q][j] * pi[q];
    }
  }
  // Incoming transitions contribute rate * (v_source * reset); self-loops are
  // kept because their resets act on the age vector.
  for (const Transition& t : model.transitions) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        a(idx(t.to, j), idx(t.from, i)) -= t.rate * t.reset(i, j);
  }

  Eigen::VectorXd x;
  if (!lu_solve(a, b, x))
    throw SingularSystem("correlation system has no unique solution");

  std::vector<std::vector<double>> v(m, std::vector<double>(n));
  for (int q = 0; q < m; ++q)
    for (int j = 0; j < n; ++j) v[q][j] = x(idx(q, j));
  return v;
}

ShsSolution solve(const ShsModel& model) {
  ShsSolution solution;
  solution.pi = solve_stationary(model);
  solution.v = solve_correlations(model, solution.pi);
  return solution;
}

double average_age(const ShsModel& model, int monitor_component) {
  if (monitor_component < 0 || monitor_component >= model.age_dim)
    throw InvalidModel("monitor_component out of range");
  const ShsSolution solution = solve(model);
  double age = 0.0;
  for (const auto& v : solution.v) age += v[monitor_component];
  return age;
}

std::string model_to_json(const ShsModel& model, int indent) {
  nlohmann::json j;
  j["age_dim"] = model.age_dim;
  j["num_states"] = model.num_states;
  j["drift"] = model.drift;
  j["transitions"] = nlohmann::json::array();
  for (const Transition& t : model.transitions) {
    nlohmann::json reset = nlohmann::json::array();
    for (std::size_t r = 0; r < t.reset.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t c = 0; c < t.reset.cols(); ++c) row.push_back(t.reset(r, c));
      reset.push_back(std::move(row));
    }
    j["transitions"].push_back(
        {{"from", t.from}, {"to", t.to}, {"rate", t.rate}, {"reset", std::move(reset)}});
  }
  return j.dump(indent);
}

namespace {

ShsModel model_from_parsed(const nlohmann::json& j) {
  ShsModel model;
  try {
    model.age_dim = j.at("age_dim").get<int>();
    model.num_states = j.at("num_states").get<int>();
    model.drift = j.at("drift").get<std::vector<std::vector<double>>>();
    for (const auto& jt : j.at("transitions")) {
      Transition t;
      t.from = jt.at("from").get<int>();
      t.to = jt.at("to").get<int>();
      t.rate = jt.at("rate").get<double>();
      const auto rows = jt.at("reset").get<std::vector<std::vector<double>>>();
      t.reset = Matrix(rows.size(), rows.empty() ? 0 : rows[0].size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
          throw InvalidModel("reset rows have inconsistent lengths");
        for (std::size_t c = 0; c < rows[r].size(); ++c) t.reset(r, c) = rows[r][c];
      }
      model.transitions.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidModel(std::string("malformed model document: ") + e.what());
  }
  validate_model(model);
  return model;
}

}  // namespace

ShsModel model_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InvalidModel("model document is not valid JSON");
  return model_from_parsed(j);
}

ShsModel model_from_json_stream(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace aoi
