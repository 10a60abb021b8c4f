#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace aoi {

// Dense row-major matrix, used for transition reset maps (x' = x * A) and
// test-side assembly. Deliberately minimal; heavy lifting happens inside the
// solver implementation.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// One directed edge of the discrete chain. Firing moves the state from
// `from` to `to` at rate `rate` and applies x' = x * reset to the age vector.
struct Transition {
  int from = 0;
  int to = 0;
  double rate = 0.0;
  Matrix reset;
};

// Finite stochastic hybrid system for age analysis: a discrete chain over
// `num_states` states coupled to an `age_dim`-dimensional continuous age
// vector. `drift[q]` holds the binary growth indicator per component while
// the chain sits in state q.
struct ShsModel {
  int num_states = 0;
  int age_dim = 0;
  std::vector<Transition> transitions;
  std::vector<std::vector<double>> drift;
};

// Stationary chain probabilities and per-state age correlation vectors.
struct ShsSolution {
  std::vector<double> pi;               // length num_states
  std::vector<std::vector<double>> v;   // num_states x age_dim
};

// Throws InvalidModel if the model is structurally malformed (indices out of
// range, nonpositive or non-finite rates, reset not age_dim x age_dim, drift
// entries outside {0,1}).
void validate_model(const ShsModel& model);

// Stationary distribution of the embedded chain: solves the balance
// equations with one row replaced by normalization. Self-loops cancel and
// are dropped during assembly. Throws SingularChain when the chain is not
// ergodic (structurally disconnected or rank-deficient balance system).
std::vector<double> solve_stationary(const ShsModel& model);

// Stationary age correlation vectors: solves the stacked linear system in
// which every incoming transition contributes rate * v * reset. Self-loops
// do contribute here because their resets act on the age vector. Throws
// SingularSystem when no unique solution exists.
std::vector<std::vector<double>> solve_correlations(const ShsModel& model,
                                                    const std::vector<double>& pi);

// Convenience: stationary distribution plus correlation vectors.
ShsSolution solve(const ShsModel& model);

// Average age at the monitor: sum over states of the chosen component of the
// correlation vectors.
double average_age(const ShsModel& model, int monitor_component = 0);

// JSON (de)serialization of the model. Schema:
//   {"age_dim": n, "num_states": m, "drift": [[...]],
//    "transitions": [{"from": q, "to": q', "rate": r, "reset": [[...]]}]}
std::string model_to_json(const ShsModel& model, int indent = -1);
ShsModel model_from_json(const std::string& text);
ShsModel model_from_json_stream(std::istream& in);

}  // namespace aoi
