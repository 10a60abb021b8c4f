#pragma once

#include <stdexcept>
#include <string>

namespace aoi {

// Base class for all library errors. `name()` returns the stable error
// identifier used in CLI diagnostics and exit-code mapping.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// Malformed ShsModel: bad indices, nonpositive rates, wrong reset shape,
// non-binary drift.
class InvalidModel : public Error {
 public:
  explicit InvalidModel(const std::string& what) : Error("InvalidModel", what) {}
};

// Invalid system/simulation configuration (nonpositive rates, N = 0, ...).
class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(const std::string& what) : Error("InvalidConfig", what) {}
};

// Balance system rank-deficient beyond the one expected redundancy; the
// discrete chain is not ergodic.
class SingularChain : public Error {
 public:
  explicit SingularChain(const std::string& what) : Error("SingularChain", what) {}
};

// The stacked correlation system has no unique solution (unstable age,
// e.g. delivery unreachable from some state).
class SingularSystem : public Error {
 public:
  explicit SingularSystem(const std::string& what) : Error("SingularSystem", what) {}
};

// Optimization bracket does not enclose an interior minimum.
class BracketError : public Error {
 public:
  explicit BracketError(const std::string& what) : Error("BracketError", what) {}
};

// Crossing bracket endpoints have the same sign.
class NoSignChange : public Error {
 public:
  explicit NoSignChange(const std::string& what) : Error("NoSignChange", what) {}
};

}  // namespace aoi
