#pragma once

#include <stdexcept>
#include <string>

namespace spdegal {

// Every error raised by the engine derives from Error so callers can map
// categories onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class StateIntegrityError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DegenerateEnsembleError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(double last_finite_time, double last_functional)
      : Error("state became non-finite after t = " + std::to_string(last_finite_time)),
        last_finite_time_(last_finite_time),
        last_functional_(last_functional) {}

  double last_finite_time() const noexcept { return last_finite_time_; }
  double last_functional() const noexcept { return last_functional_; }

 private:
  double last_finite_time_;
  double last_functional_;
};

}  // namespace spdegal
