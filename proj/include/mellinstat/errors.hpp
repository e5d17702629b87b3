#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mellinstat {

/// Argument outside the mathematical domain of a function (non-positive
/// shape, s outside the strip of analyticity, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Classical moment of a heavy-tailed law that is infinite.
class MomentDoesNotExist : public std::domain_error {
 public:
  MomentDoesNotExist(const std::string& what, double bound)
      : std::domain_error(what), bound_(bound) {}
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

/// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double best_estimate, double error_bound)
      : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}
  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

/// Log-statistics that no parameter value of the requested family can produce.
class NoSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Target value outside the range of the function being inverted.
class OutOfRange : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnsupportedOrder : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ZeroSamples : public std::invalid_argument {
 public:
  explicit ZeroSamples(std::size_t count)
      : std::invalid_argument("ZeroSamples: " + std::to_string(count) +
                              " value(s) <= 0; log-statistics are undefined"),
        count_(count) {}
  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

class TooFewSamples : public std::invalid_argument {
 public:
  TooFewSamples(std::size_t count, std::size_t minimum)
      : std::invalid_argument("TooFewSamples: got " + std::to_string(count) + ", need at least " +
                              std::to_string(minimum)),
        count_(count) {}
  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

}  // namespace mellinstat
