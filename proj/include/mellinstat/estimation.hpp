#pragma once

// Method of log-cumulants: empirical log-statistics, polygamma inversion,
// per-family parameter fits and texture extraction by cumulant additivity.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mellinstat/distributions.hpp"
#include "mellinstat/errors.hpp"
#include "mellinstat/mellin_oracle.hpp"
#include "mellinstat/sampling.hpp"

namespace mellinstat {

inline constexpr std::size_t kMinLogStatSamples = 30;
inline constexpr int kStandardErrorBlocks = 10;

struct EmpiricalLogStats {
  LogStats stats;
  /// Standard errors from 10 contiguous sub-batches: sd(block estimates) / sqrt(10).
  std::vector<double> moment_stderr;
  std::vector<double> cumulant_stderr;
  /// Delta-method standard errors of k~_n: sqrt(mean(IF_n^2) / N) with the
  /// influence functions of the first four cumulants of log x.
  std::vector<double> cumulant_stderr_asymptotic;
  std::size_t count = 0;
};

/// m~_n = mean((log x_i)^n), cumulants by moments_to_cumulants; n_max in [1, 4].
/// Throws ZeroSamples if any value is <= 0 and TooFewSamples below 30 values.
EmpiricalLogStats empirical_log_stats(std::span<const double> values, int n_max);
EmpiricalLogStats empirical_log_stats(const SampleBatch& batch, int n_max);

/// x > 0 with psi^(order)(x) = target. Throws OutOfRange when the target has
/// the wrong sign for the order (psi^(m) has sign (-1)^(m+1) and covers the
/// whole half-line of that sign).
double invert_polygamma(int order, double target);

struct FitOptions {
  /// Bound on the relative cumulant residual for `converged`.
  double tolerance = 1e-9;
  int max_iterations = 200;
  /// Weibull-Nakagami speckle shape, when known. Otherwise (c, alpha) solve the
  /// k~_2, k~_3 equations, which usually have two roots; k~_4 selects one.
  std::optional<double> known_c;
};

struct FitResult {
  DistributionSpec spec;
  int iterations = 0;
  /// max_n |k~_n(fit) - k~_n(target)| / max(1, |k~_n(target)|) over the orders used.
  double residual = 0.0;
  bool converged = false;
};

class FitNonConvergence : public NonConvergence {
 public:
  FitNonConvergence(const std::string& what, FitResult last)
      : NonConvergence(what, last.residual, last.residual), last_(std::move(last)) {}
  const FitResult& last_iterate() const noexcept { return last_; }

 private:
  FitResult last_;
};

/// Number of log-cumulant orders fit_molc consumes for a family.
int required_orders(Family family, const FitOptions& options = {});

/// Matches analytic log-cumulants to stats. Gamma-gamma results are reported
/// with L <= M since the two shapes enter symmetrically.
/// Throws NoSolution for infeasible statistics, FitNonConvergence otherwise.
FitResult fit_molc(Family family, const LogStats& stats, const FitOptions& options = {});

/// Texture log-statistics k~_z = k~_x - k~_speckle (speckle must be a simple law).
LogStats texture_log_cumulants(const LogStats& data_stats, const DistributionSpec& speckle);

}  // namespace mellinstat
