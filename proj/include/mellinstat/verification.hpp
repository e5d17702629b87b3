#pragma once

// The oracle suite behind `mellinstat verify`: every closed form in the
// catalog is compared against quadrature, finite differences, exact algebra
// or Monte-Carlo draws, with fixed gates.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mellinstat/distributions.hpp"

namespace mellinstat {

struct CheckResult {
  std::string group;   // normalization, phi, convolution, ...
  std::string target;  // family key, or "all" for family-independent checks
  bool passed = false;
  double max_error = 0.0;
  double gate = 0.0;
  std::string detail;
};

struct VerifyOptions {
  /// Replaces every gate and tightens quadrature to min(1e-9, tolerance / 100).
  std::optional<double> tolerance;
  /// Restricts per-family checks; family-independent checks run only when empty.
  std::vector<Family> families;
  std::size_t monte_carlo_samples = 1000000;
  std::uint64_t seed = 20240611;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Parameter sets exercised per family (at least five each; Fisher and
/// inverse-gamma keep M > 2 so Phi(3) exists).
std::vector<DistributionSpec> verification_grid(Family family);

/// s values for the Phi agreement and convolution checks.
const std::vector<double>& verification_s_grid();

/// Laws used by the Monte-Carlo log-cumulant check.
std::vector<DistributionSpec> monte_carlo_specs();

/// Runs the suite; `on_check` sees each result as soon as it is available.
VerifyReport run_verification(const VerifyOptions& options,
                              const std::function<void(const CheckResult&)>& on_check = {});

/// Individual groups, also used by the acceptance tests.
CheckResult check_normalization(Family family, double gate = 1e-6, double rel_tol = 1e-9);
CheckResult check_phi_agreement(Family family, double gate = 1e-6, double rel_tol = 1e-9);
CheckResult check_convolution(Family family, double gate = 1e-5, double rel_tol = 1e-9);
CheckResult check_finite_difference_cumulants(Family family, double gate = 1e-5);
CheckResult check_quadrature_cumulants(Family family, double gate = 1e-6, double rel_tol = 1e-9);
CheckResult check_cumulant_algebra(double gate = 1e-12);
CheckResult check_known_constants(double gate = 1e-10);
CheckResult check_monte_carlo(const DistributionSpec& spec, std::size_t n, std::uint64_t seed,
                              double standard_errors = 4.0);

/// order-th derivative of f at x by central differences with a Richardson
/// tableau started at step h0 (halving each level). Returns the entry with the
/// smallest estimated error.
double richardson_derivative(const std::function<double(double)>& f, double x, int order, double h0);

}  // namespace mellinstat
