#pragma once

// Quadrature ground truth for second-kind statistics, plus the algebra that
// links log-moments and log-cumulants.
//
// Integrals over (0, inf) are taken after the substitution x = e^t:
//   Phi(s)  = int e^{s t} f(e^t) dt
//   m~_n    = int t^n e^t f(e^t) dt
// which turns the power-law ends of every catalog density into exponential
// decay on a finite t-window.

#include <functional>
#include <span>
#include <vector>

#include "mellinstat/distributions.hpp"

namespace mellinstat {

struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
  double t_min = -40.0;
  double t_max = 40.0;
};

/// Log-moments m~_1..m~_n and log-cumulants k~_1..k~_n, n <= 4. One list is
/// always computed from the other, so they agree exactly.
struct LogStats {
  int order = 0;
  std::vector<double> log_moments;
  std::vector<double> log_cumulants;

  static LogStats from_moments(std::vector<double> moments);
  static LogStats from_cumulants(std::vector<double> cumulants);
};

using Density = std::function<double(double)>;

/// Numerical Mellin transform int_0^inf x^{s-1} f(x) dx.
/// Throws NonConvergence when the subdivision budget runs out.
double mellin_numeric(const Density& density, double s, const QuadratureConfig& cfg = {});

/// Log-moments E[(log X)^n], n = 1..n_max (n_max <= 4), with cumulants filled in.
LogStats log_moments_numeric(const Density& density, int n_max, const QuadratureConfig& cfg = {});

/// k~_1 = m~_1, k~_2 = m~_2 - m~_1^2, k~_3 = m~_3 - 3 m~_1 m~_2 + 2 m~_1^3,
/// k~_4 = m~_4 - 4 m~_1 m~_3 - 3 m~_2^2 + 12 m~_1^2 m~_2 - 6 m~_1^4.
/// Accepts 1..4 entries; longer input throws UnsupportedOrder.
std::vector<double> moments_to_cumulants(std::span<const double> log_moments);

/// Inverse of moments_to_cumulants.
std::vector<double> cumulants_to_moments(std::span<const double> log_cumulants);

/// m~_4 - 4 m~_1 m~_3 + 6 m~_1^2 m~_2 - 3 m~_1^4: the fourth *central*
/// log-moment. It coincides with k~_4 only when m~_2 = m~_1^2 (zero variance);
/// in general k~_4 = this - 3 k~_2^2.
double fourth_central_log_moment(std::span<const double> log_moments);

/// max_s |Phi_numeric(compound, s) - Phi(speckle, s) Phi(texture, s)| / Phi(...)
/// over s_grid, using components(compound). Throws std::invalid_argument for
/// laws without a product factorisation.
double verify_convolution(const DistributionSpec& compound, std::span<const double> s_grid,
                          const QuadratureConfig& cfg = {});

}  // namespace mellinstat
