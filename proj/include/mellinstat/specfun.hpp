#pragma once

// Special-function kernel: log-gamma, digamma, polygamma and the modified
// Bessel function of the second kind on the positive real axis.
//
// All functions are pure and reentrant. Invalid arguments raise DomainError.

namespace mellinstat {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// log Gamma(x) for x > 0.
double ln_gamma(double x);

/// psi(x) = d/dx log Gamma(x) for x > 0.
double digamma(double x);

/// psi^(order)(x), the order-th derivative of digamma, for order >= 1.
/// Its sign is (-1)^(order+1).
double polygamma(int order, double x);

/// Hurwitz zeta sum_{n>=0} (q+n)^(-s) for integer s >= 2, q > 0.
double hurwitz_zeta(int s, double q);

/// Gamma(a) / Gamma(b). Exact products are used when a - b is a small integer,
/// so e.g. gamma_ratio(n + 1, 1) == n! bit-for-bit while n! is representable.
double gamma_ratio(double a, double b);

/// log(Gamma(a) / Gamma(b)), same integer-offset handling as gamma_ratio.
double log_gamma_ratio(double a, double b);

/// K_nu(x) for x > 0. Symmetric in nu. Throws std::overflow_error when the
/// value exceeds the double range (tiny x with large |nu|).
double bessel_k(double nu, double x);

/// log K_nu(x); finite wherever K_nu(x) is, including where bessel_k overflows.
double log_bessel_k(double nu, double x);

}  // namespace mellinstat
