#include "mellinstat/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mellinstat/errors.hpp"
#include "mellinstat/quadrature.hpp"

namespace mellinstat {
namespace {

// B_{2j} / (2j)!, j = 1..12.
constexpr std::array<double, 12> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
    854513.0 / 138.0 / 1.1240007277776077e21,
    -236364091.0 / 2730.0 / 6.2044840173323941e23};

// B_{2j}, j = 1..8.
constexpr std::array<double, 8> kBernoulli = {1.0 / 6.0,     -1.0 / 30.0,   1.0 / 42.0,
                                              -1.0 / 30.0,   5.0 / 66.0,    -691.0 / 2730.0,
                                              7.0 / 6.0,     -3617.0 / 510.0};

void require_positive(double x, const char* fn) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError(std::string(fn) + ": argument must be finite and > 0, got " +
                      std::to_string(x));
}

double stirling_ln_gamma(double a) {
  const double inv = 1.0 / a;
  const double inv2 = inv * inv;
  double series = 0.0;
  double p = inv;
  for (int j = 1; j <= 8; ++j) {
    series += kBernoulli[j - 1] / (2.0 * j * (2.0 * j - 1.0)) * p;
    p *= inv2;
  }
  return (a - 0.5) * std::log(a) - a + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

constexpr int kZetaTerms = 40;

// zeta(k) - 1 for k = 0..kZetaTerms (entries below 2 unused).
const std::array<double, kZetaTerms + 1>& zeta_minus_one() {
  static const auto table = [] {
    std::array<double, kZetaTerms + 1> t{};
    for (int k = 2; k <= kZetaTerms; ++k) t[k] = hurwitz_zeta(k, 2.0);
    return t;
  }();
  return table;
}

// log Gamma(2 + eps) for |eps| <= 1/2 by its Taylor series around 2.
double ln_gamma_near_two(double eps) {
  const auto& z = zeta_minus_one();
  double acc = 0.0;
  for (int k = kZetaTerms; k >= 2; --k) {
    const double c = ((k % 2 == 0) ? 1.0 : -1.0) * z[k] / k;
    acc = (acc + c) * eps;
  }
  return eps * ((1.0 - kEulerGamma) + acc);
}

double digamma_asymptotic(double a) {
  const double inv2 = 1.0 / (a * a);
  double series = 0.0;
  double p = inv2;
  for (int k = 1; k <= 8; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k) * p;
    p *= inv2;
  }
  return std::log(a) - 0.5 / a - series;
}

bool is_small_integer(double d, int limit) {
  return d == std::nearbyint(d) && std::abs(d) <= limit;
}

double half_integer_log_bessel_k(int n, double x) {
  // K_{n+1/2}(x) = sqrt(pi/2x) e^{-x} sum_k (n+k)!/(k!(n-k)!) (2x)^{-k}
  double coef = 1.0;
  double sum = 1.0;
  const double inv2x = 0.5 / x;
  double p = 1.0;
  for (int k = 0; k < n; ++k) {
    coef *= static_cast<double>(n + k + 1) * (n - k) / (k + 1);
    p *= inv2x;
    sum += coef * p;
  }
  return 0.5 * std::log(std::numbers::pi / (2.0 * x)) - x + std::log(sum);
}

}  // namespace

double hurwitz_zeta(int s, double q) {
  if (s < 2) throw DomainError("hurwitz_zeta: s must be >= 2");
  require_positive(q, "hurwitz_zeta");
  // Direct sum until q + n clears the asymptotic threshold, then Euler-Maclaurin.
  const double threshold = 10.0 + s;
  int shift = 0;
  if (q < threshold) shift = static_cast<int>(std::ceil(threshold - q));
  const double a = q + shift;
  const double ds = s;

  double tail = std::pow(a, 1.0 - ds) / (ds - 1.0) + 0.5 * std::pow(a, -ds);
  double rising = ds;  // s (s+1) ... (s+2j-2)
  double p = std::pow(a, -ds - 1.0);
  const double inv_a2 = 1.0 / (a * a);
  for (int j = 1; j <= 12; ++j) {
    const double term = kBernoulliOverFactorial[j - 1] * rising * p;
    tail += term;
    if (std::abs(term) < 1e-18 * std::abs(tail)) break;
    rising *= (ds + 2.0 * j - 1.0) * (ds + 2.0 * j);
    p *= inv_a2;
  }
  double sum = tail;
  for (int n = shift - 1; n >= 0; --n) sum += std::pow(q + n, -ds);
  return sum;
}

double ln_gamma(double x) {
  require_positive(x, "ln_gamma");
  if (x < 0.5) return ln_gamma(x + 1.0) - std::log(x);
  if (x < 1.5) return ln_gamma_near_two(x - 1.0) - std::log1p(x - 1.0);
  if (x < 2.5) return ln_gamma_near_two(x - 2.0);
  if (x < 10.0) {
    double prod = 1.0;
    double a = x;
    while (a < 10.0) {
      prod *= a;
      a += 1.0;
    }
    return stirling_ln_gamma(a) - std::log(prod);
  }
  return stirling_ln_gamma(x);
}

double digamma(double x) {
  require_positive(x, "digamma");
  double shift = 0.0;
  double a = x;
  while (a < 10.0) {
    shift += 1.0 / a;
    a += 1.0;
  }
  return digamma_asymptotic(a) - shift;
}

double polygamma(int order, double x) {
  if (order < 1) throw DomainError("polygamma: order must be >= 1, got " + std::to_string(order));
  require_positive(x, "polygamma");
  double factorial = 1.0;
  for (int k = 2; k <= order; ++k) factorial *= k;
  const double sign = (order % 2 == 1) ? 1.0 : -1.0;
  return sign * factorial * hurwitz_zeta(order + 1, x);
}

double log_gamma_ratio(double a, double b) {
  require_positive(a, "log_gamma_ratio");
  require_positive(b, "log_gamma_ratio");
  const double d = a - b;
  if (is_small_integer(d, 64)) {
    double prod = 1.0;
    if (d >= 0)
      for (double t = b; t < a; t += 1.0) prod *= t;
    else
      for (double t = a; t < b; t += 1.0) prod /= t;
    if (std::isfinite(prod) && prod > 0.0) return std::log(prod);
  }
  return ln_gamma(a) - ln_gamma(b);
}

double gamma_ratio(double a, double b) {
  require_positive(a, "gamma_ratio");
  require_positive(b, "gamma_ratio");
  const double d = a - b;
  if (is_small_integer(d, 64)) {
    double prod = 1.0;
    if (d >= 0)
      for (double t = b; t < a; t += 1.0) prod *= t;
    else
      for (double t = a; t < b; t += 1.0) prod /= t;
    if (std::isfinite(prod) && prod > 0.0) return prod;
  }
  return std::exp(ln_gamma(a) - ln_gamma(b));
}

double log_bessel_k(double nu, double x) {
  require_positive(x, "bessel_k");
  if (!std::isfinite(nu)) throw DomainError("bessel_k: order must be finite");
  nu = std::abs(nu);

  const double twice = 2.0 * nu;
  if (twice == std::nearbyint(twice) && static_cast<long>(twice) % 2 == 1 && nu <= 25.0) {
    const double r = half_integer_log_bessel_k(static_cast<int>(nu - 0.5), x);
    if (std::isfinite(r)) return r;
  }

  // K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt. The dominant factor
  // exp(-x cosh t + nu t) peaks at t* = asinh(nu/x); integrate relative to it.
  const double t_star = std::asinh(nu / x);
  const double cosh_star = std::sqrt(1.0 + (nu / x) * (nu / x));
  auto rel_exponent = [&](double t) {
    const double dcosh = 2.0 * std::sinh(0.5 * (t + t_star)) * std::sinh(0.5 * (t - t_star));
    return -x * dcosh + nu * (t - t_star);
  };
  auto integrand = [&](double t) {
    return std::exp(rel_exponent(t)) * 0.5 * (1.0 + std::exp(-twice * t));
  };

  const double width = 1.0 / std::sqrt(std::hypot(x, nu));
  constexpr double kDrop = -60.0;
  double up = width;
  while (rel_exponent(t_star + up) > kDrop) up *= 2.0;
  double lo = 0.0;
  if (t_star > 0.0) {
    double down = width;
    while (t_star - down > 0.0 && rel_exponent(t_star - down) > kDrop) down *= 2.0;
    lo = std::max(0.0, t_star - down);
  }
  const std::array<double, 3> cuts = {t_star - width, t_star, t_star + width};
  const quad::Tolerance tol{0.0, 1e-13, 400};
  const auto res = quad::integrate(integrand, lo, t_star + up, tol, cuts);
  return -x * cosh_star + nu * t_star + std::log(res.value);
}

double bessel_k(double nu, double x) {
  const double lk = log_bessel_k(nu, x);
  if (lk > std::log(std::numeric_limits<double>::max()))
    throw std::overflow_error("bessel_k: K_" + std::to_string(nu) + "(" + std::to_string(x) +
                              ") exceeds the double range");
  return std::exp(lk);
}

}  // namespace mellinstat
