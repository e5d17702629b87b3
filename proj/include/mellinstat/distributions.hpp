#pragma once

// Catalog of simple and compound clutter laws on the positive half-line,
// described through their second-kind characteristic function
//
//   Phi(s) = E[X^(s-1)] = scale^(s-1) * prod_i Gamma(base_i + slope_i (s-1)) / Gamma(base_i)
//
// Every family here has that gamma-product structure, so the log-cumulants
// are polygamma sums and the Mellin-convolution of two laws just concatenates
// their factor lists.

#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace mellinstat {

enum class Family {
  GammaPower,
  Nakagami,
  Maxwell,
  Weibull,
  Rayleigh,
  GammaGamma,
  KAmplitude,
  WeibullNakagami,
  Fisher,
  InverseGamma,
};

/// Speckle power: gamma with L looks and mean mu.
struct GammaPower {
  double L;
  double mu;
  bool operator==(const GammaPower&) const = default;
};
/// Amplitude of GammaPower{L, mu^2}: mu is the root-mean-square amplitude.
struct Nakagami {
  double L;
  double mu;
  bool operator==(const Nakagami&) const = default;
};
struct Maxwell {
  double sigma;
  bool operator==(const Maxwell&) const = default;
};
struct Weibull {
  double z;  // scale
  double b;  // shape
  bool operator==(const Weibull&) const = default;
};
/// Weibull with b = 2; E[X^2] = z^2.
struct Rayleigh {
  double z;
  bool operator==(const Rayleigh&) const = default;
};
/// Product of GammaPower{L, 1} speckle and GammaPower{M, mu} texture.
struct GammaGamma {
  double L;
  double M;
  double mu;
  bool operator==(const GammaGamma&) const = default;
};
/// Rayleigh amplitude whose mean-square is gamma(alpha, rate b).
struct KAmplitude {
  double alpha;
  double b;
  bool operator==(const KAmplitude&) const = default;
};
/// Weibull(shape c) amplitude whose scale is Nakagami with z^2 ~ gamma(alpha, rate b).
struct WeibullNakagami {
  double c;
  double alpha;
  double b;
  bool operator==(const WeibullNakagami&) const = default;
};
/// Fisher (scaled beta-prime) law; mu is the scale, the mean is M mu / (M - 1).
struct Fisher {
  double L;
  double M;
  double mu;
  bool operator==(const Fisher&) const = default;
};
/// Inverse gamma with shape M and scale M * mu: the texture factor of Fisher.
struct InverseGamma {
  double M;
  double mu;
  bool operator==(const InverseGamma&) const = default;
};

class DistributionSpec {
 public:
  using Params = std::variant<GammaPower, Nakagami, Maxwell, Weibull, Rayleigh, GammaGamma,
                              KAmplitude, WeibullNakagami, Fisher, InverseGamma>;

  /// Throws DomainError unless every parameter is finite and > 0.
  template <class P>
    requires std::is_constructible_v<Params, P>
  DistributionSpec(P params) : params_(params) {  // NOLINT(google-explicit-constructor)
    validate();
  }

  Family family() const { return static_cast<Family>(params_.index()); }
  const Params& params() const { return params_; }
  template <class P>
  const P& as() const {
    return std::get<P>(params_);
  }
  template <class P>
  bool holds() const {
    return std::holds_alternative<P>(params_);
  }
  bool is_compound() const;

  bool operator==(const DistributionSpec&) const = default;

 private:
  void validate() const;
  Params params_;
};


/// Gamma(base + slope (s-1)) / Gamma(base).
struct GammaFactor {
  double base;
  double slope;
};

struct MellinSignature {
  double scale;
  std::vector<GammaFactor> factors;
};

/// Open interval of real s on which Phi(s) is finite.
struct Strip {
  double lower;
  double upper;
  bool contains(double s) const { return s > lower && s < upper; }
};

MellinSignature mellin_signature(const DistributionSpec& spec);
Strip analyticity_strip(const DistributionSpec& spec);

/// Density at x >= 0 (may be +inf at x = 0 for shapes below one).
double pdf(const DistributionSpec& spec, double x);
double log_pdf(const DistributionSpec& spec, double x);

/// Phi(s) = E[X^(s-1)]. Throws DomainError outside the analyticity strip.
double chf2_analytic(const DistributionSpec& spec, double s);

/// Psi(s) = log Phi(s), assembled from log-gamma differences.
double log_chf2_analytic(const DistributionSpec& spec, double s);

/// m_n = E[X^n] = Phi(n + 1). Throws MomentDoesNotExist past a heavy tail.
double classical_moment(const DistributionSpec& spec, int n);

/// Log-cumulants k_1..k_{n_max}, n_max in [1, 6].
std::vector<double> log_cumulants_analytic(const DistributionSpec& spec, int n_max);

/// The K-amplitude and Weibull-Nakagami log-cumulants keeping only the
/// texture polygamma term for n >= 2 (the speckle Gamma-factor dropped).
/// These disagree with the true log-cumulants and exist for comparison only.
/// Other families return log_cumulants_analytic.
std::vector<double> texture_only_log_cumulants(const DistributionSpec& spec, int n_max);

struct Components {
  DistributionSpec speckle;
  DistributionSpec texture;
};

/// Product-model factorisation X = U * Z of a compound law; nullopt for simple laws.
std::optional<Components> components(const DistributionSpec& spec);

}  // namespace mellinstat
