#include "mellinstat/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "mellinstat/family_io.hpp"
#include "mellinstat/rng.hpp"

namespace mellinstat {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double draw_weibull(Variates& v, double z, double b) {
  return z * std::pow(-std::log(v.uniform_open()), 1.0 / b);
}

double draw_simple(const DistributionSpec& spec, Variates& v) {
  return std::visit(
      overloaded{
          [&](const GammaPower& p) { return p.mu / p.L * v.gamma(p.L); },
          [&](const Nakagami& p) { return std::sqrt(p.mu * p.mu / p.L * v.gamma(p.L)); },
          [&](const Maxwell& p) {
            const double a = v.normal(), b = v.normal(), c = v.normal();
            return p.sigma * std::sqrt(a * a + b * b + c * c);
          },
          [&](const Weibull& p) { return draw_weibull(v, p.z, p.b); },
          [&](const Rayleigh& p) { return draw_weibull(v, p.z, 2.0); },
          [&](const InverseGamma& p) { return p.M * p.mu / v.gamma(p.M); },
          [&](const auto&) -> double {
            throw std::logic_error("draw_simple called with a compound law");
          },
      },
      spec.params());
}

void require_n(std::size_t n) {
  if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
}

}  // namespace

SampleBatch sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  require_n(n);
  if (auto parts = components(spec)) {
    auto batch = sample_compound(parts->speckle, parts->texture, n, seed);
    batch.family = spec;
    return batch;
  }
  SampleBatch batch{spec, seed, {}, std::nullopt, std::nullopt};
  batch.values.resize(n);
  Variates v(seed);
  for (auto& x : batch.values) x = draw_simple(spec, v);
  return batch;
}

SampleBatch sample_compound(const DistributionSpec& speckle, const DistributionSpec& texture,
                            std::size_t n, std::uint64_t seed) {
  require_n(n);
  if (speckle.is_compound() || texture.is_compound())
    throw std::invalid_argument("sample_compound: components must be simple laws, got " +
                                family_key(speckle.family()) + " x " + family_key(texture.family()));
  SampleBatch batch{speckle, seed, std::vector<double>(n), std::vector<double>(n),
                    std::vector<double>(n)};
  Variates speckle_stream(seed);
  Variates texture_stream(seed ^ kTextureStreamXor);
  auto& z = *batch.texture;
  auto& u = *batch.speckle;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = draw_simple(texture, texture_stream);
    u[i] = draw_simple(speckle, speckle_stream);
    batch.values[i] = u[i] * z[i];
  }
  return batch;
}

}  // namespace mellinstat
