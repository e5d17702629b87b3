#pragma once

// Seeded generation for every catalog law. Compound laws are drawn through
// the product model x = u * z: texture z first, then speckle u at unit scale,
// from two independent SplitMix64 streams.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mellinstat/distributions.hpp"

namespace mellinstat {

/// XOR applied to the seed to derive the texture stream; the speckle stream
/// uses the seed itself. (Fractional bits of sqrt(2).)
inline constexpr std::uint64_t kTextureStreamXor = 0x6A09E667F3BCC909ULL;

struct SampleBatch {
  DistributionSpec family;
  std::uint64_t seed = 0;
  std::vector<double> values;
  /// Multiplicative texture factor z_i of each draw (compound draws only).
  std::optional<std::vector<double>> texture;
  /// Unit-scale speckle u_i, values[i] == speckle[i] * texture[i] exactly.
  std::optional<std::vector<double>> speckle;
};

/// n independent draws of spec. Deterministic in (spec, n, seed).
/// Throws std::invalid_argument for n == 0.
SampleBatch sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

/// x_i = u_i * z_i with u ~ speckle, z ~ texture. Both must be simple laws.
/// The returned batch records the speckle law as its family.
SampleBatch sample_compound(const DistributionSpec& speckle, const DistributionSpec& texture,
                            std::size_t n, std::uint64_t seed);

}  // namespace mellinstat
