#pragma once

// Textual names of the catalog families and the `key=value,...` parameter
// grammar shared by the command-line tool and the Python module.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mellinstat/distributions.hpp"

namespace mellinstat {

/// gamma | nakagami | maxwell | weibull | rayleigh | ggamma | k | wnak | fisher | invgamma
std::string family_key(Family family);

/// Throws std::invalid_argument for an unknown key.
Family parse_family(std::string_view key);

std::vector<Family> all_families();

/// Parameter names in declaration order, e.g. {"L", "mu"} for gamma.
std::vector<std::string> parameter_names(Family family);

/// Parses "L=1,mu=2". Throws std::invalid_argument on malformed input.
std::map<std::string, double> parse_params(std::string_view text);

/// Builds a validated spec. Throws std::invalid_argument for missing or unknown
/// keys and DomainError for out-of-range values.
DistributionSpec make_spec(Family family, const std::map<std::string, double>& params);

/// Parameter values keyed by name.
std::map<std::string, double> spec_params(const DistributionSpec& spec);

/// "gamma L=1 mu=2", shortest round-trip formatting.
std::string describe(const DistributionSpec& spec);

}  // namespace mellinstat
