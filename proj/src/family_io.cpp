#include "mellinstat/family_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mellinstat {
namespace {

constexpr std::array<std::string_view, 10> kKeys = {
    "gamma", "nakagami", "maxwell", "weibull", "rayleigh", "ggamma", "k", "wnak", "fisher", "invgamma"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view text, std::string_view key) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("parameter " + std::string(key) + ": not a number: '" +
                                std::string(text) + "'");
  return v;
}

}  // namespace

std::string family_key(Family family) { return std::string(kKeys.at(static_cast<std::size_t>(family))); }

Family parse_family(std::string_view key) {
  for (std::size_t i = 0; i < kKeys.size(); ++i)
    if (kKeys[i] == key) return static_cast<Family>(i);
  std::string msg = "unknown family '" + std::string(key) + "'; expected one of";
  for (auto k : kKeys) msg += " " + std::string(k);
  throw std::invalid_argument(msg);
}

std::vector<Family> all_families() {
  std::vector<Family> out;
  for (std::size_t i = 0; i < kKeys.size(); ++i) out.push_back(static_cast<Family>(i));
  return out;
}

std::vector<std::string> parameter_names(Family family) {
  switch (family) {
    case Family::GammaPower: return {"L", "mu"};
    case Family::Nakagami: return {"L", "mu"};
    case Family::Maxwell: return {"sigma"};
    case Family::Weibull: return {"z", "b"};
    case Family::Rayleigh: return {"z"};
    case Family::GammaGamma: return {"L", "M", "mu"};
    case Family::KAmplitude: return {"alpha", "b"};
    case Family::WeibullNakagami: return {"c", "alpha", "b"};
    case Family::Fisher: return {"L", "M", "mu"};
    case Family::InverseGamma: return {"M", "mu"};
  }
  return {};
}

std::map<std::string, double> parse_params(std::string_view text) {
  std::map<std::string, double> out;
  text = trim(text);
  if (text.empty()) return out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw std::invalid_argument("malformed parameter '" + std::string(item) + "'; expected key=value");
    const std::string key(trim(item.substr(0, eq)));
    if (out.count(key)) throw std::invalid_argument("parameter " + key + " given twice");
    out[key] = parse_real(item.substr(eq + 1), key);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

DistributionSpec make_spec(Family family, const std::map<std::string, double>& params) {
  const auto names = parameter_names(family);
  for (const auto& [key, value] : params) {
    bool known = false;
    for (const auto& n : names) known |= (n == key);
    if (!known)
      throw std::invalid_argument("family " + family_key(family) + " has no parameter '" + key + "'");
  }
  std::vector<double> v;
  for (const auto& n : names) {
    auto it = params.find(n);
    if (it == params.end())
      throw std::invalid_argument("family " + family_key(family) + " requires parameter '" + n + "'");
    v.push_back(it->second);
  }
  switch (family) {
    case Family::GammaPower: return GammaPower{v[0], v[1]};
    case Family::Nakagami: return Nakagami{v[0], v[1]};
    case Family::Maxwell: return Maxwell{v[0]};
    case Family::Weibull: return Weibull{v[0], v[1]};
    case Family::Rayleigh: return Rayleigh{v[0]};
    case Family::GammaGamma: return GammaGamma{v[0], v[1], v[2]};
    case Family::KAmplitude: return KAmplitude{v[0], v[1]};
    case Family::WeibullNakagami: return WeibullNakagami{v[0], v[1], v[2]};
    case Family::Fisher: return Fisher{v[0], v[1], v[2]};
    case Family::InverseGamma: return InverseGamma{v[0], v[1]};
  }
  throw std::invalid_argument("unreachable family");
}

std::map<std::string, double> spec_params(const DistributionSpec& spec) {
  const auto names = parameter_names(spec.family());
  std::vector<double> v = std::visit(
      [](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GammaPower> || std::is_same_v<P, Nakagami>) return std::vector{p.L, p.mu};
        else if constexpr (std::is_same_v<P, Maxwell>) return std::vector{p.sigma};
        else if constexpr (std::is_same_v<P, Weibull>) return std::vector{p.z, p.b};
        else if constexpr (std::is_same_v<P, Rayleigh>) return std::vector{p.z};
        else if constexpr (std::is_same_v<P, GammaGamma> || std::is_same_v<P, Fisher>) return std::vector{p.L, p.M, p.mu};
        else if constexpr (std::is_same_v<P, KAmplitude>) return std::vector{p.alpha, p.b};
        else if constexpr (std::is_same_v<P, WeibullNakagami>) return std::vector{p.c, p.alpha, p.b};
        else return std::vector{p.M, p.mu};
      },
      spec.params());
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = v[i];
  return out;
}

std::string describe(const DistributionSpec& spec) {
  std::string out = family_key(spec.family());
  const auto values = spec_params(spec);
  for (const auto& n : parameter_names(spec.family())) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, values.at(n));
    out += ' ' + n + '=' + std::string(buf, res.ptr);
  }
  return out;
}

}  // namespace mellinstat
