#include "vilenkin/means.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "vilenkin/kernels.hpp"
#include "vilenkin/number_system.hpp"

namespace vilenkin {

GridFunction partial_sum(const Spectrum& s, std::size_t n) {
  if (n > s.size()) {
    throw std::out_of_range(fmt::format("partial_sum: n = {} exceeds M_N = {}", n, s.size()));
  }
  Spectrum t(s.config());
  for (std::size_t k = 0; k < n; ++k) t[k] = s[k];
  return inverse(t);
}

GridFunction fejer_mean(const Spectrum& s, std::size_t n) {
  Spectrum t = fejer_multiplier(s.config(), n);
  for (std::size_t j = 0; j < n; ++j) t[j] *= s[j];
  return inverse(t);
}

GridFunction fejer_mean_convolution(const GridFunction& f, std::size_t n) {
  return convolve_direct(f, fejer_kernel(f.config(), n));
}

GridFunction restricted_maximal(const Spectrum& s, std::span<const std::size_t> indices) {
  if (indices.empty()) throw std::invalid_argument("restricted_maximal: empty index list");
  GridFunction out(s.config());
  for (std::size_t n : indices) {
    if (n == 0 || n > s.size()) {
      throw std::out_of_range(fmt::format("restricted_maximal: index {} outside [1, {}]", n, s.size()));
    }
    const GridFunction sigma = fejer_mean(s, n);
    for (std::size_t x = 0; x < out.size(); ++x) {
      out[x] = std::max(out[x].real(), std::abs(sigma[x]));
    }
  }
  return out;
}

double fejer_weight(const GroupConfig& cfg, std::size_t n, double p) {
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument(fmt::format("p = {} outside (0, 1/2)", p));
  const IndexProfile prof = expand(n, cfg);
  const double ratio = static_cast<double>(cfg.cumprod(prof.low)) /
                       static_cast<double>(cfg.cumprod(prof.high));
  return std::pow(ratio, 1.0 / p - 2.0);
}

GridFunction weighted_sigma(const Spectrum& s, std::size_t n, double p) {
  const double w = fejer_weight(s.config(), n, p);
  GridFunction sigma = fejer_mean(s, n);
  for (auto& v : sigma.values()) v = w * std::abs(v);
  return sigma;
}

namespace presets {

std::vector<std::size_t> powers(const GroupConfig& cfg) {
  return {cfg.cumprods().begin(), cfg.cumprods().end()};
}

std::vector<std::size_t> powers_plus_one(const GroupConfig& cfg) {
  std::vector<std::size_t> out;
  for (int k = 0; k < cfg.depth(); ++k) {
    if (cfg.cumprod(k) + 1 < cfg.size()) out.push_back(cfg.cumprod(k) + 1);
  }
  return out;
}

std::vector<std::size_t> two_power_plus_one(const GroupConfig& cfg) {
  std::vector<std::size_t> out;
  for (std::size_t v = 1; v + 1 < cfg.size(); v *= 2) out.push_back(v + 1);
  return out;
}

std::vector<std::size_t> bounded_rho(const GroupConfig& cfg, int c) {
  std::vector<std::size_t> out;
  for (std::size_t n = 1; n < cfg.size(); ++n) {
    if (in_bounded_set(n, c, cfg)) out.push_back(n);
  }
  return out;
}

std::vector<std::size_t> all_indices(const GroupConfig& cfg) {
  if (cfg.size() > 4096) {
    throw std::invalid_argument("the unrestricted maximal operator is limited to M_N <= 4096");
  }
  std::vector<std::size_t> out(cfg.size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = n + 1;
  return out;
}

}  // namespace presets

}  // namespace vilenkin
