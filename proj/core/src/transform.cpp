#include "vilenkin/transform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace vilenkin {

namespace {

// exp(2 pi i q / order) for q = 0..order-1.
std::vector<Complex> root_table(int order, bool conjugate) {
  std::vector<Complex> t(static_cast<std::size_t>(order));
  for (int q = 0; q < order; ++q) {
    Complex w = unit_root(order, q);
    t[static_cast<std::size_t>(q)] = conjugate ? std::conj(w) : w;
  }
  return t;
}

// Phase of psi_n(x) in units of 2 pi / L, L = lcm(m).
long long character_phase(const GroupConfig& cfg, std::size_t n, std::size_t x) {
  const long long L = cfg.phase_modulus();
  long long phase = 0;
  for (int k = 0; k < cfg.depth(); ++k) {
    const auto m = static_cast<std::size_t>(cfg.radix(k));
    const auto nk = static_cast<long long>(n % m);
    const auto xk = static_cast<long long>(x % m);
    n /= m;
    x /= m;
    if (nk != 0 && xk != 0) phase += ((nk * xk) % static_cast<long long>(m)) * (L / static_cast<long long>(m));
  }
  return phase % L;
}

// In-place multidimensional DFT over Z_{m_0} x ... x Z_{m_{N-1}}.
// sign = -1 analyses (conjugate kernel), +1 synthesises.
void stride_passes(const GroupConfig& cfg, std::span<Complex> a, int sign) {
  const std::size_t total = cfg.size();
  std::vector<Complex> in;
  std::vector<Complex> out;
  for (int k = 0; k < cfg.depth(); ++k) {
    const int r = cfg.radix(k);
    const std::size_t stride = cfg.cumprod(k);
    const std::size_t block = cfg.cumprod(k + 1);
    if (r == 2) {
      for (std::size_t base = 0; base < total; base += block) {
        for (std::size_t o = 0; o < stride; ++o) {
          Complex& lo = a[base + o];
          Complex& hi = a[base + o + stride];
          const Complex s = lo + hi;
          hi = lo - hi;
          lo = s;
        }
      }
      continue;
    }
    const auto tw = root_table(r, sign < 0);
    const auto ur = static_cast<std::size_t>(r);
    in.resize(ur);
    out.resize(ur);
    for (std::size_t base = 0; base < total; base += block) {
      for (std::size_t o = 0; o < stride; ++o) {
        const std::size_t p = base + o;
        for (std::size_t x = 0; x < ur; ++x) in[x] = a[p + x * stride];
        for (std::size_t f = 0; f < ur; ++f) {
          Complex acc = in[0];
          for (std::size_t x = 1; x < ur; ++x) acc += in[x] * tw[(f * x) % ur];
          out[f] = acc;
        }
        for (std::size_t f = 0; f < ur; ++f) a[p + f * stride] = out[f];
      }
    }
  }
}

}  // namespace

Complex unit_root(int order, long long q) {
  if (order <= 0) throw std::invalid_argument("root order must be positive");
  q %= order;
  if (q < 0) q += order;
  // Quarter turns are exact.
  if ((4 * q) % order == 0) {
    switch ((4 * q) / order) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(order);
  return {std::cos(angle), std::sin(angle)};
}

Complex rademacher(const GroupConfig& cfg, int k, const GroupPoint& x) {
  return rademacher(cfg, k, index_from_point(cfg, x));
}

Complex rademacher(const GroupConfig& cfg, int k, std::size_t x) {
  if (k < 0 || k >= cfg.depth()) {
    throw std::out_of_range(fmt::format("Rademacher index {} outside [0, {})", k, cfg.depth()));
  }
  if (x >= cfg.size()) throw std::out_of_range("point index outside the group");
  return unit_root(cfg.radix(k), digit_of(cfg, x, k));
}

Complex character(const GroupConfig& cfg, std::size_t n, const GroupPoint& x) {
  return character(cfg, n, index_from_point(cfg, x));
}

Complex character(const GroupConfig& cfg, std::size_t n, std::size_t x) {
  if (n >= cfg.size()) {
    throw std::out_of_range(fmt::format("character index {} outside [0, {})", n, cfg.size()));
  }
  if (x >= cfg.size()) throw std::out_of_range("point index outside the group");
  return unit_root(cfg.phase_modulus(), character_phase(cfg, n, x));
}

GridFunction character_function(const GroupConfig& cfg, std::size_t n) {
  if (n >= cfg.size()) throw std::out_of_range("character index outside the group");
  const auto table = root_table(cfg.phase_modulus(), false);
  GridFunction f(cfg);
  for (std::size_t x = 0; x < cfg.size(); ++x) {
    f[x] = table[static_cast<std::size_t>(character_phase(cfg, n, x))];
  }
  return f;
}

GridFunction rademacher_function(const GroupConfig& cfg, int k) {
  if (k < 0 || k >= cfg.depth()) throw std::out_of_range("Rademacher index out of range");
  return character_function(cfg, cfg.cumprod(k));
}

Spectrum forward(const GridFunction& f) {
  std::vector<Complex> a(f.values().begin(), f.values().end());
  stride_passes(f.config(), a, -1);
  const double scale = 1.0 / static_cast<double>(f.config().size());
  for (auto& v : a) v *= scale;
  return Spectrum(f.config(), std::move(a));
}

GridFunction inverse(const Spectrum& s) {
  std::vector<Complex> a(s.values().begin(), s.values().end());
  stride_passes(s.config(), a, +1);
  return GridFunction(s.config(), std::move(a));
}

Spectrum forward_naive(const GridFunction& f) {
  const auto& cfg = f.config();
  const auto table = root_table(cfg.phase_modulus(), true);
  Spectrum s(cfg);
  const double scale = 1.0 / static_cast<double>(cfg.size());
  for (std::size_t n = 0; n < cfg.size(); ++n) {
    Complex acc{};
    for (std::size_t x = 0; x < cfg.size(); ++x) {
      acc += f[x] * table[static_cast<std::size_t>(character_phase(cfg, n, x))];
    }
    s[n] = acc * scale;
  }
  return s;
}

GridFunction inverse_naive(const Spectrum& s) {
  const auto& cfg = s.config();
  const auto table = root_table(cfg.phase_modulus(), false);
  GridFunction f(cfg);
  for (std::size_t x = 0; x < cfg.size(); ++x) {
    Complex acc{};
    for (std::size_t n = 0; n < cfg.size(); ++n) {
      acc += s[n] * table[static_cast<std::size_t>(character_phase(cfg, n, x))];
    }
    f[x] = acc;
  }
  return f;
}

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
  require_same_config(f.config(), g.config());
  Spectrum a = forward(f);
  const Spectrum b = forward(g);
  for (std::size_t n = 0; n < a.size(); ++n) a[n] *= b[n];
  return inverse(a);
}

GridFunction convolve_direct(const GridFunction& f, const GridFunction& g) {
  require_same_config(f.config(), g.config());
  const auto& cfg = f.config();
  GridFunction out(cfg);
  const double scale = 1.0 / static_cast<double>(cfg.size());
  for (std::size_t x = 0; x < cfg.size(); ++x) {
    Complex acc{};
    for (std::size_t t = 0; t < cfg.size(); ++t) acc += f[sub_indices(cfg, x, t)] * g[t];
    out[x] = acc * scale;
  }
  return out;
}

Complex inner_product(const GridFunction& f, const GridFunction& g) {
  require_same_config(f.config(), g.config());
  Complex acc{};
  for (std::size_t x = 0; x < f.size(); ++x) acc += f[x] * std::conj(g[x]);
  return acc / static_cast<double>(f.size());
}

GridFunction translate(const GridFunction& f, std::size_t t) {
  const auto& cfg = f.config();
  if (t >= cfg.size()) throw std::out_of_range("translation outside the group");
  GridFunction out(cfg);
  for (std::size_t x = 0; x < cfg.size(); ++x) out[x] = f[sub_indices(cfg, x, t)];
  return out;
}

GridFunction multiply(const GridFunction& f, const GridFunction& g) {
  require_same_config(f.config(), g.config());
  GridFunction out = f;
  for (std::size_t x = 0; x < out.size(); ++x) out[x] *= g[x];
  return out;
}

}  // namespace vilenkin
