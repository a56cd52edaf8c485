#include "vilenkin/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace vilenkin {

namespace {

void require_p(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument(fmt::format("p = {} must be positive", p));
}

// compact[k][r] = mean of f over the residue class r mod M_k.
std::vector<std::vector<Complex>> compact_averages(const GridFunction& f) {
  const auto& cfg = f.config();
  const int N = cfg.depth();
  std::vector<std::vector<Complex>> c(static_cast<std::size_t>(N) + 1);
  c[static_cast<std::size_t>(N)].assign(f.values().begin(), f.values().end());
  for (int k = N - 1; k >= 0; --k) {
    const auto& up = c[static_cast<std::size_t>(k) + 1];
    auto& cur = c[static_cast<std::size_t>(k)];
    const std::size_t Mk = cfg.cumprod(k);
    const int m = cfg.radix(k);
    cur.assign(Mk, Complex{});
    for (int d = 0; d < m; ++d) {
      const std::size_t off = static_cast<std::size_t>(d) * Mk;
      for (std::size_t r = 0; r < Mk; ++r) cur[r] += up[r + off];
    }
    for (auto& v : cur) v /= static_cast<double>(m);
  }
  return c;
}

GridFunction expand_compact(const GroupConfig& cfg, const std::vector<Complex>& c) {
  GridFunction out(cfg);
  const std::size_t Mk = c.size();
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = c[x % Mk];
  return out;
}

}  // namespace

Martingale::Martingale(GroupConfig cfg, std::vector<GridFunction> levels)
    : cfg_(std::move(cfg)), levels_(std::move(levels)) {
  const int N = cfg_.depth();
  if (levels_.size() != static_cast<std::size_t>(N) + 1) {
    throw std::invalid_argument(fmt::format("martingale needs {} levels, got {}", N + 1, levels_.size()));
  }
  for (const auto& l : levels_) require_same_config(cfg_, l.config());
  const double tol = 1e-10 * std::max(1.0, levels_.back().max_abs());
  for (int n = 0; n <= N; ++n) {
    const auto& f = levels_[static_cast<std::size_t>(n)];
    const std::size_t Mn = cfg_.cumprod(n);
    for (std::size_t x = Mn; x < f.size(); ++x) {
      if (std::abs(f[x] - f[x % Mn]) > tol) {
        throw std::invalid_argument(fmt::format("level {} is not constant on the cell of point {}", n, x));
      }
    }
  }
  for (int n = 0; n < N; ++n) {
    const GridFunction avg = cell_average(levels_[static_cast<std::size_t>(n) + 1], n);
    if (max_abs_difference(avg, levels_[static_cast<std::size_t>(n)]) > tol) {
      throw std::invalid_argument(fmt::format("level {} is not the cell average of level {}", n, n + 1));
    }
  }
}

GridFunction cell_average(const GridFunction& f, int n) {
  const auto& cfg = f.config();
  if (n < 0 || n > cfg.depth()) throw std::out_of_range(fmt::format("cell level {} outside [0, {}]", n, cfg.depth()));
  const std::size_t Mn = cfg.cumprod(n);
  std::vector<Complex> c(Mn);
  for (std::size_t x = 0; x < f.size(); ++x) c[x % Mn] += f[x];
  const double scale = static_cast<double>(Mn) / static_cast<double>(cfg.size());
  for (auto& v : c) v *= scale;
  return expand_compact(cfg, c);
}

Martingale martingale_from_function(const GridFunction& f) {
  const auto c = compact_averages(f);
  std::vector<GridFunction> levels;
  levels.reserve(c.size());
  for (const auto& level : c) levels.push_back(expand_compact(f.config(), level));
  return Martingale(f.config(), std::move(levels));
}

Martingale martingale_from_partial_sums(const GridFunction& f) {
  const auto& cfg = f.config();
  const Spectrum s = forward(f);
  std::vector<GridFunction> levels;
  for (int n = 0; n <= cfg.depth(); ++n) {
    Spectrum t(cfg);
    for (std::size_t k = 0; k < cfg.cumprod(n); ++k) t[k] = s[k];
    levels.push_back(inverse(t));
  }
  return Martingale(cfg, std::move(levels));
}

GridFunction maximal_function(const Martingale& mart) {
  GridFunction out(mart.config());
  for (const auto& level : mart.levels()) {
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = std::max(out[x].real(), std::abs(level[x]));
  }
  return out;
}

GridFunction maximal_function(const GridFunction& f) {
  const auto c = compact_averages(f);
  std::vector<double> best(f.size(), 0.0);
  for (const auto& level : c) {
    const std::size_t Mk = level.size();
    for (std::size_t x = 0; x < best.size(); ++x) best[x] = std::max(best[x], std::abs(level[x % Mk]));
  }
  return GridFunction::from_real(f.config(), best);
}

double lp_quasinorm(const GridFunction& g, double p) {
  require_p(p);
  double acc = 0.0;
  for (const auto& v : g.values()) acc += std::pow(std::abs(v), p);
  return std::pow(acc / static_cast<double>(g.size()), 1.0 / p);
}

double weak_lp_power(const GridFunction& g, double p) {
  require_p(p);
  std::vector<double> a(g.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(g[i]);
  std::sort(a.begin(), a.end());
  const auto total = static_cast<double>(a.size());
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] <= 0.0 || (i > 0 && a[i] == a[i - 1])) continue;
    // sup over lambda < a[i] of lambda^p mu(|g| > lambda) = a[i]^p mu(|g| >= a[i]).
    best = std::max(best, std::pow(a[i], p) * static_cast<double>(a.size() - i) / total);
  }
  return best;
}

double weak_lp_quasinorm(const GridFunction& g, double p) {
  return std::pow(weak_lp_power(g, p), 1.0 / p);
}

double hardy_quasinorm(const Martingale& mart, double p) {
  return lp_quasinorm(maximal_function(mart), p);
}

double hardy_quasinorm(const GridFunction& f, double p) {
  return lp_quasinorm(maximal_function(f), p);
}

AtomCheck check_atom(const Atom& a) {
  const auto& cfg = a.values.config();
  if (a.support_level < 0 || a.support_level > cfg.depth()) {
    throw std::out_of_range(fmt::format("atom support level {} outside [0, {}]", a.support_level, cfg.depth()));
  }
  require_p(a.p);
  AtomCheck c;
  const std::size_t Ml = cfg.cumprod(a.support_level);
  c.bound = std::pow(static_cast<double>(Ml), 1.0 / a.p);
  const double tol = 1e-12 * std::max(1.0, c.bound);
  c.supported = true;
  Complex sum{};
  for (std::size_t x = 0; x < a.values.size(); ++x) {
    const double v = std::abs(a.values[x]);
    c.sup_norm = std::max(c.sup_norm, v);
    if (x % Ml != 0 && v != 0.0) c.supported = false;
    sum += a.values[x];
  }
  c.mean = std::abs(sum) / static_cast<double>(cfg.size());
  c.mean_zero = c.mean <= tol;
  c.bounded = c.sup_norm <= c.bound + tol;
  return c;
}

bool validate_atom(const Atom& a) { return check_atom(a).ok(); }

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Atom random_atom(const GroupConfig& cfg, int level, double p, std::mt19937_64& rng, int resolution) {
  require_p(p);
  if (level < 0 || level >= cfg.depth()) {
    throw std::out_of_range(fmt::format("atom level {} outside [0, {})", level, cfg.depth()));
  }
  if (resolution < 1) throw std::invalid_argument("atom resolution must be at least 1");
  const int fine = std::min(level + resolution, cfg.depth());
  const std::size_t Ml = cfg.cumprod(level);
  const std::size_t cells = cfg.cumprod(fine) / Ml;
  std::vector<double> v(cells);
  double peak = 0.0;
  while (peak < 1e-12) {
    double mean = 0.0;
    for (auto& x : v) {
      x = 2.0 * unit_uniform(rng) - 1.0;
      mean += x;
    }
    mean /= static_cast<double>(cells);
    peak = 0.0;
    for (auto& x : v) {
      x -= mean;
      peak = std::max(peak, std::abs(x));
    }
  }
  const double scale = std::pow(static_cast<double>(Ml), 1.0 / p) / peak;
  std::vector<double> values(cfg.size(), 0.0);
  for (std::size_t x = 0; x < cfg.size(); x += Ml) values[x] = v[(x / Ml) % cells] * scale;
  return Atom{GridFunction::from_real(cfg, values), level, p};
}

Atom random_atom(const GroupConfig& cfg, int level, double p, std::uint64_t seed, int resolution) {
  std::mt19937_64 rng(seed);
  return random_atom(cfg, level, p, rng, resolution);
}

}  // namespace vilenkin
