#include "vilenkin/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "vilenkin/number_system.hpp"

namespace vilenkin {

namespace {

void require_level(int n, int max_level, const char* what) {
  if (n < 0 || n > max_level) {
    throw std::out_of_range(fmt::format("{}: level {} outside [0, {}]", what, n, max_level));
  }
}

// Lowest nonzero digit position of a nonzero point index.
int lowest_digit(const GroupConfig& cfg, std::size_t x) {
  for (int k = 0; k < cfg.depth(); ++k) {
    if (digit_of(cfg, x, k) != 0) return k;
  }
  return cfg.depth();
}

}  // namespace

GridFunction dirichlet(const GroupConfig& cfg, std::size_t n) {
  if (n > cfg.size()) {
    throw std::out_of_range(fmt::format("dirichlet: n = {} exceeds M_N = {}", n, cfg.size()));
  }
  Spectrum s(cfg);
  for (std::size_t k = 0; k < n; ++k) s[k] = 1.0;
  return inverse(s);
}

GridFunction dirichlet_Mn_closed(const GroupConfig& cfg, int n) {
  require_level(n, cfg.depth(), "dirichlet_Mn_closed");
  GridFunction d(cfg);
  const auto mn = static_cast<double>(cfg.cumprod(n));
  for (std::size_t x = 0; x < cfg.size(); x += cfg.cumprod(n)) d[x] = mn;
  return d;
}

GridFunction dirichlet_sMn_closed(const GroupConfig& cfg, int s, int n) {
  require_level(n, cfg.depth() - 1, "dirichlet_sMn_closed");
  if (s < 1 || s >= cfg.radix(n)) {
    throw std::out_of_range(fmt::format("dirichlet_sMn_closed: s = {} outside [1, {})", s,
                                        cfg.radix(n)));
  }
  GridFunction d = dirichlet_Mn_closed(cfg, n);
  for (std::size_t x = 0; x < cfg.size(); x += cfg.cumprod(n)) {
    const Complex r = rademacher(cfg, n, x);
    Complex geometric{};
    Complex power{1.0, 0.0};
    for (int k = 0; k < s; ++k) {
      geometric += power;
      power *= r;
    }
    d[x] *= geometric;
  }
  return d;
}

double shift_identity_residual(const GroupConfig& cfg, std::size_t j, int n) {
  require_level(n, cfg.depth() - 1, "shift_identity_residual");
  const std::size_t mn = cfg.cumprod(n);
  if (j >= mn) {
    throw std::invalid_argument(fmt::format("shift identity needs j < M_n, got j={} M_n={}", j, mn));
  }
  const GridFunction lhs = dirichlet(cfg, j + mn);
  GridFunction rhs = multiply(rademacher_function(cfg, n), dirichlet(cfg, j));
  rhs += dirichlet(cfg, mn);
  return max_abs_difference(lhs, rhs);
}

Spectrum fejer_multiplier(const GroupConfig& cfg, std::size_t n) {
  if (n == 0) throw std::invalid_argument("Fejer kernel K_0 is undefined");
  if (n > cfg.size()) {
    throw std::out_of_range(fmt::format("fejer: n = {} exceeds M_N = {}", n, cfg.size()));
  }
  Spectrum s(cfg);
  const auto dn = static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = static_cast<double>(n - j) / dn;
  return s;
}

GridFunction fejer_kernel(const GroupConfig& cfg, std::size_t n) {
  return inverse(fejer_multiplier(cfg, n));
}

GridFunction fejer_Mn_closed(const GroupConfig& cfg, int n) {
  require_level(n, cfg.depth(), "fejer_Mn_closed");
  const std::size_t mn = cfg.cumprod(n);
  GridFunction k(cfg);
  for (std::size_t x = 0; x < cfg.size(); ++x) {
    if (x % mn == 0) {
      double acc = 0.0;
      for (std::size_t j = 0; j < mn; ++j) acc += static_cast<double>(mn - j);
      k[x] = acc / static_cast<double>(mn);
      continue;
    }
    const int t = lowest_digit(cfg, x);
    // x - x_t e_t in I_n  <=>  digits t+1..n-1 vanish.
    bool on_axis = true;
    for (int d = t + 1; d < n; ++d) {
      if (digit_of(cfg, x, d) != 0) {
        on_axis = false;
        break;
      }
    }
    if (on_axis) {
      k[x] = static_cast<double>(cfg.cumprod(t)) / (1.0 - rademacher(cfg, t, x));
    }
  }
  return k;
}

double kernel_l1_norm(const GroupConfig& cfg, std::size_t n) {
  const GridFunction k = fejer_kernel(cfg, n);
  double acc = 0.0;
  for (const auto& v : k.values()) acc += std::abs(v);
  return acc / static_cast<double>(cfg.size());
}

L1Sweep kernel_l1_sup(const GroupConfig& cfg, std::size_t first, std::size_t last) {
  if (first == 0 || first >= last) throw std::invalid_argument("kernel_l1_sup: empty range");
  L1Sweep out;
  for (std::size_t n = first; n < last; ++n) {
    const double v = kernel_l1_norm(cfg, n);
    if (v > out.sup) {
      out.sup = v;
      out.argmax = n;
    }
  }
  return out;
}

KernelCache::KernelCache(GroupConfig cfg, std::size_t budget_entries)
    : cfg_(std::move(cfg)), budget_(std::max<std::size_t>(budget_entries, 1)) {}

std::size_t KernelCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::shared_ptr<const GridFunction> KernelCache::get(Kind kind, std::size_t n) {
  const Key key{kind, n};
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      ++hits_;
      it->second.last_use.store(++clock_);
      return it->second.value;
    }
  }
  auto value = std::make_shared<const GridFunction>(kind == Kind::Fejer ? fejer_kernel(cfg_, n)
                                                                        : vilenkin::dirichlet(cfg_, n));
  std::unique_lock lock(mutex_);
  ++misses_;
  if (auto it = entries_.find(key); it != entries_.end()) {
    it->second.last_use.store(++clock_);
    return it->second.value;
  }
  while (entries_.size() >= budget_) {
    auto oldest = std::min_element(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
      return a.second.last_use.load() < b.second.last_use.load();
    });
    entries_.erase(oldest);
  }
  entries_.try_emplace(key, value, ++clock_);
  return value;
}

namespace {

// A(r) = int_{I_level(r)} |K_n| dmu for every residue r mod M_level.
std::vector<double> class_integrals(const GroupConfig& cfg, int level, const GridFunction& k) {
  const std::size_t ml = cfg.cumprod(level);
  std::vector<double> acc(ml, 0.0);
  for (std::size_t x = 0; x < cfg.size(); ++x) acc[x % ml] += std::abs(k[x]);
  for (auto& v : acc) v /= static_cast<double>(cfg.size());
  return acc;
}

void check_annulus_args(const GroupConfig& cfg, int level, int i, int j, std::size_t n) {
  if (level < 1 || level > cfg.depth()) throw std::out_of_range("annulus integral: level out of range");
  if (i < 0 || i >= j || j > level) throw std::invalid_argument("annulus integral: need 0 <= i < j <= level");
  if (n < cfg.cumprod(level)) throw std::invalid_argument("annulus integral: need n >= M_level");
  if (n > cfg.size()) throw std::out_of_range("annulus integral: n exceeds M_N");
}

}  // namespace

double annulus_integral_constant(const GroupConfig& cfg, int level, int i, int j, std::size_t n) {
  check_annulus_args(cfg, level, i, j, n);
  // t in I_level  <=>  x - t in I_level(x), so the integral is a class average.
  const auto integrals = class_integrals(cfg, level, fejer_kernel(cfg, n));
  const double ml = static_cast<double>(cfg.cumprod(level));
  const double scale = ml * ml / (static_cast<double>(cfg.cumprod(i)) * static_cast<double>(cfg.cumprod(j)));
  double best = 0.0;
  for (std::size_t r = 1; r < integrals.size(); ++r) {
    if (annulus_position(cfg, level, r) == AnnulusPosition{i, j}) {
      best = std::max(best, integrals[r] * scale);
    }
  }
  return best;
}

AnnulusSweep annulus_constant_sweep(const GroupConfig& cfg, int level, std::size_t first,
                              std::size_t last) {
  if (first >= last) throw std::invalid_argument("annulus_constant_sweep: empty range");
  check_annulus_args(cfg, level, 0, level, first);
  check_annulus_args(cfg, level, 0, level, last - 1);
  const std::size_t ml = cfg.cumprod(level);
  std::vector<AnnulusPosition> pos(ml, AnnulusPosition{0, 0});
  for (std::size_t r = 1; r < ml; ++r) pos[r] = annulus_position(cfg, level, r);

  AnnulusSweep out;
  const double mlsq = static_cast<double>(ml) * static_cast<double>(ml);
  for (std::size_t n = first; n < last; ++n) {
    const auto integrals = class_integrals(cfg, level, fejer_kernel(cfg, n));
    for (std::size_t r = 1; r < ml; ++r) {
      const auto [i, j] = pos[r];
      const double c = integrals[r] * mlsq /
                       (static_cast<double>(cfg.cumprod(i)) * static_cast<double>(cfg.cumprod(j)));
      if (c > out.constant) out = {c, i, j, n};
    }
  }
  return out;
}

UpperBoundCheck verify_upper_bound(const GroupConfig& cfg, std::size_t n, KernelCache* cache) {
  const IndexProfile prof = expand(n, cfg);
  if (cache != nullptr) require_same_config(cache->config(), cfg);

  const GridFunction kn = fejer_kernel(cfg, n);
  std::vector<double> denom(cfg.size(), 0.0);
  for (int l = prof.low; l <= prof.high; ++l) {
    const std::size_t ml = cfg.cumprod(l);
    std::shared_ptr<const GridFunction> kml =
        cache != nullptr ? cache->fejer(ml) : std::make_shared<const GridFunction>(fejer_kernel(cfg, ml));
    for (std::size_t x = 0; x < cfg.size(); ++x) {
      denom[x] += static_cast<double>(ml) * std::abs((*kml)[x]);
    }
  }
  // Closed-form zeros of K_{M_l} come out of the transform at rounding level.
  constexpr double kZero = 1e-9;
  UpperBoundCheck out;
  const double dn = static_cast<double>(n);
  for (std::size_t x = 0; x < cfg.size(); ++x) {
    const double num = std::abs(kn[x]);
    const double den = denom[x] / dn;
    if (den <= kZero) {
      if (num > kZero) out.zero_denominator_violation = true;
      continue;
    }
    if (num / den > out.constant) {
      out.constant = num / den;
      out.worst_point = x;
    }
  }
  return out;
}

std::vector<std::size_t> lower_bound_cell(const GroupConfig& cfg, int low) {
  if (low < 1 || low >= cfg.depth()) {
    throw std::invalid_argument(
        fmt::format("lower-bound cell needs 1 <= <n> < N, got <n> = {}", low));
  }
  const std::size_t base = cfg.cumprod(low - 1) + cfg.cumprod(low);
  std::vector<std::size_t> cell;
  for (std::size_t x = base; x < cfg.size(); x += cfg.cumprod(low + 1)) cell.push_back(x);
  return cell;
}

LowerBoundCheck verify_lower_bound(const GroupConfig& cfg, std::size_t n) {
  const IndexProfile prof = expand(n, cfg);
  if (prof.low == 0) {
    throw std::invalid_argument("lower bound check needs <n> >= 1; e_{<n>-1} is undefined");
  }
  const GridFunction kn = fejer_kernel(cfg, n);
  const double ml = static_cast<double>(cfg.cumprod(prof.low));
  LowerBoundCheck out;
  out.bound = ml * ml / (2.0 * std::numbers::pi * static_cast<double>(cfg.lambda()));
  out.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t x : lower_bound_cell(cfg, prof.low)) {
    out.min_value = std::min(out.min_value, static_cast<double>(n) * std::abs(kn[x]));
  }
  out.margin = out.min_value - out.bound;
  out.holds = out.margin >= -1e-12;
  return out;
}

}  // namespace vilenkin
