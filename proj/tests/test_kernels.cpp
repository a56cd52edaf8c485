#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <thread>

#include "oracles.hpp"
#include "vilenkin/kernels.hpp"
#include "vilenkin/number_system.hpp"

using namespace vilenkin;

namespace {
const GroupConfig kWalsh = GroupConfig::walsh(6);
const GroupConfig kMixed({2, 3, 2, 3});

double integral(const GridFunction& f) {
  Complex acc{};
  for (const auto& v : f.values()) acc += v;
  return (acc / static_cast<double>(f.size())).real();
}
}  // namespace

TEST(Dirichlet, SmallIndicesAndClosedForm) {
  const GridFunction d0 = dirichlet(kMixed, 0);
  const GridFunction d1 = dirichlet(kMixed, 1);
  for (std::size_t x = 0; x < kMixed.size(); ++x) {
    EXPECT_EQ(d0[x], Complex(0.0, 0.0));
    EXPECT_LT(std::abs(d1[x] - 1.0), 1e-14);
  }
  const GridFunction d4 = dirichlet(kWalsh, 4);
  for (std::size_t x = 0; x < kWalsh.size(); ++x) EXPECT_LT(std::abs(d4[x] - (x % 4 == 0 ? 4.0 : 0.0)), 1e-12);
  EXPECT_THROW(dirichlet(kMixed, kMixed.size() + 1), std::out_of_range);
}

TEST(Dirichlet, MatchesDirectSum) {
  for (const GroupConfig& g : {kWalsh, kMixed}) {
    for (std::size_t n = 0; n <= g.size(); n += 5) {
      EXPECT_LT(oracle::max_diff(dirichlet(g, n).values(), oracle::dirichlet(g, n)), 1e-10);
    }
  }
}

TEST(Dirichlet, PowerClosedForm) {
  for (const GroupConfig& g : {kWalsh, kMixed, GroupConfig({2, 3, 4, 2, 3})}) {
    for (int n = 0; n <= g.depth(); ++n) {
      const GridFunction c = dirichlet_Mn_closed(g, n);
      EXPECT_LT(max_abs_difference(dirichlet(g, g.cumprod(n)), c), 1e-9);
      EXPECT_EQ(c[0].real(), static_cast<double>(g.cumprod(n)));
      for (std::size_t x = 0; x < g.size(); ++x) {
        if (x % g.cumprod(n) != 0) EXPECT_EQ(c[x], Complex(0.0, 0.0));
      }
      EXPECT_NEAR(integral(c), 1.0, 1e-12);
    }
  }
}

TEST(Dirichlet, MultipleOfPowerClosedForm) {
  const GroupConfig g({2, 3, 4, 2});
  for (int n = 0; n < g.depth(); ++n) {
    EXPECT_LT(max_abs_difference(dirichlet_sMn_closed(g, 1, n), dirichlet_Mn_closed(g, n)), 1e-15);
    for (int s = 1; s < g.radix(n); ++s) {
      const GridFunction c = dirichlet_sMn_closed(g, s, n);
      EXPECT_LT(oracle::max_diff(c.values(), oracle::dirichlet(g, static_cast<std::size_t>(s) * g.cumprod(n))), 1e-9);
      for (std::size_t x = 0; x < g.size(); ++x) {
        if (x % g.cumprod(n) != 0) EXPECT_LT(std::abs(c[x]), 1e-12);
      }
    }
  }
  EXPECT_THROW(dirichlet_sMn_closed(g, 0, 1), std::out_of_range);
  EXPECT_THROW(dirichlet_sMn_closed(g, 3, 1), std::out_of_range);
}

TEST(Dirichlet, ShiftIdentity) {
  EXPECT_EQ(shift_identity_residual(kWalsh, 0, 3), 0.0);
  EXPECT_LT(shift_identity_residual(kWalsh, 3, 2), 1e-9);
  EXPECT_LT(shift_identity_residual(GroupConfig({2, 3, 2}), 1, 1), 1e-9);
  const GroupConfig g({2, 3, 4, 2, 3});
  for (int n = 0; n < g.depth(); ++n) {
    for (std::size_t j = 0; j < g.cumprod(n); ++j) EXPECT_LT(shift_identity_residual(g, j, n), 1e-9);
  }
  EXPECT_THROW(shift_identity_residual(kWalsh, 4, 2), std::invalid_argument);
}

TEST(Fejer, SmallIndices) {
  const GridFunction k1 = fejer_kernel(kWalsh, 1);
  for (std::size_t x = 0; x < kWalsh.size(); ++x) EXPECT_LT(std::abs(k1[x] - 1.0), 1e-14);
  const GridFunction k2 = fejer_kernel(kWalsh, 2);
  for (std::size_t x = 0; x < kWalsh.size(); ++x) {
    EXPECT_LT(std::abs(k2[x] - (x % 2 == 0 ? 1.5 : 0.5)), 1e-14);
  }
  EXPECT_THROW(fejer_kernel(kWalsh, 0), std::invalid_argument);
  EXPECT_THROW(fejer_kernel(kWalsh, kWalsh.size() + 1), std::out_of_range);
}

TEST(Fejer, MultiplierMatchesCesaroDefinition) {
  for (const GroupConfig& g : {kWalsh, kMixed}) {
    for (std::size_t n = 1; n <= g.size(); ++n) {
      EXPECT_LT(oracle::max_diff(fejer_kernel(g, n).values(), oracle::fejer(g, n)), 1e-9) << n;
    }
  }
  const Spectrum m = fejer_multiplier(kMixed, 10);
  for (std::size_t j = 0; j < kMixed.size(); ++j) {
    EXPECT_DOUBLE_EQ(m[j].real(), j < 10 ? (10.0 - static_cast<double>(j)) / 10.0 : 0.0);
  }
}

TEST(Fejer, UnitIntegral) {
  for (std::size_t n = 1; n <= kMixed.size(); ++n) EXPECT_NEAR(integral(fejer_kernel(kMixed, n)), 1.0, 1e-12);
}

TEST(Fejer, PowerClosedForm) {
  const GridFunction c = fejer_Mn_closed(kWalsh, 1);
  EXPECT_LT(std::abs(c[1] - 0.5), 1e-15);
  for (const GroupConfig& g : {kWalsh, kMixed, GroupConfig({2, 3, 4})}) {
    for (int n = 0; n <= g.depth(); ++n) {
      const auto ref = oracle::fejer(g, g.cumprod(n));
      EXPECT_LT(oracle::max_diff(fejer_Mn_closed(g, n).values(), ref), 1e-9) << g.describe() << " n=" << n;
    }
  }
  // Zero branch: x in I_0 \ I_1 with digit 1 nonzero, level 3.
  const GridFunction z = fejer_Mn_closed(kWalsh, 3);
  EXPECT_EQ(z[3], Complex(0.0, 0.0));
}

TEST(Fejer, L1Norms) {
  EXPECT_NEAR(kernel_l1_norm(kWalsh, 1), 1.0, 1e-14);
  for (std::size_t n = 1; n <= kWalsh.size(); ++n) EXPECT_GE(kernel_l1_norm(kWalsh, n), 1.0 - 1e-12);
  const L1Sweep s = kernel_l1_sup(kWalsh, 1, kWalsh.size());
  EXPECT_GE(s.sup, kernel_l1_norm(kWalsh, 32));
  EXPECT_NEAR(s.sup, kernel_l1_norm(kWalsh, s.argmax), 1e-15);
  EXPECT_LT(s.sup, 2.0);
}

TEST(KernelCache, HitsMissesAndEviction) {
  KernelCache cache(kWalsh, 2);
  const auto a = cache.fejer(5);
  EXPECT_EQ(cache.misses(), 1u);
  EXPECT_EQ(cache.fejer(5), a);
  EXPECT_EQ(cache.hits(), 1u);
  cache.dirichlet(5);
  cache.fejer(5);  // refresh recency
  cache.fejer(7);  // evicts dirichlet(5)
  EXPECT_EQ(cache.size(), 2u);
  const auto before = cache.misses();
  cache.fejer(5);
  EXPECT_EQ(cache.misses(), before);
  cache.dirichlet(5);
  EXPECT_EQ(cache.misses(), before + 1);
  EXPECT_LT(max_abs_difference(*cache.fejer(7), fejer_kernel(kWalsh, 7)), 1e-15);
}

TEST(KernelCache, ConcurrentReaders) {
  KernelCache cache(kWalsh, 8);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&cache, t] {
      for (int i = 0; i < 50; ++i) cache.fejer(static_cast<std::size_t>(1 + (i + t) % 12));
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_LE(cache.size(), 8u);
  EXPECT_EQ(cache.hits() + cache.misses(), 200u);
}

TEST(AnnulusIntegral, FiniteAndBoundaryIncluded) {
  const GroupConfig g = GroupConfig::walsh(5);
  const int level = 3;
  for (int i = 0; i < level; ++i) {
    for (int j = i + 1; j <= level; ++j) {
      const double c = annulus_integral_constant(g, level, i, j, g.cumprod(level));
      EXPECT_TRUE(std::isfinite(c));
    }
  }
  const AnnulusSweep s = annulus_constant_sweep(g, level, 8, 32);
  EXPECT_TRUE(std::isfinite(s.constant));
  EXPECT_GT(s.constant, 0.0);
  EXPECT_THROW(annulus_integral_constant(g, level, 0, 1, 7), std::invalid_argument);
  EXPECT_THROW(annulus_integral_constant(g, level, 2, 1, 8), std::invalid_argument);
}

TEST(AnnulusIntegral, MatchesDirectIntegral) {
  // int_{I_L} |K_n(x - t)| dmu(t) summed over t by hand.
  const GroupConfig g({2, 3, 2, 2});
  const int level = 2;
  const std::size_t n = 9;
  const auto K = oracle::fejer(g, n);
  const std::size_t ML = g.cumprod(level);
  double best = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (x % ML == 0) continue;
    const auto pos = annulus_position(g, level, x);
    if (pos.i != 0 || pos.j != 1) continue;
    double acc = 0.0;
    for (std::size_t t = 0; t < g.size(); t += ML) acc += std::abs(K[sub_indices(g, x, t)]);
    acc /= static_cast<double>(g.size());
    best = std::max(best, acc * static_cast<double>(ML * ML) / static_cast<double>(g.cumprod(0) * g.cumprod(1)));
  }
  EXPECT_NEAR(annulus_integral_constant(g, level, 0, 1, n), best, 1e-12);
}

TEST(UpperBound, PowersGiveOne) {
  for (int k = 0; k < kWalsh.depth(); ++k) {
    const UpperBoundCheck c = verify_upper_bound(kWalsh, kWalsh.cumprod(k));
    EXPECT_NEAR(c.constant, 1.0, 1e-12);
    EXPECT_FALSE(c.zero_denominator_violation);
  }
}

TEST(UpperBound, SweepFinite) {
  KernelCache cache(kMixed, 16);
  for (std::size_t n = 1; n < kMixed.size(); ++n) {
    const UpperBoundCheck c = verify_upper_bound(kMixed, n, &cache);
    EXPECT_TRUE(std::isfinite(c.constant));
    EXPECT_FALSE(c.zero_denominator_violation) << n;
  }
}

TEST(LowerBound, CellAndSweep) {
  const GroupConfig g = GroupConfig::walsh(6);
  const auto cell = lower_bound_cell(g, 2);
  for (std::size_t x : cell) {
    EXPECT_EQ(digit_of(g, x, 0), 0);
    EXPECT_EQ(digit_of(g, x, 1), 1);
    EXPECT_EQ(digit_of(g, x, 2), 1);
  }
  EXPECT_EQ(cell.size(), g.size() / g.cumprod(3));
  for (const GroupConfig& cfg : {g, kMixed}) {
    for (std::size_t n = 1; n < cfg.size(); ++n) {
      if (expand(n, cfg).low == 0) {
        EXPECT_THROW(verify_lower_bound(cfg, n), std::invalid_argument);
        continue;
      }
      const LowerBoundCheck c = verify_lower_bound(cfg, n);
      EXPECT_TRUE(c.holds) << n;
      EXPECT_NEAR(c.bound, std::pow(static_cast<double>(cfg.cumprod(expand(n, cfg).low)), 2) /
                               (2.0 * std::numbers::pi * cfg.lambda()), 1e-12);
    }
  }
}
