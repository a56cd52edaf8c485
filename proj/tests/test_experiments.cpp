#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "vilenkin/experiments.hpp"
#include "vilenkin/kernels.hpp"
#include "vilenkin/means.hpp"
#include "vilenkin/number_system.hpp"

using namespace vilenkin;

namespace {
const double kP = 1.0 / 3.0;

SharpnessPlan walsh_plan(int depth, PhiFunction phi = PhiFunction::constant()) {
  const GroupConfig g = GroupConfig::walsh(depth);
  return select_alpha_subsequence(g, sharpness_candidates(g), kP, phi);
}
}  // namespace

TEST(Phi, Values) {
  const GroupConfig g = GroupConfig::walsh(10);
  EXPECT_EQ(PhiFunction::constant()(g, 77, kP), 1.0);
  EXPECT_DOUBLE_EQ(PhiFunction::power(0.5)(g, 64, kP), 8.0);
  EXPECT_DOUBLE_EQ(PhiFunction::log_power(2.0)(g, 8, kP), 16.0);
  // 2^6 + 2^2: |n| = 6, <n> = 2, rate (64/4)^{1/p-2} = 16
  EXPECT_NEAR(PhiFunction::rate()(g, 68, kP), 16.0, 1e-12);
  EXPECT_EQ(PhiFunction::rate().describe(), "rate");
  EXPECT_THROW(PhiFunction::power(-1.0), std::invalid_argument);
  EXPECT_THROW(PhiFunction::constant()(g, 0, kP), std::invalid_argument);
}

TEST(Selection, CandidatesAreEvenPowersPlusOne) {
  const auto c = sharpness_candidates(GroupConfig::walsh(9));
  EXPECT_EQ(c, (std::vector<std::size_t>{2, 5, 17, 65, 257}));
}

TEST(Selection, CapRuleAtDepthSixteen) {
  const SharpnessPlan plan = walsh_plan(16);
  EXPECT_EQ(plan.alpha, (std::vector<std::size_t>{5, 17, 65, 257, 1025, 4097, 16385}));
  ASSERT_EQ(plan.terms.size(), plan.alpha.size());
  EXPECT_DOUBLE_EQ(plan.cap, 4.0 * plan.terms.front());
  double sum = 0.0;
  int prev_rho = -1;
  for (std::size_t k = 0; k < plan.alpha.size(); ++k) {
    sum += plan.terms[k];
    const IndexProfile prof = expand(plan.alpha[k], plan.cfg);
    EXPECT_GT(prof.rho, prev_rho);
    EXPECT_LE(prof.high + 1, plan.cfg.depth());
    prev_rho = prof.rho;
    // term = (M_low / M_high)^{(1-2p)/2} Phi^{p/2}, Phi = 1
    const double want = std::pow(std::ldexp(1.0, prof.low - prof.high), (1.0 - 2.0 * kP) / 2.0);
    EXPECT_NEAR(plan.terms[k], want, 1e-14);
  }
  EXPECT_LE(sum, plan.cap * (1.0 + 1e-12));
}

TEST(Selection, HalvingRuleIsStricter) {
  const GroupConfig g = GroupConfig::walsh(16);
  const SharpnessPlan plan =
      select_alpha_subsequence(g, sharpness_candidates(g), kP, PhiFunction::constant(), std::nullopt,
                               SelectionRule::Halving);
  EXPECT_EQ(plan.alpha, (std::vector<std::size_t>{5, 65, 4097}));
  for (std::size_t k = 0; k < plan.terms.size(); ++k) EXPECT_LE(plan.terms[k], std::ldexp(1.0, -static_cast<int>(k)));
}

TEST(Selection, InfeasibleCases) {
  const GroupConfig g = GroupConfig::walsh(12);
  EXPECT_THROW(select_alpha_subsequence(g, {4, 16, 64, 256}, kP, PhiFunction::constant()), InfeasibleAtDepth);
  const GroupConfig shallow = GroupConfig::walsh(4);
  EXPECT_THROW(select_alpha_subsequence(shallow, sharpness_candidates(shallow), kP, PhiFunction::constant()),
               InfeasibleAtDepth);
}

TEST(Counterexample, SpectrumMatchesWeightedAtoms) {
  const SharpnessPlan plan = walsh_plan(12);
  const Spectrum s = counterexample_spectrum(plan);
  const auto atoms = counterexample_atoms(plan);
  ASSERT_EQ(atoms.size(), plan.alpha.size());
  Spectrum sum(plan.cfg);
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    EXPECT_TRUE(validate_atom(atoms[k])) << k;
    const Spectrum a = forward(atoms[k].values);
    for (std::size_t j = 0; j < a.size(); ++j) sum[j] += plan.weights[k] * a[j];
  }
  EXPECT_LT(relative_error(s, sum), 1e-12);

  std::vector<bool> in_block(s.size(), false);
  for (std::size_t k = 0; k < plan.alpha.size(); ++k) {
    const IndexProfile prof = expand(plan.alpha[k], plan.cfg);
    const double want = std::pow(std::ldexp(1.0, prof.high), 1.0 / (2.0 * kP)) *
                        std::pow(std::ldexp(1.0, prof.low), (1.0 / kP - 2.0) / 2.0);
    for (std::size_t j = plan.cfg.cumprod(prof.high); j < plan.cfg.cumprod(prof.high + 1); ++j) {
      in_block[j] = true;
      EXPECT_NEAR(std::abs(s[j]), want, 1e-12 * want);
    }
  }
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!in_block[j]) EXPECT_EQ(s[j], Complex{}) << j;
  }
}

TEST(Counterexample, MartingaleStartsAfterFirstBlock) {
  const SharpnessPlan plan = walsh_plan(10);
  const Martingale m = build_counterexample(plan);
  const int h0 = expand(plan.alpha.front(), plan.cfg).high;
  for (int n = 0; n <= h0; ++n) EXPECT_EQ(m.level(n).max_abs(), 0.0) << n;
  EXPECT_GT(m.level(h0 + 1).max_abs(), 0.0);
  EXPECT_LT(relative_error(forward(m.top()), counterexample_spectrum(plan)), 1e-12);
}

TEST(Counterexample, PartialSumIdentity) {
  const SharpnessPlan plan = walsh_plan(12);
  for (std::size_t k = 0; k < plan.alpha.size(); ++k) {
    const std::size_t Mh = plan.cfg.cumprod(expand(plan.alpha[k], plan.cfg).high);
    for (std::size_t j = Mh + 1; j <= plan.alpha[k]; ++j) EXPECT_LT(partial_sum_identity_residual(plan, j, k), 1e-10);
    EXPECT_THROW(partial_sum_identity_residual(plan, Mh, k), std::out_of_range);
    EXPECT_THROW(partial_sum_identity_residual(plan, plan.alpha[k] + 1, k), std::out_of_range);
  }
}

TEST(Divergence, GrowsAlongTheSubsequence) {
  const SharpnessPlan plan = walsh_plan(14);
  const DivergenceResult r = measure_divergence(plan);
  ASSERT_EQ(r.rows.size(), plan.alpha.size());
  EXPECT_TRUE(r.strictly_increasing);
  for (std::size_t k = 1; k < r.rows.size(); ++k) EXPECT_GT(r.rows[k].weak_lp_p, r.rows[k - 1].weak_lp_p);
  EXPECT_LT(r.band_max / r.band_min, 4.0);
  EXPECT_GT(r.log2_slope, 0.0);

  // Spot-check one row against the definitions.
  const auto& row = r.rows[2];
  const Spectrum s = counterexample_spectrum(plan);
  const Spectrum mult = fejer_multiplier(plan.cfg, row.alpha);
  Spectrum prod(plan.cfg);
  for (std::size_t j = 0; j < s.size(); ++j) prod[j] = s[j] * mult[j];
  const GridFunction sigma = inverse(prod);
  EXPECT_NEAR(row.weak_lp_p, oracle::weak_lp_power(sigma, kP), 1e-9 * row.weak_lp_p);

  const ExperimentReport rep = divergence_report(plan, r);
  EXPECT_EQ(rep.header, (std::vector<std::string>{"k", "alpha_k", "low", "high", "rho", "weak_lp_p", "predicted",
                                                 "ratio"}));
  EXPECT_TRUE(rep.failed_checks().empty());
}

TEST(Report, CsvIsRoundTripExact) {
  ExperimentReport rep;
  rep.header = {"a", "b"};
  rep.rows = {{1.0, 0.1}, {-2.5, 1.0 / 3.0}};
  const std::string csv = rep.csv();
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "a,b");
  std::getline(in, line);
  EXPECT_EQ(line, "1,0.10000000000000001");
  std::getline(in, line);
  EXPECT_EQ(std::stod(line.substr(line.find(',') + 1)), 1.0 / 3.0);
  rep.summary["checks"] = {{"x", true}, {"y", false}};
  EXPECT_EQ(rep.failed_checks(), std::vector<std::string>{"y"});
}

TEST(Report, FittedSlope) {
  EXPECT_NEAR(fitted_slope({0, 1, 2, 3}, {1, 3, 5, 7}), 2.0, 1e-14);
  EXPECT_NEAR(fitted_slope({0, 1, 2}, {4, 4, 4}), 0.0, 1e-14);
  EXPECT_THROW(fitted_slope({1, 1}, {0, 1}), std::invalid_argument);
}

TEST(WeightedBound, ZeroCellsVanishSmall) {
  WeightedBoundOptions opts;
  opts.levels = {3, 4};
  opts.atom_count = 4;
  const WeightedBoundResult r = verify_weighted_bound(GroupConfig::walsh(8), opts);
  ASSERT_EQ(r.levels.size(), 2u);
  EXPECT_LT(r.zero_cell, 1e-9);
  for (const auto& lv : r.levels) {
    EXPECT_GT(lv.index_count, 0u);
    EXPECT_GT(lv.lp_ratio, 0.0);
    EXPECT_TRUE(std::isfinite(lv.hp_ratio));
    EXPECT_TRUE(in_bounded_set(lv.lp_argmax, opts.rho_cap, GroupConfig::walsh(8)));
  }
  const WeightedBoundResult again = verify_weighted_bound(GroupConfig::walsh(8), opts);
  EXPECT_EQ(again.levels[1].lp_ratio, r.levels[1].lp_ratio);
}

TEST(Rates, PresetNames) {
  for (auto p : {RatePreset::Mn, RatePreset::MnPlusOne, RatePreset::Walsh2nPlusOne}) {
    EXPECT_EQ(parse_rate_preset(rate_preset_name(p)), p);
  }
  EXPECT_THROW(parse_rate_preset("bogus"), std::invalid_argument);
}

TEST(Rates, MnPlusOneGrowsAtTheRate) {
  const RateTable t = rate_table(GroupConfig::walsh(10), kP, RatePreset::MnPlusOne, 3, 5);
  ASSERT_GE(t.rows.size(), 4u);
  for (const auto& row : t.rows) EXPECT_EQ(row.n, (std::size_t{1} << row.level) + 1);
  const double rate = 1.0 / kP - 2.0;
  EXPECT_GE(t.block_slope, 0.7 * rate);
  EXPECT_LE(t.block_slope, 1.1 * rate);
}
