#include "cli.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "vilenkin/experiments.hpp"
#include "vilenkin/group.hpp"
#include "vilenkin/hardy.hpp"
#include "vilenkin/io.hpp"
#include "vilenkin/kernels.hpp"
#include "vilenkin/means.hpp"
#include "vilenkin/number_system.hpp"
#include "vilenkin/transform.hpp"

namespace vilenkin::cli {

namespace {

using nlohmann::json;

constexpr double kIdentityTol = 1e-9;

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.group = GroupConfig::walsh(8);
  return cfg;
}

void require_small_p_for(const ExperimentConfig& cfg, const std::string& what) {
  if (!(cfg.p > 0.0 && cfg.p < 0.5)) {
    throw ConfigError("p", fmt::format("{} needs 0 < p < 1/2, got {}", what, cfg.p));
  }
}

ExperimentReport transform_report(const ExperimentConfig& cfg) {
  const auto& g = cfg.group;
  std::mt19937_64 rng(cfg.seed);
  GridFunction f(g);
  for (std::size_t x = 0; x < f.size(); ++x) f[x] = {2.0 * unit_uniform(rng) - 1.0, 2.0 * unit_uniform(rng) - 1.0};
  const Spectrum s = forward(f);
  const double round_trip = relative_error(inverse(s), f);
  double energy_x = 0.0;
  double energy_n = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    energy_x += std::norm(f[i]);
    energy_n += std::norm(s[i]);
  }
  energy_x /= static_cast<double>(f.size());
  const double plancherel = std::abs(energy_x - energy_n) / energy_x;

  ExperimentReport rep;
  rep.name = "transform";
  rep.header = {"n", "re", "im"};
  for (std::size_t n = 0; n < s.size(); ++n) rep.rows.push_back({static_cast<double>(n), s[n].real(), s[n].imag()});
  rep.summary = {{"round_trip", round_trip}, {"plancherel", plancherel}};
  json checks = {{"round_trip_below_1e-10", round_trip < 1e-10}, {"plancherel_below_1e-10", plancherel < 1e-10}};
  if (g.size() <= 4096) {
    const double naive = relative_error(s, forward_naive(f));
    rep.summary["naive_agreement"] = naive;
    checks["naive_below_1e-10"] = naive < 1e-10;
  }
  rep.summary["checks"] = checks;
  return rep;
}

ExperimentReport kernel_report(const ExperimentConfig& cfg, std::size_t n, const std::string& kind) {
  const auto& g = cfg.group;
  GridFunction k(g);
  if (kind == "fejer") {
    k = fejer_kernel(g, n);
  } else if (kind == "dirichlet") {
    k = dirichlet(g, n);
  } else {
    throw CLI::ValidationError("--kind", "expected fejer or dirichlet");
  }
  ExperimentReport rep;
  rep.name = fmt::format("kernel_{}_{}", kind, n);
  rep.header = {"x", "re", "im", "abs"};
  double l1 = 0.0;
  for (std::size_t x = 0; x < k.size(); ++x) {
    rep.rows.push_back({static_cast<double>(x), k[x].real(), k[x].imag(), std::abs(k[x])});
    l1 += std::abs(k[x]);
  }
  rep.summary = {{"kind", kind}, {"n", n}, {"l1_norm", l1 / static_cast<double>(k.size())},
                 {"checks", json::object()}};
  return rep;
}

ExperimentReport verify_report(const ExperimentConfig& cfg, const std::string& target) {
  const auto& g = cfg.group;
  const int N = g.depth();
  ExperimentReport rep;
  rep.name = "verify_" + target;
  json checks = json::object();
  if (target == "eq3") {
    rep.header = {"n", "residual"};
    double worst = 0.0;
    for (int n = 0; n <= N; ++n) {
      const double r = max_abs_difference(dirichlet(g, g.cumprod(n)), dirichlet_Mn_closed(g, n));
      rep.rows.push_back({static_cast<double>(n), r});
      worst = std::max(worst, r);
    }
    rep.summary["max_residual"] = worst;
    checks["residual_below_1e-9"] = worst < kIdentityTol;
  } else if (target == "eq9dn") {
    rep.header = {"n", "s", "residual"};
    double worst = 0.0;
    for (int n = 0; n < N; ++n) {
      for (int s = 1; s < g.radix(n); ++s) {
        const auto idx = static_cast<std::size_t>(s) * g.cumprod(n);
        const double r = max_abs_difference(dirichlet(g, idx), dirichlet_sMn_closed(g, s, n));
        rep.rows.push_back({static_cast<double>(n), static_cast<double>(s), r});
        worst = std::max(worst, r);
      }
    }
    rep.summary["max_residual"] = worst;
    checks["residual_below_1e-9"] = worst < kIdentityTol;
  } else if (target == "eq8k") {
    rep.header = {"n", "max_residual"};
    double worst = 0.0;
    for (int n = 0; n < N; ++n) {
      double level = 0.0;
      for (std::size_t j = 0; j < g.cumprod(n); ++j) level = std::max(level, shift_identity_residual(g, j, n));
      rep.rows.push_back({static_cast<double>(n), level});
      worst = std::max(worst, level);
    }
    rep.summary["max_residual"] = worst;
    checks["residual_below_1e-9"] = worst < kIdentityTol;
  } else if (target == "partition") {
    rep.header = {"level", "cells", "ok"};
    bool all = true;
    for (int level = 2; level <= N; ++level) {
      const bool ok = verify_partition(g, level);
      rep.rows.push_back({static_cast<double>(level), static_cast<double>(annulus_cells(g, level).size()), ok ? 1.0 : 0.0});
      all = all && ok;
    }
    checks["partition"] = all;
  } else if (target == "lemma3") {
    rep.header = {"n", "residual"};
    double worst = 0.0;
    for (int n = 0; n <= N; ++n) {
      const double r = max_abs_difference(fejer_kernel(g, g.cumprod(n)), fejer_Mn_closed(g, n));
      rep.rows.push_back({static_cast<double>(n), r});
      worst = std::max(worst, r);
    }
    rep.summary["max_residual"] = worst;
    checks["residual_below_1e-9"] = worst < kIdentityTol;
  } else if (target == "lemma5b") {
    rep.header = {"level", "constant", "i", "j", "n"};
    bool finite = true;
    for (int level = 2; level <= N; ++level) {
      const std::size_t first = g.cumprod(level);
      const std::size_t last = std::min<std::size_t>(4 * first, g.size());
      if (first >= last) break;
      const AnnulusSweep s = annulus_constant_sweep(g, level, first, last);
      rep.rows.push_back({static_cast<double>(level), s.constant, static_cast<double>(s.i), static_cast<double>(s.j),
                          static_cast<double>(s.n)});
      finite = finite && std::isfinite(s.constant);
    }
    checks["constant_finite"] = finite;
  } else if (target == "lemma8-upper") {
    rep.header = {"n", "constant", "worst_point"};
    KernelCache cache(g, cfg.cache_budget);
    double worst = 0.0;
    bool zero_ok = true;
    for (std::size_t n = 1; n < g.size(); ++n) {
      const UpperBoundCheck c = verify_upper_bound(g, n, &cache);
      rep.rows.push_back({static_cast<double>(n), c.constant, static_cast<double>(c.worst_point)});
      worst = std::max(worst, c.constant);
      zero_ok = zero_ok && !c.zero_denominator_violation;
    }
    rep.summary["constant"] = worst;
    checks["constant_finite"] = std::isfinite(worst);
    checks["zero_denominator"] = zero_ok;
  } else if (target == "lemma8-lower") {
    rep.header = {"n", "min_value", "bound", "margin"};
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n < g.size(); ++n) {
      if (expand(n, g).low < 1) continue;
      const LowerBoundCheck c = verify_lower_bound(g, n);
      rep.rows.push_back({static_cast<double>(n), c.min_value, c.bound, c.margin});
      margin = std::min(margin, c.margin);
    }
    rep.summary["min_margin"] = margin;
    checks["margin_nonnegative"] = margin >= -1e-12;
  } else if (target == "l1-sup") {
    rep.header = {"n", "l1_norm"};
    double sup = 0.0;
    std::size_t arg = 0;
    for (std::size_t n = 1; n <= g.size(); ++n) {
      const double v = kernel_l1_norm(g, n);
      rep.rows.push_back({static_cast<double>(n), v});
      if (v > sup) {
        sup = v;
        arg = n;
      }
    }
    rep.summary["sup"] = sup;
    rep.summary["argmax"] = arg;
    checks["sup_finite"] = std::isfinite(sup);
  } else {
    throw CLI::ValidationError("target", fmt::format("unknown verify target '{}'", target));
  }
  rep.summary["checks"] = checks;
  return rep;
}

json divergence_json(const DivergenceResult& r) {
  std::vector<double> col;
  for (const auto& row : r.rows) col.push_back(row.weak_lp_p);
  return {{"weak_lp_p", col}, {"log2_slope", r.log2_slope}};
}

ExperimentReport sharpness_report(const ExperimentConfig& cfg) {
  require_small_p_for(cfg, "sharpness");
  const auto& g = cfg.group;
  const auto candidates = sharpness_candidates(g);
  const SharpnessPlan plan = select_alpha_subsequence(g, candidates, cfg.p, cfg.phi, cfg.cap, cfg.selection);
  const DivergenceResult result = measure_divergence(plan);
  ExperimentReport rep = divergence_report(plan, result);

  double identity = 0.0;
  for (std::size_t k = 0; k < plan.alpha.size(); ++k) {
    const std::size_t Mh = g.cumprod(expand(plan.alpha[k], g).high);
    identity = std::max(identity, partial_sum_identity_residual(plan, Mh + 1, k));
    identity = std::max(identity, partial_sum_identity_residual(plan, plan.alpha[k], k));
  }
  rep.summary["identity_residual"] = identity;
  rep.summary["checks"]["identity_below_1e-8"] = identity < 1e-8;

  json atoms = json::array();
  for (const auto& a : counterexample_atoms(plan)) {
    const AtomCheck c = check_atom(a);
    atoms.push_back({{"level", a.support_level}, {"supported", c.supported}, {"mean_zero", c.mean_zero},
                     {"bounded", c.bounded}, {"sup_over_bound", c.sup_norm / c.bound}});
  }
  rep.summary["atoms"] = atoms;

  try {
    const SharpnessPlan control = select_alpha_subsequence(g, candidates, cfg.p, PhiFunction::rate(), std::nullopt,
                                                           cfg.selection);
    const DivergenceResult cr = measure_divergence(control);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& row : cr.rows) {
      lo = std::min(lo, row.weak_lp_p);
      hi = std::max(hi, row.weak_lp_p);
    }
    json c = divergence_json(cr);
    c["alpha"] = control.alpha;
    rep.summary["control"] = c;
    rep.summary["checks"]["control_bounded"] = cr.log2_slope <= 0.05 && hi <= 2.0 * lo;
  } catch (const InfeasibleAtDepth& e) {
    rep.summary["control"] = {{"infeasible", e.what()}};
  }
  return rep;
}

int emit(const ExperimentReport& rep, const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const WrittenReport files = write_report(rep, cfg);
  fmt::print(out, "{}: {} rows -> {}\n", rep.name, rep.rows.size(), files.csv.string());
  const auto failed = rep.failed_checks();
  if (rep.summary.contains("checks")) {
    for (const auto& [name, ok] : rep.summary.at("checks").items()) {
      fmt::print(out, "  {} {}\n", ok.get<bool>() ? "pass" : "FAIL", name);
    }
  }
  if (!failed.empty()) {
    fmt::print(err, "contract violation: {}\n", fmt::join(failed, ", "));
    return kContractViolation;
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier analysis on truncated Vilenkin groups"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("-c,--config", config_path, "JSON experiment configuration")->check(CLI::ExistingFile);

  auto* transform = app.add_subcommand("transform", "Round trip and Plancherel check on a seeded random function");
  auto* kernel = app.add_subcommand("kernel", "Dump D_n or K_n values and the L1 norm");
  std::size_t kernel_n = 1;
  std::string kernel_kind = "fejer";
  kernel->add_option("--n", kernel_n, "kernel index")->required();
  kernel->add_option("--kind", kernel_kind, "fejer or dirichlet")->check(CLI::IsMember({"fejer", "dirichlet"}));
  auto* verify = app.add_subcommand("verify", "Exhaustive identity and bound checks");
  std::string target;
  verify->add_option("target", target, "check to run")
      ->required()
      ->check(CLI::IsMember({"eq3", "eq9dn", "eq8k", "partition", "lemma3", "lemma5b", "lemma8-upper",
                             "lemma8-lower", "l1-sup"}));
  auto* thm1a = app.add_subcommand("thm1a", "Weighted Fejer bound on random atoms");
  auto* sharpness = app.add_subcommand("sharpness", "Counterexample divergence in weak-L_p");
  auto* rates = app.add_subcommand("rates", "Growth rates for an index preset");
  std::string rate_preset;
  rates->add_option("--preset", rate_preset, "Mn, Mn_plus_1 or walsh_2n_plus_1")
      ->check(CLI::IsMember({"Mn", "Mn_plus_1", "walsh_2n_plus_1"}));
  for (auto* sub : {transform, kernel, verify, thm1a, sharpness, rates}) {
    sub->add_option("config", config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
    if (*transform) return emit(transform_report(cfg), cfg, out, err);
    if (*kernel) return emit(kernel_report(cfg, kernel_n, kernel_kind), cfg, out, err);
    if (*verify) return emit(verify_report(cfg, target), cfg, out, err);
    if (*thm1a) {
      require_small_p_for(cfg, "thm1a");
      WeightedBoundOptions opts;
      opts.p = cfg.p;
      opts.levels = cfg.levels;
      opts.atom_count = cfg.atom_count;
      opts.rho_cap = cfg.rho_cap;
      opts.seed = cfg.seed;
      return emit(weighted_bound_report(verify_weighted_bound(cfg.group, opts)), cfg, out, err);
    }
    if (*sharpness) return emit(sharpness_report(cfg), cfg, out, err);
    if (*rates) {
      require_small_p_for(cfg, "rates");
      const RatePreset preset = parse_rate_preset(rate_preset.empty() ? cfg.rate_preset : rate_preset);
      return emit(rate_report(rate_table(cfg.group, cfg.p, preset, cfg.atom_count, cfg.seed)), cfg, out,
                  err);
    }
  } catch (const ConfigError& e) {
    fmt::print(err, "{}\n", e.what());
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    fmt::print(err, "{}\n", e.what());
    return kUsage;
  } catch (const InfeasibleAtDepth& e) {
    fmt::print(err, "infeasible at depth: {}\n", e.what());
    return kInfeasible;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "invalid argument: {}\n", e.what());
    return kUsage;
  } catch (const std::out_of_range& e) {
    fmt::print(err, "out of range: {}\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kContractViolation;
  }
  return kUsage;
}

}  // namespace vilenkin::cli
