#include "vilenkin/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "vilenkin/kernels.hpp"
#include "vilenkin/means.hpp"
#include "vilenkin/number_system.hpp"

namespace vilenkin {

namespace {

void require_small_p(double p) {
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument(fmt::format("p = {} outside (0, 1/2)", p));
}

double Md(const GroupConfig& cfg, int k) { return static_cast<double>(cfg.cumprod(k)); }

// M_b^{1/p-1} (D_{M_{b+1}} - D_{M_b}).
GridFunction block_atom(const GroupConfig& cfg, int b, double p) {
  GridFunction a = dirichlet_Mn_closed(cfg, b + 1) - dirichlet_Mn_closed(cfg, b);
  a *= std::pow(Md(cfg, b), 1.0 / p - 1.0);
  return a;
}

double block_coefficient(const SharpnessPlan& plan, std::size_t alpha) {
  const IndexProfile prof = expand(alpha, plan.cfg);
  return std::pow(Md(plan.cfg, prof.high), 1.0 / (2.0 * plan.p)) *
         std::pow(Md(plan.cfg, prof.low), (1.0 / plan.p - 2.0) / 2.0) *
         std::sqrt(plan.phi(plan.cfg, alpha, plan.p));
}

// (max - min) / min.
double drift(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / *lo;
}

double log2_slope_positive(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] > 0.0) {
      x.push_back(xs[i]);
      y.push_back(std::log2(ys[i]));
    }
  }
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return fitted_slope(x, y);
}

}  // namespace

double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct abscissae");
  return sxy / sxx;
}

std::string ExperimentReport::csv() const {
  std::string out = fmt::format("{}\n", fmt::join(header, ","));
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += fmt::format("{:.17g}", row[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> ExperimentReport::failed_checks() const {
  std::vector<std::string> out;
  if (!summary.contains("checks")) return out;
  for (const auto& [name, ok] : summary.at("checks").items()) {
    if (!ok.get<bool>()) out.push_back(name);
  }
  return out;
}

PhiFunction PhiFunction::power(double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("power exponent must be >= 0");
  return {Kind::Power, beta};
}

PhiFunction PhiFunction::log_power(double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("log-power exponent must be >= 0");
  return {Kind::LogPower, gamma};
}

double PhiFunction::operator()(const GroupConfig& cfg, std::size_t n, double p) const {
  if (n == 0) throw std::invalid_argument("Phi is evaluated at n >= 1");
  const auto x = static_cast<double>(n);
  switch (kind) {
    case Kind::Constant: return 1.0;
    case Kind::Power: return std::pow(x, parameter);
    case Kind::LogPower: return std::pow(1.0 + std::log2(x), parameter);
    case Kind::Rate: {
      const IndexProfile prof = expand(n, cfg);
      return std::pow(Md(cfg, prof.high) / Md(cfg, prof.low), 1.0 / p - 2.0);
    }
  }
  return 1.0;
}

std::string PhiFunction::describe() const {
  switch (kind) {
    case Kind::Constant: return "constant";
    case Kind::Power: return fmt::format("power({})", parameter);
    case Kind::LogPower: return fmt::format("log_power({})", parameter);
    case Kind::Rate: return "rate";
  }
  return "?";
}

std::vector<std::size_t> sharpness_candidates(const GroupConfig& cfg) {
  std::vector<std::size_t> out;
  for (int k = 0; 2 * k < cfg.depth(); ++k) {
    const std::size_t n = cfg.cumprod(2 * k) + 1;
    if (n < cfg.size()) out.push_back(n);
  }
  return out;
}

SharpnessPlan select_alpha_subsequence(const GroupConfig& cfg, const std::vector<std::size_t>& candidates,
                                       double p, const PhiFunction& phi, std::optional<double> cap,
                                       SelectionRule rule) {
  require_small_p(p);
  SharpnessPlan plan{cfg, p, phi, candidates, {}, {}, {}, 0.0};
  const double e = (1.0 - 2.0 * p) / 2.0;
  double sum = 0.0;
  int last_rho = -1;
  int last_high = -1;
  for (std::size_t n : candidates) {
    if (n < 3 || n >= cfg.size()) continue;
    const IndexProfile prof = expand(n, cfg);
    if (prof.high + 1 > cfg.depth() || prof.rho <= last_rho || prof.high <= last_high) continue;
    const double term = std::pow(Md(cfg, prof.low) / Md(cfg, prof.high), e) * std::pow(phi(cfg, n, p), p / 2.0);
    if (plan.cap == 0.0) plan.cap = cap.value_or(4.0 * term);
    bool accept = false;
    if (rule == SelectionRule::Cap) {
      accept = sum + term <= plan.cap * (1.0 + 1e-12);
    } else {
      accept = term <= std::ldexp(1.0, -static_cast<int>(plan.alpha.size())) && sum + term <= plan.cap * (1.0 + 1e-12);
    }
    if (!accept) continue;
    sum += term;
    last_rho = prof.rho;
    last_high = prof.high;
    plan.alpha.push_back(n);
    plan.terms.push_back(term);
    plan.weights.push_back(std::pow(Md(cfg, prof.low) / Md(cfg, prof.high), (1.0 / p - 2.0) / 2.0) *
                           std::sqrt(phi(cfg, n, p)));
  }
  if (plan.alpha.size() < 2) {
    throw InfeasibleAtDepth(fmt::format("only {} admissible index(es) at depth {}", plan.alpha.size(), cfg.depth()));
  }
  return plan;
}

Spectrum counterexample_spectrum(const SharpnessPlan& plan) {
  Spectrum s(plan.cfg);
  for (std::size_t alpha : plan.alpha) {
    const int h = expand(alpha, plan.cfg).high;
    if (h + 1 > plan.cfg.depth()) throw std::out_of_range("counterexample block exceeds the depth");
    const double c = block_coefficient(plan, alpha);
    for (std::size_t j = plan.cfg.cumprod(h); j < plan.cfg.cumprod(h + 1); ++j) s[j] = c;
  }
  return s;
}

std::vector<Atom> counterexample_atoms(const SharpnessPlan& plan) {
  std::vector<Atom> out;
  for (std::size_t alpha : plan.alpha) {
    const int h = expand(alpha, plan.cfg).high;
    out.push_back(Atom{block_atom(plan.cfg, h, plan.p), h, plan.p});
  }
  return out;
}

Martingale build_counterexample(const SharpnessPlan& plan) {
  return martingale_from_function(inverse(counterexample_spectrum(plan)));
}

double partial_sum_identity_residual(const SharpnessPlan& plan, std::size_t j, std::size_t k) {
  if (k >= plan.alpha.size()) throw std::out_of_range("row index beyond the selection");
  const std::size_t alpha = plan.alpha[k];
  const int h = expand(alpha, plan.cfg).high;
  const std::size_t Mh = plan.cfg.cumprod(h);
  if (j <= Mh || j > alpha) {
    throw std::out_of_range(fmt::format("j = {} outside ({}, {}]", j, Mh, alpha));
  }
  const Spectrum s = counterexample_spectrum(plan);
  const GridFunction lhs = partial_sum(s, j);
  GridFunction rhs = dirichlet(plan.cfg, j) - dirichlet(plan.cfg, Mh);
  rhs *= block_coefficient(plan, alpha);
  rhs += partial_sum(s, Mh);
  return relative_error(rhs, lhs);
}

DivergenceResult measure_divergence(const SharpnessPlan& plan) {
  const auto& cfg = plan.cfg;
  const double p = plan.p;
  const Spectrum s = counterexample_spectrum(plan);
  DivergenceResult out;
  for (std::size_t k = 0; k < plan.alpha.size(); ++k) {
    const std::size_t alpha = plan.alpha[k];
    const IndexProfile prof = expand(alpha, cfg);
    const double phi = plan.phi(cfg, alpha, p);
    const GridFunction sigma = fejer_mean(s, alpha);
    DivergenceRow row;
    row.k = k;
    row.alpha = alpha;
    row.low = prof.low;
    row.high = prof.high;
    row.rho = prof.rho;
    row.weak_lp_p = weak_lp_power((1.0 / phi) * sigma, p);
    row.predicted = std::pow(Md(cfg, prof.high) / Md(cfg, prof.low), 0.5 - p) / std::pow(phi, p / 2.0);
    row.ratio = row.weak_lp_p / row.predicted;
    row.cell_defined = prof.low >= 1;
    if (row.cell_defined) {
      row.cell_min = std::numeric_limits<double>::infinity();
      for (std::size_t x : lower_bound_cell(cfg, prof.low)) row.cell_min = std::min(row.cell_min, std::abs(sigma[x]));
      row.cell_shape = std::pow(Md(cfg, prof.high), 1.0 / (2.0 * p) - 1.0) *
                       std::pow(Md(cfg, prof.low), (1.0 / p + 2.0) / 2.0) / std::sqrt(phi);
    }
    out.rows.push_back(row);
  }
  out.strictly_increasing = true;
  out.band_min = std::numeric_limits<double>::infinity();
  out.band_max = 0.0;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < out.rows.size(); ++k) {
    const auto& r = out.rows[k];
    if (k > 0 && !(r.weak_lp_p > out.rows[k - 1].weak_lp_p)) out.strictly_increasing = false;
    out.band_min = std::min(out.band_min, r.ratio);
    out.band_max = std::max(out.band_max, r.ratio);
    xs.push_back(static_cast<double>(k));
    ys.push_back(r.weak_lp_p);
  }
  out.log2_slope = log2_slope_positive(xs, ys);
  return out;
}

ExperimentReport divergence_report(const SharpnessPlan& plan, const DivergenceResult& result) {
  ExperimentReport rep;
  rep.name = "sharpness";
  rep.header = {"k", "alpha_k", "low", "high", "rho", "weak_lp_p", "predicted", "ratio"};
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& r : result.rows) {
    rep.rows.push_back({static_cast<double>(r.k), static_cast<double>(r.alpha), static_cast<double>(r.low),
                        static_cast<double>(r.high), static_cast<double>(r.rho), r.weak_lp_p, r.predicted, r.ratio});
    if (r.cell_defined) {
      cells.push_back({{"k", r.k}, {"cell_min", r.cell_min}, {"cell_shape", r.cell_shape},
                       {"cell_ratio", r.cell_min / r.cell_shape}});
    } else {
      cells.push_back({{"k", r.k}, {"flag", "cell undefined: <alpha_k> = 0"}});
    }
  }
  const double band = result.band_max / result.band_min;
  rep.summary = {
      {"p", plan.p},
      {"phi", plan.phi.describe()},
      {"cap", plan.cap},
      {"alpha", plan.alpha},
      {"terms", plan.terms},
      {"rows", result.rows.size()},
      {"ratio_min", result.band_min},
      {"ratio_max", result.band_max},
      {"band", band},
      {"log2_slope", result.log2_slope},
      {"cells", cells},
      {"checks", {{"strictly_increasing", result.strictly_increasing}, {"band_below_4", band < 4.0}}},
  };
  return rep;
}

WeightedBoundResult verify_weighted_bound(const GroupConfig& cfg, const WeightedBoundOptions& opts) {
  require_small_p(opts.p);
  if (opts.atom_count < 1) throw std::invalid_argument("atom_count must be positive");
  const double p = opts.p;
  const int N = cfg.depth();
  WeightedBoundResult out;
  std::vector<double> lp_max;
  std::vector<double> hp_max;
  for (int L : opts.levels) {
    if (L < 1 || L + 1 >= N) throw std::out_of_range(fmt::format("atom level {} needs 1 <= L < N - 1", L));
    const std::size_t ML = cfg.cumprod(L);
    std::vector<std::size_t> indices;
    for (std::size_t n : presets::bounded_rho(cfg, opts.rho_cap)) {
      if (n > ML) indices.push_back(n);
    }
    if (indices.empty()) throw std::invalid_argument(fmt::format("no index above M_{} with rho <= {}", L, opts.rho_cap));

    std::vector<int> jpos(cfg.size(), L);
    for (std::size_t x = 0; x < cfg.size(); ++x) {
      if (x % ML != 0) jpos[x] = annulus_position(cfg, L, x).j;
    }

    WeightedBoundLevel lev;
    lev.level = L;
    lev.index_count = indices.size();
    std::vector<double> mn_lp(static_cast<std::size_t>(N), 0.0);
    std::vector<double> mn_hp(static_cast<std::size_t>(N), 0.0);
    std::mt19937_64 rng(opts.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(L)));
    for (int i = 0; i < opts.atom_count; ++i) {
      const Atom a = random_atom(cfg, L, p, rng, opts.resolution);
      const Spectrum s = forward(a.values);
      const double ha = hardy_quasinorm(a.values, p);
      for (std::size_t n : indices) {
        const IndexProfile prof = expand(n, cfg);
        const double w = fejer_weight(cfg, n, p);
        const GridFunction g = fejer_mean(s, n);
        const double lp = lp_quasinorm(g, p) / ha;
        const double hp = hardy_quasinorm(g, p) / ha;
        if (w * lp > lev.lp_ratio) {
          lev.lp_ratio = w * lp;
          lev.lp_argmax = n;
        }
        if (w * hp > lev.hp_ratio) {
          lev.hp_ratio = w * hp;
          lev.hp_argmax = n;
        }
        if (prof.rho == 0 && prof.digits[static_cast<std::size_t>(prof.high)] == 1) {
          const auto k = static_cast<std::size_t>(prof.high);
          mn_lp[k] = std::max(mn_lp[k], lp);
          mn_hp[k] = std::max(mn_hp[k], hp);
        }
        double comp = 0.0;
        double peak = 0.0;
        double zero = 0.0;
        for (std::size_t x = 0; x < g.size(); ++x) {
          const double v = std::abs(g[x]);
          peak = std::max(peak, v);
          if (x % ML == 0) continue;
          comp += std::pow(w * v, p);
          if (jpos[x] < L && jpos[x] < prof.low) zero = std::max(zero, v);
        }
        lev.complement_integral = std::max(lev.complement_integral, comp / static_cast<double>(cfg.size()));
        if (peak > 0.0) lev.zero_cell = std::max(lev.zero_cell, zero / peak);
      }
    }
    std::vector<double> ks;
    std::vector<double> ylp;
    std::vector<double> yhp;
    for (int k = L + 1; k < N; ++k) {
      ks.push_back(k);
      ylp.push_back(mn_lp[static_cast<std::size_t>(k)]);
      yhp.push_back(mn_hp[static_cast<std::size_t>(k)]);
    }
    lev.mn_slope_lp = log2_slope_positive(ks, ylp);
    lev.mn_slope_hp = log2_slope_positive(ks, yhp);
    lp_max.push_back(lev.lp_ratio);
    hp_max.push_back(lev.hp_ratio);
    out.zero_cell = std::max(out.zero_cell, lev.zero_cell);
    for (double sl : {lev.mn_slope_lp, lev.mn_slope_hp}) {
      out.mn_slope = (std::isnan(sl) || std::isnan(out.mn_slope)) ? std::numeric_limits<double>::quiet_NaN()
                                                                   : std::max(out.mn_slope, std::abs(sl));
    }
    out.levels.push_back(lev);
  }
  out.lp_drift = drift(lp_max);
  out.hp_drift = drift(hp_max);
  return out;
}

ExperimentReport weighted_bound_report(const WeightedBoundResult& result) {
  ExperimentReport rep;
  rep.name = "thm1a";
  rep.header = {"level",    "index_count", "complement_integral", "lp_ratio",    "lp_argmax",
                "hp_ratio", "hp_argmax",   "zero_cell",           "mn_slope_lp", "mn_slope_hp"};
  for (const auto& l : result.levels) {
    rep.rows.push_back({static_cast<double>(l.level), static_cast<double>(l.index_count), l.complement_integral,
                        l.lp_ratio, static_cast<double>(l.lp_argmax), l.hp_ratio, static_cast<double>(l.hp_argmax),
                        l.zero_cell, l.mn_slope_lp, l.mn_slope_hp});
  }
  rep.summary = {
      {"lp_drift", result.lp_drift},
      {"hp_drift", result.hp_drift},
      {"zero_cell", result.zero_cell},
      {"mn_slope", result.mn_slope},
      {"checks",
       {{"lp_drift_below_10pct", result.lp_drift < 0.10},
        {"hp_drift_below_10pct", result.hp_drift < 0.10},
        {"zero_cells_below_1e-9", result.zero_cell < 1e-9},
        {"mn_slope_below_0.05", result.mn_slope < 0.05}}},
  };
  return rep;
}

RatePreset parse_rate_preset(const std::string& name) {
  if (name == "Mn") return RatePreset::Mn;
  if (name == "Mn_plus_1") return RatePreset::MnPlusOne;
  if (name == "walsh_2n_plus_1") return RatePreset::Walsh2nPlusOne;
  throw std::invalid_argument(fmt::format("unknown rate preset '{}'", name));
}

std::string rate_preset_name(RatePreset preset) {
  switch (preset) {
    case RatePreset::Mn: return "Mn";
    case RatePreset::MnPlusOne: return "Mn_plus_1";
    case RatePreset::Walsh2nPlusOne: return "walsh_2n_plus_1";
  }
  return "?";
}

RateTable rate_table(const GroupConfig& cfg, double p, RatePreset preset, int atom_count,
                               std::uint64_t seed, int min_level) {
  require_small_p(p);
  std::vector<std::size_t> indices;
  switch (preset) {
    case RatePreset::Mn: indices = presets::powers(cfg); break;
    case RatePreset::MnPlusOne: indices = presets::powers_plus_one(cfg); break;
    case RatePreset::Walsh2nPlusOne: indices = presets::two_power_plus_one(cfg); break;
  }
  RateTable table;
  table.preset = preset;
  table.p = p;
  std::mt19937_64 rng(seed);
  for (std::size_t n : indices) {
    int b = -1;
    while (b + 1 < cfg.depth() && cfg.cumprod(b + 1) < n) ++b;
    if (b < min_level || b + 1 > cfg.depth()) continue;
    RateRow row;
    row.n = n;
    row.level = b;
    const GridFunction block = block_atom(cfg, b, p);
    const double hb = hardy_quasinorm(block, p);
    const GridFunction gb = fejer_mean(forward(block), n);
    row.block_lp = lp_quasinorm(gb, p) / hb;
    row.block_hp = hardy_quasinorm(gb, p) / hb;
    for (int i = 0; i < atom_count; ++i) {
      const Atom a = random_atom(cfg, b, p, rng);
      const double ha = hardy_quasinorm(a.values, p);
      const GridFunction g = fejer_mean(forward(a.values), n);
      row.random_lp = std::max(row.random_lp, lp_quasinorm(g, p) / ha);
      row.random_hp = std::max(row.random_hp, hardy_quasinorm(g, p) / ha);
    }
    table.rows.push_back(row);
  }
  std::vector<double> xs;
  std::vector<double> yb;
  std::vector<double> yw;
  for (const auto& r : table.rows) {
    xs.push_back(r.level);
    yb.push_back(r.block_lp);
    yw.push_back(std::max(r.block_lp, r.random_lp));
  }
  table.block_slope = log2_slope_positive(xs, yb);
  table.worst_slope = log2_slope_positive(xs, yw);
  return table;
}

ExperimentReport rate_report(const RateTable& table) {
  ExperimentReport rep;
  rep.name = "rates";
  rep.header = {"n", "level", "block_lp", "block_hp", "random_lp", "random_hp"};
  for (const auto& r : table.rows) {
    rep.rows.push_back({static_cast<double>(r.n), static_cast<double>(r.level), r.block_lp, r.block_hp, r.random_lp,
                        r.random_hp});
  }
  const double full = 1.0 / table.p - 2.0;
  rep.summary = {
      {"preset", rate_preset_name(table.preset)},
      {"p", table.p},
      {"block_slope", table.block_slope},
      {"worst_slope", table.worst_slope},
  };
  switch (table.preset) {
    case RatePreset::Mn:
      rep.summary["checks"] = {{"bounded_slope", std::abs(table.block_slope) < 0.05}};
      break;
    case RatePreset::MnPlusOne:
      rep.summary["claimed_slope"] = full;
      rep.summary["checks"] = {{"slope_in_band",
                                table.block_slope >= 0.7 * full && table.block_slope <= 1.1 * full}};
      break;
    case RatePreset::Walsh2nPlusOne:
      // Two different exponents are claimed for this operator; both are reported.
      rep.summary["claimed_slopes"] = {full, full / 2.0};
      rep.summary["distance_to_claims"] = {std::abs(table.block_slope - full),
                                           std::abs(table.block_slope - full / 2.0)};
      rep.summary["discrepancy_flag"] = "two claimed exponents for the same operator; no assertion made";
      rep.summary["checks"] = nlohmann::json::object();
      break;
  }
  return rep;
}

}  // namespace vilenkin
