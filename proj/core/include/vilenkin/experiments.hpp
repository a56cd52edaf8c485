#pragma once

// Desk-scale experiments: the weighted bound on atoms, the divergence of the
// counterexample martingale in weak-L_p, and rate tables for index presets.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vilenkin/hardy.hpp"
#include "vilenkin/transform.hpp"

namespace vilenkin {

/// Least-squares slope of ys against xs. Needs at least two distinct xs.
double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// Table of numbers plus a JSON summary; CSV output is byte-stable.
struct ExperimentReport {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  nlohmann::json summary = nlohmann::json::object();

  /// Header line, then one line per row; numbers printed with "{:.17g}".
  std::string csv() const;
  /// summary["checks"] entries that are false.
  std::vector<std::string> failed_checks() const;
};

/// Nondecreasing weight Phi(n) >= 1.
struct PhiFunction {
  enum class Kind { Constant, Power, LogPower, Rate };

  Kind kind = Kind::Constant;
  double parameter = 0.0;

  static PhiFunction constant() { return {}; }
  /// n^beta, beta >= 0.
  static PhiFunction power(double beta);
  /// (1 + log2 n)^gamma, gamma >= 0.
  static PhiFunction log_power(double gamma);
  /// (M_{|n|} / M_{<n>})^{1/p - 2}: the full growth rate of the weight.
  static PhiFunction rate() { return {Kind::Rate, 0.0}; }

  double operator()(const GroupConfig& cfg, std::size_t n, double p) const;
  std::string describe() const;
};

class InfeasibleAtDepth : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SelectionRule {
  Cap,      // accept while the running sum of terms stays <= cap
  Halving,  // accept the j-th term only if it is <= 2^{-j}
};

struct SharpnessPlan {
  GroupConfig cfg;
  double p = 0.0;
  PhiFunction phi;
  std::vector<std::size_t> candidates;
  std::vector<std::size_t> alpha;
  std::vector<double> terms;    // M_{<a>}^{(1-2p)/2} Phi^{p/2}(a) / M_{|a|}^{(1-2p)/2}
  std::vector<double> weights;  // lambda_k with the free scale set to 1
  double cap = 0.0;
};

/// {M_{2k} + 1 : M_{2k} + 1 < M_N}; equals 2^{2k} + 1 for the Walsh group.
std::vector<std::size_t> sharpness_candidates(const GroupConfig& cfg);

/// Scans candidates in order, accepting n when n >= 3, |n| + 1 <= N, rho(n)
/// exceeds every accepted rho, and the rule admits its term. cap defaults to
/// 4x the first eligible term. Throws InfeasibleAtDepth below two rows.
SharpnessPlan select_alpha_subsequence(const GroupConfig& cfg, const std::vector<std::size_t>& candidates,
                                       double p, const PhiFunction& phi,
                                       std::optional<double> cap = std::nullopt,
                                       SelectionRule rule = SelectionRule::Cap);

/// f^(j) = M_{|a|}^{1/2p} M_{<a>}^{(1/p-2)/2} Phi^{1/2}(a) on [M_{|a|}, M_{|a|+1}) per selected a.
Spectrum counterexample_spectrum(const SharpnessPlan& plan);
/// a_k = M_{|a_k|}^{1/p-1} (D_{M_{|a_k|+1}} - D_{M_{|a_k|}}), declared on I_{|a_k|}.
std::vector<Atom> counterexample_atoms(const SharpnessPlan& plan);
/// f^(n) = sum_{|a_k| < n} lambda_k a_k.
Martingale build_counterexample(const SharpnessPlan& plan);

/// Relative max residual of
///   S_j f = S_{M_{|a_k|}} f + c_k (D_j - D_{M_{|a_k|}}),  M_{|a_k|} < j <= a_k.
double partial_sum_identity_residual(const SharpnessPlan& plan, std::size_t j, std::size_t k);

struct DivergenceRow {
  std::size_t k = 0;
  std::size_t alpha = 0;
  int low = 0;
  int high = 0;
  int rho = 0;
  double weak_lp_p = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;
  bool cell_defined = false;  // false when <alpha> = 0
  double cell_min = 0.0;      // min |sigma_alpha f| on I_{<a>+1}(e_{<a>-1} + e_{<a>})
  double cell_shape = 0.0;    // M_{|a|}^{1/2p-1} M_{<a>}^{(1/p+2)/2} / Phi^{1/2}(a)
};

struct DivergenceResult {
  std::vector<DivergenceRow> rows;
  bool strictly_increasing = false;
  double band_min = 0.0;
  double band_max = 0.0;
  double log2_slope = 0.0;  // of weak_lp_p against row number
};

/// weak_lp_quasinorm(sigma_{a_k} f / Phi(a_k), p)^p per selected a_k.
DivergenceResult measure_divergence(const SharpnessPlan& plan);
/// Sharpness CSV: k, alpha_k, low, high, rho, weak_lp_p, predicted, ratio.
ExperimentReport divergence_report(const SharpnessPlan& plan, const DivergenceResult& result);

struct WeightedBoundOptions {
  double p = 1.0 / 3.0;
  std::vector<int> levels{4, 6, 8};
  int atom_count = 200;
  int rho_cap = 3;
  std::uint64_t seed = 1;
  int resolution = 3;
};

struct WeightedBoundLevel {
  int level = 0;
  std::size_t index_count = 0;
  double complement_integral = 0.0;  // max of int_{G \ I_L} |weighted sigma_n a|^p
  double lp_ratio = 0.0;             // max ||sigma_n a||_p / (w_n ||a||_{H_p})
  std::size_t lp_argmax = 0;
  double hp_ratio = 0.0;             // same with ||sigma_n a||_{H_p}
  std::size_t hp_argmax = 0;
  double zero_cell = 0.0;            // max |sigma_n a| on cells with j < <n>, relative to max |sigma_n a|
  double mn_slope_lp = 0.0;          // log2 slope of max ||sigma_{M_k} a||_p / ||a||_{H_p} over k > L
  double mn_slope_hp = 0.0;
};

struct WeightedBoundResult {
  std::vector<WeightedBoundLevel> levels;
  double lp_drift = 0.0;  // (max - min) / min of lp_ratio across levels
  double hp_drift = 0.0;
  double zero_cell = 0.0;
  double mn_slope = 0.0;  // largest |slope| of either form over levels
};

/// Random atoms at each level against every n in (M_L, M_N) with rho(n) <= rho_cap.
WeightedBoundResult verify_weighted_bound(const GroupConfig& cfg, const WeightedBoundOptions& opts);
ExperimentReport weighted_bound_report(const WeightedBoundResult& result);

enum class RatePreset { Mn, MnPlusOne, Walsh2nPlusOne };

RatePreset parse_rate_preset(const std::string& name);
std::string rate_preset_name(RatePreset preset);

struct RateRow {
  std::size_t n = 0;
  int level = 0;  // largest b with M_b < n; input atoms live on I_b
  double block_lp = 0.0;
  double block_hp = 0.0;
  double random_lp = 0.0;
  double random_hp = 0.0;
};

struct RateTable {
  RatePreset preset = RatePreset::Mn;
  double p = 0.0;
  std::vector<RateRow> rows;
  double block_slope = 0.0;  // log2 slope of block_lp per level
  double worst_slope = 0.0;  // same for max(block_lp, random_lp)
};

/// ||sigma_n a||_p / ||a||_{H_p} and the H_p variant over the single-block atom
/// M_b^{1/p-1} (D_{M_{b+1}} - D_{M_b}) and atom_count random atoms, per preset
/// index with min_level <= b.
RateTable rate_table(const GroupConfig& cfg, double p, RatePreset preset, int atom_count,
                               std::uint64_t seed, int min_level = 1);
ExperimentReport rate_report(const RateTable& table);

}  // namespace vilenkin
