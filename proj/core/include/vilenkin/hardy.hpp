#pragma once

// Martingales on the cell filtration, maximal function and quasi-norms, and
// p-atoms.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "vilenkin/transform.hpp"

namespace vilenkin {

/// f^(0), ..., f^(N) where f^(n) is constant on every cell I_n(x) and the
/// I_n-average of f^(n+1) is f^(n).
class Martingale {
 public:
  /// Validates measurability and consistency to 1e-10 relative to max |f^(N)|.
  /// Throws std::invalid_argument on violation.
  Martingale(GroupConfig cfg, std::vector<GridFunction> levels);

  const GroupConfig& config() const noexcept { return cfg_; }
  int depth() const noexcept { return cfg_.depth(); }
  const GridFunction& level(int n) const { return levels_.at(static_cast<std::size_t>(n)); }
  std::span<const GridFunction> levels() const noexcept { return levels_; }
  const GridFunction& top() const { return levels_.back(); }

 private:
  GroupConfig cfg_;
  std::vector<GridFunction> levels_;
};

/// Mean of f over I_n(x) for every x, as a grid function.
GridFunction cell_average(const GridFunction& f, int n);

/// Levels from I_n-cell averages.
Martingale martingale_from_function(const GridFunction& f);
/// Levels S_{M_n} f from the spectrum.
Martingale martingale_from_partial_sums(const GridFunction& f);

/// f* = max_n |f^(n)|.
GridFunction maximal_function(const Martingale& mart);
/// Maximal function of martingale_from_function(f) without storing the levels.
GridFunction maximal_function(const GridFunction& f);

/// ((1/M_N) sum |g|^p)^{1/p}; p > 0.
double lp_quasinorm(const GridFunction& g, double p);
/// sup_lambda lambda^p mu(|g| > lambda), evaluated exactly at the jumps.
double weak_lp_power(const GridFunction& g, double p);
/// weak_lp_power(g, p)^{1/p}.
double weak_lp_quasinorm(const GridFunction& g, double p);

/// ||f*||_p.
double hardy_quasinorm(const Martingale& mart, double p);
double hardy_quasinorm(const GridFunction& f, double p);

/// Candidate p-atom supported in I_{support_level}(0).
struct Atom {
  GridFunction values;
  int support_level = 0;
  double p = 0.0;
};

struct AtomCheck {
  bool supported = false;
  bool mean_zero = false;
  bool bounded = false;
  double mean = 0.0;      // |int a dmu|
  double sup_norm = 0.0;  // ||a||_inf
  double bound = 0.0;     // mu(I)^{-1/p}

  bool ok() const noexcept { return supported && mean_zero && bounded; }
};

/// Support in I, |mean| <= 1e-12 and ||a||_inf <= bound, both tolerances
/// relative to max(1, bound).
AtomCheck check_atom(const Atom& a);
bool validate_atom(const Atom& a);

/// Random atom on I_level(0) taking independent values on the sub-cells
/// I_{level + resolution} (clipped to the depth), centred and scaled so that
/// ||a||_inf = mu(I_level)^{-1/p}. Requires level < N.
Atom random_atom(const GroupConfig& cfg, int level, double p, std::mt19937_64& rng,
                 int resolution = 3);
Atom random_atom(const GroupConfig& cfg, int level, double p, std::uint64_t seed,
                 int resolution = 3);

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng);

}  // namespace vilenkin
