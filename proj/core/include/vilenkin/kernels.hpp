#pragma once

// Dirichlet and Fejer kernels, their closed forms, and numerical checks of the
// kernel identities and bounds.
//
// Conventions:
//   D_n = sum_{k<n} psi_k
//   K_n = (1/n) sum_{k=1}^{n} D_k = sum_{j<n} ((n - j) / n) psi_j

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <vector>

#include "vilenkin/transform.hpp"

namespace vilenkin {

/// D_n via the indicator spectrum of [0, n). 0 <= n <= M_N.
GridFunction dirichlet(const GroupConfig& cfg, std::size_t n);

/// D_{M_n} = M_n on I_n, 0 elsewhere. 0 <= n <= N.
GridFunction dirichlet_Mn_closed(const GroupConfig& cfg, int n);

/// D_{s M_n} = D_{M_n} sum_{k<s} r_n^k for 1 <= s < m_n, n < N.
GridFunction dirichlet_sMn_closed(const GroupConfig& cfg, int s, int n);

/// max |D_{j+M_n} - (D_{M_n} + r_n D_j)| for j < M_n, n < N.
double shift_identity_residual(const GroupConfig& cfg, std::size_t j, int n);

/// Spectral multiplier of K_n: (n - j)/n for j < n, else 0.
Spectrum fejer_multiplier(const GroupConfig& cfg, std::size_t n);

/// K_n for 1 <= n <= M_N, synthesised from its multiplier.
GridFunction fejer_kernel(const GroupConfig& cfg, std::size_t n);

/// K_{M_n} from the closed form off I_n.
///
/// For x in I_t \ I_{t+1}, t < n: 0 unless x - x_t e_t in I_n, where the value
/// is M_t / (1 - r_t(x)). On I_n every psi_j (j < M_n) equals 1 and the
/// multiplier sum gives (M_n + 1) / 2.
GridFunction fejer_Mn_closed(const GroupConfig& cfg, int n);

/// int |K_n| dmu on the truncated group.
double kernel_l1_norm(const GroupConfig& cfg, std::size_t n);

struct L1Sweep {
  double sup = 0.0;
  std::size_t argmax = 0;
};
/// sup of kernel_l1_norm over n in [first, last).
L1Sweep kernel_l1_sup(const GroupConfig& cfg, std::size_t first, std::size_t last);

/// Bounded LRU cache of kernels keyed by (kind, n); one per group.
///
/// Lookups take a shared lock and bump an atomic use tick; insertion and
/// eviction of the least recently used entry take an exclusive lock.
class KernelCache {
 public:
  enum class Kind : std::uint8_t { Dirichlet, Fejer };

  KernelCache(GroupConfig cfg, std::size_t budget_entries);

  std::shared_ptr<const GridFunction> get(Kind kind, std::size_t n);
  std::shared_ptr<const GridFunction> fejer(std::size_t n) { return get(Kind::Fejer, n); }
  std::shared_ptr<const GridFunction> dirichlet(std::size_t n) { return get(Kind::Dirichlet, n); }

  const GroupConfig& config() const noexcept { return cfg_; }
  std::size_t budget() const noexcept { return budget_; }
  std::size_t size() const;
  std::size_t hits() const noexcept { return hits_.load(); }
  std::size_t misses() const noexcept { return misses_.load(); }

 private:
  using Key = std::pair<Kind, std::size_t>;
  struct Entry {
    explicit Entry(std::shared_ptr<const GridFunction> v, std::uint64_t tick)
        : value(std::move(v)), last_use(tick) {}
    std::shared_ptr<const GridFunction> value;
    std::atomic<std::uint64_t> last_use;
  };

  GroupConfig cfg_;
  std::size_t budget_;
  mutable std::shared_mutex mutex_;
  std::map<Key, Entry> entries_;
  std::atomic<std::uint64_t> clock_{0};
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

/// Empirical constant of the annulus integral bound:
///   max_{x in I_level^{i,j}} [int_{I_level} |K_n(x - t)| dmu(t)] M_level^2 / (M_i M_j)
/// for i < j <= level <= N and n >= M_level.
double annulus_integral_constant(const GroupConfig& cfg, int level, int i, int j, std::size_t n);

struct AnnulusSweep {
  double constant = 0.0;
  int i = 0;
  int j = 0;
  std::size_t n = 0;
};
/// Maximum of annulus_integral_constant over every (i, j) and n in [first, last).
AnnulusSweep annulus_constant_sweep(const GroupConfig& cfg, int level, std::size_t first,
                              std::size_t last);

struct UpperBoundCheck {
  double constant = 0.0;            // max ratio where the denominator is nonzero
  bool zero_denominator_violation = false;
  std::size_t worst_point = 0;
};

/// |K_n(x)| against (1/n) sum_{l=<n>}^{|n|} M_l |K_{M_l}(x)|. 1 <= n < M_N.
UpperBoundCheck verify_upper_bound(const GroupConfig& cfg, std::size_t n,
                                 KernelCache* cache = nullptr);

struct LowerBoundCheck {
  bool holds = false;
  double min_value = 0.0;  // min |n K_n| on the test cell
  double bound = 0.0;      // M_{<n>}^2 / (2 pi lambda)
  double margin = 0.0;     // min_value - bound
};

/// |n K_n(x)| >= M_{<n>}^2 / (2 pi lambda) on I_{<n>+1}(e_{<n>-1} + e_{<n>}).
/// Requires <n> >= 1 (the cell is undefined otherwise).
LowerBoundCheck verify_lower_bound(const GroupConfig& cfg, std::size_t n);

/// Indices of I_{low+1}(e_{low-1} + e_{low}); low >= 1.
std::vector<std::size_t> lower_bound_cell(const GroupConfig& cfg, int low);

}  // namespace vilenkin
