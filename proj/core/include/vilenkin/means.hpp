#pragma once

// Partial sums, Fejer means and the maximal operators built from them.

#include <cstddef>
#include <span>
#include <vector>

#include "vilenkin/transform.hpp"

namespace vilenkin {

/// S_n f = sum_{k<n} f^(k) psi_k; 0 <= n <= M_N.
GridFunction partial_sum(const Spectrum& s, std::size_t n);

/// sigma_n f = sum_{j<n} ((n - j)/n) f^(j) psi_j; 1 <= n <= M_N.
GridFunction fejer_mean(const Spectrum& s, std::size_t n);

/// sigma_n f = f * K_n evaluated as a direct group convolution. O(M_N^2).
GridFunction fejer_mean_convolution(const GridFunction& f, std::size_t n);

/// Pointwise sup over the listed indices of |sigma_n f| (real-valued result).
/// Every index must lie in [1, M_N].
GridFunction restricted_maximal(const Spectrum& s, std::span<const std::size_t> indices);

/// (M_{<n>} / M_{|n|})^{1/p - 2}; 0 < p < 1/2, 1 <= n < M_N.
double fejer_weight(const GroupConfig& cfg, std::size_t n, double p);

/// fejer_weight(n, p) |sigma_n f|.
GridFunction weighted_sigma(const Spectrum& s, std::size_t n, double p);

/// Index-list generators for the maximal operators.
namespace presets {

/// {M_0, ..., M_N}: the Weisz operator sup_n |sigma_{M_n} f|.
std::vector<std::size_t> powers(const GroupConfig& cfg);
/// {M_k + 1 : M_k + 1 < M_N}.
std::vector<std::size_t> powers_plus_one(const GroupConfig& cfg);
/// {2^k + 1 : 2^k + 1 < M_N}.
std::vector<std::size_t> two_power_plus_one(const GroupConfig& cfg);
/// {n in [1, M_N) : rho(n) <= c}.
std::vector<std::size_t> bounded_rho(const GroupConfig& cfg, int c);
/// Every n in [1, M_N]; only for M_N <= 4096.
std::vector<std::size_t> all_indices(const GroupConfig& cfg);

}  // namespace presets

}  // namespace vilenkin
