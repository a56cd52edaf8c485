#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "vilenkin/group.hpp"

namespace vilenkin {

using Complex = std::complex<double>;

/// Dense complex vector of length M_N tied to one group.
///
/// Tag keeps point-space functions and spectra from being mixed up.
template <class Tag>
class Field {
 public:
  explicit Field(GroupConfig cfg) : cfg_(std::move(cfg)), values_(cfg_.size()) {}

  Field(GroupConfig cfg, std::vector<Complex> values)
      : cfg_(std::move(cfg)), values_(std::move(values)) {
    if (values_.size() != cfg_.size()) throw std::invalid_argument("field length differs from M_N");
    check_finite();
  }

  static Field from_real(GroupConfig cfg, std::span<const double> values) {
    std::vector<Complex> v(values.begin(), values.end());
    return Field(std::move(cfg), std::move(v));
  }

  const GroupConfig& config() const noexcept { return cfg_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }

  Complex operator[](std::size_t i) const { return values_[i]; }
  Complex& operator[](std::size_t i) { return values_[i]; }

  Field& operator+=(const Field& o) {
    require_same_config(cfg_, o.cfg_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    require_same_config(cfg_, o.cfg_);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  Field& operator*=(Complex s) {
    for (auto& v : values_) v *= s;
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Complex s, Field a) { return a *= s; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Throws if any entry is NaN or infinite.
  void check_finite() const {
    for (const auto& v : values_) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw std::domain_error("field contains a non-finite value");
      }
    }
  }

 private:
  GroupConfig cfg_;
  std::vector<Complex> values_;
};

struct PointSpaceTag;
struct FrequencyTag;

/// f(x) sampled at the M_N points of the truncated group.
using GridFunction = Field<PointSpaceTag>;
/// Coefficients f^(0..M_N-1), indexed by n.
using Spectrum = Field<FrequencyTag>;

/// exp(2 pi i q / order) with exact values at multiples of a quarter turn.
Complex unit_root(int order, long long q);

/// r_k(x) = exp(2 pi i x_k / m_k).
Complex rademacher(const GroupConfig& cfg, int k, const GroupPoint& x);
Complex rademacher(const GroupConfig& cfg, int k, std::size_t x);

/// psi_n(x) = prod_k r_k(x)^{n_k}.
Complex character(const GroupConfig& cfg, std::size_t n, const GroupPoint& x);
Complex character(const GroupConfig& cfg, std::size_t n, std::size_t x);

/// psi_n as a grid function.
GridFunction character_function(const GroupConfig& cfg, std::size_t n);
/// r_k as a grid function.
GridFunction rademacher_function(const GroupConfig& cfg, int k);

/// f^(k) = (1/M_N) sum_x f(x) conj(psi_k(x)); N passes of size-m_k DFTs.
Spectrum forward(const GridFunction& f);
/// sum_k s(k) psi_k(x); unweighted synthesis.
GridFunction inverse(const Spectrum& s);

/// O(M_N^2) direct sums. Reference only.
Spectrum forward_naive(const GridFunction& f);
GridFunction inverse_naive(const Spectrum& s);

/// (f * g)(x) = (1/M_N) sum_t f(x - t) g(t), via the spectra.
GridFunction convolve(const GridFunction& f, const GridFunction& g);
/// Same convolution by the O(M_N^2) double sum.
GridFunction convolve_direct(const GridFunction& f, const GridFunction& g);

/// <f, g> = (1/M_N) sum_x f(x) conj(g(x)).
Complex inner_product(const GridFunction& f, const GridFunction& g);

/// max |a - b| / max(max |b|, 1e-300).
template <class Tag>
double relative_error(const Field<Tag>& a, const Field<Tag>& b) {
  require_same_config(a.config(), b.config());
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  return diff / std::max(b.max_abs(), 1e-300);
}

template <class Tag>
double max_abs_difference(const Field<Tag>& a, const Field<Tag>& b) {
  require_same_config(a.config(), b.config());
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  return diff;
}

/// g(x) = f(x - t).
GridFunction translate(const GridFunction& f, std::size_t t);

/// Pointwise product of two grid functions.
GridFunction multiply(const GridFunction& f, const GridFunction& g);

}  // namespace vilenkin
