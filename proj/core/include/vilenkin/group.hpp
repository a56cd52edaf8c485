#pragma once

// Truncated bounded Vilenkin group: Z_{m_0} x ... x Z_{m_{N-1}}.
//
// Points and operator indices share one mixed-radix codec:
//   idx = sum_k x_k * M_k,  M_0 = 1,  M_{k+1} = m_k * M_k.
// Digit 0 is the least significant (stride 1) coordinate.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vilenkin {

/// Thrown when two objects built over different groups are combined.
class ConfigMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Radix sequence m_0..m_{N-1} with its cumulative products.
///
/// Immutable and cheap to copy (the tables are shared).
class GroupConfig {
 public:
  explicit GroupConfig(std::vector<int> radices);

  /// m_k = radix for every k < depth.
  static GroupConfig uniform(int radix, int depth);
  /// The Walsh-Paley case m = 2.
  static GroupConfig walsh(int depth) { return uniform(2, depth); }

  int depth() const noexcept { return static_cast<int>(data_->radices.size()); }
  int radix(int k) const { return data_->radices.at(static_cast<std::size_t>(k)); }
  std::span<const int> radices() const noexcept { return data_->radices; }

  /// M_k for 0 <= k <= depth.
  std::size_t cumprod(int k) const { return data_->cumprods.at(static_cast<std::size_t>(k)); }
  std::span<const std::size_t> cumprods() const noexcept { return data_->cumprods; }

  /// M_N, the number of points.
  std::size_t size() const noexcept { return data_->cumprods.back(); }

  /// max_k m_k.
  int lambda() const noexcept { return data_->lambda; }

  /// lcm of the radices; every character value is a power of exp(2 pi i / phase_modulus()).
  int phase_modulus() const noexcept { return data_->phase_modulus; }

  /// The same radices truncated (or checked) at a smaller depth.
  GroupConfig truncated(int depth) const;

  std::string describe() const;

  friend bool operator==(const GroupConfig& a, const GroupConfig& b) noexcept {
    return a.data_ == b.data_ || a.data_->radices == b.data_->radices;
  }

 private:
  struct Data {
    std::vector<int> radices;
    std::vector<std::size_t> cumprods;
    int lambda = 0;
    int phase_modulus = 1;
  };
  std::shared_ptr<const Data> data_;
};

void require_same_config(const GroupConfig& a, const GroupConfig& b);

/// A group element x = (x_0, ..., x_{N-1}).
struct GroupPoint {
  std::vector<int> digits;

  friend bool operator==(const GroupPoint&, const GroupPoint&) = default;
};

GroupPoint point_from_index(const GroupConfig& cfg, std::size_t idx);
std::size_t index_from_point(const GroupConfig& cfg, const GroupPoint& x);

/// Digit k of the point with index idx.
inline int digit_of(const GroupConfig& cfg, std::size_t idx, int k) {
  return static_cast<int>((idx / cfg.cumprod(k)) % static_cast<std::size_t>(cfg.radix(k)));
}

GroupPoint group_add(const GroupConfig& cfg, const GroupPoint& x, const GroupPoint& t);
GroupPoint group_sub(const GroupConfig& cfg, const GroupPoint& x, const GroupPoint& t);

/// Index-space versions of group_add / group_sub.
std::size_t add_indices(const GroupConfig& cfg, std::size_t x, std::size_t t);
std::size_t sub_indices(const GroupConfig& cfg, std::size_t x, std::size_t t);

/// e_k: the point with a single digit x_k = 1.
GroupPoint unit_point(const GroupConfig& cfg, int k);

/// Exact non-negative rational, always reduced.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Rational() = default;
  Rational(std::uint64_t n, std::uint64_t d);

  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  Rational operator+(const Rational& o) const;

  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Sorted set of point indices of one group.
class CellSet {
 public:
  CellSet(GroupConfig cfg, std::vector<std::size_t> indices);

  const GroupConfig& config() const noexcept { return cfg_; }
  std::span<const std::size_t> indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(std::size_t idx) const;

  CellSet set_union(const CellSet& other) const;
  bool disjoint_from(const CellSet& other) const;

 private:
  GroupConfig cfg_;
  std::vector<std::size_t> indices_;
};

/// I_n(x) = { y : y_k = x_k for k < n }.
CellSet interval(const GroupConfig& cfg, int n, const GroupPoint& x);
CellSet whole_group(const GroupConfig& cfg);

/// True iff the point with index idx lies in I_n = I_n(0).
inline bool in_interval(const GroupConfig& cfg, int n, std::size_t idx) {
  return idx % cfg.cumprod(n) == 0;
}

Rational haar_measure(const CellSet& s);

/// The annulus cell I_level^{i,j}.
///
/// For j < level the cell fixes x_0..x_{level-1} as: zeros, x_i != 0, zeros,
/// x_j != 0, then tail_digits for positions j+1..level-1. For j == level the
/// cell is I_level(0,..,0,x_i != 0,0,..,0). Both nonzero digits range over
/// all admissible values.
CellSet annulus_cell(const GroupConfig& cfg, int level, int i, int j,
                     std::span<const int> tail_digits = {});

/// Position (i, j) of the annulus cell I_level^{i,j} holding idx.
/// idx must lie outside I_level; j == level when only one digit below level is nonzero.
struct AnnulusPosition {
  int i;
  int j;
  friend bool operator==(const AnnulusPosition&, const AnnulusPosition&) = default;
};
AnnulusPosition annulus_position(const GroupConfig& cfg, int level, std::size_t idx);

/// Every annulus cell of the complement of I_level, in (i, j, tail) order.
std::vector<CellSet> annulus_cells(const GroupConfig& cfg, int level);

/// Checks that the annulus cells tile the complement of I_level exactly.
bool verify_partition(const GroupConfig& cfg, int level);

}  // namespace vilenkin
