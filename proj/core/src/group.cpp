#include "vilenkin/group.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace vilenkin {

namespace {

// Keeps M_N comfortably inside size_t and dense vectors addressable.
constexpr std::size_t kMaxGroupSize = std::size_t{1} << 40;

void check_digits(const GroupConfig& cfg, const GroupPoint& x) {
  if (static_cast<int>(x.digits.size()) != cfg.depth()) {
    throw ConfigMismatch(fmt::format("point has {} digits, group depth is {}", x.digits.size(),
                                     cfg.depth()));
  }
  for (int k = 0; k < cfg.depth(); ++k) {
    const int d = x.digits[static_cast<std::size_t>(k)];
    if (d < 0 || d >= cfg.radix(k)) {
      throw std::out_of_range(fmt::format("digit x_{} = {} outside [0, {})", k, d, cfg.radix(k)));
    }
  }
}

}  // namespace

GroupConfig::GroupConfig(std::vector<int> radices) {
  if (radices.empty()) throw std::invalid_argument("group depth must be positive");
  auto data = std::make_shared<Data>();
  data->cumprods.reserve(radices.size() + 1);
  data->cumprods.push_back(1);
  for (std::size_t k = 0; k < radices.size(); ++k) {
    const int m = radices[k];
    if (m < 2) throw std::invalid_argument(fmt::format("radix m_{} = {} is below 2", k, m));
    const std::size_t prev = data->cumprods.back();
    if (prev > kMaxGroupSize / static_cast<std::size_t>(m)) {
      throw std::invalid_argument("group too large: M_N exceeds 2^40");
    }
    data->cumprods.push_back(prev * static_cast<std::size_t>(m));
    data->lambda = std::max(data->lambda, m);
    data->phase_modulus = std::lcm(data->phase_modulus, m);
  }
  data->radices = std::move(radices);
  data_ = std::move(data);
}

GroupConfig GroupConfig::uniform(int radix, int depth) {
  if (depth < 1) throw std::invalid_argument("group depth must be positive");
  return GroupConfig(std::vector<int>(static_cast<std::size_t>(depth), radix));
}

GroupConfig GroupConfig::truncated(int depth) const {
  if (depth < 1 || depth > this->depth()) {
    throw std::out_of_range(fmt::format("cannot truncate depth {} to {}", this->depth(), depth));
  }
  if (depth == this->depth()) return *this;
  return GroupConfig(std::vector<int>(data_->radices.begin(), data_->radices.begin() + depth));
}

std::string GroupConfig::describe() const {
  const auto& r = data_->radices;
  if (std::all_of(r.begin(), r.end(), [&](int m) { return m == r.front(); })) {
    return fmt::format("m={}^{} (M_N={})", r.front(), r.size(), size());
  }
  return fmt::format("m=({}) (M_N={})", fmt::join(r, ","), size());
}

void require_same_config(const GroupConfig& a, const GroupConfig& b) {
  if (!(a == b)) {
    throw ConfigMismatch("operands live on different groups: " + a.describe() + " vs " +
                         b.describe());
  }
}

GroupPoint point_from_index(const GroupConfig& cfg, std::size_t idx) {
  if (idx >= cfg.size()) {
    throw std::out_of_range(fmt::format("index {} outside [0, {})", idx, cfg.size()));
  }
  GroupPoint x;
  x.digits.resize(static_cast<std::size_t>(cfg.depth()));
  for (int k = 0; k < cfg.depth(); ++k) {
    const auto m = static_cast<std::size_t>(cfg.radix(k));
    x.digits[static_cast<std::size_t>(k)] = static_cast<int>(idx % m);
    idx /= m;
  }
  return x;
}

std::size_t index_from_point(const GroupConfig& cfg, const GroupPoint& x) {
  check_digits(cfg, x);
  std::size_t idx = 0;
  for (int k = 0; k < cfg.depth(); ++k) {
    idx += static_cast<std::size_t>(x.digits[static_cast<std::size_t>(k)]) * cfg.cumprod(k);
  }
  return idx;
}

GroupPoint group_add(const GroupConfig& cfg, const GroupPoint& x, const GroupPoint& t) {
  check_digits(cfg, x);
  check_digits(cfg, t);
  GroupPoint r = x;
  for (int k = 0; k < cfg.depth(); ++k) {
    auto& d = r.digits[static_cast<std::size_t>(k)];
    d = (d + t.digits[static_cast<std::size_t>(k)]) % cfg.radix(k);
  }
  return r;
}

GroupPoint group_sub(const GroupConfig& cfg, const GroupPoint& x, const GroupPoint& t) {
  check_digits(cfg, x);
  check_digits(cfg, t);
  GroupPoint r = x;
  for (int k = 0; k < cfg.depth(); ++k) {
    auto& d = r.digits[static_cast<std::size_t>(k)];
    d = (d - t.digits[static_cast<std::size_t>(k)] + cfg.radix(k)) % cfg.radix(k);
  }
  return r;
}

std::size_t add_indices(const GroupConfig& cfg, std::size_t x, std::size_t t) {
  std::size_t r = 0;
  for (int k = 0; k < cfg.depth(); ++k) {
    const auto m = static_cast<std::size_t>(cfg.radix(k));
    r += ((x % m + t % m) % m) * cfg.cumprod(k);
    x /= m;
    t /= m;
  }
  return r;
}

std::size_t sub_indices(const GroupConfig& cfg, std::size_t x, std::size_t t) {
  std::size_t r = 0;
  for (int k = 0; k < cfg.depth(); ++k) {
    const auto m = static_cast<std::size_t>(cfg.radix(k));
    r += ((x % m + m - t % m) % m) * cfg.cumprod(k);
    x /= m;
    t /= m;
  }
  return r;
}

GroupPoint unit_point(const GroupConfig& cfg, int k) {
  if (k < 0 || k >= cfg.depth()) throw std::out_of_range("unit_point: coordinate out of range");
  GroupPoint e;
  e.digits.assign(static_cast<std::size_t>(cfg.depth()), 0);
  e.digits[static_cast<std::size_t>(k)] = 1;
  return e;
}

Rational::Rational(std::uint64_t n, std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  const std::uint64_t g = std::gcd(n, d);
  num = g == 0 ? 0 : n / g;
  den = g == 0 ? 1 : d / g;
}

Rational Rational::operator+(const Rational& o) const {
  const std::uint64_t l = std::lcm(den, o.den);
  return Rational(num * (l / den) + o.num * (l / o.den), l);
}

CellSet::CellSet(GroupConfig cfg, std::vector<std::size_t> indices)
    : cfg_(std::move(cfg)), indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= cfg_.size()) throw std::out_of_range("cell index outside the group");
    if (i > 0 && indices_[i - 1] >= indices_[i]) {
      throw std::invalid_argument("cell indices must be strictly increasing");
    }
  }
}

bool CellSet::contains(std::size_t idx) const {
  return std::binary_search(indices_.begin(), indices_.end(), idx);
}

CellSet CellSet::set_union(const CellSet& other) const {
  require_same_config(cfg_, other.cfg_);
  std::vector<std::size_t> out;
  out.reserve(indices_.size() + other.indices_.size());
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out));
  return CellSet(cfg_, std::move(out));
}

bool CellSet::disjoint_from(const CellSet& other) const {
  require_same_config(cfg_, other.cfg_);
  auto a = indices_.begin();
  auto b = other.indices_.begin();
  while (a != indices_.end() && b != other.indices_.end()) {
    if (*a == *b) return false;
    if (*a < *b) ++a; else ++b;
  }
  return true;
}

CellSet interval(const GroupConfig& cfg, int n, const GroupPoint& x) {
  if (n < 0 || n > cfg.depth()) {
    throw std::out_of_range(fmt::format("interval level {} outside [0, {}]", n, cfg.depth()));
  }
  const std::size_t base = index_from_point(cfg, x) % cfg.cumprod(n);
  const std::size_t step = cfg.cumprod(n);
  std::vector<std::size_t> idx;
  idx.reserve(cfg.size() / step);
  for (std::size_t v = base; v < cfg.size(); v += step) idx.push_back(v);
  return CellSet(cfg, std::move(idx));
}

CellSet whole_group(const GroupConfig& cfg) {
  std::vector<std::size_t> idx(cfg.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return CellSet(cfg, std::move(idx));
}

Rational haar_measure(const CellSet& s) {
  return Rational(s.size(), s.config().size());
}

CellSet annulus_cell(const GroupConfig& cfg, int level, int i, int j,
                     std::span<const int> tail_digits) {
  if (level < 1 || level > cfg.depth()) {
    throw std::out_of_range(fmt::format("annulus level {} outside [1, {}]", level, cfg.depth()));
  }
  if (i < 0 || i >= j || j > level) {
    throw std::invalid_argument(
        fmt::format("annulus cell needs 0 <= i < j <= level, got i={} j={} level={}", i, j, level));
  }
  const std::size_t tail_len = j < level ? static_cast<std::size_t>(level - j - 1) : 0;
  if (tail_digits.size() != tail_len) {
    throw std::invalid_argument(
        fmt::format("annulus cell ({},{}) needs {} tail digits, got {}", i, j, tail_len,
                    tail_digits.size()));
  }
  std::size_t tail_offset = 0;
  for (std::size_t t = 0; t < tail_len; ++t) {
    const int k = j + 1 + static_cast<int>(t);
    if (tail_digits[t] < 0 || tail_digits[t] >= cfg.radix(k)) {
      throw std::out_of_range(fmt::format("tail digit x_{} = {} out of range", k, tail_digits[t]));
    }
    tail_offset += static_cast<std::size_t>(tail_digits[t]) * cfg.cumprod(k);
  }

  // Residues modulo M_level, then every lift to the full group.
  std::vector<std::size_t> residues;
  const int top = j < level ? cfg.radix(j) : 2;
  for (int xi = 1; xi < cfg.radix(i); ++xi) {
    for (int xj = 1; xj < top; ++xj) {
      std::size_t r = static_cast<std::size_t>(xi) * cfg.cumprod(i) + tail_offset;
      if (j < level) r += static_cast<std::size_t>(xj) * cfg.cumprod(j);
      residues.push_back(r);
    }
  }
  const std::size_t step = cfg.cumprod(level);
  std::vector<std::size_t> idx;
  idx.reserve(residues.size() * (cfg.size() / step));
  for (std::size_t lift = 0; lift < cfg.size(); lift += step) {
    for (std::size_t r : residues) idx.push_back(lift + r);
  }
  std::sort(idx.begin(), idx.end());
  return CellSet(cfg, std::move(idx));
}

AnnulusPosition annulus_position(const GroupConfig& cfg, int level, std::size_t idx) {
  if (level < 1 || level > cfg.depth()) throw std::out_of_range("annulus level out of range");
  int first = -1;
  for (int k = 0; k < level; ++k) {
    if (digit_of(cfg, idx, k) != 0) {
      if (first < 0) {
        first = k;
      } else {
        return {first, k};
      }
    }
  }
  if (first < 0) throw std::invalid_argument("point lies in I_level; it has no annulus cell");
  return {first, level};
}

std::vector<CellSet> annulus_cells(const GroupConfig& cfg, int level) {
  std::vector<CellSet> cells;
  for (int i = 0; i + 1 < level; ++i) {
    for (int j = i + 1; j < level; ++j) {
      // Enumerate tails x_{j+1..level-1} in mixed-radix order.
      const std::size_t tails = cfg.cumprod(level) / cfg.cumprod(j + 1);
      std::vector<int> tail(static_cast<std::size_t>(level - j - 1));
      for (std::size_t t = 0; t < tails; ++t) {
        std::size_t rest = t;
        for (std::size_t d = 0; d < tail.size(); ++d) {
          const auto m = static_cast<std::size_t>(cfg.radix(j + 1 + static_cast<int>(d)));
          tail[d] = static_cast<int>(rest % m);
          rest /= m;
        }
        cells.push_back(annulus_cell(cfg, level, i, j, tail));
      }
    }
  }
  for (int i = 0; i < level; ++i) cells.push_back(annulus_cell(cfg, level, i, level));
  return cells;
}

bool verify_partition(const GroupConfig& cfg, int level) {
  if (level < 2 || level > cfg.depth()) {
    throw std::out_of_range(fmt::format("partition level {} outside [2, {}]", level, cfg.depth()));
  }
  std::vector<unsigned char> hits(cfg.size(), 0);
  Rational total(0, 1);
  for (const CellSet& cell : annulus_cells(cfg, level)) {
    for (std::size_t idx : cell.indices()) {
      if (hits[idx]++ != 0) return false;
    }
    total = total + haar_measure(cell);
  }
  for (std::size_t idx = 0; idx < cfg.size(); ++idx) {
    const bool inside = in_interval(cfg, level, idx);
    if (inside == (hits[idx] != 0)) return false;
  }
  const std::uint64_t ml = cfg.cumprod(level);
  return total == Rational(ml - 1, ml);
}

}  // namespace vilenkin
