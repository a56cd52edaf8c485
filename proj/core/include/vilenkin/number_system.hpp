#pragma once

#include <cstddef>
#include <vector>

#include "vilenkin/group.hpp"

namespace vilenkin {

/// Mixed-radix expansion n = sum_k n_k M_k of a positive operator index.
///
/// low = <n> (lowest nonzero digit), high = |n| (highest nonzero digit),
/// rho = |n| - <n>. These are undefined for n = 0, so expand() rejects it.
struct IndexProfile {
  std::size_t n = 0;
  std::vector<int> digits;  // length = depth, zero above `high`
  int low = 0;
  int high = 0;
  int rho = 0;
};

/// Throws std::invalid_argument for n = 0 and std::out_of_range for n >= M_N.
IndexProfile expand(std::size_t n, const GroupConfig& cfg);

/// True iff rho(n) <= c, i.e. n belongs to the bounded-gap set S_c.
bool in_bounded_set(std::size_t n, int c, const GroupConfig& cfg);

}  // namespace vilenkin
