#include "vilenkin/number_system.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace vilenkin {

IndexProfile expand(std::size_t n, const GroupConfig& cfg) {
  if (n == 0) throw std::invalid_argument("index 0 has no lowest/highest digit");
  if (n >= cfg.size()) {
    throw std::out_of_range(fmt::format("index {} exceeds truncation M_N = {}", n, cfg.size()));
  }
  IndexProfile prof;
  prof.n = n;
  prof.digits.resize(static_cast<std::size_t>(cfg.depth()));
  prof.low = -1;
  std::size_t rest = n;
  for (int k = 0; k < cfg.depth(); ++k) {
    const auto m = static_cast<std::size_t>(cfg.radix(k));
    const int d = static_cast<int>(rest % m);
    rest /= m;
    prof.digits[static_cast<std::size_t>(k)] = d;
    if (d != 0) {
      if (prof.low < 0) prof.low = k;
      prof.high = k;
    }
  }
  prof.rho = prof.high - prof.low;
  return prof;
}

bool in_bounded_set(std::size_t n, int c, const GroupConfig& cfg) {
  return expand(n, cfg).rho <= c;
}

}  // namespace vilenkin
