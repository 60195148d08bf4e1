#pragma once

#include <vector>

#include "comove/model.hpp"

namespace comove {

struct OracleLimits {
  std::size_t max_objects = 10;
  std::size_t max_route_len = 8;  // longest travel path the search will expand
};

/// Exhaustive reference miner: every gap-bounded route of every object,
/// every maximal eps-compatible object set on it, then an all-pairs
/// dominance filter. Throws LimitError naming the dimension that exceeds
/// `limits`. Output is annotated and in canonical order.
std::vector<Pattern> mine_bruteforce(const Dataset& data, const MiningParams& params, const OracleLimits& limits = {});

}  // namespace comove
