#pragma once

#include <cstddef>
#include <string_view>

#include "dexroute/route_types.hpp"
#include "dexroute/token_graph.hpp"

namespace dexroute {

struct OracleConfig {
  // Hop budget per candidate path.
  std::size_t max_path_len = 6;
  // When set, candidates are edge walks that never immediately reverse through
  // the pool they just used, instead of token-simple paths.
  bool allow_pool_revisit = false;
  // Abort with TooLarge once this many path extensions have been tried.
  std::size_t enumeration_guard = 10'000'000;
  FeeRate fee = FeeRate::uniswap_v2();
  SwapMode mode = SwapMode::Real;
};

// Ground truth by brute force: enumerate every candidate path within the hop
// budget, evaluate each one, and keep the best (ties: shorter path, then
// path_order_less). iterations_used reports how many candidates were scored.
// Only viable on small graphs; the guard turns runaway enumeration into an
// error instead of a hang.
RouteResult best_route_exhaustive(const TokenGraph& g, std::string_view source,
                                  std::string_view target, double epsilon_in,
                                  const OracleConfig& cfg);

}  // namespace dexroute
