#pragma once

#include <cstddef>
#include <vector>

#include "dexroute/amm.hpp"
#include "dexroute/token_graph.hpp"

namespace dexroute {

// One executed hop: which pool, which direction, and the reserves left behind.
// The pair is oriented like the edge (input side first).
struct LedgerStep {
  PoolIndex pool = 0;
  EdgeIndex edge = 0;
  ReservePair post;
};

// Per-path reserve record, so a path that re-enters a pool prices against the
// pool's updated state rather than the snapshot.
using PathLedger = std::vector<LedgerStep>;

struct RouteResult {
  double amount_out = 0.0;
  std::vector<EdgeIndex> path;  // ordered directed pool hops
  PathLedger ledger;
  std::size_t iterations_used = 0;
  bool hit_round_cap = false;
};

}  // namespace dexroute
