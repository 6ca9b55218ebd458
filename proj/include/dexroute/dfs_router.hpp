#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dexroute/route_types.hpp"
#include "dexroute/token_graph.hpp"

namespace dexroute {

// The production-style DFS baseline. Neighbor order is intrinsic to its
// output, so it is explicit configuration rather than an accident of storage.
struct DfsConfig {
  enum class Order { Lexicographic, SnapshotOrder, SeededShuffle };

  Order neighbor_order = Order::SnapshotOrder;
  std::optional<std::uint64_t> seed;       // required iff SeededShuffle
  std::optional<std::size_t> max_hops;     // unlimited when unset
  bool unmark_on_backtrack = false;        // diagnostic; off for baseline semantics
  FeeRate fee = FeeRate::uniswap_v2();
  SwapMode mode = SwapMode::Real;
};

// Recursive DFS with a global visited set that is never cleared on backtrack:
// a path is recorded whenever the target shows up as a neighbor, and marked
// tokens are never re-entered. Returns a neighbor-order-dependent subset of
// the simple paths, in discovery order.
std::vector<std::vector<EdgeIndex>> dfs_enumerate(const TokenGraph& g, std::string_view source,
                                                  std::string_view target, const DfsConfig& cfg);

// Sequentially swaps along the path, threading updated reserves through any
// pool the path revisits. The empty path returns epsilon_in unchanged. Also
// serves as the replay check for line-graph routing results.
double evaluate_path(const TokenGraph& g, std::span<const EdgeIndex> path, double epsilon_in,
                     const FeeRate& fee, SwapMode mode = SwapMode::Real,
                     PathLedger* ledger = nullptr);

// Deterministic path order used to break amount ties: token sequence first,
// then pool ids, so equal-output routes resolve the same way everywhere.
bool path_order_less(const TokenGraph& g, std::span<const EdgeIndex> a,
                     std::span<const EdgeIndex> b);

// Best path among those dfs_enumerate finds; ties go to the shorter path, then
// path_order_less. iterations_used reports the number of candidate paths.
RouteResult dfs_route(const TokenGraph& g, std::string_view source, std::string_view target,
                      double epsilon_in, const DfsConfig& cfg);

}  // namespace dexroute
