#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dexroute/line_graph.hpp"
#include "dexroute/route_types.hpp"

namespace dexroute {

struct LgConfig {
  double epsilon_in = 1.0;
  // Sweep limit; 0 means 10x the line-graph vertex count.
  std::size_t max_rounds = 0;
  // A label replaces the incumbent only when it beats it by this relative
  // margin, so floating-point churn cannot keep the sweep loop alive.
  double improvement_tolerance = 1e-12;
  FeeRate fee = FeeRate::uniswap_v2();
  SwapMode mode = SwapMode::Real;
  // Called after each sweep with (1-based round, per-vertex label amounts).
  std::function<void(std::size_t, std::span<const double>)> on_round;
};

// Best-known way to reach a line-graph vertex: the output amount, the vertex
// path from the source vertex, and the reserve ledger the amount was priced
// against.
struct RouteLabel {
  double amount = 0.0;
  std::vector<VertexId> path;
  PathLedger ledger;
};

// One relaxation: extend tail's label across a link into `head`, pricing the
// hop against the latest state of head's pool in tail's ledger (reversed if
// the path last crossed that pool the other way). Returns the improved label,
// or nullopt when the result does not beat `current_head_amount`.
std::optional<RouteLabel> relax_link(const RouteLabel& tail, VertexId head,
                                     double current_head_amount, const LineGraph& lg,
                                     const LgConfig& cfg);

// Label-correcting maximization over L(G): sweep every link until no label
// improves or the round cap is hit, then take the best label on any vertex
// whose edge delivers the target token. iterations_used is the sweep count;
// hit_round_cap reports a stop forced by the cap rather than stabilization.
RouteResult route(const LineGraph& lg, std::string_view source, std::string_view target,
                  const LgConfig& cfg);

}  // namespace dexroute
