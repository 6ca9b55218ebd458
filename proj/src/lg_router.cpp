#include "dexroute/lg_router.hpp"

#include <cmath>
#include <limits>

namespace dexroute {

namespace {

// Reserves of head's pool as tail's path last left them, oriented for head.
ReservePair effective_reserves(const RouteLabel& tail, EdgeIndex head, const TokenGraph& g) {
  const PoolIndex p = TokenGraph::edge_pool(head);
  for (auto it = tail.ledger.rbegin(); it != tail.ledger.rend(); ++it) {
    if (it->pool != p) continue;
    if (it->edge == head) return it->post;
    return {it->post.r_out, it->post.r_in};
  }
  return g.edge_reserves(head);
}

void check_config(const LgConfig& cfg) {
  if (!(cfg.epsilon_in > 0.0) || !std::isfinite(cfg.epsilon_in)) {
    throw NegativeInput("input amount must be finite and positive");
  }
  if (!(cfg.improvement_tolerance >= 0.0)) {
    throw InvariantViolation("improvement tolerance must be non-negative");
  }
}

}  // namespace

std::optional<RouteLabel> relax_link(const RouteLabel& tail, VertexId head,
                                     double current_head_amount, const LineGraph& lg,
                                     const LgConfig& cfg) {
  if (!(tail.amount > 0.0)) return std::nullopt;
  const ReservePair reserves = effective_reserves(tail, head, lg.graph());
  const SwapResult res = apply_swap(reserves, tail.amount, cfg.fee, cfg.mode);
  if (!(res.amount_out > 0.0)) return std::nullopt;
  if (!(res.amount_out > current_head_amount * (1.0 + cfg.improvement_tolerance))) {
    return std::nullopt;
  }

  RouteLabel next;
  next.amount = res.amount_out;
  next.path = tail.path;
  next.path.push_back(head);
  next.ledger = tail.ledger;
  next.ledger.push_back({TokenGraph::edge_pool(head), head, res.reserves});
  return next;
}

RouteResult route(const LineGraph& lg, std::string_view source, std::string_view target,
                  const LgConfig& cfg) {
  check_config(cfg);
  const TokenGraph& g = lg.graph();
  if (g.token_index(source) != lg.source_token()) {
    throw InvariantViolation("line graph was built for source '" +
                             g.token_id(lg.source_token()) + "', not '" + std::string(source) +
                             "'");
  }
  const TokenIndex target_token = g.token_index(target);
  if (target_token == lg.source_token()) {
    throw InvariantViolation("source and target must differ");
  }

  const std::size_t n = lg.vertex_count();
  const VertexId src = lg.source_vertex();
  std::vector<RouteLabel> labels(n);
  labels[src].amount = cfg.epsilon_in;
  labels[src].path = {src};

  const std::size_t round_cap = cfg.max_rounds ? cfg.max_rounds : 10 * n;
  std::size_t rounds = 0;
  bool hit_cap = false;
  bool changed = true;
  while (changed) {
    if (rounds >= round_cap) {
      hit_cap = true;
      break;
    }
    changed = false;
    // Fixed deterministic order: links sorted by (tail, head); the source
    // vertex has the largest id, so its fan-out comes last.
    for (const LgLink& link : lg.core().links()) {
      if (auto next = relax_link(labels[link.tail], link.head, labels[link.head].amount, lg, cfg)) {
        labels[link.head] = std::move(*next);
        changed = true;
      }
    }
    for (const VertexId head : lg.source_links()) {
      if (auto next = relax_link(labels[src], head, labels[head].amount, lg, cfg)) {
        labels[head] = std::move(*next);
        changed = true;
      }
    }
    ++rounds;
    if (cfg.on_round) {
      std::vector<double> amounts(n);
      for (std::size_t v = 0; v < n; ++v) amounts[v] = labels[v].amount;
      cfg.on_round(rounds, amounts);
    }
  }

  // The answer lives on the vertices whose underlying edge ends at the target.
  VertexId best = std::numeric_limits<VertexId>::max();
  double best_amount = 0.0;
  for (VertexId v = 0; v < lg.core().pool_vertex_count(); ++v) {
    if (g.edge(v).to != target_token) continue;
    if (labels[v].amount > best_amount) {
      best_amount = labels[v].amount;
      best = v;
    }
  }
  if (!(best_amount > 0.0)) {
    throw NoRoute("no path delivers '" + std::string(target) + "' from '" + std::string(source) +
                  "'");
  }

  RouteResult result;
  result.amount_out = best_amount;
  const auto& path = labels[best].path;
  result.path.assign(path.begin() + 1, path.end());  // drop the source vertex
  result.ledger = labels[best].ledger;
  result.iterations_used = rounds;
  result.hit_round_cap = hit_cap;
  return result;
}

}  // namespace dexroute
