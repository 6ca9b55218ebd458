#include "dexroute/dfs_router.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

namespace dexroute {

namespace {

std::vector<std::vector<EdgeIndex>> ordered_adjacency(const TokenGraph& g, const DfsConfig& cfg) {
  std::vector<std::vector<EdgeIndex>> adj(g.token_count());
  for (TokenIndex t = 0; t < g.token_count(); ++t) {
    const auto out = g.out_edges(t);
    adj[t].assign(out.begin(), out.end());
  }
  switch (cfg.neighbor_order) {
    case DfsConfig::Order::SnapshotOrder:
      break;
    case DfsConfig::Order::Lexicographic:
      for (auto& list : adj) {
        std::sort(list.begin(), list.end(), [&](EdgeIndex a, EdgeIndex b) {
          const auto& ta = g.token_id(g.edge(a).to);
          const auto& tb = g.token_id(g.edge(b).to);
          if (ta != tb) return ta < tb;
          return g.pool(TokenGraph::edge_pool(a)).id < g.pool(TokenGraph::edge_pool(b)).id;
        });
      }
      break;
    case DfsConfig::Order::SeededShuffle: {
      std::mt19937_64 rng(*cfg.seed);
      for (auto& list : adj) std::shuffle(list.begin(), list.end(), rng);
      break;
    }
  }
  return adj;
}

void check_config(const DfsConfig& cfg) {
  const bool shuffled = cfg.neighbor_order == DfsConfig::Order::SeededShuffle;
  if (shuffled != cfg.seed.has_value()) {
    throw InvariantViolation("seed must be given exactly when neighbor_order is SeededShuffle");
  }
}

struct DfsState {
  const TokenGraph& g;
  const std::vector<std::vector<EdgeIndex>>& adj;
  TokenIndex target;
  std::optional<std::size_t> max_hops;
  bool unmark;
  std::vector<bool> marked;
  std::vector<bool> on_stack;
  std::vector<EdgeIndex> stack;
  std::vector<std::vector<EdgeIndex>> found;

  void visit(TokenIndex u) {
    marked[u] = true;
    on_stack[u] = true;
    for (const EdgeIndex e : adj[u]) {
      const TokenIndex w = g.edge(e).to;
      const std::size_t hops = stack.size() + 1;
      if (max_hops && hops > *max_hops) continue;
      if (w == target && !on_stack[w]) {
        auto path = stack;
        path.push_back(e);
        found.push_back(std::move(path));
      }
      if (!marked[w] && (!max_hops || hops < *max_hops)) {
        stack.push_back(e);
        visit(w);
        stack.pop_back();
      }
    }
    on_stack[u] = false;
    if (unmark) marked[u] = false;
  }
};

}  // namespace

bool path_order_less(const TokenGraph& g, std::span<const EdgeIndex> a,
                     std::span<const EdgeIndex> b) {
  const auto key = [&](std::span<const EdgeIndex> p) {
    std::vector<std::string> k;
    for (const EdgeIndex e : p) k.push_back(g.token_id(g.edge(e).to));
    for (const EdgeIndex e : p) k.push_back(g.pool(TokenGraph::edge_pool(e)).id);
    return k;
  };
  return key(a) < key(b);
}

std::vector<std::vector<EdgeIndex>> dfs_enumerate(const TokenGraph& g, std::string_view source,
                                                  std::string_view target, const DfsConfig& cfg) {
  check_config(cfg);
  const TokenIndex s = g.token_index(source);
  const TokenIndex t = g.token_index(target);
  if (s == t) throw InvariantViolation("source and target must differ");

  const auto adj = ordered_adjacency(g, cfg);
  DfsState state{g,
                 adj,
                 t,
                 cfg.max_hops,
                 cfg.unmark_on_backtrack,
                 std::vector<bool>(g.token_count(), false),
                 std::vector<bool>(g.token_count(), false),
                 {},
                 {}};
  state.visit(s);
  return std::move(state.found);
}

double evaluate_path(const TokenGraph& g, std::span<const EdgeIndex> path, double epsilon_in,
                     const FeeRate& fee, SwapMode mode, PathLedger* ledger) {
  if (ledger) ledger->clear();
  double amount = epsilon_in;
  std::unordered_map<PoolIndex, std::pair<double, double>> pool_state;  // canonical (a, b)
  TokenIndex at = 0;
  bool first = true;
  for (const EdgeIndex e : path) {
    if (e >= g.edge_count()) throw BrokenPath("edge index out of range");
    const DirectedEdge& edge = g.edge(e);
    if (!first && edge.from != at) {
      throw BrokenPath("hop from '" + g.token_id(at) + "' has no pool to '" +
                       g.token_id(edge.from) + "'");
    }
    const PoolIndex p = TokenGraph::edge_pool(e);
    auto it = pool_state.find(p);
    if (it == pool_state.end()) {
      it = pool_state.emplace(p, std::make_pair(g.pool(p).reserve_a, g.pool(p).reserve_b)).first;
    }
    const bool forward = (e & 1u) == 0;
    const ReservePair reserves = forward ? ReservePair{it->second.first, it->second.second}
                                         : ReservePair{it->second.second, it->second.first};
    const SwapResult res = apply_swap(reserves, amount, fee, mode);
    it->second = forward ? std::make_pair(res.reserves.r_in, res.reserves.r_out)
                         : std::make_pair(res.reserves.r_out, res.reserves.r_in);
    if (ledger) ledger->push_back({p, e, res.reserves});
    amount = res.amount_out;
    at = edge.to;
    first = false;
  }
  return amount;
}

RouteResult dfs_route(const TokenGraph& g, std::string_view source, std::string_view target,
                      double epsilon_in, const DfsConfig& cfg) {
  const auto paths = dfs_enumerate(g, source, target, cfg);
  if (paths.empty()) {
    throw NoRoute("dfs found no path from '" + std::string(source) + "' to '" +
                  std::string(target) + "'");
  }

  RouteResult best;
  bool have_best = false;
  for (const auto& path : paths) {
    const double out = evaluate_path(g, path, epsilon_in, cfg.fee, cfg.mode);
    const bool better =
        !have_best || out > best.amount_out ||
        (out == best.amount_out &&
         (path.size() < best.path.size() ||
          (path.size() == best.path.size() && path_order_less(g, path, best.path))));
    if (better) {
      best.amount_out = out;
      best.path = path;
      have_best = true;
    }
  }
  best.amount_out = evaluate_path(g, best.path, epsilon_in, cfg.fee, cfg.mode, &best.ledger);
  best.iterations_used = paths.size();
  return best;
}

}  // namespace dexroute
