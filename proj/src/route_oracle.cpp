#include "dexroute/route_oracle.hpp"

#include <limits>
#include <string>
#include <vector>

#include "dexroute/dfs_router.hpp"

namespace dexroute {

namespace {

struct OracleState {
  const TokenGraph& g;
  const OracleConfig& cfg;
  TokenIndex target;
  double epsilon_in;

  std::vector<bool> on_path;
  std::vector<EdgeIndex> stack;
  std::size_t extensions = 0;

  RouteResult best;
  bool have_best = false;

  void consider_current() {
    const double out = evaluate_path(g, stack, epsilon_in, cfg.fee, cfg.mode);
    best.iterations_used += 1;
    const bool better =
        !have_best || out > best.amount_out ||
        (out == best.amount_out &&
         (stack.size() < best.path.size() ||
          (stack.size() == best.path.size() && path_order_less(g, stack, best.path))));
    if (better) {
      best.amount_out = out;
      best.path = stack;
      have_best = true;
    }
  }

  void extend(TokenIndex u) {
    if (stack.size() >= cfg.max_path_len) return;
    for (const EdgeIndex e : g.out_edges(u)) {
      if (++extensions > cfg.enumeration_guard) {
        throw TooLarge("path enumeration exceeded " + std::to_string(cfg.enumeration_guard) +
                       " extensions");
      }
      const TokenIndex w = g.edge(e).to;
      if (cfg.allow_pool_revisit) {
        // Walk semantics: only an immediate back-and-forth through one pool is
        // barred; tokens and pools may otherwise repeat within the hop budget.
        if (!stack.empty() && TokenGraph::reverse(e) == stack.back()) continue;
      } else {
        if (on_path[w]) continue;
      }
      stack.push_back(e);
      if (w == target) consider_current();
      if (cfg.allow_pool_revisit) {
        extend(w);
      } else if (w != target) {
        on_path[w] = true;
        extend(w);
        on_path[w] = false;
      }
      stack.pop_back();
    }
  }
};

}  // namespace

RouteResult best_route_exhaustive(const TokenGraph& g, std::string_view source,
                                  std::string_view target, double epsilon_in,
                                  const OracleConfig& cfg) {
  const TokenIndex s = g.token_index(source);
  const TokenIndex t = g.token_index(target);
  if (s == t) throw InvariantViolation("source and target must differ");
  if (cfg.max_path_len == 0) throw InvariantViolation("hop budget must be positive");

  OracleState state{g, cfg, t, epsilon_in, std::vector<bool>(g.token_count(), false), {}, 0, {},
                    false};
  state.on_path[s] = true;
  state.extend(s);
  if (!state.have_best) {
    throw NoRoute("no path within " + std::to_string(cfg.max_path_len) + " hops from '" +
                  std::string(source) + "' to '" + std::string(target) + "'");
  }
  RouteResult result = std::move(state.best);
  result.amount_out = evaluate_path(g, result.path, epsilon_in, cfg.fee, cfg.mode, &result.ledger);
  return result;
}

}  // namespace dexroute
