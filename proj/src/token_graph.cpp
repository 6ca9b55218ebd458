#include "dexroute/token_graph.hpp"

#include <set>

namespace dexroute {

TokenGraph TokenGraph::build(const std::vector<PoolRecord>& records) {
  TokenGraph g;
  std::set<std::string> pool_ids;
  for (const auto& r : records) {
    if (!pool_ids.insert(r.pool_id).second) {
      throw DuplicatePool("duplicate pool_id '" + r.pool_id + "'");
    }
    const TokenIndex a = g.add_token(r.token_a);
    const TokenIndex b = g.add_token(r.token_b);
    if (a == b) throw InvariantViolation("pool '" + r.pool_id + "' is a self-pool");

    const auto p = static_cast<PoolIndex>(g.pools_.size());
    g.pools_.push_back({r.pool_id, a, b, r.reserve_a, r.reserve_b, r.tvl_usd});
    g.edges_.push_back({a, b, p});
    g.edges_.push_back({b, a, p});
    g.adjacency_[a].push_back(2 * p);
    g.adjacency_[b].push_back(2 * p + 1);
  }
  return g;
}

bool TokenGraph::has_token(std::string_view id) const {
  return token_index_.count(std::string(id)) > 0;
}

TokenIndex TokenGraph::token_index(std::string_view id) const {
  const auto it = token_index_.find(std::string(id));
  if (it == token_index_.end()) {
    throw UnknownToken("unknown token '" + std::string(id) + "'");
  }
  return it->second;
}

std::size_t TokenGraph::degree(TokenIndex t) const {
  if (t >= token_count()) throw UnknownToken("token index out of range");
  return adjacency_[t].size();
}

ReservePair TokenGraph::edge_reserves(EdgeIndex e) const {
  const Pool& p = pools_[edge_pool(e)];
  return (e & 1u) == 0 ? ReservePair{p.reserve_a, p.reserve_b}
                       : ReservePair{p.reserve_b, p.reserve_a};
}

std::span<const EdgeIndex> TokenGraph::out_edges(TokenIndex t) const {
  if (t >= token_count()) throw UnknownToken("token index out of range");
  return adjacency_[t];
}

TokenIndex TokenGraph::add_token(std::string_view id) {
  const auto it = token_index_.find(std::string(id));
  if (it != token_index_.end()) return it->second;
  const auto t = static_cast<TokenIndex>(token_ids_.size());
  token_ids_.emplace_back(id);
  token_index_.emplace(std::string(id), t);
  adjacency_.emplace_back();
  return t;
}

std::map<std::size_t, std::size_t> TokenGraph::degree_histogram() const {
  std::map<std::size_t, std::size_t> hist;
  for (TokenIndex t = 0; t < token_count(); ++t) ++hist[adjacency_[t].size()];
  return hist;
}

}  // namespace dexroute
