#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dexroute/amm.hpp"
#include "dexroute/snapshot.hpp"

namespace dexroute {

using TokenIndex = std::uint32_t;
using PoolIndex = std::uint32_t;
// Directed edge id. Pool p owns edges 2p (a->b) and 2p+1 (b->a), so the
// reverse of edge e is e ^ 1 and its pool is e >> 1.
using EdgeIndex = std::uint32_t;

struct Pool {
  std::string id;
  TokenIndex token_a = 0;
  TokenIndex token_b = 0;
  double reserve_a = 0.0;
  double reserve_b = 0.0;
  double tvl_usd = 0.0;
};

struct DirectedEdge {
  TokenIndex from = 0;
  TokenIndex to = 0;
  PoolIndex pool = 0;
};

// Directed token-exchange graph: one vertex per token, two directed edges per
// pool carrying mutually reversed reserve tuples. Immutable once built.
class TokenGraph {
 public:
  static TokenGraph build(const std::vector<PoolRecord>& records);

  std::size_t token_count() const { return token_ids_.size(); }
  std::size_t pool_count() const { return pools_.size(); }
  std::size_t edge_count() const { return edges_.size(); }  // 2 * pool_count

  bool has_token(std::string_view id) const;
  TokenIndex token_index(std::string_view id) const;  // throws UnknownToken
  const std::string& token_id(TokenIndex t) const { return token_ids_[t]; }

  // Number of pools incident to the token (undirected degree).
  std::size_t degree(TokenIndex t) const;
  std::size_t degree(std::string_view id) const { return degree(token_index(id)); }

  const Pool& pool(PoolIndex p) const { return pools_[p]; }
  const DirectedEdge& edge(EdgeIndex e) const { return edges_[e]; }
  // Reserves oriented in the edge's trade direction.
  ReservePair edge_reserves(EdgeIndex e) const;
  static EdgeIndex reverse(EdgeIndex e) { return e ^ 1u; }
  static PoolIndex edge_pool(EdgeIndex e) { return e >> 1u; }

  // Outgoing directed edges in pool-insertion (snapshot) order.
  std::span<const EdgeIndex> out_edges(TokenIndex t) const;

  // Registers a token with no pools; used for diagnostics and tests.
  TokenIndex add_token(std::string_view id);

  std::map<std::size_t, std::size_t> degree_histogram() const;

 private:
  std::vector<std::string> token_ids_;
  std::unordered_map<std::string, TokenIndex> token_index_;
  std::vector<Pool> pools_;
  std::vector<DirectedEdge> edges_;
  std::vector<std::vector<EdgeIndex>> adjacency_;
};

inline TokenGraph build_graph(const std::vector<PoolRecord>& records) {
  return TokenGraph::build(records);
}

}  // namespace dexroute
