#pragma once

#include <memory>
#include <span>
#include <vector>

#include "dexroute/token_graph.hpp"

namespace dexroute {

// Line-graph vertex id. Pool vertices share ids with the directed edges of the
// token graph; the per-query source vertex takes the next id after them.
using VertexId = std::uint32_t;

struct LgLink {
  VertexId tail = 0;
  VertexId head = 0;

  bool operator==(const LgLink&) const = default;
};

// The source-independent part of L(G): one vertex per directed pool, a link
// (i,j)->(j,l) wherever the head token of one edge is the tail token of
// another, minus both reversal links through the same pool. Built once per
// snapshot and shared across queries.
class LineGraphCore {
 public:
  static LineGraphCore build(const TokenGraph& g);

  std::size_t pool_vertex_count() const { return vertex_count_; }
  std::size_t link_count() const { return links_.size(); }
  // All links, sorted by (tail, head).
  std::span<const LgLink> links() const { return links_; }
  // Links leaving one vertex, in head order.
  std::span<const LgLink> out_links(VertexId v) const;

 private:
  std::size_t vertex_count_ = 0;
  std::vector<LgLink> links_;
  std::vector<std::uint32_t> offsets_;  // per-tail ranges into links_
};

// Expected pool-to-pool link count, sum of squared degrees minus twice the
// pool count; an independent check against the constructed link set.
std::size_t link_count_formula(const TokenGraph& g);

// L(G) for one source token: the shared core plus the injected source vertex
// (O, v1) fanning out to every directed pool that spends the source token.
class LineGraph {
 public:
  LineGraph(const TokenGraph& g, std::shared_ptr<const LineGraphCore> core,
            std::string_view source_token);

  const TokenGraph& graph() const { return *graph_; }
  const LineGraphCore& core() const { return *core_; }

  TokenIndex source_token() const { return source_; }
  VertexId source_vertex() const { return static_cast<VertexId>(core_->pool_vertex_count()); }
  std::size_t vertex_count() const { return core_->pool_vertex_count() + 1; }
  std::size_t link_count() const { return core_->link_count() + source_links_.size(); }

  // Heads of the source vertex's out-links, ascending.
  std::span<const VertexId> source_links() const { return source_links_; }

  // Snapshot reserves stored on a pool vertex, oriented in trade direction.
  ReservePair vertex_reserves(VertexId v) const { return graph_->edge_reserves(v); }

 private:
  const TokenGraph* graph_;
  std::shared_ptr<const LineGraphCore> core_;
  TokenIndex source_ = 0;
  std::vector<VertexId> source_links_;
};

LineGraph build_line_graph(const TokenGraph& g, std::string_view source_token);

}  // namespace dexroute
