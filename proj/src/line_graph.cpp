#include "dexroute/line_graph.hpp"

#include <algorithm>

namespace dexroute {

LineGraphCore LineGraphCore::build(const TokenGraph& g) {
  LineGraphCore core;
  core.vertex_count_ = g.edge_count();

  // Chains (i,j)->(j,l) pivot on the shared token j: pair every incoming
  // directed edge of j with every outgoing one, skipping the two edges of the
  // same pool (the reversal cut keys on pool_id, so parallel pools between the
  // same tokens stay routable in both directions).
  for (TokenIndex j = 0; j < g.token_count(); ++j) {
    for (const EdgeIndex out : g.out_edges(j)) {
      const EdgeIndex in = TokenGraph::reverse(out);  // some (i, j)
      for (const EdgeIndex next : g.out_edges(j)) {
        if (TokenGraph::edge_pool(in) == TokenGraph::edge_pool(next)) continue;
        core.links_.push_back({in, next});
      }
    }
  }
  std::sort(core.links_.begin(), core.links_.end(),
            [](const LgLink& a, const LgLink& b) {
              return a.tail != b.tail ? a.tail < b.tail : a.head < b.head;
            });

  core.offsets_.assign(core.vertex_count_ + 1, 0);
  for (const LgLink& link : core.links_) ++core.offsets_[link.tail + 1];
  for (std::size_t v = 0; v < core.vertex_count_; ++v) {
    core.offsets_[v + 1] += core.offsets_[v];
  }
  return core;
}

std::span<const LgLink> LineGraphCore::out_links(VertexId v) const {
  return std::span(links_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

std::size_t link_count_formula(const TokenGraph& g) {
  std::size_t sum_sq = 0;
  for (TokenIndex t = 0; t < g.token_count(); ++t) {
    const std::size_t d = g.degree(t);
    sum_sq += d * d;
  }
  return sum_sq - 2 * g.pool_count();
}

LineGraph::LineGraph(const TokenGraph& g, std::shared_ptr<const LineGraphCore> core,
                     std::string_view source_token)
    : graph_(&g), core_(std::move(core)) {
  source_ = g.token_index(source_token);
  if (g.degree(source_) == 0) {
    throw IsolatedSource("source token '" + std::string(source_token) + "' has no pools");
  }
  const auto out = g.out_edges(source_);
  source_links_.assign(out.begin(), out.end());
  std::sort(source_links_.begin(), source_links_.end());
}

LineGraph build_line_graph(const TokenGraph& g, std::string_view source_token) {
  return LineGraph(g, std::make_shared<LineGraphCore>(LineGraphCore::build(g)), source_token);
}

}  // namespace dexroute
