#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dexroute/dfs_router.hpp"
#include "dexroute/lg_router.hpp"
#include "dexroute/snapshot.hpp"
#include "dexroute/token_graph.hpp"

namespace dexroute {

// One routed ordered pair. ratio is (lg_out - dfs_out) / dfs_out; +inf when
// only the line-graph router found a route, -1 when only the baseline did,
// NaN when the pair could not be compared at all. status is one of: ok,
// no_route, lg_no_route, dfs_no_route, missing_price, or "error: <reason>".
struct ComparisonRecord {
  std::string source;
  std::string target;
  double usd_in = 0.0;
  double lg_out = 0.0;
  double dfs_out = 0.0;
  double ratio = 0.0;
  std::size_t lg_path_len = 0;
  std::size_t dfs_path_len = 0;
  double lg_time_us = 0.0;
  double dfs_time_us = 0.0;
  std::string status;
};

// Aggregates for one input size. Proportions are over comparable pairs (ratio
// not NaN, +inf included); mean/median are over the finite ratios above the
// threshold and are NaN when that set is empty. The histogram counts
// lg_path_len - dfs_path_len over status=ok pairs.
struct SweepSummary {
  double usd_in = 0.0;
  std::size_t pair_count = 0;
  double prop_over_threshold = 0.0;
  double mean_ratio = 0.0;
  double median_ratio = 0.0;
  std::size_t inf_ratio_pairs = 0;
  std::map<long long, std::size_t> path_len_diff_histogram;
};

struct CompareConfig {
  double usd_in = 100.0;
  LgConfig lg;    // epsilon_in is recomputed per pair from usd_in and prices
  DfsConfig dfs;
  std::size_t workers = 0;  // 0 means hardware concurrency
};

// Routes every ordered token pair with both routers and returns one record per
// pair, in token-index order regardless of worker count. The line-graph core
// is built once and shared; the timed region per pair covers the per-source
// overlay plus the query itself. A set interrupt flag stops the run early; the
// completed prefix of records (by slot, not by time) is still returned.
std::vector<ComparisonRecord> compare_all_pairs(const TokenGraph& g, const PriceTable& prices,
                                                const CompareConfig& cfg,
                                                const std::atomic<bool>* interrupt = nullptr);

SweepSummary summarize(const std::vector<ComparisonRecord>& records, double usd_in,
                       double threshold = 0.001);

// Runs compare_all_pairs once per grid value. on_level (optional) fires after
// each level with that level's summary and records, so callers can flush
// results as they complete; an interrupt still delivers the partial level.
std::vector<SweepSummary> sweep_usd(
    const TokenGraph& g, const PriceTable& prices, const std::vector<double>& usd_grid,
    const CompareConfig& cfg, double threshold = 0.001,
    const std::atomic<bool>* interrupt = nullptr,
    const std::function<void(const SweepSummary&, const std::vector<ComparisonRecord>&)>&
        on_level = {});

// CSV layouts:
//   pairs:    source,target,usd_in,lg_out,dfs_out,ratio,lg_path_len,
//             dfs_path_len,lg_time_us,dfs_time_us,status
//   summary:  usd_in,pairs,prop_over_threshold,mean_ratio,median_ratio
//   pathlen:  usd_in,len_diff,count
void write_comparisons_csv(const std::filesystem::path& path,
                           const std::vector<ComparisonRecord>& records);
std::vector<ComparisonRecord> read_comparisons_csv(const std::filesystem::path& path);
void write_summaries_csv(const std::filesystem::path& path,
                         const std::vector<SweepSummary>& summaries);
void write_pathlen_csv(const std::filesystem::path& path,
                       const std::vector<SweepSummary>& summaries);

// JSON mirrors of the CSV outputs; non-finite numbers are written as the
// strings "nan"/"inf"/"-inf".
void write_comparisons_json(const std::filesystem::path& path,
                            const std::vector<ComparisonRecord>& records);
void write_summaries_json(const std::filesystem::path& path,
                          const std::vector<SweepSummary>& summaries);

}  // namespace dexroute
