#pragma once

#include <compare>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dexroute/errors.hpp"

namespace dexroute {

// Calendar date, ISO-8601 "YYYY-MM-DD". Only ordering is needed.
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  static std::optional<Date> parse(std::string_view s);
  std::string to_string() const;

  auto operator<=>(const Date&) const = default;
};

// One liquidity pool row as read from disk, reserves decimal-adjusted.
struct PoolRecord {
  std::string pool_id;
  std::string token_a;
  std::string token_b;
  double reserve_a = 0.0;
  double reserve_b = 0.0;
  double tvl_usd = 0.0;
  Date created_at;
  Date last_trade_at;

  bool operator==(const PoolRecord&) const = default;
};

enum class SnapshotFormat { Csv, JsonLines };

// Picks a format from the file extension (.csv vs .jsonl/.ndjson/.json).
SnapshotFormat detect_snapshot_format(const std::filesystem::path& path);

// Reads and validates pool records. CSV columns (header-driven, any order):
// pool_id,token_a,token_b,reserve_a,reserve_b,tvl_usd,created_at,last_trade_at
// with optional decimals_a/decimals_b columns that scale raw reserves down by
// 10^decimals. JSON-lines uses the same field names, one object per line.
std::vector<PoolRecord> load_snapshot(const std::filesystem::path& path, SnapshotFormat format);

void write_snapshot(const std::filesystem::path& path, const std::vector<PoolRecord>& records,
                    SnapshotFormat format);

struct FilterConfig {
  Date as_of_date;
  double min_tvl_usd = 10'000.0;
  std::size_t max_tokens = 100;
  std::size_t min_degree = 2;
};

// Four-stage filter: activity window, TVL floor, iterative low-degree token
// removal, then smallest-TVL token deletion until at most max_tokens remain.
// Ties on token TVL break lexicographically so output is deterministic.
std::vector<PoolRecord> filter_pools(const std::vector<PoolRecord>& records,
                                     const FilterConfig& config);

// USD price per token, loaded from a two-column CSV "token,usd_price".
class PriceTable {
 public:
  static PriceTable load(const std::filesystem::path& path);

  void set(std::string token, double usd_price);
  bool has(std::string_view token) const;
  double price(std::string_view token) const;  // throws MissingPrice

  std::size_t size() const { return prices_.size(); }

 private:
  std::unordered_map<std::string, double> prices_;
};

// Number of token units worth `usd` at the table's price.
double usd_to_token_amount(std::string_view token, double usd, const PriceTable& prices);

}  // namespace dexroute
