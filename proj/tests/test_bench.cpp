#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "dexroute/bench.hpp"
#include "dexroute/lg_router.hpp"
#include "dexroute/route_oracle.hpp"
#include "test_helpers.hpp"

using namespace dexroute;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ComparisonRecord make_record(double ratio, const std::string& status, std::size_t lg_len = 2,
                             std::size_t dfs_len = 2) {
  ComparisonRecord r;
  r.source = "S";
  r.target = "T";
  r.usd_in = 100.0;
  r.ratio = ratio;
  r.status = status;
  r.lg_path_len = lg_len;
  r.dfs_path_len = dfs_len;
  return r;
}

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool same_modulo_times(const ComparisonRecord& a, const ComparisonRecord& b) {
  return a.source == b.source && a.target == b.target && same_double(a.usd_in, b.usd_in) &&
         same_double(a.lg_out, b.lg_out) && same_double(a.dfs_out, b.dfs_out) &&
         same_double(a.ratio, b.ratio) && a.lg_path_len == b.lg_path_len &&
         a.dfs_path_len == b.dfs_path_len && a.status == b.status;
}

struct TempPath {
  fs::path path;
  explicit TempPath(const std::string& name) : path(fs::temp_directory_path() / name) {}
  ~TempPath() { std::error_code ec; fs::remove(path, ec); }
};

PriceTable triangle_prices() {
  PriceTable prices;
  prices.set("A", 2.0);
  prices.set("B", 1.0);
  prices.set("C", 4.0);
  return prices;
}

}  // namespace

TEST_CASE("summarize: pinned arithmetic") {
  const std::vector<ComparisonRecord> records{
      make_record(0.0, "ok", 2, 2),
      make_record(0.5, "ok", 2, 2),
      make_record(0.5, "ok", 3, 2),
      make_record(2.0, "ok", 3, 2),
  };
  const SweepSummary s = summarize(records, 100.0, 0.001);
  CHECK(s.usd_in == 100.0);
  CHECK(s.pair_count == 4);
  CHECK(s.prop_over_threshold == 0.75);  // 3 of 4 comparable pairs beat the threshold
  CHECK(s.mean_ratio == 1.0);            // mean of {0.5, 0.5, 2.0}
  CHECK(s.median_ratio == 0.5);
  CHECK(s.inf_ratio_pairs == 0);
  CHECK(s.path_len_diff_histogram ==
        std::map<long long, std::size_t>{{0, 2}, {1, 2}});
}

TEST_CASE("summarize: one-sided and incomparable pairs") {
  const std::vector<ComparisonRecord> records{
      make_record(0.5, "ok"),
      make_record(kInf, "dfs_no_route"),   // only the line graph routed
      make_record(-1.0, "lg_no_route"),    // only the baseline routed
      make_record(kNaN, "no_route"),       // nobody routed: not comparable
      make_record(kNaN, "missing_price"),  // not comparable
  };
  const SweepSummary s = summarize(records, 10.0, 0.001);
  CHECK(s.pair_count == 5);
  // Comparable: {0.5, +inf, -1.0}; over threshold: 0.5 and +inf.
  CHECK(s.prop_over_threshold == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(s.inf_ratio_pairs == 1);
  // Mean/median cover only the finite above-threshold gains.
  CHECK(s.mean_ratio == 0.5);
  CHECK(s.median_ratio == 0.5);
  // Histogram covers status=ok rows only.
  CHECK(s.path_len_diff_histogram == std::map<long long, std::size_t>{{0, 1}});
}

TEST_CASE("summarize: empty gain set and threshold strictness") {
  const SweepSummary none = summarize({make_record(0.0, "ok")}, 10.0, 0.001);
  CHECK(none.prop_over_threshold == 0.0);
  CHECK(std::isnan(none.mean_ratio));
  CHECK(std::isnan(none.median_ratio));

  const SweepSummary empty = summarize({}, 10.0, 0.001);
  CHECK(empty.pair_count == 0);
  CHECK(empty.prop_over_threshold == 0.0);
  CHECK(std::isnan(empty.mean_ratio));

  // Ratio exactly at the threshold does not count as "over".
  const SweepSummary edge =
      summarize({make_record(0.001, "ok"), make_record(0.002, "ok")}, 10.0, 0.001);
  CHECK(edge.prop_over_threshold == 0.5);
  CHECK(edge.mean_ratio == 0.002);

  // Even-sized gain sets take the midpoint of the middle pair.
  const SweepSummary even =
      summarize({make_record(0.5, "ok"), make_record(2.0, "ok")}, 10.0, 0.001);
  CHECK(even.median_ratio == 1.25);
}

TEST_CASE("compare_all_pairs: triangle, full price coverage") {
  const TokenGraph g = build_graph(testfix::triangle_market());
  const PriceTable prices = triangle_prices();
  CompareConfig cfg;
  cfg.usd_in = 100.0;
  cfg.workers = 1;

  const auto records = compare_all_pairs(g, prices, cfg);
  REQUIRE(records.size() == 6);

  // Token-index order: (A,B),(A,C),(B,A),(B,C),(C,A),(C,B).
  CHECK(records[0].source == "A");
  CHECK(records[0].target == "B");
  CHECK(records[5].source == "C");
  CHECK(records[5].target == "B");

  for (const auto& r : records) {
    CAPTURE(r.source);
    CAPTURE(r.target);
    CHECK(r.status == "ok");
    CHECK(r.usd_in == 100.0);
    CHECK(r.lg_out > 0.0);
    CHECK(r.dfs_out > 0.0);
    CHECK(r.lg_out >= r.dfs_out - 1e-9 * r.dfs_out);  // dominance
    CHECK(r.ratio == (r.lg_out - r.dfs_out) / r.dfs_out);
    CHECK(r.lg_path_len >= 1);
    CHECK(r.dfs_path_len >= 1);
    CHECK(r.lg_time_us >= 0.0);
  }

  // The record reproduces a direct query with the same USD conversion.
  const LineGraph lg = build_line_graph(g, "A");
  LgConfig lg_cfg = cfg.lg;
  lg_cfg.epsilon_in = usd_to_token_amount("A", 100.0, prices);  // 50 A
  const RouteResult direct = route(lg, "A", "B", lg_cfg);
  CHECK(records[0].lg_out == direct.amount_out);
  CHECK(records[0].lg_path_len == direct.path.size());
}

TEST_CASE("compare_all_pairs: worker count does not change results") {
  const TokenGraph g = build_graph(testfix::mispriced_market());
  PriceTable prices;
  prices.set("v1", 2.0);
  prices.set("v2", 1.0);
  prices.set("v3", 1.0);
  prices.set("v4", 1.0);

  CompareConfig serial;
  serial.workers = 1;
  CompareConfig parallel;
  parallel.workers = 4;

  const auto a = compare_all_pairs(g, prices, serial);
  const auto b = compare_all_pairs(g, prices, parallel);
  REQUIRE(a.size() == 12);
  REQUIRE(b.size() == 12);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CAPTURE(i);
    CHECK(same_modulo_times(a[i], b[i]));
  }
}

TEST_CASE("compare_all_pairs: a source without a price is skipped, a target is not") {
  const TokenGraph g = build_graph(testfix::triangle_market());
  PriceTable prices;
  prices.set("A", 2.0);
  prices.set("B", 1.0);  // no price for C

  CompareConfig cfg;
  cfg.workers = 1;
  const auto records = compare_all_pairs(g, prices, cfg);
  REQUIRE(records.size() == 6);
  for (const auto& r : records) {
    if (r.source == "C") {
      CHECK(r.status == "missing_price");
      CHECK(std::isnan(r.ratio));
    } else {
      CHECK(r.status == "ok");  // targets never need a price
    }
  }
}

TEST_CASE("compare_all_pairs: a pre-set interrupt yields no records") {
  const TokenGraph g = build_graph(testfix::triangle_market());
  std::atomic<bool> stop{true};
  CompareConfig cfg;
  cfg.workers = 2;
  const auto records = compare_all_pairs(g, triangle_prices(), cfg, &stop);
  CHECK(records.empty());
}

TEST_CASE("comparison CSV: exact header and lossless round-trip") {
  const TokenGraph g = build_graph(testfix::triangle_market());
  CompareConfig cfg;
  cfg.workers = 1;
  auto records = compare_all_pairs(g, triangle_prices(), cfg);
  // Add hand-made rows covering the non-finite ratios.
  records.push_back(make_record(kInf, "dfs_no_route"));
  records.push_back(make_record(kNaN, "no_route"));
  records.push_back(make_record(-1.0, "lg_no_route"));

  TempPath f("dexroute_pairs.csv");
  write_comparisons_csv(f.path, records);

  std::ifstream in(f.path);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "source,target,usd_in,lg_out,dfs_out,ratio,lg_path_len,dfs_path_len,lg_time_us,"
        "dfs_time_us,status");

  const auto reread = read_comparisons_csv(f.path);
  REQUIRE(reread.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CAPTURE(i);
    CHECK(same_modulo_times(reread[i], records[i]));
    CHECK(same_double(reread[i].lg_time_us, records[i].lg_time_us));
    CHECK(same_double(reread[i].dfs_time_us, records[i].dfs_time_us));
  }
}

TEST_CASE("summary and histogram CSV layouts") {
  SweepSummary s1;
  s1.usd_in = 10.0;
  s1.pair_count = 6;
  s1.prop_over_threshold = 0.5;
  s1.mean_ratio = 0.25;
  s1.median_ratio = 0.125;
  s1.path_len_diff_histogram = {{-1, 2}, {0, 3}, {2, 1}};
  SweepSummary s2;
  s2.usd_in = 100.0;
  s2.pair_count = 6;
  s2.mean_ratio = kNaN;
  s2.median_ratio = kNaN;

  TempPath sf("dexroute_summary.csv");
  write_summaries_csv(sf.path, {s1, s2});
  std::ifstream in(sf.path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "usd_in,pairs,prop_over_threshold,mean_ratio,median_ratio");
  std::getline(in, line);
  CHECK(line == "10,6,0.5,0.25,0.125");
  std::getline(in, line);
  CHECK(line == "100,6,0,nan,nan");

  TempPath hf("dexroute_hist.csv");
  write_pathlen_csv(hf.path, {s1, s2});
  std::ifstream hin(hf.path);
  std::getline(hin, line);
  CHECK(line == "usd_in,len_diff,count");
  std::vector<std::string> rows;
  while (std::getline(hin, line)) {
    if (!line.empty()) rows.push_back(line);
  }
  CHECK(rows == std::vector<std::string>{"10,-1,2", "10,0,3", "10,2,1"});
}

TEST_CASE("JSON mirrors spell non-finite numbers as tokens") {
  std::vector<ComparisonRecord> records{make_record(0.5, "ok"),
                                        make_record(kInf, "dfs_no_route"),
                                        make_record(kNaN, "no_route")};
  TempPath jf("dexroute_pairs.json");
  write_comparisons_json(jf.path, records);
  std::ifstream in(jf.path);
  const nlohmann::json arr = nlohmann::json::parse(in);
  REQUIRE(arr.is_array());
  REQUIRE(arr.size() == 3);
  CHECK(arr[0]["ratio"].get<double>() == 0.5);
  CHECK(arr[1]["ratio"].get<std::string>() == "inf");
  CHECK(arr[2]["ratio"].get<std::string>() == "nan");
  CHECK(arr[0]["source"].get<std::string>() == "S");
  CHECK(arr[0]["status"].get<std::string>() == "ok");

  SweepSummary s;
  s.usd_in = 10.0;
  s.pair_count = 3;
  s.mean_ratio = kNaN;
  s.median_ratio = kNaN;
  s.inf_ratio_pairs = 1;
  s.path_len_diff_histogram = {{0, 2}, {3, 1}};
  TempPath sf("dexroute_summary.json");
  write_summaries_json(sf.path, {s});
  std::ifstream sin(sf.path);
  const nlohmann::json sarr = nlohmann::json::parse(sin);
  REQUIRE(sarr.size() == 1);
  CHECK(sarr[0]["pairs"].get<std::size_t>() == 3);
  CHECK(sarr[0]["mean_ratio"].get<std::string>() == "nan");
  CHECK(sarr[0]["inf_ratio_pairs"].get<std::size_t>() == 1);
  CHECK(sarr[0]["path_len_diff_histogram"]["0"].get<std::size_t>() == 2);
  CHECK(sarr[0]["path_len_diff_histogram"]["3"].get<std::size_t>() == 1);
}

TEST_CASE("sweep_usd: one summary per grid level, flushed via the callback") {
  const TokenGraph g = build_graph(testfix::triangle_market());
  CompareConfig cfg;
  cfg.workers = 1;

  std::vector<double> seen_levels;
  std::vector<std::size_t> seen_counts;
  const auto summaries = sweep_usd(
      g, triangle_prices(), {10.0, 1000.0}, cfg, 0.001, nullptr,
      [&](const SweepSummary& s, const std::vector<ComparisonRecord>& records) {
        seen_levels.push_back(s.usd_in);
        seen_counts.push_back(records.size());
        for (const auto& r : records) CHECK(r.usd_in == s.usd_in);
      });

  REQUIRE(summaries.size() == 2);
  CHECK(summaries[0].usd_in == 10.0);
  CHECK(summaries[1].usd_in == 1000.0);
  CHECK(summaries[0].pair_count == 6);
  CHECK(summaries[1].pair_count == 6);
  CHECK(seen_levels == std::vector<double>{10.0, 1000.0});
  CHECK(seen_counts == std::vector<std::size_t>{6, 6});

  SUBCASE("an already-set interrupt stops after the first (empty) level") {
    std::atomic<bool> stop{true};
    std::size_t calls = 0;
    const auto cut = sweep_usd(g, triangle_prices(), {10.0, 1000.0}, cfg, 0.001, &stop,
                               [&](const SweepSummary&, const auto&) { ++calls; });
    CHECK(cut.size() == 1);
    CHECK(cut[0].pair_count == 0);
    CHECK(calls == 1);
  }
}
