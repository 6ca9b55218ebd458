#include "dexroute/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <thread>

#include <json.hpp>

#include "dexroute/csv.hpp"
#include "dexroute/line_graph.hpp"

namespace dexroute {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration<double, std::micro>(to - from).count();
}

ComparisonRecord run_pair(const TokenGraph& g, std::shared_ptr<const LineGraphCore> core,
                          const PriceTable& prices, TokenIndex si, TokenIndex ti,
                          const CompareConfig& cfg) {
  ComparisonRecord rec;
  rec.source = g.token_id(si);
  rec.target = g.token_id(ti);
  rec.usd_in = cfg.usd_in;
  rec.ratio = std::numeric_limits<double>::quiet_NaN();

  if (!prices.has(rec.source)) {
    rec.status = "missing_price";
    return rec;
  }
  const double epsilon_in = usd_to_token_amount(rec.source, cfg.usd_in, prices);

  bool lg_ok = false;
  bool dfs_ok = false;
  try {
    LgConfig lg_cfg = cfg.lg;
    lg_cfg.epsilon_in = epsilon_in;
    const auto t0 = Clock::now();
    const LineGraph lg(g, core, rec.source);
    const RouteResult r = route(lg, rec.source, rec.target, lg_cfg);
    rec.lg_time_us = elapsed_us(t0, Clock::now());
    rec.lg_out = r.amount_out;
    rec.lg_path_len = r.path.size();
    lg_ok = true;
  } catch (const NoRoute&) {
  } catch (const IsolatedSource&) {
  } catch (const Error& e) {
    rec.status = std::string("error: ") + e.what();
    return rec;
  }

  try {
    const auto t0 = Clock::now();
    const RouteResult r = dfs_route(g, rec.source, rec.target, epsilon_in, cfg.dfs);
    rec.dfs_time_us = elapsed_us(t0, Clock::now());
    rec.dfs_out = r.amount_out;
    rec.dfs_path_len = r.path.size();
    dfs_ok = true;
  } catch (const NoRoute&) {
  } catch (const Error& e) {
    rec.status = std::string("error: ") + e.what();
    return rec;
  }

  if (lg_ok && dfs_ok) {
    rec.status = "ok";
    rec.ratio = (rec.lg_out - rec.dfs_out) / rec.dfs_out;
  } else if (lg_ok) {
    rec.status = "dfs_no_route";
    rec.ratio = std::numeric_limits<double>::infinity();
  } else if (dfs_ok) {
    rec.status = "lg_no_route";
    rec.ratio = -1.0;
  } else {
    rec.status = "no_route";
  }
  return rec;
}

std::string finite_or_token(double v) { return csv::format_double(v); }

nlohmann::json number_or_token(double v) {
  if (std::isfinite(v)) return v;
  return csv::format_double(v);
}

double parse_double_field(const std::string& s, const std::filesystem::path& file,
                          std::size_t line) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ParseError(file.string(), line, "bad number '" + s + "'");
  }
  return v;
}

std::size_t parse_size_field(const std::string& s, const std::filesystem::path& file,
                             std::size_t line) {
  const double v = parse_double_field(s, file, line);
  if (v < 0 || v != std::floor(v)) {
    throw ParseError(file.string(), line, "bad count '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::vector<ComparisonRecord> compare_all_pairs(const TokenGraph& g, const PriceTable& prices,
                                                const CompareConfig& cfg,
                                                const std::atomic<bool>* interrupt) {
  const std::size_t n = g.token_count();
  std::vector<std::pair<TokenIndex, TokenIndex>> pairs;
  pairs.reserve(n * (n > 0 ? n - 1 : 0));
  for (TokenIndex s = 0; s < n; ++s) {
    for (TokenIndex t = 0; t < n; ++t) {
      if (s != t) pairs.emplace_back(s, t);
    }
  }

  const auto core = std::make_shared<const LineGraphCore>(LineGraphCore::build(g));
  std::vector<ComparisonRecord> records(pairs.size());
  std::vector<char> done(pairs.size(), 0);

  std::size_t workers = cfg.workers ? cfg.workers : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = std::min(workers, std::max<std::size_t>(pairs.size(), 1));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      if (interrupt && interrupt->load(std::memory_order_relaxed)) return;
      const std::size_t k = next.fetch_add(1, std::memory_order_relaxed);
      if (k >= pairs.size()) return;
      records[k] = run_pair(g, core, prices, pairs[k].first, pairs[k].second, cfg);
      done[k] = 1;
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  std::vector<ComparisonRecord> out;
  out.reserve(records.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (done[k]) out.push_back(std::move(records[k]));
  }
  return out;
}

SweepSummary summarize(const std::vector<ComparisonRecord>& records, double usd_in,
                       double threshold) {
  SweepSummary s;
  s.usd_in = usd_in;
  s.pair_count = records.size();

  std::size_t comparable = 0;
  std::size_t over = 0;
  std::vector<double> gains;
  for (const auto& r : records) {
    if (std::isnan(r.ratio)) continue;
    ++comparable;
    if (std::isinf(r.ratio) && r.ratio > 0) {
      ++s.inf_ratio_pairs;
      ++over;
      continue;
    }
    if (r.ratio > threshold) {
      ++over;
      gains.push_back(r.ratio);
    }
  }
  for (const auto& r : records) {
    if (r.status == "ok") {
      const long long diff =
          static_cast<long long>(r.lg_path_len) - static_cast<long long>(r.dfs_path_len);
      ++s.path_len_diff_histogram[diff];
    }
  }

  s.prop_over_threshold =
      comparable ? static_cast<double>(over) / static_cast<double>(comparable) : 0.0;
  if (gains.empty()) {
    s.mean_ratio = std::numeric_limits<double>::quiet_NaN();
    s.median_ratio = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  for (const double v : gains) sum += v;
  s.mean_ratio = sum / static_cast<double>(gains.size());
  std::sort(gains.begin(), gains.end());
  const std::size_t m = gains.size();
  s.median_ratio = (m % 2 == 1) ? gains[m / 2] : 0.5 * (gains[m / 2 - 1] + gains[m / 2]);
  return s;
}

std::vector<SweepSummary> sweep_usd(
    const TokenGraph& g, const PriceTable& prices, const std::vector<double>& usd_grid,
    const CompareConfig& cfg, double threshold, const std::atomic<bool>* interrupt,
    const std::function<void(const SweepSummary&, const std::vector<ComparisonRecord>&)>&
        on_level) {
  std::vector<SweepSummary> summaries;
  for (const double usd : usd_grid) {
    CompareConfig level_cfg = cfg;
    level_cfg.usd_in = usd;
    const auto records = compare_all_pairs(g, prices, level_cfg, interrupt);
    const SweepSummary summary = summarize(records, usd, threshold);
    summaries.push_back(summary);
    if (on_level) on_level(summary, records);
    if (interrupt && interrupt->load(std::memory_order_relaxed)) break;
  }
  return summaries;
}

void write_comparisons_csv(const std::filesystem::path& path,
                           const std::vector<ComparisonRecord>& records) {
  auto out = open_out(path);
  out << "source,target,usd_in,lg_out,dfs_out,ratio,lg_path_len,dfs_path_len,lg_time_us,"
         "dfs_time_us,status\n";
  for (const auto& r : records) {
    const std::vector<std::string> fields = {
        r.source,
        r.target,
        csv::format_double(r.usd_in),
        csv::format_double(r.lg_out),
        csv::format_double(r.dfs_out),
        finite_or_token(r.ratio),
        std::to_string(r.lg_path_len),
        std::to_string(r.dfs_path_len),
        csv::format_double(r.lg_time_us),
        csv::format_double(r.dfs_time_us),
        r.status,
    };
    out << csv::join_line(fields) << '\n';
  }
}

std::vector<ComparisonRecord> read_comparisons_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  std::vector<ComparisonRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) continue;  // header
    const auto f = csv::split_line(line);
    if (f.size() != 11) {
      throw ParseError(path.string(), line_no, "expected 11 fields, got " +
                                                   std::to_string(f.size()));
    }
    ComparisonRecord r;
    r.source = f[0];
    r.target = f[1];
    r.usd_in = parse_double_field(f[2], path, line_no);
    r.lg_out = parse_double_field(f[3], path, line_no);
    r.dfs_out = parse_double_field(f[4], path, line_no);
    r.ratio = parse_double_field(f[5], path, line_no);
    r.lg_path_len = parse_size_field(f[6], path, line_no);
    r.dfs_path_len = parse_size_field(f[7], path, line_no);
    r.lg_time_us = parse_double_field(f[8], path, line_no);
    r.dfs_time_us = parse_double_field(f[9], path, line_no);
    r.status = f[10];
    records.push_back(std::move(r));
  }
  return records;
}

void write_summaries_csv(const std::filesystem::path& path,
                         const std::vector<SweepSummary>& summaries) {
  auto out = open_out(path);
  out << "usd_in,pairs,prop_over_threshold,mean_ratio,median_ratio\n";
  for (const auto& s : summaries) {
    const std::vector<std::string> fields = {
        csv::format_double(s.usd_in),          std::to_string(s.pair_count),
        csv::format_double(s.prop_over_threshold), finite_or_token(s.mean_ratio),
        finite_or_token(s.median_ratio),
    };
    out << csv::join_line(fields) << '\n';
  }
}

void write_pathlen_csv(const std::filesystem::path& path,
                       const std::vector<SweepSummary>& summaries) {
  auto out = open_out(path);
  out << "usd_in,len_diff,count\n";
  for (const auto& s : summaries) {
    for (const auto& [diff, count] : s.path_len_diff_histogram) {
      const std::vector<std::string> fields = {
          csv::format_double(s.usd_in),
          std::to_string(diff),
          std::to_string(count),
      };
      out << csv::join_line(fields) << '\n';
    }
  }
}

void write_comparisons_json(const std::filesystem::path& path,
                            const std::vector<ComparisonRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"source", r.source},
                   {"target", r.target},
                   {"usd_in", r.usd_in},
                   {"lg_out", r.lg_out},
                   {"dfs_out", r.dfs_out},
                   {"ratio", number_or_token(r.ratio)},
                   {"lg_path_len", r.lg_path_len},
                   {"dfs_path_len", r.dfs_path_len},
                   {"lg_time_us", r.lg_time_us},
                   {"dfs_time_us", r.dfs_time_us},
                   {"status", r.status}});
  }
  auto out = open_out(path);
  out << arr.dump(2) << '\n';
}

void write_summaries_json(const std::filesystem::path& path,
                          const std::vector<SweepSummary>& summaries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : summaries) {
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [diff, count] : s.path_len_diff_histogram) {
      hist[std::to_string(diff)] = count;
    }
    arr.push_back({{"usd_in", s.usd_in},
                   {"pairs", s.pair_count},
                   {"prop_over_threshold", s.prop_over_threshold},
                   {"mean_ratio", number_or_token(s.mean_ratio)},
                   {"median_ratio", number_or_token(s.median_ratio)},
                   {"inf_ratio_pairs", s.inf_ratio_pairs},
                   {"path_len_diff_histogram", hist}});
  }
  auto out = open_out(path);
  out << arr.dump(2) << '\n';
}

}  // namespace dexroute
