// Command-line front end: snapshot ingestion, graph inspection, single-pair
// routing, pairwise router comparison, input-size sweeps, and spot checks
// against the exhaustive oracle.

#include <atomic>
#include <csignal>
#include <cstddef>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dexroute/bench.hpp"
#include "dexroute/csv.hpp"
#include "dexroute/dfs_router.hpp"
#include "dexroute/lg_router.hpp"
#include "dexroute/line_graph.hpp"
#include "dexroute/route_oracle.hpp"
#include "dexroute/snapshot.hpp"
#include "dexroute/token_graph.hpp"

namespace {

std::atomic<bool> g_interrupt{false};

void handle_sigint(int) { g_interrupt.store(true); }

struct SnapshotOpts {
  std::string snapshot;
  std::string as_of;
  double min_tvl = 10'000.0;
  std::size_t max_tokens = 100;
  std::size_t min_degree = 2;
};

void add_snapshot_opts(CLI::App* cmd, SnapshotOpts& o) {
  cmd->add_option("--snapshot", o.snapshot, "pool snapshot file (.csv or .jsonl)")->required();
  cmd->add_option("--as-of", o.as_of, "cutoff date YYYY-MM-DD; turns the pool filter on");
  cmd->add_option("--min-tvl", o.min_tvl, "minimum pool TVL in USD (filter)");
  cmd->add_option("--max-tokens", o.max_tokens, "token budget after filtering");
  cmd->add_option("--min-degree", o.min_degree, "minimum pools per kept token (filter)");
}

struct RouterOpts {
  double fee_lambda = 0.003;
  std::string mode = "real";
  std::string dfs_order = "snapshot";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_hops;
  std::size_t max_rounds = 0;
};

void add_router_opts(CLI::App* cmd, RouterOpts& o) {
  cmd->add_option("--fee", o.fee_lambda, "pool fee fraction, e.g. 0.003");
  cmd->add_option("--mode", o.mode, "swap arithmetic: real | exact")
      ->check(CLI::IsMember({"real", "exact"}));
  cmd->add_option("--dfs-order", o.dfs_order, "baseline neighbor order: snapshot | lex | shuffle")
      ->check(CLI::IsMember({"snapshot", "lex", "shuffle"}));
  cmd->add_option("--seed", o.seed, "rng seed; required with --dfs-order shuffle");
  cmd->add_option("--max-hops", o.max_hops, "baseline hop budget");
  cmd->add_option("--max-rounds", o.max_rounds, "line-graph sweep cap (0 = 10x vertices)");
}

std::vector<dexroute::PoolRecord> load_records(const SnapshotOpts& o) {
  auto records =
      dexroute::load_snapshot(o.snapshot, dexroute::detect_snapshot_format(o.snapshot));
  if (!o.as_of.empty()) {
    const auto date = dexroute::Date::parse(o.as_of);
    if (!date) {
      throw dexroute::Error("bad --as-of date '" + o.as_of + "', expected YYYY-MM-DD");
    }
    records = dexroute::filter_pools(records, {*date, o.min_tvl, o.max_tokens, o.min_degree});
  }
  return records;
}

dexroute::SwapMode parse_mode(const std::string& s) {
  return s == "exact" ? dexroute::SwapMode::ExactInteger : dexroute::SwapMode::Real;
}

dexroute::DfsConfig::Order parse_order(const std::string& s) {
  if (s == "lex") return dexroute::DfsConfig::Order::Lexicographic;
  if (s == "shuffle") return dexroute::DfsConfig::Order::SeededShuffle;
  return dexroute::DfsConfig::Order::SnapshotOrder;
}

dexroute::LgConfig make_lg_config(const RouterOpts& o) {
  dexroute::LgConfig cfg;
  cfg.fee = dexroute::FeeRate::from_lambda(o.fee_lambda);
  cfg.mode = parse_mode(o.mode);
  cfg.max_rounds = o.max_rounds;
  return cfg;
}

dexroute::DfsConfig make_dfs_config(const RouterOpts& o) {
  dexroute::DfsConfig cfg;
  cfg.fee = dexroute::FeeRate::from_lambda(o.fee_lambda);
  cfg.mode = parse_mode(o.mode);
  cfg.neighbor_order = parse_order(o.dfs_order);
  cfg.seed = o.seed;
  cfg.max_hops = o.max_hops;
  return cfg;
}

// "10,100,1000" | "lo:hi:x10" (multiplicative) | "lo:hi:90" (additive)
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  const auto parse_num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw dexroute::Error("bad number '" + s + "' in --usd-grid");
    }
  };
  if (spec.find(':') == std::string::npos) {
    std::size_t start = 0;
    while (start <= spec.size()) {
      const std::size_t comma = spec.find(',', start);
      const std::string part =
          spec.substr(start, comma == std::string::npos ? comma : comma - start);
      if (!part.empty()) grid.push_back(parse_num(part));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } else {
    const std::size_t c1 = spec.find(':');
    const std::size_t c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos) {
      throw dexroute::Error("--usd-grid range must be lo:hi:step");
    }
    const double lo = parse_num(spec.substr(0, c1));
    const double hi = parse_num(spec.substr(c1 + 1, c2 - c1 - 1));
    std::string step = spec.substr(c2 + 1);
    const bool multiplicative = !step.empty() && (step[0] == 'x' || step[0] == 'X');
    if (multiplicative) step.erase(0, 1);
    const double s = parse_num(step);
    if (lo <= 0 || hi < lo) throw dexroute::Error("--usd-grid needs 0 < lo <= hi");
    if (multiplicative ? s <= 1.0 : s <= 0.0) {
      throw dexroute::Error("--usd-grid step must advance the level");
    }
    for (double v = lo; v <= hi * (1.0 + 1e-12); v = multiplicative ? v * s : v + s) {
      grid.push_back(v);
    }
  }
  if (grid.empty()) throw dexroute::Error("--usd-grid produced no levels");
  return grid;
}

void print_route(const dexroute::TokenGraph& g, std::string_view source,
                 const dexroute::RouteResult& r) {
  std::string tokens(source);
  std::string pools;
  for (const dexroute::EdgeIndex e : r.path) {
    tokens += " -> " + g.token_id(g.edge(e).to);
    if (!pools.empty()) pools += ", ";
    pools += g.pool(dexroute::TokenGraph::edge_pool(e)).id;
  }
  std::cout << "route: " << tokens << "\n";
  std::cout << "pools: " << pools << "\n";
  std::cout << "amount_out: " << dexroute::csv::format_double(r.amount_out) << "\n";
  std::cout << "hops: " << r.path.size() << "\n";
}

std::string usd_suffix(double usd) {
  std::string s = dexroute::csv::format_double(usd);
  for (char& c : s) {
    if (c == '.') c = '_';
  }
  return s;
}

int run(int argc, char** argv) {
  CLI::App app{"CPMM swap routing over pool snapshots"};
  app.require_subcommand(1);

  // ingest
  SnapshotOpts ingest_snap;
  std::string ingest_out;
  auto* ingest = app.add_subcommand("ingest", "load, validate, filter, and re-export a snapshot");
  add_snapshot_opts(ingest, ingest_snap);
  ingest->add_option("--out", ingest_out, "write the surviving pools here (.csv or .jsonl)");

  // graph-info
  SnapshotOpts info_snap;
  auto* info = app.add_subcommand("graph-info", "token/pool/edge and line-graph size report");
  add_snapshot_opts(info, info_snap);

  // route
  SnapshotOpts route_snap;
  RouterOpts route_router;
  std::string route_source, route_target, route_prices_path, route_algo = "lg";
  double route_amount = 0.0, route_usd = 0.0;
  auto* route_cmd = app.add_subcommand("route", "best route for one source/target pair");
  add_snapshot_opts(route_cmd, route_snap);
  add_router_opts(route_cmd, route_router);
  route_cmd->add_option("--source", route_source, "source token id")->required();
  route_cmd->add_option("--target", route_target, "target token id")->required();
  auto* amount_opt = route_cmd->add_option("--amount", route_amount, "input in source token units");
  auto* usd_opt = route_cmd->add_option("--usd", route_usd, "input in USD (needs --prices)");
  route_cmd->add_option("--prices", route_prices_path, "token,usd_price CSV");
  route_cmd->add_option("--algo", route_algo, "router: lg | dfs")
      ->check(CLI::IsMember({"lg", "dfs"}));

  // compare
  SnapshotOpts cmp_snap;
  RouterOpts cmp_router;
  std::string cmp_prices_path, cmp_out, cmp_format = "csv";
  double cmp_usd = 100.0, cmp_threshold = 0.001;
  std::size_t cmp_workers = 0;
  auto* cmp = app.add_subcommand("compare", "route every ordered pair with both routers");
  add_snapshot_opts(cmp, cmp_snap);
  add_router_opts(cmp, cmp_router);
  cmp->add_option("--prices", cmp_prices_path, "token,usd_price CSV")->required();
  cmp->add_option("--usd", cmp_usd, "input size in USD per pair");
  cmp->add_option("--threshold", cmp_threshold, "ratio counted as an improvement");
  cmp->add_option("--workers", cmp_workers, "worker threads (0 = all cores)");
  cmp->add_option("--out", cmp_out, "pair records file");
  cmp->add_option("--format", cmp_format, "output format: csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  // sweep
  SnapshotOpts sweep_snap;
  RouterOpts sweep_router;
  std::string sweep_prices_path, sweep_grid_spec = "10,100,1000,10000";
  std::string sweep_dir = "sweep_out", sweep_format = "csv";
  double sweep_threshold = 0.001;
  std::size_t sweep_workers = 0;
  auto* sweep = app.add_subcommand("sweep", "compare across a grid of USD input sizes");
  add_snapshot_opts(sweep, sweep_snap);
  add_router_opts(sweep, sweep_router);
  sweep->add_option("--prices", sweep_prices_path, "token,usd_price CSV")->required();
  sweep->add_option("--usd-grid", sweep_grid_spec, "levels: \"10,100\" or lo:hi:x10 or lo:hi:50");
  sweep->add_option("--threshold", sweep_threshold, "ratio counted as an improvement");
  sweep->add_option("--workers", sweep_workers, "worker threads (0 = all cores)");
  sweep->add_option("--out-dir", sweep_dir, "directory for per-level and summary files");
  sweep->add_option("--format", sweep_format, "output format: csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  // oracle-check
  SnapshotOpts oracle_snap;
  RouterOpts oracle_router;
  std::string oracle_source, oracle_target;
  double oracle_amount = 1.0;
  std::size_t oracle_max_len = 6;
  bool oracle_pool_revisit = false;
  auto* oracle =
      app.add_subcommand("oracle-check", "line-graph router vs exhaustive enumeration");
  add_snapshot_opts(oracle, oracle_snap);
  add_router_opts(oracle, oracle_router);
  oracle->add_option("--source", oracle_source, "source token id")->required();
  oracle->add_option("--target", oracle_target, "target token id")->required();
  oracle->add_option("--amount", oracle_amount, "input in source token units");
  oracle->add_option("--max-path-len", oracle_max_len, "oracle hop budget");
  oracle->add_flag("--allow-pool-revisit", oracle_pool_revisit,
                   "oracle enumerates walks instead of token-simple paths");

  CLI11_PARSE(app, argc, argv);

  std::signal(SIGINT, handle_sigint);

  if (*ingest) {
    auto records = load_records(ingest_snap);
    const auto g = dexroute::build_graph(records);
    std::cout << "pools: " << g.pool_count() << "\ntokens: " << g.token_count() << "\n";
    if (!ingest_out.empty()) {
      dexroute::write_snapshot(ingest_out, records,
                               dexroute::detect_snapshot_format(ingest_out));
      std::cout << "wrote " << ingest_out << "\n";
    }
    return 0;
  }

  if (*info) {
    const auto g = dexroute::build_graph(load_records(info_snap));
    const auto core = dexroute::LineGraphCore::build(g);
    std::cout << "tokens: " << g.token_count() << "\n";
    std::cout << "pools: " << g.pool_count() << "\n";
    std::cout << "directed_edges: " << g.edge_count() << "\n";
    std::cout << "line_graph_vertices (plus 1 per query): " << core.pool_vertex_count() << "\n";
    std::cout << "line_graph_links: " << core.link_count() << "\n";
    std::cout << "degree_histogram:\n";
    for (const auto& [degree, count] : g.degree_histogram()) {
      std::cout << "  " << degree << ": " << count << "\n";
    }
    return 0;
  }

  if (*route_cmd) {
    const auto g = dexroute::build_graph(load_records(route_snap));
    double amount_in = route_amount;
    if (amount_opt->count() == usd_opt->count()) {
      throw dexroute::Error("give exactly one of --amount and --usd");
    }
    if (usd_opt->count()) {
      if (route_prices_path.empty()) throw dexroute::Error("--usd needs --prices");
      const auto prices = dexroute::PriceTable::load(route_prices_path);
      amount_in = dexroute::usd_to_token_amount(route_source, route_usd, prices);
    }
    dexroute::RouteResult result;
    if (route_algo == "dfs") {
      result = dexroute::dfs_route(g, route_source, route_target, amount_in,
                                   make_dfs_config(route_router));
    } else {
      const auto lg = dexroute::build_line_graph(g, route_source);
      auto cfg = make_lg_config(route_router);
      cfg.epsilon_in = amount_in;
      result = dexroute::route(lg, route_source, route_target, cfg);
      if (result.hit_round_cap) {
        std::cerr << "warning: stopped at the round cap before stabilizing\n";
      }
    }
    std::cout << "amount_in: " << dexroute::csv::format_double(amount_in) << "\n";
    print_route(g, route_source, result);
    return 0;
  }

  if (*cmp) {
    const auto g = dexroute::build_graph(load_records(cmp_snap));
    const auto prices = dexroute::PriceTable::load(cmp_prices_path);
    dexroute::CompareConfig cfg;
    cfg.usd_in = cmp_usd;
    cfg.lg = make_lg_config(cmp_router);
    cfg.dfs = make_dfs_config(cmp_router);
    cfg.workers = cmp_workers;
    const auto records = dexroute::compare_all_pairs(g, prices, cfg, &g_interrupt);
    const auto summary = dexroute::summarize(records, cmp_usd, cmp_threshold);
    if (!cmp_out.empty()) {
      if (cmp_format == "json") {
        dexroute::write_comparisons_json(cmp_out, records);
      } else {
        dexroute::write_comparisons_csv(cmp_out, records);
      }
      std::cout << "wrote " << cmp_out << "\n";
    }
    std::cout << "pairs: " << summary.pair_count << "\n";
    std::cout << "prop_over_threshold: "
              << dexroute::csv::format_double(summary.prop_over_threshold) << "\n";
    std::cout << "mean_ratio: " << dexroute::csv::format_double(summary.mean_ratio) << "\n";
    std::cout << "median_ratio: " << dexroute::csv::format_double(summary.median_ratio) << "\n";
    std::cout << "dfs_only_misses: " << summary.inf_ratio_pairs << "\n";
    if (g_interrupt.load()) {
      std::cerr << "interrupted: results cover the completed pairs only\n";
      return 130;
    }
    return 0;
  }

  if (*sweep) {
    const auto g = dexroute::build_graph(load_records(sweep_snap));
    const auto prices = dexroute::PriceTable::load(sweep_prices_path);
    const auto grid = parse_grid(sweep_grid_spec);
    dexroute::CompareConfig cfg;
    cfg.lg = make_lg_config(sweep_router);
    cfg.dfs = make_dfs_config(sweep_router);
    cfg.workers = sweep_workers;
    const std::filesystem::path dir(sweep_dir);
    std::filesystem::create_directories(dir);
    const bool json = sweep_format == "json";

    std::vector<dexroute::SweepSummary> summaries;
    const auto flush_level = [&](const dexroute::SweepSummary& summary,
                                 const std::vector<dexroute::ComparisonRecord>& records) {
      const std::string name = "pairs_usd" + usd_suffix(summary.usd_in) + (json ? ".json" : ".csv");
      if (json) {
        dexroute::write_comparisons_json(dir / name, records);
      } else {
        dexroute::write_comparisons_csv(dir / name, records);
      }
      summaries.push_back(summary);
      if (json) {
        dexroute::write_summaries_json(dir / "summary.json", summaries);
      } else {
        dexroute::write_summaries_csv(dir / "summary.csv", summaries);
        dexroute::write_pathlen_csv(dir / "pathlen_diff.csv", summaries);
      }
      std::cout << "usd " << dexroute::csv::format_double(summary.usd_in) << ": "
                << summary.pair_count << " pairs, prop_over_threshold "
                << dexroute::csv::format_double(summary.prop_over_threshold) << "\n";
    };
    dexroute::sweep_usd(g, prices, grid, cfg, sweep_threshold, &g_interrupt, flush_level);
    std::cout << "wrote " << (dir / (json ? "summary.json" : "summary.csv")).string() << "\n";
    if (g_interrupt.load()) {
      std::cerr << "interrupted: partial sweep results were flushed\n";
      return 130;
    }
    return 0;
  }

  if (*oracle) {
    const auto g = dexroute::build_graph(load_records(oracle_snap));
    auto lg_cfg = make_lg_config(oracle_router);
    lg_cfg.epsilon_in = oracle_amount;
    const auto lg = dexroute::build_line_graph(g, oracle_source);
    const auto lg_result = dexroute::route(lg, oracle_source, oracle_target, lg_cfg);

    dexroute::OracleConfig ocfg;
    ocfg.max_path_len = oracle_max_len;
    ocfg.allow_pool_revisit = oracle_pool_revisit;
    ocfg.fee = lg_cfg.fee;
    ocfg.mode = lg_cfg.mode;
    const auto oracle_result =
        dexroute::best_route_exhaustive(g, oracle_source, oracle_target, oracle_amount, ocfg);

    std::cout << "line_graph:\n";
    print_route(g, oracle_source, lg_result);
    std::cout << "oracle (" << oracle_result.iterations_used << " candidates):\n";
    print_route(g, oracle_source, oracle_result);
    const double rel =
        (oracle_result.amount_out - lg_result.amount_out) / oracle_result.amount_out;
    std::cout << "relative_shortfall: " << dexroute::csv::format_double(rel) << "\n";
    if (rel > 1e-9) {
      std::cerr << "line-graph route is not optimal for this pair\n";
      return 1;
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const dexroute::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
