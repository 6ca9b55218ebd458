#include "dexroute/snapshot.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include <json.hpp>

#include "dexroute/csv.hpp"

namespace dexroute {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

double parse_double(std::string_view s, const char* what, const std::string& file,
                    std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(file, line, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

Date parse_date(std::string_view s, const char* what, const std::string& file,
                std::size_t line) {
  const auto date = Date::parse(s);
  if (!date) {
    throw ParseError(file, line, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return *date;
}

void validate_record(const PoolRecord& r) {
  const std::string who = "pool '" + r.pool_id + "'";
  if (r.pool_id.empty()) throw InvariantViolation("pool record with empty pool_id");
  if (r.token_a.empty() || r.token_b.empty()) {
    throw InvariantViolation(who + ": empty token id");
  }
  if (r.token_a == r.token_b) {
    throw InvariantViolation(who + ": token_a equals token_b");
  }
  if (!(r.reserve_a > 0.0) || !(r.reserve_b > 0.0)) {
    throw InvariantViolation(who + ": reserves must be strictly positive");
  }
  if (!(r.tvl_usd >= 0.0)) {
    throw InvariantViolation(who + ": tvl_usd must be >= 0");
  }
  if (r.last_trade_at < r.created_at) {
    throw InvariantViolation(who + ": last_trade_at precedes created_at");
  }
}

void reject_duplicates(const std::vector<PoolRecord>& records) {
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (!seen.insert(r.pool_id).second) {
      throw InvariantViolation("duplicate pool '" + r.pool_id + "'");
    }
  }
}

double decimals_scale(double decimals) {
  return std::pow(10.0, decimals);
}

std::vector<PoolRecord> load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open snapshot file " + path.string());
  const std::string file = path.filename().string();

  std::string line;
  if (!std::getline(in, line)) throw ParseError(file, 1, "empty file, header expected");
  const auto header = csv::split_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"pool_id", "token_a", "token_b", "reserve_a", "reserve_b",
                               "tvl_usd", "created_at", "last_trade_at"}) {
    if (!col.count(required)) {
      throw ParseError(file, 1, std::string("missing column '") + required + "'");
    }
  }
  const bool has_decimals = col.count("decimals_a") && col.count("decimals_b");

  std::vector<PoolRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = csv::split_line(line);
    if (fields.size() < header.size()) {
      throw ParseError(file, line_no, "expected " + std::to_string(header.size()) +
                                          " fields, got " + std::to_string(fields.size()));
    }
    PoolRecord r;
    r.pool_id = fields[col["pool_id"]];
    r.token_a = fields[col["token_a"]];
    r.token_b = fields[col["token_b"]];
    r.reserve_a = parse_double(fields[col["reserve_a"]], "reserve_a", file, line_no);
    r.reserve_b = parse_double(fields[col["reserve_b"]], "reserve_b", file, line_no);
    r.tvl_usd = parse_double(fields[col["tvl_usd"]], "tvl_usd", file, line_no);
    r.created_at = parse_date(fields[col["created_at"]], "created_at", file, line_no);
    r.last_trade_at = parse_date(fields[col["last_trade_at"]], "last_trade_at", file, line_no);
    if (has_decimals) {
      r.reserve_a /= decimals_scale(parse_double(fields[col["decimals_a"]], "decimals_a", file, line_no));
      r.reserve_b /= decimals_scale(parse_double(fields[col["decimals_b"]], "decimals_b", file, line_no));
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<PoolRecord> load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open snapshot file " + path.string());
  const std::string file = path.filename().string();

  std::vector<PoolRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(file, line_no, e.what());
    }
    try {
      PoolRecord r;
      r.pool_id = j.at("pool_id").get<std::string>();
      r.token_a = j.at("token_a").get<std::string>();
      r.token_b = j.at("token_b").get<std::string>();
      r.reserve_a = j.at("reserve_a").get<double>();
      r.reserve_b = j.at("reserve_b").get<double>();
      r.tvl_usd = j.at("tvl_usd").get<double>();
      r.created_at = parse_date(j.at("created_at").get<std::string>(), "created_at", file, line_no);
      r.last_trade_at =
          parse_date(j.at("last_trade_at").get<std::string>(), "last_trade_at", file, line_no);
      if (j.contains("decimals_a") && j.contains("decimals_b")) {
        r.reserve_a /= decimals_scale(j.at("decimals_a").get<double>());
        r.reserve_b /= decimals_scale(j.at("decimals_b").get<double>());
      }
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(file, line_no, e.what());
    }
  }
  return records;
}

}  // namespace

std::optional<Date> Date::parse(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  const auto y = s.substr(0, 4), m = s.substr(5, 2), d = s.substr(8, 2);
  if (!all_digits(y) || !all_digits(m) || !all_digits(d)) return std::nullopt;
  Date date;
  std::from_chars(y.data(), y.data() + y.size(), date.year);
  std::from_chars(m.data(), m.data() + m.size(), date.month);
  std::from_chars(d.data(), d.data() + d.size(), date.day);
  if (date.month < 1 || date.month > 12 || date.day < 1 || date.day > 31) return std::nullopt;
  return date;
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

SnapshotFormat detect_snapshot_format(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json") return SnapshotFormat::JsonLines;
  return SnapshotFormat::Csv;
}

std::vector<PoolRecord> load_snapshot(const std::filesystem::path& path, SnapshotFormat format) {
  auto records =
      format == SnapshotFormat::Csv ? load_csv(path) : load_jsonl(path);
  for (const auto& r : records) validate_record(r);
  reject_duplicates(records);
  return records;
}

void write_snapshot(const std::filesystem::path& path, const std::vector<PoolRecord>& records,
                    SnapshotFormat format) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write snapshot file " + path.string());
  if (format == SnapshotFormat::Csv) {
    out << "pool_id,token_a,token_b,reserve_a,reserve_b,tvl_usd,created_at,last_trade_at\n";
    for (const auto& r : records) {
      const std::string fields[] = {r.pool_id,
                                    r.token_a,
                                    r.token_b,
                                    csv::format_double(r.reserve_a),
                                    csv::format_double(r.reserve_b),
                                    csv::format_double(r.tvl_usd),
                                    r.created_at.to_string(),
                                    r.last_trade_at.to_string()};
      out << csv::join_line(fields) << '\n';
    }
  } else {
    for (const auto& r : records) {
      nlohmann::json j{{"pool_id", r.pool_id},
                       {"token_a", r.token_a},
                       {"token_b", r.token_b},
                       {"reserve_a", r.reserve_a},
                       {"reserve_b", r.reserve_b},
                       {"tvl_usd", r.tvl_usd},
                       {"created_at", r.created_at.to_string()},
                       {"last_trade_at", r.last_trade_at.to_string()}};
      out << j.dump() << '\n';
    }
  }
}

std::vector<PoolRecord> filter_pools(const std::vector<PoolRecord>& records,
                                     const FilterConfig& config) {
  if (records.empty()) throw EmptyResult("filter_pools: no input records");
  if (config.max_tokens < 2 || config.min_degree < 1) {
    throw InvariantViolation("filter config requires max_tokens >= 2 and min_degree >= 1");
  }

  // Stages 1+2: activity window and TVL floor.
  std::vector<const PoolRecord*> alive;
  for (const auto& r : records) {
    if (r.created_at < config.as_of_date && r.last_trade_at >= config.as_of_date &&
        r.tvl_usd >= config.min_tvl_usd) {
      alive.push_back(&r);
    }
  }

  const auto token_degrees = [&] {
    std::map<std::string, std::size_t> deg;
    for (const auto* r : alive) {
      ++deg[r->token_a];
      ++deg[r->token_b];
    }
    return deg;
  };

  const auto drop_tokens = [&](const std::set<std::string>& gone) {
    std::erase_if(alive, [&](const PoolRecord* r) {
      return gone.count(r->token_a) || gone.count(r->token_b);
    });
  };

  // Stage 3: iterated removal of tokens below the degree floor.
  const auto prune_degrees = [&] {
    for (;;) {
      std::set<std::string> gone;
      for (const auto& [token, deg] : token_degrees()) {
        if (deg < config.min_degree) gone.insert(token);
      }
      if (gone.empty()) break;
      drop_tokens(gone);
    }
  };
  prune_degrees();

  // Stage 4: shed the smallest-TVL token (lexicographic tie-break) until the
  // token budget holds, re-running the degree prune after each deletion.
  for (;;) {
    std::map<std::string, double> tvl;
    for (const auto* r : alive) {
      tvl[r->token_a] += r->tvl_usd;
      tvl[r->token_b] += r->tvl_usd;
    }
    if (tvl.size() <= config.max_tokens) break;
    auto victim = tvl.begin();
    for (auto it = std::next(tvl.begin()); it != tvl.end(); ++it) {
      if (it->second < victim->second) victim = it;
    }
    drop_tokens({victim->first});
    prune_degrees();
  }

  if (alive.empty()) throw EmptyResult("filter_pools: all records filtered out");
  std::vector<PoolRecord> result;
  result.reserve(alive.size());
  for (const auto* r : alive) result.push_back(*r);
  return result;
}

PriceTable PriceTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open price file " + path.string());
  const std::string file = path.filename().string();

  PriceTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = csv::split_line(line);
    if (line_no == 1 && fields.size() >= 2 && fields[0] == "token") continue;  // header
    if (fields.size() != 2) {
      throw ParseError(file, line_no, "expected 'token,usd_price'");
    }
    const double price = parse_double(fields[1], "usd_price", file, line_no);
    if (!(price > 0.0)) {
      throw InvariantViolation("price for '" + fields[0] + "' must be strictly positive");
    }
    table.set(fields[0], price);
  }
  return table;
}

void PriceTable::set(std::string token, double usd_price) {
  if (!(usd_price > 0.0)) {
    throw InvariantViolation("price for '" + token + "' must be strictly positive");
  }
  prices_[std::move(token)] = usd_price;
}

bool PriceTable::has(std::string_view token) const {
  return prices_.count(std::string(token)) > 0;
}

double PriceTable::price(std::string_view token) const {
  const auto it = prices_.find(std::string(token));
  if (it == prices_.end()) throw MissingPrice("no price for token '" + std::string(token) + "'");
  return it->second;
}

double usd_to_token_amount(std::string_view token, double usd, const PriceTable& prices) {
  return usd / prices.price(token);
}

}  // namespace dexroute
