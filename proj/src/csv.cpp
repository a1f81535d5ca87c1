#include "netbandit/csv.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "netbandit/errors.hpp"

namespace netbandit {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw DataError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, int line) {
  const double v = parse_double(s, line);
  if (v != std::floor(v)) throw DataError("csv line " + std::to_string(line) + ": expected integer '" + s + "'");
  return static_cast<int>(v);
}

}  // namespace

std::vector<CsvRow> csv_rows(const ExperimentConfig& cfg, const Aggregate& result) {
  std::vector<CsvRow> rows;
  const std::string agent = to_string(cfg.agent.kind);
  const int budget = cfg.budget.resolve(cfg.network.n);
  for (const auto& run : result.runs) {
    for (std::size_t i = 0; i < run.records.size(); ++i) {
      const auto& rec = run.records[i];
      CsvRow row;
      row.rep = run.replication;
      row.t = rec.t;
      row.agent = agent;
      row.n = cfg.network.n;
      row.budget = budget;
      row.prior_mean = cfg.agent.prior_mean;
      row.cum_regret = run.cumulative_regret[i];
      row.regret_inc = rec.regret;
      row.oracle_status = to_string(rec.oracle_status);
      row.wall_ms = rec.wall_ms;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows, const CsvOptions& options) {
  if (options.header) out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.rep << ',' << r.t << ',' << r.agent << ',' << r.n << ',' << r.budget << ',' << num(r.prior_mean) << ','
        << num(r.cum_regret) << ',' << num(r.regret_inc) << ',' << r.oracle_status << ','
        << num(options.timing ? r.wall_ms : 0.0) << '\n';
  }
}

std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw DataError("csv: missing or unexpected header");
  std::vector<CsvRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 10) throw DataError("csv line " + std::to_string(lineno) + ": expected 10 cells");
    for (const auto& cell : c)
      if (cell.empty()) throw DataError("csv line " + std::to_string(lineno) + ": empty cell");
    CsvRow r;
    r.rep = parse_int(c[0], lineno);
    r.t = parse_int(c[1], lineno);
    r.agent = c[2];
    r.n = parse_int(c[3], lineno);
    r.budget = parse_int(c[4], lineno);
    r.prior_mean = parse_double(c[5], lineno);
    r.cum_regret = parse_double(c[6], lineno);
    r.regret_inc = parse_double(c[7], lineno);
    r.oracle_status = c[8];
    r.wall_ms = parse_double(c[9], lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_summary(std::ostream& out, const std::string& label, const ExperimentConfig& cfg,
                   const Aggregate& result) {
  const int T = result.rounds;
  out << label << ": agent=" << to_string(cfg.agent.kind) << " n=" << cfg.network.n
      << " budget=" << cfg.budget.resolve(cfg.network.n) << " prior_mean=" << num(cfg.agent.prior_mean)
      << " rounds=" << T << " replications=" << result.replications << "\n";
  if (result.replications > 0 && T > 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  final cumulative regret %.4f +- %.4f (se)\n", result.mean_cumulative[T - 1],
                  result.se_cumulative[T - 1]);
    out << buf;
    std::snprintf(buf, sizeof buf, "  per-round regret t=1 %.4f, t=%d %.4f\n", result.mean_increment[0], T,
                  result.mean_increment[T - 1]);
    out << buf;
  }
  if (result.lower_bound_fraction > 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %.1f%% of rounds used a heuristic oracle: regret lower bound\n",
                  100.0 * result.lower_bound_fraction);
    out << buf;
  }
  for (const auto& [rep, msg] : result.failures) out << "  replication " << rep << " failed: " << msg << "\n";
}

void write_curve(std::ostream& out, const Aggregate& result) {
  out << "t,mean_cum_regret,se_cum_regret,mean_regret_inc,se_regret_inc\n";
  for (int t = 0; t < result.rounds; ++t) {
    out << t + 1 << ',' << num(result.mean_cumulative[t]) << ',' << num(result.se_cumulative[t]) << ','
        << num(result.mean_increment[t]) << ',' << num(result.se_increment[t]) << '\n';
  }
}

}  // namespace netbandit
