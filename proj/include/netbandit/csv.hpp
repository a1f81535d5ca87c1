#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "netbandit/harness.hpp"

namespace netbandit {

/// Column order of every regret CSV.
inline constexpr const char* kCsvHeader =
    "rep,t,agent,n,budget,prior_mean,cum_regret,regret_inc,oracle_status,wall_ms";

struct CsvRow {
  int rep = 0;
  int t = 0;
  std::string agent;
  int n = 0;
  int budget = 0;
  double prior_mean = 0.0;
  double cum_regret = 0.0;
  double regret_inc = 0.0;
  std::string oracle_status;
  double wall_ms = 0.0;
};

struct CsvOptions {
  bool header = true;
  bool timing = true;  // false writes wall_ms = 0 for byte-reproducible files
};

/// One row per (rep, t); failed replications contribute the rounds they completed.
std::vector<CsvRow> csv_rows(const ExperimentConfig& cfg, const Aggregate& result);

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows, const CsvOptions& options = {});

/// Throws DataError on a wrong header, a wrong cell count or an unparsable cell.
std::vector<CsvRow> read_csv(std::istream& in);

/// Human-readable summary: final mean +- se, flagged-round share, failures.
void write_summary(std::ostream& out, const std::string& label, const ExperimentConfig& cfg,
                   const Aggregate& result);

/// Plot-ready curve: t, mean and se of cumulative regret, mean per-round regret.
void write_curve(std::ostream& out, const Aggregate& result);

}  // namespace netbandit
