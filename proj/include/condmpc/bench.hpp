#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "condmpc/heat3d.hpp"
#include "condmpc/ipm.hpp"

namespace condmpc::bench {

// One solver run. `linalg_s` covers forming and factorizing the condensed
// matrix; everything else (residuals, recovery, line search) is in the gap
// up to `total_s`.
struct BenchRecord {
  std::string name;
  Index N = 0;
  Index T = 0;
  Index n_x = 0;
  Index n_u = 0;
  Index iter = 0;
  double total_s = 0.0;
  double linalg_s = 0.0;
  double objective = 0.0;
  double kkt_error = 0.0;
  std::string status;
};

inline constexpr std::string_view kCsvHeader =
    "name,N,T,n_x,n_u,iter,total_s,linalg_s,objective,kkt_error,status";

// Solve the heat benchmark once for every (N, T, repetition) triple, row
// order N-major, T next, repetitions innermost. Failures land in the status
// column; the sweep keeps going.
std::vector<BenchRecord> run_heat_grid(const std::vector<Index>& Ns, const std::vector<Index>& Ts,
                                       int reps, const heat3d::HeatParams& base,
                                       const ipm::IpmOptions& opts);

BenchRecord run_heat_cell(const heat3d::HeatParams& params, const ipm::IpmOptions& opts);

// Header plus one line per record. Numeric fields use shortest round-trip
// formatting, so for fixed inputs everything except the timing columns is
// byte-stable across runs.
void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);

// Trailing `#`-prefixed block: per-(N,T) medians and, where the grid allows,
// log-log slopes of median total time against T and of median per-iteration
// time against n_x.
void write_summary(std::ostream& out, const std::vector<BenchRecord>& records);

// Least-squares slope of log(y) against log(x); x and y must be positive.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> values);

}  // namespace condmpc::bench
