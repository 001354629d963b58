#include "condmpc/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>

#include "condmpc/reduction.hpp"

namespace condmpc::bench {

namespace {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

struct CellStats {
  std::vector<double> total_s;
  std::vector<double> linalg_s;
  std::vector<double> per_iter_s;
  Index n_x = 0;
};

}  // namespace

double median(std::vector<double> values) {
  detail::require(!values.empty(), "median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  detail::require(x.size() == y.size() && x.size() >= 2,
                  "slope fit needs at least two matching points");
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    detail::require(x[i] > 0.0 && y[i] > 0.0, "slope fit needs positive samples");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = sxx - sx * sx / n;
  detail::require(denom > 0.0, "slope fit needs at least two distinct x values");
  return (sxy - sx * sy / n) / denom;
}

BenchRecord run_heat_cell(const heat3d::HeatParams& params, const ipm::IpmOptions& opts) {
  BenchRecord rec;
  rec.name = "heat3d";
  rec.N = params.N;
  rec.T = params.T;
  rec.n_x = params.N * params.N * params.N;
  rec.n_u = 6;
  try {
    const LqProblemData data = heat3d::build_heat_problem(params);
    const DenseQp qp = build_dense_qp(data);
    const ipm::IpmResult result = ipm::solve(qp, opts);
    rec.iter = result.iter;
    rec.total_s = result.total_seconds;
    rec.linalg_s = result.linalg_seconds;
    rec.objective = result.objective;
    rec.kkt_error = result.kkt_error;
    rec.status = std::string(ipm::to_string(result.status));
  } catch (const std::exception& err) {
    rec.status = std::string("error: ") + err.what();
  }
  return rec;
}

std::vector<BenchRecord> run_heat_grid(const std::vector<Index>& Ns, const std::vector<Index>& Ts,
                                       int reps, const heat3d::HeatParams& base,
                                       const ipm::IpmOptions& opts) {
  detail::require(reps >= 1, "reps must be at least 1");
  std::vector<BenchRecord> records;
  records.reserve(Ns.size() * Ts.size() * static_cast<std::size_t>(reps));
  for (Index N : Ns) {
    for (Index T : Ts) {
      heat3d::HeatParams params = base;
      params.N = N;
      params.T = T;
      for (int rep = 0; rep < reps; ++rep) records.push_back(run_heat_cell(params, opts));
    }
  }
  return records;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kCsvHeader << "\n";
  for (const BenchRecord& rec : records) {
    out << rec.name << ',' << rec.N << ',' << rec.T << ',' << rec.n_x << ',' << rec.n_u << ','
        << rec.iter << ',' << format_double(rec.total_s) << ',' << format_double(rec.linalg_s)
        << ',' << format_double(rec.objective) << ',' << format_double(rec.kkt_error) << ','
        << rec.status << "\n";
  }
}

void write_summary(std::ostream& out, const std::vector<BenchRecord>& records) {
  std::map<std::pair<Index, Index>, CellStats> cells;
  for (const BenchRecord& rec : records) {
    if (rec.status != "converged") continue;
    CellStats& cell = cells[{rec.N, rec.T}];
    cell.total_s.push_back(rec.total_s);
    cell.linalg_s.push_back(rec.linalg_s);
    if (rec.iter > 0) cell.per_iter_s.push_back(rec.total_s / static_cast<double>(rec.iter));
    cell.n_x = rec.n_x;
  }
  if (cells.empty()) {
    out << "# no converged runs\n";
    return;
  }

  for (const auto& [key, cell] : cells) {
    out << "# N=" << key.first << " T=" << key.second << " median total_s "
        << format_double(median(cell.total_s)) << " median linalg_s "
        << format_double(median(cell.linalg_s)) << "\n";
  }

  // growth of total time with the horizon, one fit per N with enough points
  std::map<Index, std::map<Index, double>> totals_by_N;
  std::map<Index, std::map<Index, std::pair<double, Index>>> per_iter_by_T;
  for (const auto& [key, cell] : cells) {
    totals_by_N[key.first][key.second] = median(cell.total_s);
    if (!cell.per_iter_s.empty()) {
      per_iter_by_T[key.second][key.first] = {median(cell.per_iter_s), cell.n_x};
    }
  }
  for (const auto& [N, series] : totals_by_N) {
    if (series.size() < 2) continue;
    std::vector<double> xs, ys;
    for (const auto& [T, total] : series) {
      xs.push_back(static_cast<double>(T));
      ys.push_back(total);
    }
    out << "# slope log total_s / log T at N=" << N << ": " << format_double(loglog_slope(xs, ys))
        << "\n";
  }
  // growth of per-iteration time with the state dimension, one fit per T
  for (const auto& [T, series] : per_iter_by_T) {
    if (series.size() < 2) continue;
    std::vector<double> xs, ys;
    for (const auto& [N, entry] : series) {
      xs.push_back(static_cast<double>(entry.second));
      ys.push_back(entry.first);
    }
    out << "# slope log per_iter_s / log n_x at T=" << T << ": "
        << format_double(loglog_slope(xs, ys)) << "\n";
  }
}

}  // namespace condmpc::bench
