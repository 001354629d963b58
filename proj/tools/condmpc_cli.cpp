#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "condmpc/bench.hpp"
#include "condmpc/heat3d.hpp"
#include "condmpc/ipm.hpp"
#include "condmpc/problem.hpp"
#include "condmpc/problem_io.hpp"
#include "condmpc/reduction.hpp"
#include "condmpc/verify.hpp"

namespace {

// exit codes: the machine contract of this tool
constexpr int kOk = 0;
constexpr int kMaxIter = 2;
constexpr int kFactorizationFailure = 3;
constexpr int kInvalidInput = 4;
constexpr int kLineSearchFailure = 5;

int exit_code(condmpc::ipm::IpmStatus status) {
  switch (status) {
    case condmpc::ipm::IpmStatus::converged: return kOk;
    case condmpc::ipm::IpmStatus::max_iter: return kMaxIter;
    case condmpc::ipm::IpmStatus::factorization_failure: return kFactorizationFailure;
    case condmpc::ipm::IpmStatus::line_search_failure: return kLineSearchFailure;
  }
  return kInvalidInput;
}

void add_ipm_flags(CLI::App* cmd, condmpc::ipm::IpmOptions& opts) {
  cmd->add_option("--tol", opts.tol, "KKT tolerance");
  cmd->add_option("--mu-init", opts.mu_init, "initial barrier parameter");
  cmd->add_option("--max-iter", opts.max_iter, "iteration cap");
  cmd->add_option("--backend", opts.backend, "factorization backend: reference | eigen");
}

void attach_iteration_log(condmpc::ipm::IpmOptions& opts) {
  opts.log = [](const condmpc::ipm::IterationRecord& rec) {
    std::cout << rec.iter << ' ' << rec.mu << ' ' << rec.alpha << ' ' << rec.alpha_z << ' '
              << rec.kkt_error << ' ' << rec.objective << '\n';
  };
}

int run_solve(const std::string& path, condmpc::ipm::IpmOptions ipm_opts, bool log_iters,
              bool csv, const std::string& dump_qp) {
  condmpc::LqProblemData data;
  try {
    data = condmpc::read_problem_file(path);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInvalidInput;
  }
  const condmpc::ValidationReport report = condmpc::validate_problem(data);
  if (!report.ok()) {
    std::cerr << "invalid problem:\n" << report.to_string();
    return kInvalidInput;
  }

  if (log_iters) attach_iteration_log(ipm_opts);
  const condmpc::DenseQp qp = condmpc::build_dense_qp(data);
  if (!dump_qp.empty()) condmpc::write_dense_qp_file(dump_qp, qp);
  const condmpc::ipm::IpmResult result = condmpc::ipm::solve(qp, ipm_opts);

  std::cout << "status      " << condmpc::ipm::to_string(result.status) << "\n"
            << "iterations  " << result.iter << "\n"
            << "total_s     " << result.total_seconds << "\n"
            << "linalg_s    " << result.linalg_seconds << "\n"
            << "objective   " << result.objective << "\n"
            << "kkt_error   " << result.kkt_error << "\n";
  if (csv) {
    const condmpc::Dims dims = condmpc::dims(data);
    condmpc::bench::BenchRecord rec;
    rec.name = path;
    rec.N = 0;
    rec.T = dims.T;
    rec.n_x = dims.n_x;
    rec.n_u = dims.n_u;
    rec.iter = result.iter;
    rec.total_s = result.total_seconds;
    rec.linalg_s = result.linalg_seconds;
    rec.objective = result.objective;
    rec.kkt_error = result.kkt_error;
    rec.status = std::string(condmpc::ipm::to_string(result.status));
    condmpc::bench::write_csv(std::cout, {rec});
  }
  return exit_code(result.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"condensed-space interior-point MPC solver"};
  app.require_subcommand(1);

  // solve
  std::string solve_path;
  condmpc::ipm::IpmOptions solve_opts;
  bool solve_log_iters = false;
  bool solve_csv = false;
  std::string solve_dump;
  auto* solve = app.add_subcommand("solve", "solve a problem file");
  solve->add_option("file", solve_path, "problem file")->required();
  add_ipm_flags(solve, solve_opts);
  solve->add_flag("--log-iters", solve_log_iters, "print one line per iteration");
  solve->add_flag("--csv", solve_csv, "append a CSV record of the run");
  solve->add_option("--dump", solve_dump, "write the reduced dense QP to this file");

  // bench
  std::vector<condmpc::Index> bench_N{2, 3, 4};
  std::vector<condmpc::Index> bench_T{10, 50};
  int bench_reps = 1;
  double bench_setpoint = 350.0;
  condmpc::ipm::IpmOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "run the heat-cube benchmark grid, CSV to stdout");
  bench->add_option("--N", bench_N, "interior grid sizes")->delimiter(',');
  bench->add_option("--T", bench_T, "horizon lengths")->delimiter(',');
  bench->add_option("--reps", bench_reps, "repetitions per cell")->check(CLI::PositiveNumber);
  bench->add_option("--setpoint", bench_setpoint, "target temperature, K");
  add_ipm_flags(bench, bench_opts);

  // verify
  condmpc::verify::VerifyOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "cross-check the solver against the oracle");
  verify->add_option("--seed", verify_opts.seed, "ensemble seed");
  verify->add_option("--count", verify_opts.count, "number of instances")
      ->check(CLI::PositiveNumber);
  verify->add_option("--jobs", verify_opts.jobs, "worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--dump", verify_opts.dump_path, "where to write the first failing instance");
  add_ipm_flags(verify, verify_opts.ipm);

  // gen
  condmpc::heat3d::HeatParams gen_params;
  std::string gen_dump;
  auto* gen = app.add_subcommand("gen", "emit a heat-cube problem file");
  gen->add_option("--N", gen_params.N, "interior grid size")->check(CLI::PositiveNumber);
  gen->add_option("--T", gen_params.T, "horizon length")->check(CLI::PositiveNumber);
  gen->add_option("--setpoint", gen_params.setpoint, "target temperature, K");
  gen->add_option("--dump", gen_dump, "output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kInvalidInput;
  }

  try {
    if (solve->parsed()) {
      return run_solve(solve_path, solve_opts, solve_log_iters, solve_csv, solve_dump);
    }
    if (bench->parsed()) {
      condmpc::heat3d::HeatParams base;
      base.setpoint = bench_setpoint;
      const auto records = condmpc::bench::run_heat_grid(bench_N, bench_T, bench_reps, base,
                                                         bench_opts);
      condmpc::bench::write_csv(std::cout, records);
      condmpc::bench::write_summary(std::cout, records);
      return kOk;
    }
    if (verify->parsed()) {
      const condmpc::verify::VerifyReport report = condmpc::verify::run_verify(verify_opts);
      condmpc::verify::print_report(std::cout, report);
      return report.ok() ? kOk : 1;
    }
    if (gen->parsed()) {
      const condmpc::LqProblemData data = condmpc::heat3d::build_heat_problem(gen_params);
      if (gen_dump.empty()) {
        condmpc::write_problem(std::cout, data);
      } else {
        condmpc::write_problem_file(gen_dump, data);
      }
      return kOk;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}
