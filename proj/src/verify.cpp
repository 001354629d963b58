#include "condmpc/verify.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include "condmpc/oracle.hpp"
#include "condmpc/problem_io.hpp"
#include "condmpc/random_problems.hpp"
#include "condmpc/reduction.hpp"

namespace condmpc::verify {

namespace {

double control_gap(const Trajectory& a, const Trajectory& b) {
  double gap = 0.0;
  for (std::size_t t = 0; t < a.u.size(); ++t) {
    gap = std::max(gap, inf_norm(a.u[t] - b.u[t]));
  }
  return gap;
}

}  // namespace

InstanceCheck check_instance(const LqProblemData& data, const ipm::IpmOptions& opts) {
  InstanceCheck check;
  const DenseQp qp = build_dense_qp(data);

  const oracle::OracleResult truth = oracle::solve_enumeration(qp);
  if (truth.status != oracle::OracleStatus::optimal) {
    check.outcome = InstanceCheck::Outcome::skipped_infeasible;
    check.detail = "oracle reported no feasible optimum";
    return check;
  }

  const ipm::IpmResult result = ipm::solve(qp, opts);
  check.objective_gap =
      std::abs(result.objective - truth.objective) / (1.0 + std::abs(truth.objective));
  check.control_gap =
      control_gap(result.solution, recover_trajectory(qp, truth.v));

  if (result.status != ipm::IpmStatus::converged) {
    check.outcome = InstanceCheck::Outcome::fail;
    check.detail = std::string("solver stopped with status ") +
                   std::string(ipm::to_string(result.status));
  } else if (check.objective_gap > kObjectiveTol || check.control_gap > kControlTol) {
    check.outcome = InstanceCheck::Outcome::fail;
    check.detail = "gap above tolerance (objective " + std::to_string(check.objective_gap) +
                   ", control " + std::to_string(check.control_gap) + ")";
  } else {
    check.outcome = InstanceCheck::Outcome::pass;
  }
  return check;
}

VerifyReport run_verify(const VerifyOptions& opts) {
  detail::require(opts.count >= 1, "verify count must be at least 1");
  detail::require(opts.jobs >= 1, "verify jobs must be at least 1");

  const auto start = std::chrono::steady_clock::now();
  VerifyReport report;
  report.count = opts.count;

  std::mutex mutex;
  std::atomic<int> next{0};
  Index first_failed_index = -1;
  LqProblemData first_failed_instance;

  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < opts.count; i = next.fetch_add(1)) {
      // each instance draws from its own stream, so the schedule cannot
      // change what is generated
      auto rng = testing::instance_rng(opts.seed, static_cast<std::uint64_t>(i));
      testing::RandomProblemOptions gen_opts;
      int regenerated = 0;
      InstanceCheck check;
      LqProblemData data;
      do {
        data = testing::random_problem(rng, gen_opts);
        check = check_instance(data, opts.ipm);
        if (check.outcome == InstanceCheck::Outcome::skipped_infeasible) ++regenerated;
      } while (check.outcome == InstanceCheck::Outcome::skipped_infeasible);

      std::lock_guard<std::mutex> lock(mutex);
      report.regenerated += regenerated;
      report.max_objective_gap = std::max(report.max_objective_gap, check.objective_gap);
      report.max_control_gap = std::max(report.max_control_gap, check.control_gap);
      if (check.outcome == InstanceCheck::Outcome::pass) {
        report.passed += 1;
      } else {
        report.failed += 1;
        if (first_failed_index < 0 || i < first_failed_index) {
          first_failed_index = i;
          first_failed_instance = data;
        }
      }
    }
  };

  if (opts.jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(opts.jobs));
    for (int j = 0; j < opts.jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (first_failed_index >= 0 && !opts.dump_path.empty()) {
    write_problem_file(opts.dump_path, first_failed_instance);
    report.first_failure = opts.dump_path;
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void print_report(std::ostream& out, const VerifyReport& report) {
  out << "verify: " << report.passed << "/" << report.count << " instances passed";
  if (report.regenerated > 0) out << " (" << report.regenerated << " infeasible draws redrawn)";
  out << "\n";
  out << "  max objective gap " << report.max_objective_gap << " (tol " << kObjectiveTol << ")\n";
  out << "  max control gap   " << report.max_control_gap << " (tol " << kControlTol << ")\n";
  if (!report.first_failure.empty()) {
    out << "  first failing instance written to " << report.first_failure << "\n";
  }
  out << "  elapsed " << report.seconds << " s\n";
}

}  // namespace condmpc::verify
