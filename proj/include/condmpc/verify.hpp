#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "condmpc/ipm.hpp"
#include "condmpc/problem.hpp"

namespace condmpc::verify {

// Tolerances of the solver-vs-oracle comparison.
constexpr double kObjectiveTol = 1e-6;  // relative, on the dense objective
constexpr double kControlTol = 1e-5;    // absolute, max over all inputs

struct InstanceCheck {
  enum class Outcome { pass, fail, skipped_infeasible };
  Outcome outcome = Outcome::fail;
  double objective_gap = 0.0;  // |obj - obj_oracle| / (1 + |obj_oracle|)
  double control_gap = 0.0;    // max_i |u_i - u_oracle_i|
  std::string detail;          // one-line diagnosis on failure
};

// Solve one instance with the interior-point solver and the enumeration
// oracle and compare objective and recovered controls.
InstanceCheck check_instance(const LqProblemData& data, const ipm::IpmOptions& opts);

struct VerifyOptions {
  std::uint64_t seed = 42;
  int count = 100;
  int jobs = 1;  // >1 runs instances on a small thread pool
  ipm::IpmOptions ipm;
  std::string dump_path = "verify-failure.prob";  // first failing instance lands here
};

struct VerifyReport {
  int count = 0;
  int passed = 0;
  int failed = 0;
  int regenerated = 0;  // infeasible draws that were redrawn
  double max_objective_gap = 0.0;
  double max_control_gap = 0.0;
  double seconds = 0.0;
  std::string first_failure;  // dump file path, empty when everything passed

  bool ok() const { return failed == 0 && count > 0; }
};

// Run `count` random instances; deterministic for a fixed seed regardless of
// the job count. Infeasible draws (possible only with adversarial options)
// are redrawn and counted.
VerifyReport run_verify(const VerifyOptions& opts);

void print_report(std::ostream& out, const VerifyReport& report);

}  // namespace condmpc::verify
