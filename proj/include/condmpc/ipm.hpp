#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "condmpc/dense_linalg.hpp"
#include "condmpc/reduction.hpp"
#include "condmpc/types.hpp"

namespace condmpc::ipm {

enum class IpmStatus { converged, max_iter, factorization_failure, line_search_failure };

std::string_view to_string(IpmStatus status);

struct IpmState {
  Vector v;       // primal controls (T n_u)
  Vector s;       // slacks (m), strictly positive
  Vector lambda;  // inequality multipliers (m)
  Vector z;       // bound duals on s (m), strictly positive
  double mu = 0.0;
  Index iter = 0;
};

struct Residuals {
  Vector r1;  // H v + h + J' lambda
  Vector r2;  // lambda - mu S^{-1} 1
  Vector r3;  // J v - d + s
  double kkt_error = 0.0;
};

struct StepDirections {
  Vector pv;
  Vector ps;
  Vector plambda;
  Vector pz;
};

// One line of the iteration log, emitted after each accepted step.
struct IterationRecord {
  Index iter = 0;          // steps completed so far (1-based)
  double mu = 0.0;         // barrier value the step was computed at
  double alpha = 0.0;      // step length shared by v, s, lambda
  double alpha_z = 0.0;    // step length for z
  double kkt_error = 0.0;  // scaled KKT error after the step
  double objective = 0.0;  // dense objective after the step
};

// Snapshot taken each iteration right after the step directions are computed,
// before any variable moves. Lets tests re-verify the full Newton system.
struct IterationInspection {
  const IpmState& state;
  const Residuals& residuals;
  const StepDirections& dirs;
  double delta;  // diagonal shift the factorization needed (0 in the usual case)
};

struct IpmOptions {
  double tol = 1e-8;
  double mu_init = 1e-1;
  double kappa_mu = 0.2;   // barrier reduction factor, in (0,1)
  double tau = 0.995;      // fraction-to-boundary parameter, in (0,1)
  Index max_iter = 200;
  double armijo_eta = 1e-4;
  std::string backend = "reference";
  std::function<void(const IterationRecord&)> log;
  std::function<void(const IterationInspection&)> inspect;
};

struct IpmResult {
  IpmStatus status = IpmStatus::max_iter;
  Trajectory solution;  // recovered from the final v regardless of status
  Vector v, s, lambda, z;
  Index iter = 0;
  double kkt_error = 0.0;
  double objective = 0.0;  // dense objective 0.5 v'Hv + h'v + h0 at exit
  double total_seconds = 0.0;
  double linalg_seconds = 0.0;  // forming + factorizing the condensed matrix
};

// Residuals and the scaled KKT error
//   kkt_error = max(|r1|_inf / sd, |r3|_inf, |S Z 1 - mu 1|_inf / sc)
// with sd = max(1, |(h, lambda)|_inf / (Tn_u + m)) and sc the analogue over
// (s, z) with divisor 2m.
Residuals compute_residuals(const DenseQp& qp, const IpmState& state);

// H + J' diag(sigma) J
Matrix assemble_condensed(const DenseQp& qp, const Vector& sigma);

// Newton directions from the condensed system
//   (H + J' Sigma J) pv = -r1 + J' r2 - J' Sigma r3,   Sigma = S^{-1} Z,
// then ps = -r3 - J pv, plambda = -r2 + Sigma (r3 + J pv),
// pz = mu S^{-1} 1 - z - Sigma ps. `factor` must factorize the condensed
// matrix at the current state's Sigma.
StepDirections step_directions(const DenseQp& qp, const IpmState& state, const Residuals& res,
                               const linalg::Factor& factor);

// Largest steps keeping s and z at fraction tau away from the boundary:
// alpha_max = min(1, tau * min{-s_i/ps_i : ps_i < 0}), alpha_z analogous.
std::pair<double, double> fraction_to_boundary(const Vector& s, const Vector& ps, const Vector& z,
                                               const Vector& pz, double tau);

// Backtracking Armijo search on the barrier merit
//   phi(v, s) = 0.5 v'Hv + h'v - mu sum log s_i + rho |Jv - d + s|_1,
// rho = 10 |lambda|_inf + 1. Tries alpha_max * 2^-j for j = 0..30 and returns
// the first accepted value, or nullopt when every trial fails.
std::optional<double> line_search(const DenseQp& qp, const IpmState& state,
                                  const StepDirections& dirs, double alpha_max,
                                  const IpmOptions& opts);

// Monotone barrier schedule: once the subproblem is solved to within 10*mu,
// reduce by kappa_mu, floored at tol/10; otherwise keep mu.
double update_barrier(const IpmState& state, const Residuals& res, const IpmOptions& opts);

enum class Termination { converged, max_iter, keep_going };

// converged iff kkt_error <= tol and mu <= tol; max_iter iff iter >= max_iter.
Termination check_termination(const Residuals& res, const IpmState& state, const IpmOptions& opts);

IpmResult solve(const DenseQp& qp, const IpmOptions& opts = {});

}  // namespace condmpc::ipm
