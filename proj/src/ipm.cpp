#include "condmpc/ipm.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <limits>

namespace condmpc::ipm {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void check_options(const IpmOptions& opts) {
  detail::require(opts.tol > 0.0, "tol must be positive");
  detail::require(opts.kappa_mu > 0.0 && opts.kappa_mu < 1.0, "kappa_mu must lie in (0,1)");
  detail::require(opts.tau > 0.0 && opts.tau < 1.0, "tau must lie in (0,1)");
  detail::require(opts.mu_init > 0.0, "mu_init must be positive");
  detail::require(opts.max_iter >= 1, "max_iter must be at least 1");
}

double merit(const DenseQp& qp, const Vector& v, const Vector& s, double mu, double rho) {
  double phi = 0.5 * v.dot(qp.H * v) + qp.h.dot(v);
  if (s.size() > 0) {
    phi -= mu * s.array().log().sum();
    phi += rho * (qp.J * v - qp.d + s).lpNorm<1>();
  }
  return phi;
}

}  // namespace

std::string_view to_string(IpmStatus status) {
  switch (status) {
    case IpmStatus::converged: return "converged";
    case IpmStatus::max_iter: return "max_iter";
    case IpmStatus::factorization_failure: return "factorization_failure";
    case IpmStatus::line_search_failure: return "line_search_failure";
  }
  return "unknown";
}

Residuals compute_residuals(const DenseQp& qp, const IpmState& state) {
  const Index m = qp.J.rows();
  detail::require(state.v.size() == qp.H.rows(), "state.v does not match the QP");
  detail::require(state.s.size() == m && state.lambda.size() == m && state.z.size() == m,
                  "state slack/dual lengths do not match the QP row count");

  Residuals res;
  res.r1 = qp.H * state.v + qp.h;
  if (m > 0) res.r1.noalias() += qp.J.transpose() * state.lambda;
  res.r2 = state.lambda - state.mu * state.s.cwiseInverse();
  res.r3 = qp.J * state.v - qp.d + state.s;

  const Index n = qp.H.rows();
  const double dual_scale =
      std::max(1.0, std::max(max_abs(qp.h), max_abs(state.lambda)) / static_cast<double>(n + m));
  res.kkt_error = inf_norm(res.r1) / dual_scale;
  if (m > 0) {
    const double comp_scale =
        std::max(1.0, std::max(max_abs(state.s), max_abs(state.z)) / static_cast<double>(2 * m));
    const Vector comp = state.s.cwiseProduct(state.z).array() - state.mu;
    res.kkt_error = std::max(res.kkt_error, inf_norm(res.r3));
    res.kkt_error = std::max(res.kkt_error, inf_norm(comp) / comp_scale);
  }
  return res;
}

Matrix assemble_condensed(const DenseQp& qp, const Vector& sigma) {
  detail::require(sigma.size() == qp.J.rows(), "sigma length does not match the QP row count");
  Matrix M = qp.H;
  if (sigma.size() > 0) M += linalg::gram_weighted(qp.J, sigma);
  return M;
}

StepDirections step_directions(const DenseQp& qp, const IpmState& state, const Residuals& res,
                               const linalg::Factor& factor) {
  const Index m = qp.J.rows();
  StepDirections dirs;

  Vector rhs = -res.r1;
  Vector sigma;
  if (m > 0) {
    sigma = state.z.cwiseQuotient(state.s);
    rhs.noalias() += qp.J.transpose() * (res.r2 - sigma.cwiseProduct(res.r3));
  }
  dirs.pv = factor.solve(rhs);

  if (m > 0) {
    const Vector Jpv = qp.J * dirs.pv;
    dirs.ps = -res.r3 - Jpv;
    dirs.plambda = -res.r2 + sigma.cwiseProduct(res.r3 + Jpv);
    dirs.pz = state.mu * state.s.cwiseInverse() - state.z - sigma.cwiseProduct(dirs.ps);
  } else {
    dirs.ps = Vector(0);
    dirs.plambda = Vector(0);
    dirs.pz = Vector(0);
  }
  return dirs;
}

std::pair<double, double> fraction_to_boundary(const Vector& s, const Vector& ps, const Vector& z,
                                               const Vector& pz, double tau) {
  detail::require(tau > 0.0 && tau < 1.0, "tau must lie in (0,1)");
  auto largest = [tau](const Vector& x, const Vector& px) {
    double alpha = 1.0;
    for (Index i = 0; i < x.size(); ++i) {
      if (px[i] < 0.0) alpha = std::min(alpha, tau * (-x[i] / px[i]));
    }
    return alpha;
  };
  return {largest(s, ps), largest(z, pz)};
}

std::optional<double> line_search(const DenseQp& qp, const IpmState& state,
                                  const StepDirections& dirs, double alpha_max,
                                  const IpmOptions& opts) {
  detail::require(alpha_max > 0.0 && alpha_max <= 1.0, "alpha_max must lie in (0,1]");
  const Index m = qp.J.rows();
  const double rho = 10.0 * max_abs(state.lambda) + 1.0;

  const double phi0 = merit(qp, state.v, state.s, state.mu, rho);
  double derivative = (qp.H * state.v + qp.h).dot(dirs.pv);
  if (m > 0) {
    derivative -= state.mu * dirs.ps.cwiseQuotient(state.s).sum();
    derivative -= rho * (qp.J * state.v - qp.d + state.s).lpNorm<1>();
  }

  constexpr double band = 10.0 * std::numeric_limits<double>::epsilon();
  double alpha = alpha_max;
  for (int j = 0; j <= 30; ++j, alpha *= 0.5) {
    const Vector v_trial = state.v + alpha * dirs.pv;
    const Vector s_trial = state.s + alpha * dirs.ps;
    if (m > 0 && (s_trial.array() <= 0.0).any()) continue;
    const double phi = merit(qp, v_trial, s_trial, state.mu, rho);
    if (derivative <= 0.0 && phi <= phi0 + opts.armijo_eta * alpha * derivative) return alpha;
    // near the solution the merit change drowns in roundoff; accept the step
    if (std::abs(phi - phi0) <= band * (1.0 + std::abs(phi0))) return alpha;
  }
  return std::nullopt;
}

double update_barrier(const IpmState& state, const Residuals& res, const IpmOptions& opts) {
  if (res.kkt_error <= 10.0 * state.mu) {
    return std::max(opts.tol / 10.0, opts.kappa_mu * state.mu);
  }
  return state.mu;
}

Termination check_termination(const Residuals& res, const IpmState& state,
                              const IpmOptions& opts) {
  if (res.kkt_error <= opts.tol && state.mu <= opts.tol) return Termination::converged;
  if (state.iter >= opts.max_iter) return Termination::max_iter;
  return Termination::keep_going;
}

IpmResult solve(const DenseQp& qp, const IpmOptions& opts) {
  check_options(opts);
  const Index n = qp.H.rows();
  const Index m = qp.J.rows();
  detail::require(qp.h.size() == n, "qp.h length does not match qp.H");
  detail::require(qp.d.size() == m, "qp.d length does not match qp.J");

  const double start = now_seconds();
  auto backend = linalg::make_backend(opts.backend);

  IpmState state;
  state.v = Vector::Zero(n);
  state.s = Vector(m);
  for (Index i = 0; i < m; ++i) state.s[i] = std::max(1.0, qp.d[i]);  // J v = 0 at v = 0
  state.mu = opts.mu_init;
  state.z = state.mu * state.s.cwiseInverse();
  state.lambda = state.z;
  state.iter = 0;

  IpmResult result;
  result.linalg_seconds = 0.0;

  Residuals res = compute_residuals(qp, state);
  while (true) {
    const Termination term = check_termination(res, state, opts);
    if (term == Termination::converged) {
      result.status = IpmStatus::converged;
      break;
    }
    if (term == Termination::max_iter) {
      result.status = IpmStatus::max_iter;
      break;
    }

    const double mu_next = update_barrier(state, res, opts);
    if (mu_next != state.mu) {
      state.mu = mu_next;
      res = compute_residuals(qp, state);
    }

    // condensed matrix, with a diagonal shift ladder against roundoff
    // breaking positive definiteness near convergence
    const double linalg_start = now_seconds();
    Vector sigma = (m > 0) ? Vector(state.z.cwiseQuotient(state.s)) : Vector(0);
    const Matrix condensed = assemble_condensed(qp, sigma);
    static constexpr std::array<double, 7> kShifts = {0.0,  1e-8, 1e-6, 1e-4,
                                                      1e-2, 1.0,  1e2};
    std::optional<linalg::Factor> factor;
    double delta_used = 0.0;
    for (double delta : kShifts) {
      try {
        if (delta == 0.0) {
          factor.emplace(backend->factorize(condensed));
        } else {
          factor.emplace(
              backend->factorize(condensed + delta * Matrix::Identity(n, n)));
        }
        delta_used = delta;
        break;
      } catch (const linalg::NotPositiveDefinite&) {
      }
    }
    result.linalg_seconds += now_seconds() - linalg_start;
    if (!factor) {
      result.status = IpmStatus::factorization_failure;
      break;
    }

    const StepDirections dirs = step_directions(qp, state, res, *factor);
    if (opts.inspect) opts.inspect(IterationInspection{state, res, dirs, delta_used});

    const auto [alpha_max, alpha_z_max] =
        fraction_to_boundary(state.s, dirs.ps, state.z, dirs.pz, opts.tau);
    const std::optional<double> alpha = line_search(qp, state, dirs, alpha_max, opts);
    if (!alpha) {
      result.status = IpmStatus::line_search_failure;
      break;
    }

    const double mu_used = state.mu;
    state.v += *alpha * dirs.pv;
    state.s += *alpha * dirs.ps;
    state.lambda += *alpha * dirs.plambda;
    state.z += alpha_z_max * dirs.pz;
    state.iter += 1;

    res = compute_residuals(qp, state);
    if (opts.log) {
      opts.log(IterationRecord{state.iter, mu_used, *alpha, alpha_z_max, res.kkt_error,
                               dense_objective(qp, state.v)});
    }
  }

  result.v = state.v;
  result.s = state.s;
  result.lambda = state.lambda;
  result.z = state.z;
  result.iter = state.iter;
  result.kkt_error = res.kkt_error;
  result.objective = dense_objective(qp, state.v);
  if (qp.source.A.rows() > 0) {
    // structured problems get the trajectory back; a bare QP has nothing to recover
    result.solution = recover_trajectory(qp, state.v);
  } else {
    result.solution.objective = result.objective;
  }
  result.total_seconds = now_seconds() - start;
  return result;
}

}  // namespace condmpc::ipm
