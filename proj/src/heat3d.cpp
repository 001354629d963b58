#include "condmpc/heat3d.hpp"

#include <string>

namespace condmpc::heat3d {

std::pair<Matrix, Matrix> laplacian_system(Index N, const HeatParams& params) {
  detail::require(N >= 1, "grid must have at least one interior point per dimension");
  const double c = params.stability_factor();
  if (!(c < 1.0 / 6.0)) {
    throw StabilityError("explicit Euler unstable: diffusivity*dt/dw^2 = " + std::to_string(c) +
                         " must be below 1/6; shrink dt or coarsen the mesh");
  }

  const Index n_x = N * N * N;
  Matrix A = Matrix::Zero(n_x, n_x);
  Matrix B = Matrix::Zero(n_x, 6);
  auto cell = [N](Index i, Index j, Index k) { return i + N * j + N * N * k; };

  for (Index k = 0; k < N; ++k) {
    for (Index j = 0; j < N; ++j) {
      for (Index i = 0; i < N; ++i) {
        const Index row = cell(i, j, k);
        A(row, row) = 1.0 - 6.0 * c;
        // each of the six stencil neighbors is either another interior cell
        // or one of the six faces
        if (i > 0) A(row, cell(i - 1, j, k)) = c; else B(row, 0) += c;
        if (i < N - 1) A(row, cell(i + 1, j, k)) = c; else B(row, 1) += c;
        if (j > 0) A(row, cell(i, j - 1, k)) = c; else B(row, 2) += c;
        if (j < N - 1) A(row, cell(i, j + 1, k)) = c; else B(row, 3) += c;
        if (k > 0) A(row, cell(i, j, k - 1)) = c; else B(row, 4) += c;
        if (k < N - 1) A(row, cell(i, j, k + 1)) = c; else B(row, 5) += c;
      }
    }
  }
  return {std::move(A), std::move(B)};
}

LqProblemData build_heat_problem(const HeatParams& params) {
  detail::require(params.T >= 1, "horizon must be at least 1");
  auto [A, B] = laplacian_system(params.N, params);
  const Index n_x = A.rows();

  LqProblemData data = LqProblemData::basic(
      A, B, params.q_weight * Matrix::Identity(n_x, n_x),
      params.r_weight * Matrix::Identity(6, 6), params.q_weight * Matrix::Identity(n_x, n_x),
      Vector::Constant(n_x, params.x_init - params.setpoint), params.T);

  // the uniform shift to deviation variables leaves a (numerically zero)
  // disturbance because the stencil conserves row sums
  const Vector shift_defect =
      (A.rowwise().sum() + B.rowwise().sum() - Vector::Ones(n_x)) * params.setpoint;
  for (auto& w_t : data.w) w_t = shift_defect;

  data.xl = Vector::Constant(n_x, params.x_min - params.setpoint);
  data.xu = Vector::Constant(n_x, params.x_max - params.setpoint);
  data.ul = Vector::Constant(6, params.u_min - params.setpoint);
  data.uu = Vector::Constant(6, params.u_max - params.setpoint);
  return data;
}

Trajectory to_physical(Trajectory traj, const HeatParams& params) {
  for (auto& x_t : traj.x) x_t.array() += params.setpoint;
  for (auto& u_t : traj.u) u_t.array() += params.setpoint;
  return traj;
}

}  // namespace condmpc::heat3d
