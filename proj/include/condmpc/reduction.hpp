#pragma once

#include <vector>

#include "condmpc/problem.hpp"

namespace condmpc {

// Stacked elimination matrices for x = bigA x_bar + bigB v + bigAtilde w with
// A_K = A + B K. Block row i of bigA is A_K^i; block (i,j) of bigB is
// A_K^{i-j-1} B for i > j and zero otherwise; bigAtilde carries A_K^{i-j-1}.
struct BlockMatrices {
  Matrix bigA;       // (T+1) n_x  x  n_x
  Matrix bigB;       // (T+1) n_x  x  T n_u
  Matrix bigAtilde;  // (T+1) n_x  x  T n_x
  Matrix A_K;        // n_x x n_x
};

// Dense reduction of the structured problem:
//   min  1/2 v' H v + h' v + h0   s.t.  J v <= d
// The inequality rows stack, in this fixed order: transformed mixed constraints
// (t = 0..T-1), state bounds (t = 1..T), input bounds (t = 0..T-1); within each
// kind all upper rows ordered by time, then all lower rows ordered by time.
// Rows whose bound is infinite are dropped.
struct DenseQp {
  Matrix H;
  Vector h;
  double h0 = 0.0;
  Matrix J;
  Vector d;
  BlockMatrices blocks;
  LqProblemData source;
};

struct Trajectory {
  std::vector<Vector> x;  // T+1 states
  std::vector<Vector> u;  // T inputs
  std::vector<Vector> v;  // T auxiliary inputs
  double objective = 0.0;
};

BlockMatrices build_block_matrices(const LqProblemData& data);

DenseQp build_dense_qp(const LqProblemData& data);

// re-solve preparation for a new initial state: reuses H, J and the block
// matrices, refreshes only h, h0 and d
void refresh_initial_state(DenseQp& qp, const Vector& x_bar);

Trajectory recover_trajectory(const DenseQp& qp, const Vector& v);

double dense_objective(const DenseQp& qp, const Vector& v);

}  // namespace condmpc
