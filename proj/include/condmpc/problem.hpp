#pragma once

#include <string>
#include <vector>

#include "condmpc/types.hpp"

namespace condmpc {

// Structured linear-quadratic MPC problem data:
//
//   min  x_T' Qf x_T + sum_t [x_t; u_t]' [Q S; S' R] [x_t; u_t]
//   s.t. x_0 = x_bar
//        x_{t+1} = A x_t + B u_t + w_t        t = 0..T-1
//        gl <= E x_t + F u_t <= gu            t = 0..T-1
//        xl <= x_t <= xu                      t = 0..T
//        ul <= u_t <= uu                      t = 0..T-1
//
// with the change of variables u_t = K x_t + v_t used during state elimination.
// Infinite bound entries encode one-sided or absent bounds. Immutable after
// construction by convention; all operations on it are pure.
struct LqProblemData {
  Matrix A;   // n_x x n_x
  Matrix B;   // n_x x n_u
  Matrix Q;   // n_x x n_x
  Matrix Qf;  // n_x x n_x
  Matrix R;   // n_u x n_u
  Matrix S;   // n_x x n_u
  Matrix E;   // n_c x n_x
  Matrix F;   // n_c x n_u
  Vector gl, gu;  // n_c
  Vector xl, xu;  // n_x
  Vector ul, uu;  // n_u
  std::vector<Vector> w;  // T vectors of length n_x
  Vector x_bar;           // n_x
  Matrix K;               // n_u x n_x stabilizing feedback, zero by default
  Index T = 0;            // horizon steps

  // fills S = 0, K = 0, E/F empty, bounds infinite, w = 0 around the required data
  static LqProblemData basic(Matrix A, Matrix B, Matrix Q, Matrix R, Matrix Qf,
                             Vector x_bar, Index T);
};

struct Dims {
  Index n_x = 0;
  Index n_u = 0;
  Index n_c = 0;
  Index T = 0;
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

// reads the four dimensions from matrix shapes; throws DimensionError naming
// both fields on any inconsistency
Dims dims(const LqProblemData& data);

// never throws; reports every violated invariant with field name and index
ValidationReport validate_problem(const LqProblemData& data);

// true when sym + 1e-10 I admits a Cholesky factorization
bool is_positive_semidefinite(const Matrix& sym);

}  // namespace condmpc
