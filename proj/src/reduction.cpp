#include "condmpc/reduction.hpp"

#include <cmath>

namespace condmpc {

namespace {

// x stacked as one (T+1) n_x vector: bigA x_bar + bigAtilde w
Vector stacked_free_response(const BlockMatrices& blocks, const LqProblemData& data) {
  const Index n_x = blocks.A_K.rows();
  const Index T = static_cast<Index>(data.w.size());
  Vector w_stacked(T * n_x);
  for (Index t = 0; t < T; ++t) w_stacked.segment(t * n_x, n_x) = data.w[static_cast<std::size_t>(t)];
  Vector x0 = blocks.bigA * data.x_bar;
  x0.noalias() += blocks.bigAtilde * w_stacked;
  return x0;
}

}  // namespace

BlockMatrices build_block_matrices(const LqProblemData& data) {
  const Dims d = dims(data);
  const Index n_x = d.n_x;
  const Index n_u = d.n_u;
  const Index T = d.T;

  BlockMatrices blocks;
  blocks.A_K = data.A + data.B * data.K;
  blocks.bigA.setZero((T + 1) * n_x, n_x);
  blocks.bigB.setZero((T + 1) * n_x, T * n_u);
  blocks.bigAtilde.setZero((T + 1) * n_x, T * n_x);

  // powers climb by one multiplication per block row
  blocks.bigA.topRows(n_x) = Matrix::Identity(n_x, n_x);
  for (Index i = 1; i <= T; ++i) {
    blocks.bigA.middleRows(i * n_x, n_x).noalias() =
        blocks.A_K * blocks.bigA.middleRows((i - 1) * n_x, n_x);
  }

  // column j of each block matrix repeats the previous column shifted one block
  // down, so only the first column needs fresh products
  for (Index i = 1; i <= T; ++i) {
    if (i == 1) {
      blocks.bigB.block(n_x, 0, n_x, n_u) = data.B;
      blocks.bigAtilde.block(n_x, 0, n_x, n_x) = Matrix::Identity(n_x, n_x);
    } else {
      blocks.bigB.block(i * n_x, 0, n_x, n_u).noalias() =
          blocks.A_K * blocks.bigB.block((i - 1) * n_x, 0, n_x, n_u);
      blocks.bigAtilde.block(i * n_x, 0, n_x, n_x).noalias() =
          blocks.A_K * blocks.bigAtilde.block((i - 1) * n_x, 0, n_x, n_x);
    }
  }
  for (Index j = 1; j < T; ++j) {
    const Index height = (T - j) * n_x;
    blocks.bigB.block((j + 1) * n_x, j * n_u, height, n_u) =
        blocks.bigB.block(n_x, 0, height, n_u);
    blocks.bigAtilde.block((j + 1) * n_x, j * n_x, height, n_x) =
        blocks.bigAtilde.block(n_x, 0, height, n_x);
  }
  return blocks;
}

namespace {

struct AffineParts {
  Vector h;
  double h0 = 0.0;
  Vector d;
};

// cost terms after the u = K x + v substitution
struct SubstitutedCost {
  Matrix Q_K;  // Q + S K + K' S' + K' R K
  Matrix S_K;  // S + K' R
};

SubstitutedCost substituted_cost(const LqProblemData& data) {
  SubstitutedCost cost;
  Matrix SK = data.S * data.K;
  cost.Q_K = data.Q + SK + SK.transpose() + data.K.transpose() * data.R * data.K;
  cost.S_K = data.S + data.K.transpose() * data.R;
  return cost;
}

// Quadratic part: H = 2 (bigB' QQ bigB + bigB' SS + SS' bigB + RR), accumulated
// stage by stage so the (T+1)n_x square stacked cost matrix is never formed.
Matrix assemble_hessian(const LqProblemData& data, const BlockMatrices& blocks,
                        const SubstitutedCost& cost) {
  const Dims dm = dims(data);
  const Index n_x = dm.n_x;
  const Index n_u = dm.n_u;
  const Index T = dm.T;

  Matrix H = Matrix::Zero(T * n_u, T * n_u);
  for (Index t = 0; t < T; ++t) H.block(t * n_u, t * n_u, n_u, n_u) = data.R;

  for (Index t = 1; t <= T; ++t) {
    const Matrix& Qt = (t == T) ? data.Qf : cost.Q_K;
    const Index width = t * n_u;  // block row t of bigB is zero past column t
    const auto Bt = blocks.bigB.block(t * n_x, 0, n_x, width);
    Matrix QtBt = Qt * Bt;
    H.topLeftCorner(width, width).noalias() += Bt.transpose() * QtBt;
  }
  // cross terms x_t' S_K v_t for t = 1..T-1 (block row 0 of bigB is zero, so
  // t = 0 contributes nothing)
  for (Index t = 1; t < T; ++t) {
    const Index width = t * n_u;
    const auto Bt = blocks.bigB.block(t * n_x, 0, n_x, width);
    Matrix cross = Bt.transpose() * cost.S_K;  // width x n_u
    H.block(0, t * n_u, width, n_u) += cross;
    H.block(t * n_u, 0, n_u, width) += cross.transpose();
  }
  H *= 2.0;
  H = 0.5 * (H + H.transpose()).eval();  // clear roundoff asymmetry
  return H;
}

AffineParts assemble_affine(const LqProblemData& data, const BlockMatrices& blocks,
                            const SubstitutedCost& cost, const Vector& x0) {
  const Dims dm = dims(data);
  const Index n_x = dm.n_x;
  const Index n_u = dm.n_u;
  const Index n_c = dm.n_c;
  const Index T = dm.T;

  AffineParts parts;
  parts.h = Vector::Zero(T * n_u);
  parts.h0 = 0.0;

  for (Index t = 0; t <= T; ++t) {
    const Matrix& Qt = (t == T) ? data.Qf : cost.Q_K;
    const Vector x0_t = x0.segment(t * n_x, n_x);
    const Vector Qx = Qt * x0_t;
    parts.h0 += x0_t.dot(Qx);
    if (t > 0) {
      const Index width = std::min(t, T) * n_u;
      const auto Bt = blocks.bigB.block(t * n_x, 0, n_x, width);
      parts.h.head(width).noalias() += 2.0 * (Bt.transpose() * Qx);
    }
    if (t < T) {
      parts.h.segment(t * n_u, n_u).noalias() += 2.0 * (cost.S_K.transpose() * x0_t);
    }
  }

  // constants of the inequality rows, same fixed order as the row assembly
  std::vector<double> d_values;
  d_values.reserve(static_cast<std::size_t>(2 * T * (n_c + n_x + n_u)));
  const Matrix EFK = (n_c > 0) ? Matrix(data.E + data.F * data.K) : Matrix(0, n_x);

  auto emit_side = [&](const Vector& bound, const Vector& offset, bool upper) {
    for (Index i = 0; i < bound.size(); ++i) {
      if (!std::isfinite(bound[i])) continue;
      d_values.push_back(upper ? bound[i] - offset[i] : offset[i] - bound[i]);
    }
  };

  for (int upper = 1; upper >= 0; --upper) {
    for (Index t = 0; t < T; ++t) {
      if (n_c == 0) break;
      const Vector offset = EFK * x0.segment(t * n_x, n_x);
      emit_side(upper ? data.gu : data.gl, offset, upper != 0);
    }
  }
  for (int upper = 1; upper >= 0; --upper) {
    for (Index t = 1; t <= T; ++t) {
      const Vector offset = x0.segment(t * n_x, n_x);
      emit_side(upper ? data.xu : data.xl, offset, upper != 0);
    }
  }
  for (int upper = 1; upper >= 0; --upper) {
    for (Index t = 0; t < T; ++t) {
      const Vector offset = data.K * x0.segment(t * n_x, n_x);
      emit_side(upper ? data.uu : data.ul, offset, upper != 0);
    }
  }

  parts.d = Eigen::Map<const Vector>(d_values.data(), static_cast<Index>(d_values.size()));
  return parts;
}

Matrix assemble_inequality_rows(const LqProblemData& data, const BlockMatrices& blocks) {
  const Dims dm = dims(data);
  const Index n_x = dm.n_x;
  const Index n_u = dm.n_u;
  const Index n_c = dm.n_c;
  const Index T = dm.T;

  const Matrix EFK = (n_c > 0) ? Matrix(data.E + data.F * data.K) : Matrix(0, n_x);

  Index rows = 0;
  auto count_finite = [&rows](const Vector& lo, const Vector& hi, Index repeats) {
    for (Index i = 0; i < lo.size(); ++i) {
      if (std::isfinite(hi[i])) rows += repeats;
      if (std::isfinite(lo[i])) rows += repeats;
    }
  };
  count_finite(data.gl, data.gu, T);
  count_finite(data.xl, data.xu, T);
  count_finite(data.ul, data.uu, T);

  Matrix J = Matrix::Zero(rows, T * n_u);
  Index next_row = 0;

  for (int upper = 1; upper >= 0; --upper) {
    for (Index t = 0; t < T && n_c > 0; ++t) {
      const Vector& bound = upper ? data.gu : data.gl;
      const double sign = upper ? 1.0 : -1.0;
      const Index width = t * n_u;
      for (Index i = 0; i < n_c; ++i) {
        if (!std::isfinite(bound[i])) continue;
        auto row = J.row(next_row++);
        if (t > 0) {
          row.head(width).noalias() =
              sign * (EFK.row(i) * blocks.bigB.block(t * n_x, 0, n_x, width));
        }
        row.segment(t * n_u, n_u) += sign * data.F.row(i);
      }
    }
  }
  for (int upper = 1; upper >= 0; --upper) {
    for (Index t = 1; t <= T; ++t) {
      const Vector& bound = upper ? data.xu : data.xl;
      const double sign = upper ? 1.0 : -1.0;
      const Index width = t * n_u;
      for (Index i = 0; i < n_x; ++i) {
        if (!std::isfinite(bound[i])) continue;
        J.row(next_row++).head(width) =
            sign * blocks.bigB.block(t * n_x + i, 0, 1, width);
      }
    }
  }
  for (int upper = 1; upper >= 0; --upper) {
    for (Index t = 0; t < T; ++t) {
      const Vector& bound = upper ? data.uu : data.ul;
      const double sign = upper ? 1.0 : -1.0;
      const Index width = t * n_u;
      for (Index i = 0; i < n_u; ++i) {
        if (!std::isfinite(bound[i])) continue;
        auto row = J.row(next_row++);
        if (t > 0) {
          row.head(width).noalias() =
              sign * (data.K.row(i) * blocks.bigB.block(t * n_x, 0, n_x, width));
        }
        row[t * n_u + i] += sign;
      }
    }
  }
  detail::require(next_row == rows, "inequality assembly row count mismatch");
  return J;
}

}  // namespace

DenseQp build_dense_qp(const LqProblemData& data) {
  DenseQp qp;
  qp.source = data;
  qp.blocks = build_block_matrices(data);
  const SubstitutedCost cost = substituted_cost(data);
  qp.H = assemble_hessian(data, qp.blocks, cost);
  qp.J = assemble_inequality_rows(data, qp.blocks);
  const Vector x0 = stacked_free_response(qp.blocks, data);
  AffineParts parts = assemble_affine(data, qp.blocks, cost, x0);
  qp.h = std::move(parts.h);
  qp.h0 = parts.h0;
  qp.d = std::move(parts.d);
  return qp;
}

void refresh_initial_state(DenseQp& qp, const Vector& x_bar) {
  detail::require(x_bar.size() == qp.source.x_bar.size(),
                  "refresh_initial_state: x_bar length mismatch");
  qp.source.x_bar = x_bar;
  const SubstitutedCost cost = substituted_cost(qp.source);
  const Vector x0 = stacked_free_response(qp.blocks, qp.source);
  AffineParts parts = assemble_affine(qp.source, qp.blocks, cost, x0);
  qp.h = std::move(parts.h);
  qp.h0 = parts.h0;
  qp.d = std::move(parts.d);
}

Trajectory recover_trajectory(const DenseQp& qp, const Vector& v) {
  const Dims dm = dims(qp.source);
  const Index n_x = dm.n_x;
  const Index n_u = dm.n_u;
  const Index T = dm.T;
  detail::require(v.size() == T * n_u, "recover_trajectory: v has length " +
                                           std::to_string(v.size()) + ", expected " +
                                           std::to_string(T * n_u));

  Vector x_stacked = stacked_free_response(qp.blocks, qp.source);
  x_stacked.noalias() += qp.blocks.bigB * v;

  Trajectory traj;
  traj.x.reserve(static_cast<std::size_t>(T + 1));
  traj.u.reserve(static_cast<std::size_t>(T));
  traj.v.reserve(static_cast<std::size_t>(T));
  for (Index t = 0; t <= T; ++t) traj.x.push_back(x_stacked.segment(t * n_x, n_x));
  for (Index t = 0; t < T; ++t) {
    Vector vt = v.segment(t * n_u, n_u);
    traj.u.push_back(qp.source.K * traj.x[static_cast<std::size_t>(t)] + vt);
    traj.v.push_back(std::move(vt));
  }

  double objective = traj.x.back().dot(qp.source.Qf * traj.x.back());
  for (Index t = 0; t < T; ++t) {
    const Vector& xt = traj.x[static_cast<std::size_t>(t)];
    const Vector& ut = traj.u[static_cast<std::size_t>(t)];
    objective += xt.dot(qp.source.Q * xt) + 2.0 * xt.dot(qp.source.S * ut) +
                 ut.dot(qp.source.R * ut);
  }
  traj.objective = objective;
  return traj;
}

double dense_objective(const DenseQp& qp, const Vector& v) {
  detail::require(v.size() == qp.H.rows(), "dense_objective: v has length " +
                                               std::to_string(v.size()) + ", expected " +
                                               std::to_string(qp.H.rows()));
  return 0.5 * v.dot(qp.H * v) + qp.h.dot(v) + qp.h0;
}

}  // namespace condmpc
