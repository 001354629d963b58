#include "condmpc/random_problems.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace condmpc::testing {

namespace {

Matrix uniform_matrix(std::mt19937_64& rng, Index rows, Index cols, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  }
  return m;
}

Matrix random_spd(std::mt19937_64& rng, Index n) {
  const Matrix m = uniform_matrix(rng, n, n, -1.0, 1.0);
  return m.transpose() * m + 0.1 * Matrix::Identity(n, n);
}

double spectral_radius(const Matrix& a) {
  return Eigen::EigenSolver<Matrix>(a, /*computeEigenvectors=*/false)
      .eigenvalues()
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

LqProblemData random_problem(std::mt19937_64& rng, const RandomProblemOptions& opts) {
  detail::require(opts.max_n_x >= 1 && opts.max_n_u >= 1 && opts.max_T >= 1,
                  "ensemble dimensions must be at least 1");

  auto draw = [&rng](Index lo, Index hi) {
    std::uniform_int_distribution<Index> dist(lo, hi);
    return dist(rng);
  };

  // keep 2T(n_c + n_x + n_u) within the oracle's 22-row cap when asked
  Index T, n_x, n_u, n_c;
  do {
    T = draw(1, opts.max_T);
    n_x = draw(1, opts.max_n_x);
    n_u = draw(1, opts.max_n_u);
    n_c = opts.max_n_c > 0 ? draw(0, opts.max_n_c) : 0;
  } while (opts.cap_rows_for_oracle && 2 * T * (n_c + n_x + n_u) > 22);

  Matrix A = uniform_matrix(rng, n_x, n_x, -1.0, 1.0);
  const double radius = spectral_radius(A);
  if (radius > opts.spectral_radius_cap) A *= opts.spectral_radius_cap / radius;

  LqProblemData data = LqProblemData::basic(
      A, uniform_matrix(rng, n_x, n_u, -1.0, 1.0), random_spd(rng, n_x), random_spd(rng, n_u),
      random_spd(rng, n_x), uniform_matrix(rng, n_x, 1, -1.0, 1.0).col(0), T);
  data.S = uniform_matrix(rng, n_x, n_u, -1.0, 1.0);
  // a free cross term can make the stage cost indefinite; halve it until the
  // full stage matrix keeps a convexity margin, so the dense Hessian stays
  // positive definite for every instance
  Matrix stage(n_x + n_u, n_x + n_u);
  stage.topLeftCorner(n_x, n_x) = data.Q;
  stage.bottomRightCorner(n_u, n_u) = data.R;
  for (;;) {
    stage.topRightCorner(n_x, n_u) = data.S;
    stage.bottomLeftCorner(n_u, n_x) = data.S.transpose();
    const double stage_min =
        Eigen::SelfAdjointEigenSolver<Matrix>(stage, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    if (stage_min >= 0.05) break;
    data.S *= 0.5;
  }
  for (auto& w_t : data.w) w_t = uniform_matrix(rng, n_x, 1, -0.1, 0.1).col(0);
  if (n_c > 0) {
    data.E = uniform_matrix(rng, n_c, n_x, -1.0, 1.0);
    data.F = uniform_matrix(rng, n_c, n_u, -1.0, 1.0);
  }

  // simulate a trajectory under random controls and bracket it with a margin,
  // which guarantees a strictly interior feasible point
  std::vector<Vector> xs(static_cast<std::size_t>(T) + 1);
  std::vector<Vector> us(static_cast<std::size_t>(T));
  xs[0] = data.x_bar;
  for (Index t = 0; t < T; ++t) {
    us[static_cast<std::size_t>(t)] = uniform_matrix(rng, n_u, 1, -0.5, 0.5).col(0);
    xs[static_cast<std::size_t>(t) + 1] = data.A * xs[static_cast<std::size_t>(t)] +
                                          data.B * us[static_cast<std::size_t>(t)] +
                                          data.w[static_cast<std::size_t>(t)];
  }

  const double margin = opts.bound_margin;
  data.xl = xs[0];
  data.xu = xs[0];
  for (const Vector& x : xs) {
    data.xl = data.xl.cwiseMin(x);
    data.xu = data.xu.cwiseMax(x);
  }
  data.xl.array() -= margin;
  data.xu.array() += margin;

  data.ul = Vector::Constant(n_u, -0.5 - margin);
  data.uu = Vector::Constant(n_u, 0.5 + margin);

  if (n_c > 0) {
    Vector lo = data.E * xs[0] + data.F * us[0];
    Vector hi = lo;
    for (Index t = 0; t < T; ++t) {
      const Vector y = data.E * xs[static_cast<std::size_t>(t)] + data.F * us[static_cast<std::size_t>(t)];
      lo = lo.cwiseMin(y);
      hi = hi.cwiseMax(y);
    }
    lo.array() -= margin;
    hi.array() += margin;
    data.gl = std::move(lo);
    data.gu = std::move(hi);
  }
  return data;
}

}  // namespace condmpc::testing
