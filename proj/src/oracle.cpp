#include "condmpc/oracle.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <limits>

namespace condmpc::oracle {

namespace {

constexpr Index kRowCap = 22;
constexpr double kFeasTol = 1e-9;
constexpr double kRankTol = 1e-10;

std::vector<Index> mask_rows(std::uint32_t mask) {
  std::vector<Index> rows;
  for (Index i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1u) rows.push_back(i);
  }
  return rows;
}

}  // namespace

Vector OracleResult::lambda_full(Index m) const {
  Vector full = Vector::Zero(m);
  for (std::size_t k = 0; k < active_set.size(); ++k) {
    full[active_set[k]] = multipliers[static_cast<Index>(k)];
  }
  return full;
}

OracleResult solve_enumeration(const Matrix& H, const Vector& h, double h0, const Matrix& J,
                               const Vector& d) {
  const Index n = H.rows();
  const Index m = J.rows();
  detail::require(H.cols() == n && h.size() == n, "oracle: H/h dimensions disagree");
  detail::require(J.cols() == n || m == 0, "oracle: J must have one column per variable");
  detail::require(d.size() == m, "oracle: J and d row counts disagree");
  if (m > kRowCap) throw CapExceeded(m);

  OracleResult best;
  bool any_solvable = false;
  bool have_best = false;

  const std::uint32_t mask_end = static_cast<std::uint32_t>(1u) << m;
  for (std::uint32_t mask = 0; mask < mask_end; ++mask) {
    const int active = std::popcount(mask);
    if (active > n) continue;  // more tight rows than variables cannot be independent

    const std::vector<Index> rows = mask_rows(mask);
    Matrix Jw(active, n);
    Vector dw(active);
    for (int k = 0; k < active; ++k) {
      Jw.row(k) = J.row(rows[static_cast<std::size_t>(k)]);
      dw[k] = d[rows[static_cast<std::size_t>(k)]];
    }
    if (active > 0) {
      Eigen::FullPivLU<Matrix> rank_check(Jw);
      rank_check.setThreshold(kRankTol);
      if (rank_check.rank() < active) continue;  // dependent rows, same subset appears elsewhere
    }

    Matrix kkt = Matrix::Zero(n + active, n + active);
    kkt.topLeftCorner(n, n) = H;
    if (active > 0) {
      kkt.topRightCorner(n, active) = Jw.transpose();
      kkt.bottomLeftCorner(active, n) = Jw;
    }
    Vector rhs(n + active);
    rhs.head(n) = -h;
    rhs.tail(active) = dw;

    Eigen::FullPivLU<Matrix> lu(kkt);
    lu.setThreshold(kRankTol);
    if (!lu.isInvertible()) continue;
    any_solvable = true;

    const Vector sol = lu.solve(rhs);
    const Vector v = sol.head(n);
    const Vector lam = sol.tail(active);

    if (m > 0 && ((J * v - d).array() > kFeasTol).any()) continue;
    if (active > 0 && (lam.array() < -kFeasTol).any()) continue;

    const double objective = 0.5 * v.dot(H * v) + h.dot(v) + h0;
    const double scale = 1.0 + std::abs(have_best ? best.objective : objective);
    bool take = false;
    if (!have_best || objective < best.objective - kFeasTol * scale) {
      take = true;
    } else if (objective <= best.objective + kFeasTol * scale) {
      take = std::lexicographical_compare(rows.begin(), rows.end(), best.active_set.begin(),
                                          best.active_set.end());
    }
    if (take) {
      best.status = OracleStatus::optimal;
      best.v = v;
      best.objective = objective;
      best.active_set = rows;
      best.multipliers = lam;
      have_best = true;
    }
  }

  if (!have_best) {
    best.status = any_solvable ? OracleStatus::infeasible : OracleStatus::unbounded_guard;
    best.v = Vector::Zero(n);
    best.objective = std::numeric_limits<double>::quiet_NaN();
  }
  return best;
}

OracleResult solve_enumeration(const DenseQp& qp) {
  return solve_enumeration(qp.H, qp.h, qp.h0, qp.J, qp.d);
}

}  // namespace condmpc::oracle
