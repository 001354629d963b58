#include "condmpc/dense_linalg.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <cmath>
#include <sstream>

namespace condmpc::linalg {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

[[noreturn]] void throw_not_pd(Index pivot) {
  std::ostringstream msg;
  msg << "cholesky failed: matrix not positive definite at pivot " << pivot;
  throw NotPositiveDefinite(pivot, msg.str());
}

// unblocked lower Cholesky of the leading block, in place
void potf2_lower(Eigen::Ref<Matrix> a, Index pivot_offset) {
  const Index n = a.rows();
  for (Index j = 0; j < n; ++j) {
    double diag = a(j, j);
    if (j > 0) diag -= a.row(j).head(j).squaredNorm();
    if (!(diag > 0.0) || !std::isfinite(diag)) throw_not_pd(pivot_offset + j);
    diag = std::sqrt(diag);
    a(j, j) = diag;
    if (j + 1 < n) {
      auto col = a.col(j).tail(n - j - 1);
      if (j > 0) {
        col.noalias() -= a.block(j + 1, 0, n - j - 1, j) * a.row(j).head(j).transpose();
      }
      col /= diag;
    }
  }
}

// X <- X L^{-T} for the lower-triangular diagonal block L, column by column
void trsm_right_lower_transposed(Eigen::Ref<Matrix> x, const Eigen::Ref<const Matrix>& l) {
  const Index b = l.rows();
  for (Index j = 0; j < b; ++j) {
    if (j > 0) {
      x.col(j).noalias() -= x.leftCols(j) * l.row(j).head(j).transpose();
    }
    x.col(j) /= l(j, j);
  }
}

class ReferenceBackend final : public Backend {
 public:
  std::string_view name() const override { return "reference"; }
  bool in_place() const override { return true; }
  bool parallel() const override { return false; }

  Factor factorize(const Matrix& sym) const override {
    const double start = now_seconds();
    const Index n = sym.rows();
    Matrix a = sym;
    constexpr Index block = 64;
    for (Index k = 0; k < n; k += block) {
      const Index b = std::min(block, n - k);
      potf2_lower(a.block(k, k, b, b), k);
      const Index rest = n - k - b;
      if (rest > 0) {
        trsm_right_lower_transposed(a.block(k + b, k, rest, b), a.block(k, k, b, b));
        a.block(k + b, k + b, rest, rest)
            .selfadjointView<Eigen::Lower>()
            .rankUpdate(a.block(k + b, k, rest, b), -1.0);
      }
    }
    a.triangularView<Eigen::StrictlyUpper>().setZero();
    return Factor(std::move(a), now_seconds() - start);
  }
};

class EigenLltBackend final : public Backend {
 public:
  std::string_view name() const override { return "eigen"; }
  bool in_place() const override { return false; }
  bool parallel() const override { return false; }

  Factor factorize(const Matrix& sym) const override {
    const double start = now_seconds();
    Eigen::LLT<Matrix> llt(sym);
    if (llt.info() != Eigen::Success) {
      // LLT does not expose the failing pivot; locate it with the unblocked kernel
      Matrix a = sym;
      potf2_lower(a, 0);
      throw_not_pd(sym.rows() > 0 ? sym.rows() - 1 : 0);  // unreachable unless roundoff differs
    }
    Matrix l = llt.matrixL();
    return Factor(std::move(l), now_seconds() - start);
  }
};

}  // namespace

Vector Factor::solve(const Vector& rhs) const {
  detail::require(rhs.size() == lower_.rows(),
                  "cholesky_solve: rhs length " + std::to_string(rhs.size()) +
                      " does not match factor dimension " + std::to_string(lower_.rows()));
  Vector x = rhs;
  lower_.triangularView<Eigen::Lower>().solveInPlace(x);
  lower_.triangularView<Eigen::Lower>().transpose().solveInPlace(x);
  return x;
}

std::unique_ptr<Backend> make_backend(std::string_view name) {
  if (name == "reference") return std::make_unique<ReferenceBackend>();
  if (name == "eigen") return std::make_unique<EigenLltBackend>();
  throw std::invalid_argument("unknown factorization backend: " + std::string(name));
}

Factor cholesky_factorize(const Backend& backend, const Matrix& sym) {
  detail::require(sym.rows() == sym.cols(), "cholesky_factorize: matrix must be square");
  if (!is_symmetric(sym, 1e-10)) {
    throw std::invalid_argument("cholesky_factorize: matrix not symmetric within 1e-10 relative");
  }
  return backend.factorize(sym);
}

Vector cholesky_solve(const Factor& factor, const Vector& rhs) { return factor.solve(rhs); }

Matrix gram_weighted(const Matrix& J, const Vector& sigma) {
  detail::require(J.rows() == sigma.size(), "gram_weighted: sigma length must equal row count of J");
  const Index n = J.cols();
  Matrix g = Matrix::Zero(n, n);
  if (J.rows() == 0) return g;
  Matrix scaled = sigma.cwiseSqrt().asDiagonal() * J;
  g.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose().triangularView<Eigen::StrictlyUpper>();
  return g;
}

}  // namespace condmpc::linalg
