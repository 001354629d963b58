#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "condmpc/types.hpp"

namespace condmpc::linalg {

// thrown when a pivot of the Cholesky factorization is not positive
struct NotPositiveDefinite : std::runtime_error {
  NotPositiveDefinite(Index pivot_, const std::string& msg)
      : std::runtime_error(msg), pivot(pivot_) {}
  Index pivot;
};

// lower-triangular Cholesky factor; immutable once built, shareable for concurrent solves
class Factor {
 public:
  Factor(Matrix lower, double seconds)
      : lower_(std::move(lower)), factorize_seconds_(seconds) {}

  const Matrix& lower() const { return lower_; }
  Index dim() const { return lower_.rows(); }
  // wall-clock time spent in the factorization that produced this factor
  double factorize_seconds() const { return factorize_seconds_; }

  // two triangular solves against L L^T; no refactorization
  Vector solve(const Vector& rhs) const;

 private:
  Matrix lower_;
  double factorize_seconds_;
};

// factorization backend contract; the offload/parallel implementation the method
// targets would slot in behind this interface
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string_view name() const = 0;
  virtual bool in_place() const = 0;
  virtual bool parallel() const = 0;
  // throws NotPositiveDefinite with the failing pivot index
  virtual Factor factorize(const Matrix& sym) const = 0;
};

// backend lookup by name ("reference", "eigen"); throws std::invalid_argument on unknown names
std::unique_ptr<Backend> make_backend(std::string_view name);

// checks symmetry (1e-10 relative), then hands the matrix to the backend
Factor cholesky_factorize(const Backend& backend, const Matrix& sym);

Vector cholesky_solve(const Factor& factor, const Vector& rhs);

// J^T diag(sigma) J, accumulated as W^T W with W = diag(sqrt(sigma)) J
// (single symmetric rank-k pass over the scaled matrix, lower triangle mirrored up)
Matrix gram_weighted(const Matrix& J, const Vector& sigma);

}  // namespace condmpc::linalg
