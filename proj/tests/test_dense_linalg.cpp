#include <doctest.h>

#include <cstring>
#include <random>

#include "condmpc/dense_linalg.hpp"

using namespace condmpc;
using namespace condmpc::linalg;

namespace {

Matrix random_spd(std::mt19937_64& rng, Index n, double shift = 0.5) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) m(i, j) = dist(rng);
  }
  Matrix spd = m.transpose() * m;
  spd.diagonal().array() += shift;
  return spd;
}

Vector random_vector(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("2x2 factor matches the hand computation") {
  Matrix m(2, 2);
  m << 4.0, 2.0, 2.0, 3.0;
  for (const char* name : {"reference", "eigen"}) {
    CAPTURE(name);
    const Factor factor = make_backend(name)->factorize(m);
    CHECK(factor.lower()(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(factor.lower()(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(factor.lower()(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(factor.lower()(0, 1) == 0.0);  // strict upper triangle cleared
  }
}

TEST_CASE("1x1 factor is the square root") {
  const Factor factor = make_backend("reference")->factorize(Matrix::Constant(1, 1, 4.0));
  CHECK(factor.lower()(0, 0) == 2.0);
  CHECK(factor.dim() == 1);
}

TEST_CASE("failure reports the first nonpositive pivot") {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  for (const char* name : {"reference", "eigen"}) {
    CAPTURE(name);
    try {
      make_backend(name)->factorize(m);
      FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& err) {
      CHECK(err.pivot == 1);
    }
  }
  try {
    make_backend("reference")->factorize(Matrix::Constant(1, 1, -1.0));
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& err) {
    CHECK(err.pivot == 0);
  }
}

TEST_CASE("cholesky_factorize rejects asymmetric input") {
  Matrix m(2, 2);
  m << 1.0, 0.5, 0.0, 1.0;
  const auto backend = make_backend("reference");
  CHECK_THROWS_AS(cholesky_factorize(*backend, m), std::invalid_argument);
  CHECK_THROWS_AS(cholesky_factorize(*backend, Matrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("solve inverts the factorization") {
  std::mt19937_64 rng(17);
  const auto backend = make_backend("reference");
  for (Index n : {1, 2, 5, 17, 40}) {
    const Matrix m = random_spd(rng, n);
    const Vector b = random_vector(rng, n);
    const Vector x = backend->factorize(m).solve(b);
    CHECK(inf_norm(m * x - b) <= 1e-10 * (1.0 + inf_norm(b)));
  }
}

TEST_CASE("solve agrees with a brute-force inverse on small systems") {
  std::mt19937_64 rng(23);
  const auto backend = make_backend("reference");
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_spd(rng, 4);
    const Vector b = random_vector(rng, 4);
    const Vector expected = m.inverse() * b;
    const Vector got = backend->factorize(m).solve(b);
    CHECK(inf_norm(got - expected) <= 1e-10 * (1.0 + inf_norm(expected)));
  }
}

TEST_CASE("solve checks the right-hand-side length") {
  const Factor factor = make_backend("reference")->factorize(Matrix::Identity(3, 3));
  CHECK_THROWS_AS(factor.solve(Vector::Zero(2)), DimensionError);
}

TEST_CASE("blocked path reconstructs matrices larger than one block") {
  std::mt19937_64 rng(31);
  for (Index n : {63, 64, 65, 150}) {
    const Matrix m = random_spd(rng, n, 1.0);
    const Matrix lower = make_backend("reference")->factorize(m).lower();
    const double err = max_abs(Matrix(lower * lower.transpose()) - m);
    CHECK(err <= 1e-12 * static_cast<double>(n) * max_abs(m));
  }
}

TEST_CASE("both backends reconstruct 50 random matrices") {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<Index> size(1, 90);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = size(rng);
    const Matrix m = random_spd(rng, n, 0.3);
    for (const char* name : {"reference", "eigen"}) {
      CAPTURE(trial);
      CAPTURE(name);
      const Matrix lower = make_backend(name)->factorize(m).lower();
      const double err = max_abs(Matrix(lower * lower.transpose()) - m);
      REQUIRE(err <= 1e-12 * static_cast<double>(n) * max_abs(m));
    }
  }
}

TEST_CASE("backends agree with each other") {
  std::mt19937_64 rng(41);
  for (Index n : {3, 20, 70}) {
    const Matrix m = random_spd(rng, n);
    const Vector b = random_vector(rng, n);
    const Factor ref = make_backend("reference")->factorize(m);
    const Factor eig = make_backend("eigen")->factorize(m);
    CHECK(max_abs(ref.lower() - eig.lower()) <= 1e-9 * (1.0 + max_abs(ref.lower())));
    CHECK(inf_norm(ref.solve(b) - eig.solve(b)) <= 1e-9 * (1.0 + inf_norm(b)));
  }
}

TEST_CASE("a factor is immutable: repeated solves are bitwise identical") {
  std::mt19937_64 rng(43);
  const Matrix m = random_spd(rng, 12);
  const Vector b = random_vector(rng, 12);
  const Factor factor = make_backend("reference")->factorize(m);
  const Vector first = factor.solve(b);
  const Vector second = factor.solve(b);
  REQUIRE(std::memcmp(first.data(), second.data(), sizeof(double) * 12) == 0);
}

TEST_CASE("factorize_seconds is populated") {
  std::mt19937_64 rng(47);
  const Factor factor = make_backend("reference")->factorize(random_spd(rng, 100));
  CHECK(factor.factorize_seconds() > 0.0);
}

TEST_CASE("backend registry") {
  CHECK(make_backend("reference")->name() == "reference");
  CHECK(make_backend("eigen")->name() == "eigen");
  CHECK(make_backend("reference")->in_place());
  CHECK_FALSE(make_backend("eigen")->in_place());
  CHECK_FALSE(make_backend("reference")->parallel());
  CHECK_THROWS_AS(make_backend("cuda"), std::invalid_argument);
}

TEST_CASE("gram_weighted matches the hand value") {
  Matrix J(2, 2);
  J << 1.0, 2.0, 3.0, 4.0;
  Vector sigma(2);
  sigma << 2.0, 3.0;
  const Matrix g = gram_weighted(J, sigma);
  // J' diag(2,3) J = [[29, 40], [40, 56]]
  CHECK(g(0, 0) == doctest::Approx(29.0).epsilon(1e-15));
  CHECK(g(0, 1) == doctest::Approx(40.0).epsilon(1e-15));
  CHECK(g(1, 0) == g(0, 1));
  CHECK(g(1, 1) == doctest::Approx(56.0).epsilon(1e-15));
}

TEST_CASE("gram_weighted agrees with the naive triple product") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> pos(0.1, 4.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<Index> size(1, 30);
    const Index m = size(rng);
    const Index n = size(rng);
    Matrix J(m, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < m; ++i) J(i, j) = random_vector(rng, 1)[0];
    }
    Vector sigma(m);
    for (Index i = 0; i < m; ++i) sigma[i] = pos(rng);
    const Matrix expected = J.transpose() * sigma.asDiagonal() * J;
    const Matrix got = gram_weighted(J, sigma);
    CHECK(max_abs(got - expected) <= 1e-12 * (1.0 + max_abs(expected)));
    CHECK(is_symmetric(got, 1e-15));
  }
}

TEST_CASE("gram_weighted checks the sigma length") {
  CHECK_THROWS_AS(gram_weighted(Matrix::Identity(2, 2), Vector::Zero(3)), DimensionError);
}
