#include <doctest.h>

#include "condmpc/oracle.hpp"

using namespace condmpc;
using namespace condmpc::oracle;

TEST_CASE("unconstrained minimum is the stationary point") {
  const OracleResult result =
      solve_enumeration(Matrix::Constant(1, 1, 4.0), Vector::Constant(1, 2.0), 0.0, Matrix(0, 1),
                        Vector(0));
  REQUIRE(result.status == OracleStatus::optimal);
  CHECK(result.v[0] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(result.objective == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(result.active_set.empty());
}

TEST_CASE("one-sided bound activates with the hand multiplier") {
  // min 0.5*4 v^2 + 2 v  s.t.  v >= 0, written as -v <= 0
  const OracleResult result =
      solve_enumeration(Matrix::Constant(1, 1, 4.0), Vector::Constant(1, 2.0), 0.0,
                        Matrix::Constant(1, 1, -1.0), Vector::Zero(1));
  REQUIRE(result.status == OracleStatus::optimal);
  CHECK(result.v[0] == doctest::Approx(0.0));
  REQUIRE(result.active_set == std::vector<Index>{0});
  CHECK(result.multipliers[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(result.lambda_full(1)[0] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("box-constrained corner solution") {
  // min 0.5|v - (3,4)|^2  s.t.  v <= (1,2); both bounds end up active
  Matrix H = Matrix::Identity(2, 2);
  Vector h(2);
  h << -3.0, -4.0;
  Matrix J = Matrix::Identity(2, 2);
  Vector d(2);
  d << 1.0, 2.0;
  const OracleResult result = solve_enumeration(H, h, 12.5, J, d);
  REQUIRE(result.status == OracleStatus::optimal);
  CHECK(result.v[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(result.v[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(result.objective == doctest::Approx(4.0).epsilon(1e-14));
  REQUIRE(result.active_set == std::vector<Index>({0, 1}));
  CHECK(result.multipliers[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(result.multipliers[1] == doctest::Approx(2.0).epsilon(1e-14));

  // KKT stationarity with the scattered multipliers
  const Vector lambda = result.lambda_full(2);
  CHECK(inf_norm(H * result.v + h + J.transpose() * lambda) <= 1e-9);
}

TEST_CASE("positive rescaling keeps the argmin and active set") {
  Matrix H = Matrix::Identity(2, 2);
  Vector h(2);
  h << -3.0, -4.0;
  Matrix J = Matrix::Identity(2, 2);
  Vector d(2);
  d << 1.0, 2.0;
  const OracleResult base = solve_enumeration(H, h, 0.0, J, d);
  const OracleResult scaled = solve_enumeration(5.0 * H, 5.0 * h, 0.0, J, d);
  REQUIRE(base.status == OracleStatus::optimal);
  REQUIRE(scaled.status == OracleStatus::optimal);
  CHECK(inf_norm(base.v - scaled.v) <= 1e-12);
  CHECK(base.active_set == scaled.active_set);
  CHECK(scaled.objective == doctest::Approx(5.0 * base.objective).epsilon(1e-12));
}

TEST_CASE("contradictory rows are reported infeasible") {
  // v <= -1 and v >= 1
  Matrix J(2, 1);
  J << 1.0, -1.0;
  Vector d(2);
  d << -1.0, -1.0;
  const OracleResult result =
      solve_enumeration(Matrix::Identity(1, 1), Vector::Zero(1), 0.0, J, d);
  CHECK(result.status == OracleStatus::infeasible);
}

TEST_CASE("a flat unconstrained direction trips the unbounded guard") {
  const OracleResult result = solve_enumeration(Matrix::Zero(1, 1), Vector::Constant(1, 1.0), 0.0,
                                                Matrix(0, 1), Vector(0));
  CHECK(result.status == OracleStatus::unbounded_guard);
}

TEST_CASE("ties resolve to the lexicographically smallest active set") {
  // optimum sits exactly on a duplicated boundary; the inactive description wins
  Matrix J(2, 2);
  J << 1.0, 0.0, 1.0, 0.0;
  const OracleResult result =
      solve_enumeration(Matrix::Identity(2, 2), Vector::Zero(2), 0.0, J, Vector::Zero(2));
  REQUIRE(result.status == OracleStatus::optimal);
  CHECK(inf_norm(result.v) <= 1e-12);
  CHECK(result.active_set.empty());
}

TEST_CASE("row cap is enforced") {
  const Index m = 23;
  CHECK_THROWS_AS(solve_enumeration(Matrix::Identity(1, 1), Vector::Zero(1), 0.0,
                                    Matrix::Ones(m, 1), Vector::Ones(m)),
                  CapExceeded);
}

TEST_CASE("h0 shifts the reported objective") {
  const OracleResult result =
      solve_enumeration(Matrix::Constant(1, 1, 4.0), Vector::Constant(1, 2.0), 2.0, Matrix(0, 1),
                        Vector(0));
  CHECK(result.objective == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("shape mismatches are rejected") {
  CHECK_THROWS_AS(solve_enumeration(Matrix::Identity(2, 2), Vector::Zero(3), 0.0, Matrix(0, 2),
                                    Vector(0)),
                  DimensionError);
  CHECK_THROWS_AS(solve_enumeration(Matrix::Identity(2, 2), Vector::Zero(2), 0.0,
                                    Matrix::Ones(1, 2), Vector::Zero(2)),
                  DimensionError);
}
