#pragma once

#include <stdexcept>
#include <vector>

#include "condmpc/reduction.hpp"
#include "condmpc/types.hpp"

namespace condmpc::oracle {

// Thrown when a QP has more inequality rows than the enumeration can afford.
struct CapExceeded : std::runtime_error {
  explicit CapExceeded(Index rows)
      : std::runtime_error("oracle: " + std::to_string(rows) +
                           " inequality rows exceed the enumeration cap of 22") {}
};

enum class OracleStatus { optimal, infeasible, unbounded_guard };

struct OracleResult {
  OracleStatus status = OracleStatus::infeasible;
  Vector v;
  double objective = 0.0;
  std::vector<Index> active_set;  // tight rows, ascending
  Vector multipliers;             // duals aligned with active_set, >= -1e-9

  // multipliers scattered to all m rows, zero off the active set
  Vector lambda_full(Index m) const;
};

// Reference solver by exhaustive active-set enumeration. Every subset of the
// m inequality rows is tried as an equality-constrained QP; candidates that
// pass primal and dual feasibility compete on objective value, ties broken by
// the lexicographically smallest active set. Exact but exponential in m, so
// the row count is capped at 22.
OracleResult solve_enumeration(const Matrix& H, const Vector& h, double h0, const Matrix& J,
                               const Vector& d);
OracleResult solve_enumeration(const DenseQp& qp);

}  // namespace condmpc::oracle
