#pragma once

#include <random>

#include "condmpc/problem.hpp"
#include "condmpc/types.hpp"

namespace condmpc::testing {

// Ensemble of small strictly-feasible instances. Bounds are laid around a
// simulated trajectory with a fixed margin, so a strictly interior point is
// guaranteed by construction. With `cap_rows_for_oracle` the drawn dimensions
// keep the dense QP at no more than 22 inequality rows, the enumeration
// oracle's limit.
struct RandomProblemOptions {
  Index max_n_x = 3;
  Index max_n_u = 2;
  Index max_n_c = 0;
  Index max_T = 4;
  bool cap_rows_for_oracle = true;
  double bound_margin = 0.5;
  double spectral_radius_cap = 1.05;
};

LqProblemData random_problem(std::mt19937_64& rng, const RandomProblemOptions& opts = {});

// rng for instance `index` of a run, decoupled from every other instance so
// parallel and sequential execution draw identical problems
std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace condmpc::testing
