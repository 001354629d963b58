#pragma once

#include <stdexcept>
#include <utility>

#include "condmpc/problem.hpp"
#include "condmpc/reduction.hpp"
#include "condmpc/types.hpp"

namespace condmpc::heat3d {

// Thrown when the explicit Euler step would be unstable on the given mesh.
struct StabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Temperature control of a 3-D cube: the interior is an N^3 finite-difference
// grid, the six faces are held at commanded temperatures and act as the
// inputs. Copper material constants; all temperatures in kelvin.
struct HeatParams {
  Index N = 4;  // interior grid points per dimension
  Index T = 50;

  double dt = 0.1;           // s
  double dw = 0.02;          // m
  double rho = 8960.0;       // kg/m^3
  double cp = 386.0;         // J/(kg K)
  double conductivity = 400.0;  // W/(m K)

  double q_weight = 10.0 * 0.02 * 0.02;        // state cost, 10 dw^2 for the default mesh
  double r_weight = 0.1 * 0.02 * 0.02;         // input cost, dw^2/10 for the default mesh

  double x_min = 200.0, x_max = 550.0;  // interior temperature band
  double u_min = 300.0, u_max = 500.0;  // face temperature band
  double x_init = 300.0;
  double setpoint = 350.0;

  double edge_length() const { return static_cast<double>(N + 1) * dw; }
  double diffusivity() const { return conductivity / (rho * cp); }
  // explicit Euler weight per neighbor; must stay below 1/6 for stability
  double stability_factor() const { return diffusivity() * dt / (dw * dw); }
};

// A = I + c Lap with the 7-point Laplacian on the N^3 interior grid under
// Dirichlet boundaries; B column i holds the coefficient c for every cell
// adjacent to face i. Faces are ordered x=0, x=L, y=0, y=L, z=0, z=L and the
// grid index is x-fastest: cell (i,j,k) -> i + N j + N^2 k.
std::pair<Matrix, Matrix> laplacian_system(Index N, const HeatParams& params);

// The tracking MPC instance in deviation variables x - setpoint, u - setpoint
// (the shift turns set-point tracking into regulation, which the purely
// quadratic objective can express; bounds and the initial state shift along).
LqProblemData build_heat_problem(const HeatParams& params);

// Shift a deviation-variable trajectory back to physical temperatures.
// The objective (a deviation-space tracking cost) is left untouched.
Trajectory to_physical(Trajectory traj, const HeatParams& params);

}  // namespace condmpc::heat3d
