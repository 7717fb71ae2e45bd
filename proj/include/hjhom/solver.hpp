#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjhom/control.hpp"
#include "hjhom/grid.hpp"

namespace hjhom {

struct SolveOptions {
  double tol = 1e-9;              // relative sup-update stopping threshold
  int max_policy_iterations = 200;
  long max_value_iterations = 1000000;
  const std::vector<int>* warm_policy = nullptr;
};

struct SolveReport {
  int iterations = 0;
  double final_update = 0.0;  // Bellman residual at exit (sup norm)
  double contraction = 0.0;   // per-step discount factor
  double dt = 0.0;
  double wall_seconds = 0.0;
  bool converged = false;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), last_residual(residual) {}
  double last_residual;
};

struct DiscountedSolve {
  GridField field;
  SolveReport report;
  std::vector<int> policy;  // argmin control per node, reusable as warm start
};

// Fully discrete control problem on a grid: running cost splits into a
// per-node and a per-control part, dynamics are the control velocities,
// one step moves dt * v with multilinear interpolation at the foot point.
struct DiscreteProblem {
  const GridField* grid = nullptr;
  const ControlSet* controls = nullptr;
  std::vector<double> control_cost;
  std::vector<double> node_cost;
  double dt = 0.0;
  double discount = 1.0;            // beta = 1 - lambda*dt
  std::vector<int> pinned_nodes;    // Dirichlet rows
  std::vector<double> pinned_values;
};

DiscreteProblem make_discrete_problem(const GridField& grid, const ControlSet& controls,
                                      std::vector<double> control_cost,
                                      const std::function<double(Vec)>& spatial_cost,
                                      double rate /* lambda or alpha */);

// Howard policy iteration with exact sparse policy evaluation. Converges in
// a few iterations independently of the discount rate, which plain value
// iteration cannot afford at the small lambdas used here.
DiscountedSolve policy_iteration(const DiscreteProblem& problem, const SolveOptions& opts = {});

// Plain fixed-point (Jacobi) iteration; returns the sup-update history.
// Kept for the contraction diagnostics and as an independent route to the
// same fixed point.
std::vector<double> value_iteration(const DiscreteProblem& problem, GridField& inout,
                                    long iterations);

// lambda w + H(y, p + Dw) = 0 on the torus, discrete sense.
DiscountedSolve solve_discounted_periodic(const HamiltonianSpec& spec, Vec p, double lambda,
                                          const GridField& torus_grid,
                                          const SolveOptions& opts = {});

// State-constrained problem on the ball |y| <= R; controls whose foot
// leaves the ball are inadmissible at that node.
DiscountedSolve solve_discounted_constrained(const HamiltonianSpec& spec, double lambda,
                                             double radius, double h,
                                             const SolveOptions& opts = {});

// alpha u + H(x/eps, Du) = 0 on a box, artificial boundary treated as a
// state constraint; the oscillatory cost is sampled analytically at x/eps.
// Refuses when h > eps/4 (defect would be under-resolved).
DiscountedSolve solve_eps_problem(const HamiltonianSpec& spec, double alpha, double eps,
                                  double half_width, double h, const SolveOptions& opts = {});

// H(y, Dchi) = level in B_R, chi = boundary_data on a 2.5h ring at the
// sphere; Gauss-Seidel value sweeps from above (no discount). Requires the
// running cost rate cost + level to be strictly positive somewhere along
// every cycle, which holds whenever level > -inf cost.
GridField solve_dirichlet_level(const HamiltonianSpec& spec, double level, double radius,
                                double h, const std::function<double(Vec)>& boundary_data,
                                SolveReport* report = nullptr, const SolveOptions& opts = {});

}  // namespace hjhom
