#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hjhom/costs.hpp"
#include "hjhom/effective.hpp"
#include "hjhom/solver.hpp"

namespace hjhom {

struct HomogenizedSolution {
  GridField u;
  double E = 0.0;
  double alpha = 1.0;
  EffectiveHamiltonianTable table;
  bool visible = false;
  double u_per_value = 0.0;  // -hbar(p0)/alpha (presets have zero p0 momentum)
  bool p0_nonzero = false;   // flagged: no reference field is built then
  std::optional<double> exact_agreement_radius;  // from the outermost shells in
};

// Effective problem alpha u + hbar(Du) = 0 off the origin with the origin
// node pinned to min(-E/alpha, -hbar(p0)/alpha); realized as the optimal
// control problem of the conjugate cost of the tabulated hbar, with an
// absorbing stop at the origin. Throws when E < hbar(p0) - tol.
HomogenizedSolution solve_homogenized(const EffectiveHamiltonianTable& table, double E,
                                      double alpha, int dim, double half_width, double h,
                                      const SolveOptions& opts = {});

bool defect_visible(double E, const EffectiveHamiltonianTable& table, double tol = 1e-2);

struct DecayReport {
  std::vector<double> radii;
  std::vector<double> shell_error;  // max |u - u_per| on each shell
  std::optional<double> exact_agreement_radius;  // first shell at ~0, stable outward
};

DecayReport check_infinity(const HomogenizedSolution& sol, const std::vector<double>& radii,
                           double exact_tol = 1e-6);

struct Homogenized1D {
  double mu = 0.0;  // infinity when lper is constant
  double u_at_origin = 0.0;
  double u_per = 0.0;  // inf lper
  std::function<double(double)> u;
};

// Closed form of the 1D limit for K = |p| and alpha = 1: the exponential
// branch inside |x| <= mu glued to the constant inf lper outside. When the
// defect is not downward, mu = 0 and only the constant branch remains.
Homogenized1D analytic_homogenized_1d(const PeriodicCost& per, const DefectCost& defect,
                                      double alpha = 1.0);

}  // namespace hjhom
