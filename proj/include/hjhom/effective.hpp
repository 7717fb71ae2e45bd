#pragma once

#include <vector>

#include "hjhom/control.hpp"
#include "hjhom/grid.hpp"
#include "hjhom/solver.hpp"

namespace hjhom {

struct VanishingDiscountResult {
  double value = 0.0;   // intercept of the linear-in-lambda fit
  double spread = 0.0;  // |3-point intercept - 2-point intercept|
  bool warn_nonmonotone = false;
  std::vector<double> lambdas;
  std::vector<double> raw;  // -lambda <w_lambda> per schedule entry
};

// Linear fit v = a + b*lambda through the last three schedule points;
// returns a and flags a sequence that fails to settle monotonically.
VanishingDiscountResult extrapolate_vanishing_discount(const std::vector<double>& lambdas,
                                                       const std::vector<double>& values);

inline std::vector<double> default_lambda_schedule() { return {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}; }

struct EffectiveHamiltonianTable {
  std::vector<double> p;     // 1D grid (2D presets tabulate along a ray)
  std::vector<double> hbar;
  double p0 = 0.0;           // argmin (centroid of the near-minimal set)
  double hbar_min = 0.0;
  double convexity_violation = 0.0;  // max positive midpoint defect
  double lipschitz_slope = 0.0;      // max adjacent slope
  double max_spread = 0.0;           // worst per-entry extrapolation spread
  bool warn = false;
  double max_speed = 1.0;  // M_f of the control set used

  double operator()(double pp) const;  // piecewise-linear interpolant
};

// Vanishing-discount value of the periodic cell problem at covector p.
VanishingDiscountResult effective_hamiltonian_at(const HamiltonianSpec& spec_per, Vec p,
                                                 const std::vector<double>& lambda_schedule,
                                                 int torus_nodes = 400);

EffectiveHamiltonianTable tabulate(const HamiltonianSpec& spec_per, double p_min, double p_max,
                                   int n_p, const std::vector<double>& lambda_schedule,
                                   int torus_nodes = 400, int jobs = 1);

// Closed form for K = |p| in 1D: -inf lper on the flat piece, |p| - <lper>
// beyond it; mean and infimum come from the dense sampling statistics.
double analytic_hbar_1d(const PeriodicCost& per, double p);

struct PeriodicCorrector {
  GridField field;          // mean-zero
  double residual_median = 0.0;  // |H_per(y, p + Dchi) - hbar| over nodes
  double hbar = 0.0;
};

PeriodicCorrector periodic_corrector(const HamiltonianSpec& spec_per, Vec p, double lambda,
                                     int torus_nodes = 400);

}  // namespace hjhom
