#pragma once

#include <vector>

#include "hjhom/control.hpp"
#include "hjhom/effective.hpp"

namespace hjhom {

struct TruncatedErgodic {
  double value = 0.0;   // E^R
  double spread = 0.0;
  bool warn = false;    // extrapolation spread above 5e-2
  std::vector<double> lambdas;
  std::vector<double> raw;  // interior averages of -lambda w^{lambda,R}
};

struct ErgodicEstimate {
  std::vector<double> radii;
  std::vector<TruncatedErgodic> per_radius;
  double value = 0.0;  // E
  bool converged = false;
  double monotonicity_violation = 0.0;  // max of E^{R_small} - E^{R_large}
};

// E^R from the state-constrained problem on B_R: vanishing-discount
// extrapolation of -lambda w^{lambda,R} averaged over the defect ball
// (the interior average damps boundary-layer noise).
TruncatedErgodic ergodic_constant_truncated(const HamiltonianSpec& spec, double radius,
                                            const std::vector<double>& lambda_schedule, double h);

// R-sweep; the estimate is the last E^R once successive differences fall
// below 1e-2, otherwise flagged unconverged.
ErgodicEstimate ergodic_constant(const HamiltonianSpec& spec, const std::vector<double>& radii,
                                 const std::vector<double>& lambda_schedule, double h,
                                 int jobs = 1);

// E = -inf(lper + l0) for K = |p| in 1D; valid only for downward defects.
double analytic_E_1d(const PeriodicCost& per, const DefectCost& defect);

// E = hbar(0) - l0(0) in the radially symmetric setting.
double analytic_E_radial(double hbar_at_zero, const DefectCost& defect);

}  // namespace hjhom
