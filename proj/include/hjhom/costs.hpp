#pragma once

#include <functional>
#include <string>

#include "hjhom/vec.hpp"

namespace hjhom {

using ScalarField = std::function<double(Vec)>;

// Running cost of the periodic environment, 1-periodic in every coordinate.
// Bounds and the dense-sampling statistics are frozen at construction so
// that downstream formulas (effective Hamiltonian, ergodic constants) have
// an oracle independent of any PDE solve.
struct PeriodicCost {
  int dim = 1;
  ScalarField eval;
  double bound = 0.0;       // sup |l_per|
  double inf_value = 0.0;   // dense-sampling infimum
  double mean_value = 0.0;  // cell average
  double lipschitz = 0.0;
  std::string name;

  double operator()(Vec y) const { return eval(y); }
};

// Compactly supported perturbation of the environment.
struct DefectCost {
  int dim = 1;
  ScalarField eval;
  double support_radius = 0.5;
  bool nonpositive = false;
  bool even_symmetric = false;
  bool single_extremum_at_origin = false;
  double value_at_origin = 0.0;
  std::string name;

  double operator()(Vec y) const { return eval(y); }
};

// Dense sampling statistics used as the independent oracle: samples_per_unit
// points per unit interval plus golden-section refinement near the extremum.
struct SampleStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;  // trapezoid average over the sampled interval
  double argmin = 0.0;
};

SampleStats sample_statistics_1d(const std::function<double(double)>& f, double a, double b,
                                 int samples = 10000, double tol = 1e-6);

// Statistics of l_per over one period (1D) or one cell (2D, tensor sampling).
SampleStats periodic_statistics(const ScalarField& f, int dim, int samples_per_axis = 10000);

PeriodicCost make_periodic_zero(int dim = 1);
PeriodicCost make_periodic_constant(double c, int dim = 1);
PeriodicCost make_periodic_sin(int dim = 1);  // sin(2*pi*y_1)
PeriodicCost make_periodic_from_samples(const std::string& csv_path);

// Canonical defect: -depth * cos^2(pi*|y|) on |y| <= 1/2, zero outside.
// C^1, even, single extremum at the origin; orientation +1 flips it upward.
DefectCost make_defect_cos2(double depth, int dim = 1, bool upward = false);
DefectCost make_defect_none(int dim = 1);
DefectCost make_defect_from_samples(const std::string& csv_path);

// l = l_per + l0.
ScalarField composite_cost(const PeriodicCost& per, const DefectCost& defect);

double composite_inf(const PeriodicCost& per, const DefectCost& defect, int samples = 10000);

// inf(l_per + l0) < inf l_per, tested by dense sampling.
bool downward_defect(const PeriodicCost& per, const DefectCost& defect, double tol = 1e-9);

// Max periodicity violation |f(y+e_i) - f(y)| over sample points.
double periodicity_violation(const PeriodicCost& per, int samples = 257);

// Max |l0| outside the stated support radius over sample points.
double support_violation(const DefectCost& defect, int samples = 257);

}  // namespace hjhom
