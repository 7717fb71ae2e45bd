#pragma once

#include <functional>
#include <utility>

#include "hjhom/costs.hpp"

namespace hjhom {

// Adaptive Simpson quadrature; tol is an absolute error target.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-8);

// Bounded solution of u + |u'| = l0(x/eps) for a single downward defect
// with a unique interior minimum:
//   x < 0:  e^x  ( l0(0) + int_x^0 e^{-t} l0(t/eps) dt )
//   x > 0:  e^-x ( l0(0) + int_0^x e^{ t} l0(t/eps) dt )
// Refuses defects without the single-minimum flags.
double u_eps_flat(const DefectCost& defect, double eps, double x);

// Derivative of the closed form, used for residual checks.
double u_eps_flat_derivative(const DefectCost& defect, double eps, double x);

// Upward (nonnegative bump) variant; the limit vanishes as eps -> 0.
double u_eps_flat_upward(const DefectCost& defect, double eps, double x);

struct WLambdaFlat {
  double value = 0.0;       // w_lambda(x)
  double normalized = 0.0;  // w_lambda(x) - w_lambda(0)
  double limit = 0.0;       // lambda -> 0 limit of the normalized value
};

// Rescaled discounted solution lambda w + |w'| = l0 on the line, flat
// environment. limit = -l0(0) x + int_0^x l0.
WLambdaFlat w_lambda_flat(const DefectCost& defect, double lambda, double x);

struct PeriodicAveraged {
  std::function<double(double)> g;  // e^-x int_-inf^x e^t lper(t/eps) dt
  std::function<double(double)> h;  // e^x  int_x^inf  e^-t lper(t/eps) dt
  double g_mean = 0.0;              // equals <lper> up to quadrature error
};

// eps-periodic smoothing kernels of the periodic cost; the improper tails
// collapse through the geometric series of one-period integrals.
PeriodicAveraged g_h_periodic(const PeriodicCost& per, double eps);

// Two-defect solution min(u_eps(x), u_eps(x - eps)); requires an even
// defect (separation q*eps would otherwise be needed).
double two_defect_min(const DefectCost& defect, double eps, double x);

// Tabulates any closed-form evaluator on n+1 uniform points of [a, b].
void dump_evaluator_csv(const std::function<double(double)>& f, double a, double b, int n,
                        const std::string& path);

}  // namespace hjhom
