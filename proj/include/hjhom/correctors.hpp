#pragma once

#include <vector>

#include "hjhom/effective.hpp"
#include "hjhom/ergodic.hpp"
#include "hjhom/solver.hpp"

namespace hjhom {

struct CorrectorField {
  GridField field;  // ball geometry, value 0 at the node nearest the origin
  double level = 0.0;  // E^R for w, hbar(p) for the piecewise corrector
  double residual_median = 0.0;
  double lipschitz = 0.0;  // discrete gradient sup norm
};

// w^R: normalized small-lambda solution of the state-constrained problem,
// with E^R extrapolated from the same lambda sweep.
CorrectorField corrector_w(const HamiltonianSpec& spec, double radius,
                           const std::vector<double>& lambda_schedule, double h);

struct GrowthReport {
  std::vector<double> radii;
  std::vector<double> m;  // min over the shell of w(y) - p0.y
  bool increasing = false;
  double min_value = 0.0;
};

// Radius ladder of m(r) = min_{|y| in [r, r+h]} (w^R(y) - p0.y): increasing
// beyond the defect when E > hbar(p0), bounded from below when E = hbar(p0).
GrowthReport check_growth(const CorrectorField& w, Vec p0, const std::vector<double>& radii);

struct PTildePair {
  double p = 0.0;
  double ptilde = 0.0;
  double e = 0.0;      // unit direction with (p - p0) e < 0
  double level = 0.0;  // hbar(p)
  bool degenerate = false;  // level sits on a flat plateau; ptilde is its edge
};

// The covector on the other side of p0 at the same hbar level, found by
// bisection on the tabulated interpolant (1e-6 in the ray parameter).
PTildePair find_ptilde(const EffectiveHamiltonianTable& table, double p);

// chi^R_{p,ptilde}: Dirichlet problem H(y, Dchi) = level on B_R with exit
// payoff min(p.y + chi_p(y), ptilde.y + chi_ptilde(y)). Refuses level <= E.
CorrectorField corrector_piecewise(const HamiltonianSpec& spec, const PTildePair& pair,
                                   double radius, const PeriodicCorrector& chi_p,
                                   const PeriodicCorrector& chi_ptilde, double ergodic_E,
                                   double h);

struct SandwichReport {
  double shift_c = 0.0;      // constant making w - c the defect-ball branch
  double lower_margin = 0.0; // min over nodes of chi^R - sigma  (want >= 0)
  double c2 = 0.0;           // max over nodes of chi^R - min(affine + chi_per)
};

// Checks sigma <= chi^R <= min(p.y + chi_p, ptilde.y + chi_ptilde) + c2
// with sigma = min(w - c, p.y + chi_p, ptilde.y + chi_ptilde).
SandwichReport check_sandwich(const CorrectorField& chi_r, const CorrectorField& w,
                              const PTildePair& pair, const PeriodicCorrector& chi_p,
                              const PeriodicCorrector& chi_ptilde, double defect_radius);

// max over the shell |y| in [r, r+h] of |chi^R - min(p.y, ptilde.y)| / r.
std::vector<double> sublinearity_ratios(const CorrectorField& chi_r, const PTildePair& pair,
                                        const std::vector<double>& radii);

// sup over f's active nodes inside |y| <= radius of |f - g| with g
// interpolated (grids may differ).
double sup_diff_on_ball(const GridField& f, const GridField& g, double radius);

}  // namespace hjhom
