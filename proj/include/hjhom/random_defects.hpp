#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hjhom/control.hpp"
#include "hjhom/solver.hpp"

namespace hjhom {

// Counter-based indicator stream: X_k is a pure function of (seed, k), so
// enlarging the index window never changes earlier draws.
uint64_t counter_hash(uint64_t seed, int64_t k0, int64_t k1 = 0);
double counter_uniform(uint64_t seed, int64_t k0, int64_t k1 = 0);  // in (0,1)

enum class DensityMode { Fixed, Scaled };  // eta given, or eta = eta_bar * eps

struct LatticeRealization {
  int dim = 1;
  int kmin[2] = {0, 0};
  int kmax[2] = {0, 0};  // inclusive
  int q = 1;             // lattice spacing multiplier
  double eps = 0.0;
  DensityMode mode = DensityMode::Fixed;
  double eta = 0.0;      // effective Bernoulli parameter
  uint64_t seed = 0;
  std::vector<uint8_t> x;  // indicators, row-major over the window

  int count0() const { return kmax[0] - kmin[0] + 1; }
  int count1() const { return dim == 2 ? kmax[1] - kmin[1] + 1 : 1; }
  uint8_t indicator(int k0, int k1 = 0) const;
  double frequency() const;
};

LatticeRealization sample_lattice(DensityMode mode, double eta_or_etabar, double eps,
                                  const int kmin[2], const int kmax[2], int q, uint64_t seed,
                                  int dim = 1);

// Window index bound needed so that |u_eps - ubar| <= tol at the edge.
int required_window(const std::function<double(double)>& u_eps_abs_excess, double q_eps,
                    double max_x, double tol = 1e-3);

// min over the window of X_k u_eps(x - eps q k) + (1 - X_k) ubar.
// Throws when the window is too small for the requested x.
double u_random_min(Vec x, const LatticeRealization& real,
                    const std::function<double(Vec)>& u_eps, double ubar, double edge_tol = 1e-3);

// Superposed-cost solve used as the oracle against the min formula (1D).
DiscountedSolve direct_random_solve(const LatticeRealization& real, const PeriodicCost& per,
                                    const DefectCost& defect, double alpha, double half_width,
                                    double h, const SolveOptions& opts = {});

struct LimitLawSamples {
  std::vector<double> z;  // sorted
  double eta = 0.0;
  double eps = 0.0;
  bool two_sided = false;

  double empirical_cdf(double t) const;
  // Exact finite-eps law: P(Z <= t) = (1-eta)^ceil(-ln t / eps) one-sided,
  // squared for the two-sided max of independent draws.
  double analytic_cdf(double t) const;
};

// Z = e^{-K eps} for the first-success index K ~ geometric(eta); two-sided
// variant takes the max of two independent one-sided draws.
LimitLawSamples limit_law_mc(DensityMode mode, double eps, double eta_or_etabar, int n,
                             uint64_t seed, bool two_sided = false);

struct RegimeSummary {
  // regime (i), fixed eta: fraction of realizations with u(0) near l0(0)
  double fraction_near_defect = 0.0;
  // regime (ii), eta << eps: fraction near the unperturbed value
  double fraction_near_zero = 0.0;
  // regime (iii), eta = eta_bar eps: observed spread of u(0)
  double min_u0 = 0.0, max_u0 = 0.0;
  int realizations = 0;
};

RegimeSummary regime_summary(const DefectCost& defect, double eps, double eta_fixed,
                             double eta_small, double eta_bar, int realizations, uint64_t seed,
                             double tol = 0.05);

struct SeparationReport {
  double m_lipschitz = 0.0;   // global discrete gradient bound of u_eps
  double delta = 0.0;         // min radial derivative on the inner window
  double window_radius = 0.0;
  double q_lower_bound = 0.0;  // 3 + M/delta
  int chosen_q = -1;           // smallest passing candidate, −1 when none
  std::vector<int> candidates;
  std::vector<uint8_t> passed;
  double u_at_origin = 0.0;
  double min_defect_ball = 0.0;  // min of u_eps over |x| <= eps
  double symmetry_deviation = 0.0;  // vs pi/4 rotation
};

// Measures M and delta on the single-defect 2D solution and returns the
// smallest candidate q > 3 + M/delta for which both translate inequalities
// hold nodewise on the two supports.
//
// Only the radially symmetric setting is implemented. A non-radial
// Hamiltonian sandwiched between two radial ones that agree with it at
// p = 0 (with defects ordered pointwise and equal at the origin) admits
// the same construction with a large enough q; the sandwich shares the
// ergodic constant, so the checks below apply verbatim to either bound.
SeparationReport verify_separation_2d(const GridField& u_eps, double eps, double defect_radius,
                                      const std::vector<int>& q_candidates);

}  // namespace hjhom
