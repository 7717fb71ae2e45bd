#include "hjhom/homogenized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hjhom {

namespace {

// Conjugate cost of the tabulated effective Hamiltonian along its radial
// profile: cost(s) = sup_r ( s r - hbar(r) ) on the tabulated range.
double table_conjugate(const EffectiveHamiltonianTable& table, double speed) {
  double best = -std::numeric_limits<double>::infinity();
  const double lo = 0.0;
  const double hi = std::max(std::abs(table.p.front()), std::abs(table.p.back()));
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double r = lo + (hi - lo) * i / n;
    const double h_r = 0.5 * (table(r) + table(-r));  // radial profile
    best = std::max(best, speed * r - h_r);
  }
  return best;
}

}  // namespace

HomogenizedSolution solve_homogenized(const EffectiveHamiltonianTable& table, double E,
                                      double alpha, int dim, double half_width, double h,
                                      const SolveOptions& opts) {
  if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
  if (E < table.hbar_min - 1e-2)
    throw std::invalid_argument("inconsistent inputs: E below min hbar");

  // effective control problem: speeds up to the table's observed slope,
  // conjugate running cost, no spatial dependence
  const double m_eff = std::max(table.lipschitz_slope, 1e-6);
  ControlSet controls =
      dim == 1 ? make_control_set_1d(m_eff, 41) : make_control_set_2d(m_eff, 32, 11);
  std::vector<double> control_cost(controls.velocities.size());
  for (size_t j = 0; j < controls.velocities.size(); ++j)
    control_cost[j] = table_conjugate(table, norm(controls.velocities[j]));

  GridField grid = make_box_grid(dim, half_width, h);
  DiscreteProblem prob = make_discrete_problem(
      grid, controls, control_cost, [](Vec) { return 0.0; }, alpha);
  const int origin = grid.nearest_node(vec1(0.0));
  prob.pinned_nodes.push_back(origin);
  prob.pinned_values.push_back(std::min(-E / alpha, -table.hbar_min / alpha));

  DiscountedSolve s = policy_iteration(prob, opts);

  HomogenizedSolution sol;
  sol.u = std::move(s.field);
  sol.E = E;
  sol.alpha = alpha;
  sol.table = table;
  sol.visible = defect_visible(E, table);
  sol.u_per_value = -table.hbar_min / alpha;
  sol.p0_nonzero = std::abs(table.p0) > 5e-2;
  return sol;
}

bool defect_visible(double E, const EffectiveHamiltonianTable& table, double tol) {
  return E > table.hbar_min + tol;
}

DecayReport check_infinity(const HomogenizedSolution& sol, const std::vector<double>& radii,
                           double exact_tol) {
  DecayReport rep;
  rep.radii = radii;
  const GridField& f = sol.u;
  for (double r : radii) {
    double worst = 0.0;
    for (int i = 0; i < f.size(); ++i) {
      if (!f.is_active(i)) continue;
      const double rr = norm(f.node(i));
      if (rr >= r && rr < r + f.h) worst = std::max(worst, std::abs(f.values[i] - sol.u_per_value));
    }
    rep.shell_error.push_back(worst);
  }
  for (size_t i = 0; i < radii.size(); ++i) {
    bool all_zero = true;
    for (size_t k = i; k < radii.size(); ++k)
      if (rep.shell_error[k] > exact_tol) all_zero = false;
    if (all_zero) {
      rep.exact_agreement_radius = radii[i];
      break;
    }
  }
  return rep;
}

Homogenized1D analytic_homogenized_1d(const PeriodicCost& per, const DefectCost& defect,
                                      double alpha) {
  if (per.dim != 1) throw std::invalid_argument("analytic_homogenized_1d: 1d only");
  if (std::abs(alpha - 1.0) > 1e-12)
    throw std::invalid_argument("analytic_homogenized_1d: closed form is stated for alpha = 1");

  Homogenized1D out;
  out.u_per = per.inf_value;
  const double mean = per.mean_value;
  const double inf_comp = composite_inf(per, defect);

  if (!(inf_comp < per.inf_value - 1e-9)) {
    out.mu = 0.0;
    out.u_at_origin = per.inf_value;
    const double c = per.inf_value;
    out.u = [c](double) { return c; };
    return out;
  }
  const double gap_per = mean - per.inf_value;
  const double gap_comp = mean - inf_comp;
  out.mu = gap_per <= 0.0 ? std::numeric_limits<double>::infinity()
                          : std::log(gap_comp / gap_per);
  out.u_at_origin = inf_comp;
  const double mu = out.mu;
  const double uper = per.inf_value;
  out.u = [mean, gap_comp, mu, uper](double x) {
    if (std::abs(x) >= mu) return uper;
    return mean - std::exp(-std::abs(x)) * gap_comp;
  };
  return out;
}

}  // namespace hjhom
