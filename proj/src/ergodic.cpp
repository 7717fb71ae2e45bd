#include "hjhom/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hjhom/parallel.hpp"

namespace hjhom {

namespace {

double interior_average(const GridField& w, double avg_radius) {
  double sum = 0.0;
  long cnt = 0;
  for (int i = 0; i < w.size(); ++i) {
    if (!w.is_active(i)) continue;
    if (norm(w.node(i)) <= avg_radius) {
      sum += w.values[i];
      ++cnt;
    }
  }
  if (cnt == 0) throw std::logic_error("interior average over empty set");
  return sum / cnt;
}

double defect_support_radius(const HamiltonianSpec& spec) {
  return spec.separable ? spec.separable->defect.support_radius : 0.5;
}

}  // namespace

TruncatedErgodic ergodic_constant_truncated(const HamiltonianSpec& spec, double radius,
                                            const std::vector<double>& lambda_schedule, double h) {
  const double r0 = defect_support_radius(spec);
  if (radius <= r0) throw std::invalid_argument("truncation radius must exceed the defect support");
  const double avg_radius = std::max(r0, 0.5);

  std::vector<double> vals;
  vals.reserve(lambda_schedule.size());
  SolveOptions opts;
  std::vector<int> warm;
  for (double lam : lambda_schedule) {
    opts.warm_policy = warm.empty() ? nullptr : &warm;
    DiscountedSolve s = solve_discounted_constrained(spec, lam, radius, h, opts);
    vals.push_back(interior_average(s.field, avg_radius) * -lam);
    warm = std::move(s.policy);
  }
  const VanishingDiscountResult fit = extrapolate_vanishing_discount(lambda_schedule, vals);
  TruncatedErgodic out;
  out.value = fit.value;
  out.spread = fit.spread;
  out.warn = fit.spread > 5e-2;
  out.lambdas = lambda_schedule;
  out.raw = vals;
  return out;
}

ErgodicEstimate ergodic_constant(const HamiltonianSpec& spec, const std::vector<double>& radii,
                                 const std::vector<double>& lambda_schedule, double h, int jobs) {
  if (radii.size() < 3) throw std::invalid_argument("R sweep needs at least three radii");
  for (size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw std::invalid_argument("R sweep must increase");

  ErgodicEstimate est;
  est.radii = radii;
  est.per_radius.resize(radii.size());
  parallel_for(static_cast<int>(radii.size()), jobs, [&](int i) {
    est.per_radius[i] = ergodic_constant_truncated(spec, radii[i], lambda_schedule, h);
  });

  est.value = est.per_radius.back().value;
  est.converged = true;
  for (size_t i = 1; i < radii.size(); ++i) {
    const double step = std::abs(est.per_radius[i].value - est.per_radius[i - 1].value);
    if (i + 1 == radii.size() && step > 1e-2) est.converged = false;
    est.monotonicity_violation = std::max(
        est.monotonicity_violation, est.per_radius[i - 1].value - est.per_radius[i].value);
  }
  return est;
}

double analytic_E_1d(const PeriodicCost& per, const DefectCost& defect) {
  if (per.dim != 1) throw std::invalid_argument("analytic_E_1d: 1d only");
  if (!downward_defect(per, defect))
    throw std::invalid_argument("analytic_E_1d: formula requires a downward defect");
  return -composite_inf(per, defect);
}

double analytic_E_radial(double hbar_at_zero, const DefectCost& defect) {
  return hbar_at_zero - defect.value_at_origin;
}

}  // namespace hjhom
