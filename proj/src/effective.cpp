#include "hjhom/effective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hjhom/parallel.hpp"

namespace hjhom {

VanishingDiscountResult extrapolate_vanishing_discount(const std::vector<double>& lambdas,
                                                       const std::vector<double>& values) {
  if (lambdas.size() < 3 || lambdas.size() != values.size())
    throw std::invalid_argument("need at least three schedule points");
  for (size_t i = 1; i < lambdas.size(); ++i)
    if (lambdas[i] >= lambdas[i - 1])
      throw std::invalid_argument("lambda schedule must be strictly decreasing");

  VanishingDiscountResult out;
  out.lambdas = lambdas;
  out.raw = values;
  const size_t n = lambdas.size();
  // least-squares line through the last three points
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = n - 3; i < n; ++i) {
    sx += lambdas[i];
    sy += values[i];
    sxx += lambdas[i] * lambdas[i];
    sxy += lambdas[i] * values[i];
  }
  const double denom = 3.0 * sxx - sx * sx;
  const double slope = (3.0 * sxy - sx * sy) / denom;
  out.value = (sy - slope * sx) / 3.0;
  // two-point extrapolation through the last two points
  const double s2 = (values[n - 1] - values[n - 2]) / (lambdas[n - 1] - lambdas[n - 2]);
  const double a2 = values[n - 1] - s2 * lambdas[n - 1];
  out.spread = std::abs(out.value - a2);

  const double tol = 1e-3 * (1.0 + std::abs(out.value));
  int sign = 0;
  for (size_t i = 1; i < n; ++i) {
    const double d = values[i] - values[i - 1];
    if (std::abs(d) <= tol) continue;
    const int s = d > 0 ? 1 : -1;
    if (sign == 0)
      sign = s;
    else if (s != sign)
      out.warn_nonmonotone = true;
  }
  return out;
}

double EffectiveHamiltonianTable::operator()(double pp) const {
  if (pp <= p.front()) return hbar.front();
  if (pp >= p.back()) return hbar.back();
  const auto it = std::upper_bound(p.begin(), p.end(), pp);
  const size_t i = static_cast<size_t>(it - p.begin());
  const double t = (pp - p[i - 1]) / (p[i] - p[i - 1]);
  return (1.0 - t) * hbar[i - 1] + t * hbar[i];
}

VanishingDiscountResult effective_hamiltonian_at(const HamiltonianSpec& spec_per, Vec p,
                                                 const std::vector<double>& lambda_schedule,
                                                 int torus_nodes) {
  const GridField grid = make_torus_grid(spec_per.dim(), torus_nodes);
  std::vector<double> vals;
  vals.reserve(lambda_schedule.size());
  SolveOptions opts;
  std::vector<int> warm;
  for (double lam : lambda_schedule) {
    opts.warm_policy = warm.empty() ? nullptr : &warm;
    DiscountedSolve s = solve_discounted_periodic(spec_per, p, lam, grid, opts);
    vals.push_back(-lam * s.field.mean_active());
    warm = std::move(s.policy);
  }
  return extrapolate_vanishing_discount(lambda_schedule, vals);
}

EffectiveHamiltonianTable tabulate(const HamiltonianSpec& spec_per, double p_min, double p_max,
                                   int n_p, const std::vector<double>& lambda_schedule,
                                   int torus_nodes, int jobs) {
  if (n_p < 5) throw std::invalid_argument("tabulate: need at least 5 p points");
  EffectiveHamiltonianTable t;
  t.p.resize(n_p);
  t.hbar.resize(n_p);
  std::vector<double> spreads(n_p);
  std::vector<uint8_t> warns(n_p, 0);
  parallel_for(n_p, jobs, [&](int i) {
    t.p[i] = p_min + (p_max - p_min) * i / (n_p - 1);
    const Vec pv = spec_per.dim() == 1 ? vec1(t.p[i]) : vec2(t.p[i], 0.0);
    const VanishingDiscountResult r =
        effective_hamiltonian_at(spec_per, pv, lambda_schedule, torus_nodes);
    t.hbar[i] = r.value;
    spreads[i] = r.spread;
    warns[i] = r.warn_nonmonotone ? 1 : 0;
  });
  for (int i = 0; i < n_p; ++i) {
    t.max_spread = std::max(t.max_spread, spreads[i]);
    if (warns[i]) t.warn = true;
  }

  t.hbar_min = *std::min_element(t.hbar.begin(), t.hbar.end());

  // argmin: centroid of the near-minimal set; a flat stretch of the graph
  // (plateau) then lands in its middle instead of on extrapolation noise.
  const double plateau_tol = 1e-2;
  double psum = 0.0, cnt = 0.0;
  int first = -1, last = -1;
  for (int i = 0; i < n_p; ++i)
    if (t.hbar[i] <= t.hbar_min + plateau_tol) {
      if (first < 0) first = i;
      last = i;
      psum += t.p[i];
      cnt += 1.0;
    }
  t.p0 = psum / cnt;
  if (first == last && first > 0 && first < n_p - 1) {
    // isolated minimum: quadratic refinement through the neighbors
    const double y0 = t.hbar[first - 1], y1 = t.hbar[first], y2 = t.hbar[first + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom > 1e-14) {
      const double dp = t.p[1] - t.p[0];
      t.p0 = t.p[first] + 0.5 * dp * (y0 - y2) / denom;
    }
  }

  for (int i = 1; i + 1 < n_p; ++i)
    t.convexity_violation =
        std::max(t.convexity_violation, t.hbar[i] - 0.5 * (t.hbar[i - 1] + t.hbar[i + 1]));
  const double dp = t.p[1] - t.p[0];
  for (int i = 1; i < n_p; ++i)
    t.lipschitz_slope = std::max(t.lipschitz_slope, std::abs(t.hbar[i] - t.hbar[i - 1]) / dp);

  if (spec_per.separable)
    t.max_speed = spec_per.separable->kinetic_lipschitz;
  else
    t.max_speed = spec_per.control_form->controls.max_speed;
  return t;
}

double analytic_hbar_1d(const PeriodicCost& per, double p) {
  const double threshold = per.mean_value - per.inf_value;
  if (std::abs(p) <= threshold) return -per.inf_value;
  return std::abs(p) - per.mean_value;
}

PeriodicCorrector periodic_corrector(const HamiltonianSpec& spec, Vec p, double lambda,
                                     int torus_nodes) {
  HamiltonianSpec spec_per = spec;
  if (spec_per.separable) spec_per.separable->defect = make_defect_none(spec_per.dim());
  const GridField grid = make_torus_grid(spec_per.dim(), torus_nodes);
  DiscountedSolve s = solve_discounted_periodic(spec_per, p, lambda, grid);
  PeriodicCorrector out;
  out.field = s.field;
  const double mean = out.field.mean_active();
  for (double& v : out.field.values) v -= mean;
  const double residue = out.field.mean_active();  // second pass for exact mean zero
  for (double& v : out.field.values) v -= residue;
  out.hbar = -lambda * mean;

  // discrete residual |H_per(y, p + Dchi) - hbar| with central differences
  std::vector<double> res;
  const GridField& f = out.field;
  for (int j = 0; j < f.n[1]; ++j)
    for (int i = 0; i < f.n[0]; ++i) {
      const int ip = (i + 1) % f.n[0], im = (i - 1 + f.n[0]) % f.n[0];
      Vec grad = vec1((f.values[f.index(ip, j)] - f.values[f.index(im, j)]) / (2 * f.h));
      if (f.dim == 2) {
        const int jp = (j + 1) % f.n[1], jm = (j - 1 + f.n[1]) % f.n[1];
        grad[1] = (f.values[f.index(i, jp)] - f.values[f.index(i, jm)]) / (2 * f.h);
      }
      res.push_back(std::abs(eval_hamiltonian(spec_per, f.node(i, j), p + grad) - out.hbar));
    }
  std::nth_element(res.begin(), res.begin() + res.size() / 2, res.end());
  out.residual_median = res[res.size() / 2];
  return out;
}

}  // namespace hjhom
