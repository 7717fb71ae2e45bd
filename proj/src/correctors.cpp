#include "hjhom/correctors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hjhom {

namespace {

double shell_min(const GridField& f, double r, double width,
                 const std::function<double(Vec)>& value) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.size(); ++i) {
    if (!f.is_active(i)) continue;
    const double rr = norm(f.node(i));
    if (rr >= r && rr <= r + width) m = std::min(m, value(f.node(i)));
  }
  return m;
}

}  // namespace

CorrectorField corrector_w(const HamiltonianSpec& spec, double radius,
                           const std::vector<double>& lambda_schedule, double h) {
  SolveOptions opts;
  std::vector<int> warm;
  std::vector<double> avgs;
  DiscountedSolve last;
  const double r0 = spec.separable ? spec.separable->defect.support_radius : 0.5;
  const double avg_radius = std::max(r0, 0.5);
  for (double lam : lambda_schedule) {
    opts.warm_policy = warm.empty() ? nullptr : &warm;
    last = solve_discounted_constrained(spec, lam, radius, h, opts);
    double sum = 0.0;
    long cnt = 0;
    for (int i = 0; i < last.field.size(); ++i)
      if (last.field.is_active(i) && norm(last.field.node(i)) <= avg_radius) {
        sum += last.field.values[i];
        ++cnt;
      }
    avgs.push_back(-lam * sum / cnt);
    warm = last.policy;
  }
  const double e_r = extrapolate_vanishing_discount(lambda_schedule, avgs).value;

  CorrectorField out;
  out.field = last.field;
  const int origin = out.field.nearest_node(vec1(0.0));
  const double w0 = out.field.values[origin];
  for (int i = 0; i < out.field.size(); ++i)
    if (out.field.is_active(i)) out.field.values[i] -= w0;
  out.level = e_r;
  out.lipschitz = max_gradient_norm(out.field);

  // interior residual |H(y, Dw) - E^R| by central differences
  std::vector<double> res;
  const GridField& f = out.field;
  for (int j = 0; j < f.n[1]; ++j)
    for (int i = 1; i + 1 < f.n[0]; ++i) {
      const int id = f.index(i, j);
      if (!f.is_active(id)) continue;
      if (!f.is_active(f.index(i - 1, j)) || !f.is_active(f.index(i + 1, j))) continue;
      Vec grad = vec1((f.values[f.index(i + 1, j)] - f.values[f.index(i - 1, j)]) / (2 * f.h));
      if (f.dim == 2) {
        if (j == 0 || j + 1 == f.n[1]) continue;
        if (!f.is_active(f.index(i, j - 1)) || !f.is_active(f.index(i, j + 1))) continue;
        grad[1] = (f.values[f.index(i, j + 1)] - f.values[f.index(i, j - 1)]) / (2 * f.h);
      }
      res.push_back(std::abs(eval_hamiltonian(spec, f.node(id), grad) - e_r));
    }
  if (!res.empty()) {
    std::nth_element(res.begin(), res.begin() + res.size() / 2, res.end());
    out.residual_median = res[res.size() / 2];
  }
  return out;
}

GrowthReport check_growth(const CorrectorField& w, Vec p0, const std::vector<double>& radii) {
  GrowthReport rep;
  rep.radii = radii;
  const GridField& f = w.field;
  for (double r : radii)
    rep.m.push_back(
        shell_min(f, r, f.h, [&](Vec y) { return interpolate(f, y) - dot(p0, y); }));
  rep.increasing = true;
  for (size_t i = 1; i < rep.m.size(); ++i)
    if (rep.m[i] <= rep.m[i - 1] + 1e-9) rep.increasing = false;
  rep.min_value = *std::min_element(rep.m.begin(), rep.m.end());
  return rep;
}

PTildePair find_ptilde(const EffectiveHamiltonianTable& table, double p) {
  PTildePair pair;
  pair.p = p;
  pair.level = table(p);
  const double scale = 1.0 + std::abs(pair.level);
  if (pair.level <= table.hbar_min + 1e-9 * scale)
    throw std::invalid_argument("find_ptilde: level does not exceed min hbar");
  const double dir = p > table.p0 ? -1.0 : 1.0;  // opposite side of p0
  pair.e = dir;

  // march outward until the level is crossed
  const double dp = table.p[1] - table.p[0];
  double t_lo = 0.0, t_hi = 0.0;
  bool bracketed = false;
  for (double t = dp; table.p0 + dir * t >= table.p.front() - 1e-12 &&
                      table.p0 + dir * t <= table.p.back() + 1e-12;
       t += dp) {
    if (table(table.p0 + dir * t) >= pair.level) {
      t_hi = t;
      t_lo = t - dp;
      bracketed = true;
      break;
    }
  }
  if (!bracketed) throw std::invalid_argument("find_ptilde: level not reached inside the table");
  while (t_hi - t_lo > 1e-6) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (table(table.p0 + dir * mid) >= pair.level)
      t_hi = mid;
    else
      t_lo = mid;
  }
  pair.ptilde = table.p0 + dir * 0.5 * (t_lo + t_hi);

  // plateau at the level: the flat stretch extends inward from the crossing;
  // the bisection point already is its outer edge, so only flag it
  const double flat_tol = 1e-3 * scale;
  const double t_edge = 0.5 * (t_lo + t_hi);
  double extent = 0.0;
  for (double t = t_edge; t >= 0.0; t -= 0.25 * dp) {
    if (std::abs(table(table.p0 + dir * t) - pair.level) > flat_tol) break;
    extent = t_edge - t;
  }
  pair.degenerate = extent > 1.5 * dp;
  return pair;
}

CorrectorField corrector_piecewise(const HamiltonianSpec& spec, const PTildePair& pair,
                                   double radius, const PeriodicCorrector& chi_p,
                                   const PeriodicCorrector& chi_ptilde, double ergodic_E,
                                   double h) {
  if (pair.level <= ergodic_E)
    throw std::invalid_argument("corrector_piecewise: requires hbar(p) > E");
  auto data = [&](Vec y) {
    return std::min(pair.p * y[0] + interpolate(chi_p.field, y),
                    pair.ptilde * y[0] + interpolate(chi_ptilde.field, y));
  };
  CorrectorField out;
  SolveReport rep;
  out.field = solve_dirichlet_level(spec, pair.level, radius, h, data, &rep);
  out.level = pair.level;
  out.residual_median = rep.final_update;
  out.lipschitz = max_gradient_norm(out.field);
  return out;
}

SandwichReport check_sandwich(const CorrectorField& chi_r, const CorrectorField& w,
                              const PTildePair& pair, const PeriodicCorrector& chi_p,
                              const PeriodicCorrector& chi_ptilde, double defect_radius) {
  auto affine_min = [&](Vec y) {
    return std::min(pair.p * y[0] + interpolate(chi_p.field, y),
                    pair.ptilde * y[0] + interpolate(chi_ptilde.field, y));
  };
  const GridField& f = chi_r.field;

  // pick c so that w - c sits strictly below both affine branches on the
  // defect ball (plus one unit), making sigma equal w - c there
  SandwichReport rep;
  double c = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.size(); ++i) {
    if (!f.is_active(i)) continue;
    const Vec y = f.node(i);
    if (norm(y) <= defect_radius + 1.0)
      c = std::max(c, interpolate(w.field, y) - affine_min(y));
  }
  rep.shift_c = c + 1.0;

  rep.lower_margin = std::numeric_limits<double>::infinity();
  rep.c2 = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.size(); ++i) {
    if (!f.is_active(i)) continue;
    const Vec y = f.node(i);
    if (norm(y) > w.field.geom.radius) continue;
    const double sigma = std::min(interpolate(w.field, y) - rep.shift_c, affine_min(y));
    rep.lower_margin = std::min(rep.lower_margin, f.values[i] - sigma);
    rep.c2 = std::max(rep.c2, f.values[i] - affine_min(y));
  }
  return rep;
}

std::vector<double> sublinearity_ratios(const CorrectorField& chi_r, const PTildePair& pair,
                                        const std::vector<double>& radii) {
  std::vector<double> out;
  const GridField& f = chi_r.field;
  for (double r : radii) {
    double worst = 0.0;
    for (int i = 0; i < f.size(); ++i) {
      if (!f.is_active(i)) continue;
      const double rr = norm(f.node(i));
      if (rr < r || rr > r + f.h) continue;
      const Vec y = f.node(i);
      const double affine = std::min(pair.p * y[0], pair.ptilde * y[0]);
      worst = std::max(worst, std::abs(f.values[i] - affine) / r);
    }
    out.push_back(worst);
  }
  return out;
}

double sup_diff_on_ball(const GridField& f, const GridField& g, double radius) {
  double m = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    if (!f.is_active(i)) continue;
    const Vec y = f.node(i);
    if (norm(y) > radius) continue;
    m = std::max(m, std::abs(f.values[i] - interpolate(g, y)));
  }
  return m;
}

}  // namespace hjhom
