#include "hjhom/random_defects.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hjhom/oracles1d.hpp"

namespace hjhom {

namespace {

uint64_t splitmix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

uint64_t zigzag(int64_t k) { return (static_cast<uint64_t>(k) << 1) ^ (k < 0 ? ~0ull : 0ull); }

}  // namespace

uint64_t counter_hash(uint64_t seed, int64_t k0, int64_t k1) {
  uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ zigzag(k0));
  h = splitmix64(h ^ zigzag(k1));
  return h;
}

double counter_uniform(uint64_t seed, int64_t k0, int64_t k1) {
  return (static_cast<double>(counter_hash(seed, k0, k1) >> 11) + 0.5) * 0x1.0p-53;
}

uint8_t LatticeRealization::indicator(int k0, int k1) const {
  if (k0 < kmin[0] || k0 > kmax[0]) return 0;
  if (dim == 2 && (k1 < kmin[1] || k1 > kmax[1])) return 0;
  const int i = k0 - kmin[0];
  const int j = dim == 2 ? k1 - kmin[1] : 0;
  return x[i + count0() * j];
}

double LatticeRealization::frequency() const {
  double s = 0.0;
  for (uint8_t v : x) s += v;
  return s / x.size();
}

LatticeRealization sample_lattice(DensityMode mode, double eta_or_etabar, double eps,
                                  const int kmin[2], const int kmax[2], int q, uint64_t seed,
                                  int dim) {
  LatticeRealization r;
  r.dim = dim;
  r.kmin[0] = kmin[0];
  r.kmax[0] = kmax[0];
  r.kmin[1] = kmin[1];
  r.kmax[1] = kmax[1];
  r.q = q;
  r.eps = eps;
  r.mode = mode;
  r.seed = seed;
  r.eta = mode == DensityMode::Fixed ? eta_or_etabar : eta_or_etabar * eps;
  if (!(r.eta >= 0.0 && r.eta <= 1.0))
    throw std::invalid_argument("sample_lattice: parameter must land in [0, 1]");
  r.x.resize(static_cast<size_t>(r.count0()) * r.count1());
  for (int j = 0; j < r.count1(); ++j)
    for (int i = 0; i < r.count0(); ++i) {
      const int64_t k0 = r.kmin[0] + i;
      const int64_t k1 = dim == 2 ? r.kmin[1] + j : 0;
      r.x[i + r.count0() * j] = counter_uniform(seed, k0, k1) < r.eta ? 1 : 0;
    }
  return r;
}

int required_window(const std::function<double(double)>& u_eps_abs_excess, double q_eps,
                    double max_x, double tol) {
  int k = 1;
  while (u_eps_abs_excess(k * q_eps - max_x) > tol && k < 10000000) ++k;
  return k;
}

double u_random_min(Vec x, const LatticeRealization& real,
                    const std::function<double(Vec)>& u_eps, double ubar, double edge_tol) {
  const double step = real.eps * real.q;
  // edge check: the truncated infimum must already have settled at ubar
  for (int side = 0; side < 2; ++side) {
    const double edge = (side == 0 ? real.kmin[0] : real.kmax[0]) * step;
    Vec probe = x;
    probe[0] -= edge;
    if (std::abs(u_eps(probe) - ubar) > edge_tol) {
      const int needed = required_window(
          [&](double d) { return std::abs(u_eps(vec1(d)) - ubar); }, step, std::abs(x[0]),
          edge_tol);
      throw std::invalid_argument("u_random_min: window too small for this x, need |k| >= " +
                                  std::to_string(needed));
    }
  }
  double best = ubar;
  for (int j = 0; j < real.count1(); ++j)
    for (int i = 0; i < real.count0(); ++i) {
      const int k0 = real.kmin[0] + i;
      const int k1 = real.dim == 2 ? real.kmin[1] + j : 0;
      const uint8_t on = real.x[i + real.count0() * j];
      Vec shifted = x;
      shifted[0] -= step * k0;
      if (real.dim == 2) shifted[1] -= step * k1;
      best = std::min(best, on ? u_eps(shifted) : ubar);
    }
  return best;
}

DiscountedSolve direct_random_solve(const LatticeRealization& real, const PeriodicCost& per,
                                    const DefectCost& defect, double alpha, double half_width,
                                    double h, const SolveOptions& opts) {
  if (real.dim != 1) throw std::invalid_argument("direct_random_solve: 1d oracle path");
  const double eps = real.eps;
  if (half_width < real.kmax[0] * real.q * eps || -half_width > real.kmin[0] * real.q * eps)
    throw std::invalid_argument("direct_random_solve: domain must cover the realization window");

  SeparableSpec s;
  s.dim = 1;
  s.kinetic = [](Vec p) { return norm(p); };
  s.kinetic_lipschitz = 1.0;
  s.periodic = per;
  s.defect = make_defect_none(1);
  s.name = "random-superposition";
  HamiltonianSpec spec = make_separable(s);

  // cost at macroscopic x: lper(x/eps) + sum_k X_k l0(x/eps - q k); the
  // supports are disjoint, so only the nearest lattice site contributes
  ControlFormSpec cf = to_control_form(*spec.separable);
  auto perev = per.eval;
  auto defev = defect.eval;
  const LatticeRealization lattice = real;
  auto cost = [perev, defev, lattice, eps](Vec x) {
    const double y = x[0] / eps;
    const double kf = std::round(y / lattice.q);
    const int k = static_cast<int>(kf);
    double v = perev(vec1(y));
    if (lattice.indicator(k)) v += defev(vec1(y - lattice.q * kf));
    return v;
  };

  const GridField grid = make_box_grid(1, half_width, h);
  DiscreteProblem prob = make_discrete_problem(grid, cf.controls, cf.control_cost, cost, alpha);
  return policy_iteration(prob, opts);
}

double LimitLawSamples::empirical_cdf(double t) const {
  return static_cast<double>(std::upper_bound(z.begin(), z.end(), t) - z.begin()) / z.size();
}

double LimitLawSamples::analytic_cdf(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double k = std::ceil(-std::log(t) / eps - 1e-12);
  const double one_sided = std::pow(1.0 - eta, k);
  return two_sided ? one_sided * one_sided : one_sided;
}

LimitLawSamples limit_law_mc(DensityMode mode, double eps, double eta_or_etabar, int n,
                             uint64_t seed, bool two_sided) {
  if (n < 10000) throw std::invalid_argument("limit_law_mc: need at least 1e4 samples");
  LimitLawSamples out;
  out.eps = eps;
  out.eta = mode == DensityMode::Fixed ? eta_or_etabar : eta_or_etabar * eps;
  out.two_sided = two_sided;
  if (!(out.eta > 0.0 && out.eta < 1.0))
    throw std::invalid_argument("limit_law_mc: parameter must land in (0, 1)");
  const double log1m = std::log1p(-out.eta);
  out.z.resize(n);
  for (int i = 0; i < n; ++i) {
    // geometric first-success index via inversion
    const double u1 = counter_uniform(seed, i, 0);
    const int64_t k1 = static_cast<int64_t>(std::floor(std::log(u1) / log1m));
    double z = std::exp(-static_cast<double>(k1) * eps);
    if (two_sided) {
      const double u2 = counter_uniform(seed, i, 1);
      const int64_t k2 = static_cast<int64_t>(std::floor(std::log(u2) / log1m));
      z = std::max(z, std::exp(-static_cast<double>(k2) * eps));
    }
    out.z[i] = z;
  }
  std::sort(out.z.begin(), out.z.end());
  return out;
}

RegimeSummary regime_summary(const DefectCost& defect, double eps, double eta_fixed,
                             double eta_small, double eta_bar, int realizations, uint64_t seed,
                             double tol) {
  RegimeSummary out;
  out.realizations = realizations;
  const double l00 = defect.value_at_origin;
  auto u1 = [&](Vec x) { return u_eps_flat(defect, eps, x[0]); };

  // window wide enough that e^{-W} is negligible next to tol
  const int kwin = static_cast<int>(std::ceil(9.0 / eps));
  const int kmin[2] = {-kwin, 0}, kmax[2] = {kwin, 0};

  int near_defect = 0, near_zero = 0;
  out.min_u0 = 0.0;
  out.max_u0 = l00;
  for (int r = 0; r < realizations; ++r) {
    const LatticeRealization a =
        sample_lattice(DensityMode::Fixed, eta_fixed, eps, kmin, kmax, 1, seed + 3 * r);
    if (std::abs(u_random_min(vec1(0.0), a, u1, 0.0) - l00) <= tol) ++near_defect;

    const LatticeRealization b =
        sample_lattice(DensityMode::Fixed, eta_small, eps, kmin, kmax, 1, seed + 3 * r + 1);
    if (std::abs(u_random_min(vec1(0.0), b, u1, 0.0)) <= tol) ++near_zero;

    const LatticeRealization c =
        sample_lattice(DensityMode::Scaled, eta_bar, eps, kmin, kmax, 1, seed + 3 * r + 2);
    const double v = u_random_min(vec1(0.0), c, u1, 0.0);
    out.min_u0 = std::min(out.min_u0, v);
    out.max_u0 = std::max(out.max_u0, v);
  }
  out.fraction_near_defect = static_cast<double>(near_defect) / realizations;
  out.fraction_near_zero = static_cast<double>(near_zero) / realizations;
  return out;
}

SeparationReport verify_separation_2d(const GridField& u_eps, double eps, double defect_radius,
                                      const std::vector<int>& q_candidates) {
  if (u_eps.dim != 2) throw std::invalid_argument("verify_separation_2d: needs a 2d field");
  SeparationReport rep;
  rep.candidates = q_candidates;
  rep.passed.assign(q_candidates.size(), 0);

  const GridField& f = u_eps;
  const double ubar = f.values[f.nearest_node(vec2(f.geom.radius * 0.95, 0.0))];
  rep.u_at_origin = f.values[f.nearest_node(vec2(0.0, 0.0))];
  rep.m_lipschitz = max_gradient_norm(f);

  // min of u over the defect ball
  rep.min_defect_ball = std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.size(); ++i)
    if (norm(f.node(i)) <= eps) rep.min_defect_ball = std::min(rep.min_defect_ball, f.values[i]);

  // inner window: shells where u stays clearly below the far-field level
  const double beta = 0.25 * (ubar - rep.u_at_origin);
  double r_win = eps;
  for (double r = eps; r < f.geom.radius - 4 * f.h; r += f.h) {
    double shell_max = -std::numeric_limits<double>::infinity();
    for (double th = 0.0; th < 2 * 3.14159265358979; th += 0.1)
      shell_max = std::max(shell_max, interpolate(f, vec2(r * std::cos(th), r * std::sin(th))));
    if (shell_max > ubar - beta) break;
    r_win = r;
  }
  rep.window_radius = r_win;

  // min radial derivative on eps <= |x| <= r_win
  rep.delta = std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.size(); ++i) {
    const Vec y = f.node(i);
    const double r = norm(y);
    if (r < eps || r > r_win) continue;
    const Vec inner = ((r - f.h) / r) * y;
    rep.delta = std::min(rep.delta, (f.values[i] - interpolate(f, inner)) / f.h);
  }
  rep.q_lower_bound = 3.0 + rep.m_lipschitz / rep.delta;

  // symmetry: compare with the pi/4-rotated field
  const double c45 = std::sqrt(0.5);
  rep.symmetry_deviation = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const Vec y = f.node(i);
    if (norm(y) > f.geom.radius * c45 - 2 * f.h) continue;
    const Vec rot = vec2(c45 * (y[0] - y[1]), c45 * (y[0] + y[1]));
    rep.symmetry_deviation =
        std::max(rep.symmetry_deviation, std::abs(f.values[i] - interpolate(f, rot)));
  }

  // translate inequalities on the two supports, nearest lattice direction
  for (size_t qi = 0; qi < q_candidates.size(); ++qi) {
    const int q = q_candidates[qi];
    if (q <= rep.q_lower_bound) continue;
    const double shift = eps * q;
    if (shift + eps * defect_radius + 2 * f.h > f.geom.radius) continue;  // translate leaves grid
    bool ok = true;
    for (int i = 0; i < f.size() && ok; ++i) {
      const Vec y = f.node(i);
      if (norm(y) > eps * defect_radius) continue;
      // support at the origin: u(y) <= u(y - shift e1)
      if (f.values[i] > interpolate(f, vec2(y[0] - shift, y[1])) + 1e-12) ok = false;
      // support at shift e1: u(z) >= u(z - shift e1) flips into the same
      // nodes by substituting z = y + shift e1
      if (interpolate(f, vec2(y[0] + shift, y[1])) < f.values[i] - 1e-12) ok = false;
    }
    rep.passed[qi] = ok ? 1 : 0;
    if (ok && rep.chosen_q < 0) rep.chosen_q = q;
  }
  return rep;
}

}  // namespace hjhom
