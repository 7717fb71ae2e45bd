#include "hjhom/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hjhom {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

bool ControlSet::contains_zero(double tol) const {
  for (const Vec& v : velocities)
    if (norm(v) <= tol) return true;
  return false;
}

double ControlSet::inner_radius() const {
  // Support function minimized over sampled directions. For the sets built
  // here the hull is a polygon through speed-max_speed vertices.
  const int nd = dim == 1 ? 2 : 256;
  double r = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nd; ++i) {
    const double th = 2.0 * kPi * i / nd;
    const Vec dir = dim == 1 ? vec1(i == 0 ? 1.0 : -1.0) : vec2(std::cos(th), std::sin(th));
    double support = -std::numeric_limits<double>::infinity();
    for (const Vec& v : velocities) support = std::max(support, dot(dir, v));
    r = std::min(r, support);
  }
  return r;
}

ControlSet make_control_set_1d(double max_speed, int n_speeds) {
  if (n_speeds < 3 || n_speeds % 2 == 0)
    throw std::invalid_argument("1d control set needs an odd speed count >= 3");
  ControlSet cs;
  cs.dim = 1;
  cs.max_speed = max_speed;
  cs.n_directions = 2;
  cs.n_speeds = n_speeds;
  for (int i = 0; i < n_speeds; ++i) {
    const double a = -max_speed + 2.0 * max_speed * i / (n_speeds - 1);
    cs.velocities.push_back(vec1(a));
  }
  return cs;
}

ControlSet make_control_set_2d(double max_speed, int n_directions, int n_speeds) {
  if (n_directions < 4 || n_speeds < 2) throw std::invalid_argument("2d control set too small");
  ControlSet cs;
  cs.dim = 2;
  cs.max_speed = max_speed;
  cs.n_directions = n_directions;
  cs.n_speeds = n_speeds;
  cs.velocities.push_back(vec2(0.0, 0.0));
  for (int d = 0; d < n_directions; ++d) {
    const double th = 2.0 * kPi * d / n_directions;
    for (int s = 1; s < n_speeds; ++s) {
      const double speed = max_speed * s / (n_speeds - 1);
      cs.velocities.push_back(vec2(speed * std::cos(th), speed * std::sin(th)));
    }
  }
  return cs;
}

int HamiltonianSpec::dim() const {
  return separable ? separable->dim : control_form->controls.dim;
}

const std::string& HamiltonianSpec::name() const {
  return separable ? separable->name : control_form->name;
}

HamiltonianSpec make_separable(SeparableSpec s) {
  HamiltonianSpec spec;
  spec.separable = std::move(s);
  return spec;
}

HamiltonianSpec make_control_form(ControlFormSpec c) {
  HamiltonianSpec spec;
  spec.control_form = std::move(c);
  return spec;
}

double eval_hamiltonian(const HamiltonianSpec& spec, Vec x, Vec p) {
  if (!finite(x) || !finite(p)) throw std::domain_error("eval_hamiltonian: non-finite input");
  if (spec.separable) return spec.separable->kinetic(p) - spec.separable->cost(x);
  const ControlFormSpec& c = *spec.control_form;
  const double lx = c.spatial_cost(x);
  double best = -std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < c.controls.velocities.size(); ++j)
    best = std::max(best, -dot(p, c.controls.velocities[j]) - c.control_cost[j] - lx);
  return best;
}

std::vector<double> legendre_cost(const std::function<double(Vec)>& kinetic,
                                  const ControlSet& controls, const LegendreOptions& opts) {
  // Radial reduction: for convex radial K with min at 0 the conjugate of a
  // velocity v only depends on |v| and the sup is along p = -r v/|v|.
  auto radial = [&](double r) { return kinetic(vec1(r)); };
  if (!(radial(0.0) <= radial(opts.p_max) + 1e-9) || radial(opts.p_max) < -1e12)
    throw std::invalid_argument("legendre_cost: kinetic part not bounded below");

  auto conjugate_of_speed = [&](double s) {
    double best = -std::numeric_limits<double>::infinity();
    double arg = 0.0;
    const int n = opts.p_samples;
    for (int i = 0; i <= n; ++i) {
      const double r = opts.p_max * i / n;
      const double v = s * r - radial(r);
      if (v > best) {
        best = v;
        arg = r;
      }
    }
    // golden refinement of the concave profile around the grid argmax
    double lo = std::max(0.0, arg - opts.p_max / n);
    double hi = std::min(opts.p_max, arg + opts.p_max / n);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    auto g = [&](double r) { return s * r - radial(r); };
    double fc = g(c), fd = g(d);
    while (hi - lo > 1e-10) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - gr * (hi - lo);
        fc = g(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + gr * (hi - lo);
        fd = g(d);
      }
    }
    return std::max(best, g(0.5 * (lo + hi)));
  };

  std::vector<double> cost(controls.velocities.size());
  std::vector<std::pair<double, double>> cache;  // speed -> conjugate
  for (size_t j = 0; j < controls.velocities.size(); ++j) {
    const double s = norm(controls.velocities[j]);
    auto it = std::find_if(cache.begin(), cache.end(),
                           [&](auto& kv) { return std::abs(kv.first - s) < 1e-14; });
    if (it != cache.end()) {
      cost[j] = it->second;
    } else {
      cost[j] = conjugate_of_speed(s);
      cache.emplace_back(s, cost[j]);
    }
  }
  return cost;
}

ControlFormSpec to_control_form(const SeparableSpec& s, int n_speeds_1d, int n_directions_2d,
                                int n_speeds_2d) {
  ControlFormSpec c;
  c.controls = s.dim == 1 ? make_control_set_1d(s.kinetic_lipschitz, n_speeds_1d)
                          : make_control_set_2d(s.kinetic_lipschitz, n_directions_2d, n_speeds_2d);
  c.control_cost = legendre_cost(s.kinetic, c.controls);
  const PeriodicCost per = s.periodic;
  const DefectCost def = s.defect;
  c.spatial_cost = composite_cost(per, def);
  c.spatial_bound = per.bound + std::abs(def.value_at_origin);
  c.name = s.name;
  return c;
}

ControlFormSpec shift_hamiltonian(const ControlFormSpec& spec, Vec p0) {
  if (!finite(p0)) throw std::domain_error("shift_hamiltonian: non-finite shift");
  ControlFormSpec out = spec;
  for (size_t j = 0; j < out.control_cost.size(); ++j)
    out.control_cost[j] += dot(p0, out.controls.velocities[j]);
  out.name = spec.name + "+shift";
  return out;
}

WitnessReport sample_witnesses(const HamiltonianSpec& spec, double r_f, double m_l, double m_f,
                               int samples) {
  WitnessReport rep;
  rep.coercivity_margin = std::numeric_limits<double>::infinity();
  const int d = spec.dim();
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    const Vec x = d == 1 ? vec1(-2.0 + 4.0 * t) : vec2(-2.0 + 4.0 * t, 1.3 * t);
    for (int k = 0; k < 8; ++k) {
      const double th = 2.0 * kPi * k / 8.0;
      const double r = 0.25 * (k + 1);
      const Vec p = d == 1 ? vec1((k % 2 ? -1 : 1) * r) : vec2(r * std::cos(th), r * std::sin(th));
      const Vec q = d == 1 ? vec1(-0.5 * p[0]) : vec2(-0.5 * p[0], 0.7 * p[1]);
      const double hp = eval_hamiltonian(spec, x, p);
      const double hq = eval_hamiltonian(spec, x, q);
      rep.coercivity_margin = std::min(rep.coercivity_margin, hp - (r_f * norm(p) - m_l));
      rep.lipschitz_excess =
          std::max(rep.lipschitz_excess, std::abs(hp - hq) - m_f * norm(p - q));
      const Vec mid = 0.5 * (p + q);
      rep.convexity_violation =
          std::max(rep.convexity_violation, eval_hamiltonian(spec, x, mid) - 0.5 * (hp + hq));
    }
  }
  return rep;
}

}  // namespace hjhom
