#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hjhom/costs.hpp"
#include "hjhom/vec.hpp"

namespace hjhom {

// Discretization of the control ball |a| <= max_speed. Velocities are the
// dynamics themselves (f(x,a) = a throughout this project); the set always
// contains a = 0 and is closed under the direction symmetry group used to
// generate it.
struct ControlSet {
  int dim = 1;
  std::vector<Vec> velocities;
  double max_speed = 1.0;  // M_f
  int n_directions = 2;
  int n_speeds = 21;

  bool contains_zero(double tol = 1e-14) const;
  // Radius of the largest ball contained in the velocity hull (r_f witness).
  double inner_radius() const;
};

ControlSet make_control_set_1d(double max_speed = 1.0, int n_speeds = 21);
ControlSet make_control_set_2d(double max_speed = 1.0, int n_directions = 32, int n_speeds = 11);

// H(x,p) = max_j ( -p.v_j - control_cost[j] - spatial_cost(x) ).
// Running costs separate into a per-control part and a shared spatial part;
// every operation in this project produces costs of that shape (Legendre
// conjugates, p-shifts and Hamiltonian shifts all act on control_cost).
struct ControlFormSpec {
  ControlSet controls;
  std::vector<double> control_cost;
  ScalarField spatial_cost;
  double spatial_bound = 0.0;  // sup |spatial_cost|
  std::string name;
};

struct SeparableSpec {
  int dim = 1;
  std::function<double(Vec)> kinetic;  // K(p), convex, K(0) = min K
  double kinetic_lipschitz = 1.0;      // M_f
  PeriodicCost periodic;
  DefectCost defect;
  std::string name;

  double cost(Vec y) const { return periodic(y) + defect(y); }
};

struct HamiltonianSpec {
  std::optional<SeparableSpec> separable;
  std::optional<ControlFormSpec> control_form;

  int dim() const;
  bool is_separable() const { return separable.has_value(); }
  const std::string& name() const;
};

HamiltonianSpec make_separable(SeparableSpec s);
HamiltonianSpec make_control_form(ControlFormSpec c);

// max over the discrete control set, or K(p) - l(x) for separable specs.
// Throws std::domain_error on non-finite input.
double eval_hamiltonian(const HamiltonianSpec& spec, Vec x, Vec p);

struct LegendreOptions {
  double p_max = 60.0;   // sup search radius in |p|
  int p_samples = 6000;  // dense grid before golden refinement
};

// Conjugate cost of a convex radial kinetic part on the given control set:
// cost[j] = sup_p ( -p.v_j - K(p) ), so max_j(-p.v_j - cost[j]) rebuilds K
// up to the control discretization. Rejects K unbounded below.
std::vector<double> legendre_cost(const std::function<double(Vec)>& kinetic,
                                  const ControlSet& controls, const LegendreOptions& opts = {});

// Control form of a separable spec; composite cost becomes the spatial part.
ControlFormSpec to_control_form(const SeparableSpec& s, int n_speeds_1d = 21,
                                int n_directions_2d = 32, int n_speeds_2d = 11);

// Shifted running cost l(x,a) + p0.f(x,a); evaluating the result at (x,p)
// equals the original Hamiltonian at (x, p + p0). Control-form only.
ControlFormSpec shift_hamiltonian(const ControlFormSpec& spec, Vec p0);

struct WitnessReport {
  double coercivity_margin = 0.0;  // min over samples of H - (r_f|p| - M_l)
  double lipschitz_excess = 0.0;   // max of |H(x,p)-H(x,q)| - M_f|p-q|
  double convexity_violation = 0.0;
  bool ok(double tol = 1e-9) const {
    return coercivity_margin >= -tol && lipschitz_excess <= tol && convexity_violation <= tol;
  }
};

// Samples the structural inequalities (coercivity, Lipschitz in p, midpoint
// convexity) on a deterministic point cloud.
WitnessReport sample_witnesses(const HamiltonianSpec& spec, double r_f, double m_l,
                               double m_f, int samples = 64);

}  // namespace hjhom
