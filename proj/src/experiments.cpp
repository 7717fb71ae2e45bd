#include "hjhom/experiments.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "hjhom/correctors.hpp"
#include "hjhom/ergodic.hpp"

namespace hjhom {

PeriodicCost Preset::make_environment() const {
  if (environment == "zero") return make_periodic_zero(dim);
  if (environment == "sin") return make_periodic_sin(dim);
  if (environment == "const") return make_periodic_constant(environment_level, dim);
  throw std::invalid_argument("unknown environment: " + environment);
}

DefectCost Preset::make_defect() const {
  if (!has_defect) return make_defect_none(dim);
  return make_defect_cos2(defect_depth, dim, defect_upward);
}

HamiltonianSpec Preset::make_spec() const {
  SeparableSpec s;
  s.dim = dim;
  if (dim == 1) {
    s.kinetic = [](Vec p) { return norm(p); };
  } else {
    s.kinetic = [](Vec p) { return std::sqrt(1.0 + dot(p, p)) - 1.0; };
  }
  s.kinetic_lipschitz = 1.0;
  s.periodic = make_environment();
  s.defect = make_defect();
  s.name = name;
  return make_separable(s);
}

namespace {

std::vector<Preset> build_presets() {
  std::vector<Preset> out;

  Preset flat;
  flat.name = "flat-down";
  out.push_back(flat);

  Preset sin = flat;
  sin.name = "sin-down";
  sin.environment = "sin";
  sin.radii = {2.0, 4.0, 6.0, 8.0};
  out.push_back(sin);

  Preset up = flat;
  up.name = "flat-up";
  up.defect_upward = true;
  out.push_back(up);

  Preset nodefect = sin;
  nodefect.name = "sin-nodefect";
  nodefect.has_defect = false;
  out.push_back(nodefect);

  Preset radial;
  radial.name = "radial-2d";
  radial.dim = 2;
  radial.radii = {2.0, 3.0, 4.0};
  radial.lambda_schedule = {1e-1, 3e-2, 1e-2};
  radial.budget_seconds = 600.0;
  // constant environment: the cell problem is exact on a small torus
  radial.torus_nodes = 32;
  radial.n_p = 41;
  radial.homog_h = 0.04;
  radial.eps_nodes_per_eps = 6;  // pairs with eps = 0.25 on the 2d grid
  out.push_back(radial);

  return out;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = build_presets();
  return table;
}

}  // namespace

const Preset& preset_by_name(const std::string& name) {
  std::string resolved = name;  // short aliases for the two workhorse presets
  if (name == "sin") resolved = "sin-down";
  if (name == "flat") resolved = "flat-down";
  for (const Preset& p : presets())
    if (p.name == resolved) return p;
  throw std::invalid_argument("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const Preset& p : presets()) out.push_back(p.name);
  return out;
}

ErrorTable convergence_study(const Preset& preset) {
  if (preset.dim != 1)
    throw std::invalid_argument("convergence_study: 1d presets only (no 2d closed form)");
  const HamiltonianSpec spec = preset.make_spec();
  const Homogenized1D ref =
      analytic_homogenized_1d(spec.separable->periodic, spec.separable->defect, preset.alpha);

  ErrorTable t;
  for (double eps : preset.eps_sweep) {
    const auto t0 = std::chrono::steady_clock::now();
    const double h = eps / preset.eps_nodes_per_eps;
    DiscountedSolve s = solve_eps_problem(spec, preset.alpha, eps, preset.eps_half_width, h);
    const GridField& u = s.field;
    const int origin = u.nearest_node(vec1(0.0));
    double excl = 0.0, incl = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      const Vec x = u.node(i);
      if (std::abs(x[0]) > 2.0) continue;
      const double err = std::abs(u.values[i] - ref.u(x[0]));
      incl = std::max(incl, err);
      if (i != origin) excl = std::max(excl, err);
    }
    t.eps.push_back(eps);
    t.sup_error_excl_origin.push_back(excl);
    t.sup_error_incl_origin.push_back(incl);
    t.seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return t;
}

void write_error_table_csv(const ErrorTable& t, const std::string& path) {
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < t.eps.size(); ++i)
    rows.push_back({t.eps[i], t.sup_error_excl_origin[i], t.sup_error_incl_origin[i], t.seconds[i]});
  write_csv(path, {"eps", "sup_error_excl_origin", "sup_error_incl_origin", "seconds"}, rows);
}

json pipeline_report(const Preset& preset, int jobs) {
  const auto t0 = std::chrono::steady_clock::now();
  const HamiltonianSpec spec = preset.make_spec();
  json rep;
  rep["preset"] = preset.name;
  rep["dim"] = preset.dim;
  rep["seed"] = preset.seed;

  const EffectiveHamiltonianTable table = tabulate(spec, preset.p_min, preset.p_max, preset.n_p,
                                                   preset.lambda_schedule, preset.torus_nodes, jobs);
  rep["hbar"] = {{"p0", table.p0},
                 {"min", table.hbar_min},
                 {"convexity_violation", table.convexity_violation},
                 {"lipschitz_slope", table.lipschitz_slope},
                 {"max_spread", table.max_spread},
                 {"warn", table.warn}};

  const double h_ball = preset.dim == 1 ? preset.ball_h : preset.h_2d;
  const ErgodicEstimate est =
      ergodic_constant(spec, preset.radii, preset.lambda_schedule, h_ball, jobs);
  json er;
  er["E"] = est.value;
  er["converged"] = est.converged;
  er["monotonicity_violation"] = est.monotonicity_violation;
  er["per_radius"] = json::array();
  for (size_t i = 0; i < est.radii.size(); ++i)
    er["per_radius"].push_back({{"R", est.radii[i]},
                                {"value", est.per_radius[i].value},
                                {"spread", est.per_radius[i].spread},
                                {"warn", est.per_radius[i].warn}});
  rep["ergodic"] = er;

  rep["visible"] = defect_visible(est.value, table);

  if (preset.dim == 1) {
    const HomogenizedSolution sol = solve_homogenized(table, est.value, preset.alpha, 1,
                                                      preset.homog_half_width, preset.homog_h);
    const Homogenized1D ref =
        analytic_homogenized_1d(spec.separable->periodic, spec.separable->defect, preset.alpha);
    double sup_err = 0.0;
    for (int i = 0; i < sol.u.size(); ++i) {
      const double x = sol.u.node(i)[0];
      if (std::abs(x) > 3.0) continue;
      sup_err = std::max(sup_err, std::abs(sol.u.values[i] - ref.u(x)));
    }
    rep["homogenized"] = {{"u0", sol.u.values[sol.u.nearest_node(vec1(0.0))]},
                          {"u_per", sol.u_per_value},
                          {"mu", std::isfinite(ref.mu) ? json(ref.mu) : json("inf")},
                          {"sup_error_vs_closed_form", sup_err}};

    const double r_corr = preset.radii.size() >= 2 ? preset.radii[preset.radii.size() - 2]
                                                   : preset.radii.back();
    const CorrectorField w = corrector_w(spec, r_corr, preset.lambda_schedule, preset.ball_h);
    std::vector<double> ladder;
    for (double r = 1.0; r <= r_corr - 2.0; r += 1.0) ladder.push_back(r);
    if (ladder.size() >= 2) {
      const GrowthReport growth = check_growth(w, vec1(table.p0), ladder);
      rep["growth"] = {{"radii", growth.radii},
                       {"m", growth.m},
                       {"increasing", growth.increasing},
                       {"min_value", growth.min_value}};
    }

    const double e_oracle = downward_defect(spec.separable->periodic, spec.separable->defect)
                                ? analytic_E_1d(spec.separable->periodic, spec.separable->defect)
                                : -spec.separable->periodic.inf_value;
    rep["oracle_delta"] = {{"E", est.value - e_oracle}};
  }

  rep["timing"] = {{"seconds",
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  return rep;
}

}  // namespace hjhom
