#include "hjhom/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "hjhom/correctors.hpp"
#include "hjhom/ergodic.hpp"
#include "hjhom/experiments.hpp"
#include "hjhom/homogenized.hpp"
#include "hjhom/io.hpp"
#include "hjhom/oracles1d.hpp"
#include "hjhom/random_defects.hpp"

namespace hjhom {

namespace {

namespace fs = std::filesystem;

struct CliError {
  int code;
  std::string message;
};

const std::set<std::string> kCommonKeys = {"preset", "out", "jobs", "seed",
                                           "environment", "defect"};

const std::set<std::string>& command_keys(const std::string& cmd) {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"hbar", {"p", "p_min", "p_max", "n_p", "torus_nodes", "lambda_schedule"}},
      {"ergodic", {"radii", "lambda_schedule", "h"}},
      {"solve-eps", {"eps", "alpha", "half_width", "h"}},
      {"homogenize", {"half_width", "h"}},
      {"corrector", {"radius", "p", "h", "lambda_schedule"}},
      {"random", {"eta", "eta_bar", "eps", "law_eps", "n_samples", "two_sided", "window", "q",
                  "realizations"}},
      {"converge", {"eps_sweep"}},
      {"report", {}},
  };
  return keys.at(cmd);
}

json load_config(const std::string& path, const std::string& cmd) {
  std::ifstream in(path);
  if (!in) throw CliError{2, "cannot open config: " + path};
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw CliError{2, std::string("config parse error: ") + e.what()};
  }
  if (!doc.is_object()) throw CliError{2, "config must be a JSON object"};
  const auto& allowed = command_keys(cmd);
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (kCommonKeys.count(it.key()) || allowed.count(it.key())) continue;
    throw CliError{2, "unknown config key for " + cmd + ": " + it.key()};
  }
  return doc;
}

PeriodicCost environment_from_json(const json& j, int dim) {
  const std::string type = j.value("type", "zero");
  if (type == "zero") return make_periodic_zero(dim);
  if (type == "sin") return make_periodic_sin(dim);
  if (type == "const") return make_periodic_constant(j.value("value", 0.0), dim);
  if (type == "csv") return make_periodic_from_samples(j.at("path").get<std::string>());
  throw CliError{2, "unknown environment type: " + type};
}

DefectCost defect_from_json(const json& j, int dim) {
  const std::string type = j.value("type", "cos2bump");
  if (type == "none") return make_defect_none(dim);
  if (type == "cos2bump")
    return make_defect_cos2(j.value("depth", 1.0), dim, j.value("upward", false));
  if (type == "csv") return make_defect_from_samples(j.at("path").get<std::string>());
  throw CliError{2, "unknown defect type: " + type};
}

struct Session {
  Preset preset;
  HamiltonianSpec spec;
  fs::path out;
  int jobs = 1;
  json config;

  double num(const std::string& key, double fallback) const {
    return config.contains(key) ? config.at(key).get<double>() : fallback;
  }
  std::vector<double> list(const std::string& key, std::vector<double> fallback) const {
    return config.contains(key) ? config.at(key).get<std::vector<double>>() : fallback;
  }
};

Session make_session(const std::string& cmd, const std::string& config_path,
                     const std::string& preset_name, const std::string& out_dir, int jobs,
                     uint64_t seed, bool seed_set) {
  Session s;
  s.config = config_path.empty() ? json::object() : load_config(config_path, cmd);
  std::string preset = preset_name;
  if (preset.empty()) preset = s.config.value("preset", "flat-down");
  try {
    s.preset = preset_by_name(preset);
  } catch (const std::exception& e) {
    throw CliError{2, e.what()};
  }
  if (s.config.contains("jobs")) s.jobs = s.config.at("jobs").get<int>();
  if (jobs > 0) s.jobs = jobs;
  if (s.config.contains("seed")) s.preset.seed = s.config.at("seed").get<uint64_t>();
  if (seed_set) s.preset.seed = seed;

  SeparableSpec sep = *s.preset.make_spec().separable;
  if (s.config.contains("environment"))
    sep.periodic = environment_from_json(s.config.at("environment"), s.preset.dim);
  if (s.config.contains("defect"))
    sep.defect = defect_from_json(s.config.at("defect"), s.preset.dim);
  s.spec = make_separable(sep);

  std::string out = out_dir;
  if (out.empty()) out = s.config.value("out", "out");
  s.out = out;
  fs::create_directories(s.out);
  return s;
}

int finish(const std::vector<std::string>& violations) {
  for (const std::string& v : violations) std::cerr << "invariant violation: " << v << "\n";
  return violations.empty() ? 0 : 1;
}

int cmd_hbar(const Session& s) {
  std::vector<std::string> violations;
  const auto schedule = s.list("lambda_schedule", s.preset.lambda_schedule);
  const int nodes = static_cast<int>(s.num("torus_nodes", s.preset.torus_nodes));
  const EffectiveHamiltonianTable table =
      tabulate(s.spec, s.num("p_min", s.preset.p_min), s.num("p_max", s.preset.p_max),
               static_cast<int>(s.num("n_p", s.preset.n_p)), schedule, nodes, s.jobs);

  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < table.p.size(); ++i) rows.push_back({table.p[i], table.hbar[i]});
  write_csv((s.out / "hbar.csv").string(), {"p", "hbar"}, rows);
  write_json((s.out / "hbar.json").string(),
             json{{"p0", table.p0},
                  {"min", table.hbar_min},
                  {"convexity_violation", table.convexity_violation},
                  {"lipschitz_slope", table.lipschitz_slope},
                  {"max_spread", table.max_spread},
                  {"warn", table.warn}});

  if (s.config.contains("p")) {
    const double p = s.config.at("p").get<double>();
    const VanishingDiscountResult r =
        effective_hamiltonian_at(s.spec, vec1(p), schedule, nodes);
    // displayed uncertainty: extrapolation spread, floored at the validated
    // tolerance of the method
    std::printf("hbar=%.2f±%.2f\n", r.value, std::max(r.spread, 0.02));
  } else {
    std::printf("hbar: %zu points, p0=%.3f min=%.4f\n", table.p.size(), table.p0, table.hbar_min);
  }
  if (table.convexity_violation > 1e-2) violations.push_back("hbar table convexity above 1e-2");
  if (table.warn) violations.push_back("non-monotone vanishing-discount sequence");
  return finish(violations);
}

int cmd_ergodic(const Session& s) {
  std::vector<std::string> violations;
  const auto radii = s.list("radii", s.preset.radii);
  const auto schedule = s.list("lambda_schedule", s.preset.lambda_schedule);
  const double h = s.num("h", s.preset.dim == 1 ? s.preset.ball_h : s.preset.h_2d);
  const ErgodicEstimate est = ergodic_constant(s.spec, radii, schedule, h, s.jobs);

  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < est.radii.size(); ++i)
    rows.push_back({est.radii[i], est.per_radius[i].value});
  write_csv((s.out / "ergodic.csv").string(), {"R", "E_R"}, rows);
  json j{{"E", est.value},
         {"converged", est.converged},
         {"monotonicity_violation", est.monotonicity_violation}};
  j["raw"] = json::array();
  for (const auto& tr : est.per_radius)
    j["raw"].push_back({{"lambdas", tr.lambdas}, {"values", tr.raw}, {"spread", tr.spread}});
  write_json((s.out / "ergodic.json").string(), j);
  std::printf("E=%.4f (converged=%s)\n", est.value, est.converged ? "yes" : "no");

  if (!est.converged) violations.push_back("E^R sweep not settled within 1e-2");
  if (est.monotonicity_violation > 1e-2) violations.push_back("E^R monotonicity above 1e-2");
  return finish(violations);
}

int cmd_solve_eps(const Session& s) {
  const double eps = s.num("eps", 0.05);
  const double alpha = s.num("alpha", s.preset.alpha);
  const double half = s.num("half_width", s.preset.eps_half_width);
  const double h = s.num("h", eps / s.preset.eps_nodes_per_eps);
  DiscountedSolve sol = solve_eps_problem(s.spec, alpha, eps, half, h);
  write_field_csv(sol.field, (s.out / "u_eps.csv").string());
  write_json((s.out / "u_eps.json").string(),
             json{{"geometry", sol.field.geom.name()},
                  {"h", sol.field.h},
                  {"eps", eps},
                  {"alpha", alpha},
                  {"iterations", sol.report.iterations},
                  {"timing", {{"seconds", sol.report.wall_seconds}}}});
  std::printf("u_eps(0)=%.4f iterations=%d\n",
              sol.field.values[sol.field.nearest_node(vec1(0.0))], sol.report.iterations);
  return 0;
}

int cmd_homogenize(const Session& s) {
  std::vector<std::string> violations;
  const EffectiveHamiltonianTable table =
      tabulate(s.spec, s.preset.p_min, s.preset.p_max, s.preset.n_p, s.preset.lambda_schedule,
               s.preset.torus_nodes, s.jobs);
  const ErgodicEstimate est = ergodic_constant(s.spec, s.preset.radii, s.preset.lambda_schedule,
                                               s.preset.dim == 1 ? s.preset.ball_h : s.preset.h_2d,
                                               s.jobs);
  const HomogenizedSolution sol =
      solve_homogenized(table, est.value, s.preset.alpha, s.preset.dim,
                        s.num("half_width", s.preset.homog_half_width),
                        s.num("h", s.preset.homog_h));
  write_field_csv(sol.u, (s.out / "u_hom.csv").string());

  std::vector<double> radii;
  for (double r = 0.5; r <= s.preset.homog_half_width - 0.5; r += 0.5) radii.push_back(r);
  const DecayReport decay = check_infinity(sol, radii);
  json j{{"E", est.value},
         {"visible", sol.visible},
         {"u0", sol.u.values[sol.u.nearest_node(vec1(0.0))]},
         {"u_per", sol.u_per_value}};
  if (s.preset.dim == 1 && s.spec.separable) {
    const Homogenized1D ref =
        analytic_homogenized_1d(s.spec.separable->periodic, s.spec.separable->defect);
    j["mu"] = std::isfinite(ref.mu) ? json(ref.mu) : json("inf");
  }
  j["shells"] = json::array();
  for (size_t i = 0; i < decay.radii.size(); ++i)
    j["shells"].push_back({{"r", decay.radii[i]}, {"error", decay.shell_error[i]}});
  if (decay.exact_agreement_radius) j["exact_agreement_radius"] = *decay.exact_agreement_radius;
  write_json((s.out / "u_hom.json").string(), j);
  std::printf("u(0)=%.4f visible=%s\n", j["u0"].get<double>(), sol.visible ? "yes" : "no");

  const double u_min = sol.u.min_active();
  if (sol.visible && std::abs(u_min - (-est.value / s.preset.alpha)) > 5e-2)
    violations.push_back("pinned origin is not the minimum of the visible solution");
  return finish(violations);
}

int cmd_corrector(const Session& s) {
  std::vector<std::string> violations;
  const double radius = s.num("radius", 6.0);
  const auto schedule = s.list("lambda_schedule", s.preset.lambda_schedule);
  const double h = s.num("h", s.preset.ball_h);
  const CorrectorField w = corrector_w(s.spec, radius, schedule, h);
  write_field_csv(w.field, (s.out / "w.csv").string());

  std::vector<double> ladder;
  for (double r = 1.0; r <= radius - 2.0; r += 1.0) ladder.push_back(r);
  const EffectiveHamiltonianTable table =
      tabulate(s.spec, s.preset.p_min, s.preset.p_max, s.preset.n_p, schedule,
               s.preset.torus_nodes, s.jobs);
  const GrowthReport growth = check_growth(w, vec1(table.p0), ladder);
  write_json((s.out / "growth.json").string(), json{{"radii", growth.radii},
                                                    {"m", growth.m},
                                                    {"increasing", growth.increasing},
                                                    {"min_value", growth.min_value},
                                                    {"E_R", w.level}});
  std::printf("E^R=%.4f growth %s\n", w.level,
              growth.increasing ? "increasing" : "bounded-below");

  if (s.config.contains("p")) {
    const double p = s.config.at("p").get<double>();
    const PTildePair pair = find_ptilde(table, p);
    const PeriodicCorrector cp = periodic_corrector(s.spec, vec1(pair.p), 1e-3, s.preset.torus_nodes);
    const PeriodicCorrector cpt =
        periodic_corrector(s.spec, vec1(pair.ptilde), 1e-3, s.preset.torus_nodes);
    const CorrectorField chi = corrector_piecewise(s.spec, pair, radius, cp, cpt, w.level, h);
    write_field_csv(chi.field, (s.out / "chi_piecewise.csv").string());
    if (std::abs(table(pair.ptilde) - pair.level) > 1e-3 * (1.0 + std::abs(pair.level)))
      violations.push_back("hbar(ptilde) drifted from hbar(p)");
  }
  return finish(violations);
}

int cmd_random(const Session& s) {
  std::vector<std::string> violations;
  const DefectCost defect = s.spec.separable->defect;
  const double eps = s.num("eps", 0.05);
  const int window = static_cast<int>(s.num("window", std::ceil(9.0 / eps)));
  const int q = static_cast<int>(s.num("q", 1));
  const int kmin[2] = {-window, 0}, kmax[2] = {window, 0};

  const LatticeRealization real = sample_lattice(DensityMode::Fixed, s.num("eta", 0.3), eps, kmin,
                                                 kmax, q, s.preset.seed);
  std::vector<std::vector<double>> rows;
  for (int k = real.kmin[0]; k <= real.kmax[0]; ++k)
    rows.push_back({static_cast<double>(k), static_cast<double>(real.indicator(k))});
  write_csv((s.out / "realization.csv").string(), {"k", "x_k"}, rows);

  const LimitLawSamples law =
      limit_law_mc(DensityMode::Scaled, s.num("law_eps", 1e-3), s.num("eta_bar", 1.0),
                   static_cast<int>(s.num("n_samples", 100000)), s.preset.seed,
                   s.config.value("two_sided", false));
  std::vector<std::vector<double>> cdf_rows;
  for (double t = 0.05; t < 1.0; t += 0.05)
    cdf_rows.push_back({t, law.empirical_cdf(t), law.analytic_cdf(t)});
  write_csv((s.out / "limit_law.csv").string(), {"t", "empirical", "analytic"}, cdf_rows);

  const RegimeSummary reg = regime_summary(defect, 0.01, 0.3, 1e-4, 1.0,
                                           static_cast<int>(s.num("realizations", 200)),
                                           s.preset.seed);
  write_json((s.out / "regimes.json").string(),
             json{{"fraction_near_defect", reg.fraction_near_defect},
                  {"fraction_near_zero", reg.fraction_near_zero},
                  {"min_u0", reg.min_u0},
                  {"max_u0", reg.max_u0},
                  {"realizations", reg.realizations}});
  std::printf("lattice freq=%.3f, regime(i) frac=%.3f\n", real.frequency(),
              reg.fraction_near_defect);

  double dkw = 0.0;
  for (double t = 0.05; t < 1.0; t += 0.05)
    dkw = std::max(dkw, std::abs(law.empirical_cdf(t) - law.analytic_cdf(t)));
  if (dkw > std::sqrt(std::log(2.0 / 0.01) / (2.0 * law.z.size())))
    violations.push_back("empirical CDF outside the DKW band");
  return finish(violations);
}

int cmd_converge(const Session& s) {
  std::vector<std::string> violations;
  Preset preset = s.preset;
  if (s.config.contains("eps_sweep"))
    preset.eps_sweep = s.config.at("eps_sweep").get<std::vector<double>>();
  const ErrorTable t = convergence_study(preset);
  write_error_table_csv(t, (s.out / "convergence.csv").string());
  const Homogenized1D ref =
      analytic_homogenized_1d(s.spec.separable->periodic, s.spec.separable->defect);
  dump_evaluator_csv(ref.u, -s.preset.eps_half_width, s.preset.eps_half_width, 800,
                     (s.out / "reference.csv").string());
  std::printf("converge %s: final sup error %.4f\n", s.preset.name.c_str(),
              t.sup_error_excl_origin.back());
  for (size_t i = 1; i < t.eps.size(); ++i)
    if (t.sup_error_excl_origin[i] >= t.sup_error_excl_origin[i - 1])
      violations.push_back("error column not strictly decreasing");
  const double final_tol = s.preset.defect_upward ? 0.05 : 0.1;
  if (t.sup_error_excl_origin.back() > final_tol)
    violations.push_back("final error above threshold");
  return finish(violations);
}

int cmd_report(const Session& s) {
  const json rep = pipeline_report(s.preset, s.jobs);
  write_json((s.out / "report.json").string(), rep);
  std::printf("report %s: E=%.4f visible=%s\n", s.preset.name.c_str(),
              rep["ergodic"]["E"].get<double>(), rep["visible"].get<bool>() ? "yes" : "no");
  std::vector<std::string> violations;
  if (rep.contains("growth") && rep["visible"].get<bool>() &&
      !rep["growth"]["increasing"].get<bool>())
    violations.push_back("visible preset without increasing growth ladder");
  if (rep["timing"]["seconds"].get<double>() > s.preset.budget_seconds)
    violations.push_back("pipeline exceeded the preset budget");
  return finish(violations);
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Hamilton-Jacobi homogenization lab with localized defects"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out_dir;
  int jobs = 0;
  uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--preset", preset_name, "preset name");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "worker threads");
  app.add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_set = true; });

  std::map<std::string, std::function<int(const Session&)>> handlers = {
      {"hbar", cmd_hbar},         {"ergodic", cmd_ergodic},   {"solve-eps", cmd_solve_eps},
      {"homogenize", cmd_homogenize}, {"corrector", cmd_corrector}, {"random", cmd_random},
      {"converge", cmd_converge}, {"report", cmd_report},
  };

  // subcommand-specific numeric flags land in the config overlay
  std::map<std::string, std::map<std::string, double>> overlays;
  for (auto& [name, fn] : handlers) {
    CLI::App* sub = app.add_subcommand(name);
    sub->fallthrough();            // global flags may follow the subcommand
    sub->set_help_flag("--help");  // keep --h free for the grid spacing
    for (const std::string& key : command_keys(name)) {
      // list- and bool-valued keys are config-file only
      if (key == "lambda_schedule" || key == "radii" || key == "two_sided" || key == "eps_sweep")
        continue;
      sub->add_option("--" + key, overlays[name][key]);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    Session s = make_session(cmd, config_path, preset_name, out_dir, jobs, seed, seed_set);
    CLI::App* sub = app.get_subcommands().front();
    for (auto& [key, value] : overlays[cmd])
      if (sub->count("--" + key) > 0) s.config[key] = value;
    return handlers.at(cmd)(s);
  } catch (const CliError& e) {
    std::cerr << "config error: " << e.message << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << " (residual " << e.last_residual << ")\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace hjhom
