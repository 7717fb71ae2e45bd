#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hjhom/homogenized.hpp"

using namespace hjhom;

namespace {

HamiltonianSpec spec_1d(PeriodicCost per, DefectCost defect, const char* name) {
  SeparableSpec s;
  s.dim = 1;
  s.kinetic = [](Vec p) { return norm(p); };
  s.kinetic_lipschitz = 1.0;
  s.periodic = std::move(per);
  s.defect = std::move(defect);
  s.name = name;
  return make_separable(s);
}

const EffectiveHamiltonianTable& flat_table() {
  static const EffectiveHamiltonianTable t =
      tabulate(spec_1d(make_periodic_zero(1), make_defect_none(1), "zero"), -3.0, 3.0, 61,
               default_lambda_schedule(), 200);
  return t;
}

const EffectiveHamiltonianTable& sin_env_table() {
  static const EffectiveHamiltonianTable t =
      tabulate(spec_1d(make_periodic_sin(1), make_defect_none(1), "sin"), -3.0, 3.0, 61,
               default_lambda_schedule(), 400);
  return t;
}

constexpr double kGolden = 1.6180339887498949;

}  // namespace

TEST_CASE("E at the minimum gives the constant periodic limit") {
  const HomogenizedSolution sol =
      solve_homogenized(sin_env_table(), sin_env_table().hbar_min, 1.0, 1, 4.0, 0.005);
  CHECK_FALSE(sol.visible);
  for (int i = 0; i < sol.u.size(); ++i)
    CHECK(std::abs(sol.u.values[i] - sol.u_per_value) <= 2e-2);
}

TEST_CASE("flat preset solves to -e^{-|x|}") {
  const HomogenizedSolution sol = solve_homogenized(flat_table(), 1.0, 1.0, 1, 4.0, 0.005);
  CHECK(sol.visible);
  double worst = 0.0;
  for (int i = 0; i < sol.u.size(); ++i) {
    const double x = sol.u.node(i)[0];
    if (std::abs(x) > 3.0) continue;
    worst = std::max(worst, std::abs(sol.u.values[i] - (-std::exp(-std::abs(x)))));
  }
  CHECK(worst <= 2e-2);
}

TEST_CASE("sin preset matches the two-branch closed form") {
  const Homogenized1D ref =
      analytic_homogenized_1d(make_periodic_sin(1), make_defect_cos2(1.0, 1));
  CHECK(std::abs(ref.mu - std::log(kGolden)) <= 1e-5);
  CHECK(std::abs(ref.u_at_origin - (-kGolden)) <= 1e-5);
  CHECK(std::abs(ref.u(1.0) - (-1.0)) <= 1e-9);
  // continuity at the glue radius
  CHECK(std::abs(ref.u(ref.mu - 1e-13) - ref.u(ref.mu + 1e-13)) <= 1e-12);

  const HomogenizedSolution sol = solve_homogenized(sin_env_table(), kGolden, 1.0, 1, 4.0, 0.005);
  CHECK(sol.visible);
  double worst = 0.0;
  for (int i = 0; i < sol.u.size(); ++i) {
    const double x = sol.u.node(i)[0];
    if (std::abs(x) > 3.0) continue;
    worst = std::max(worst, std::abs(sol.u.values[i] - ref.u(x)));
  }
  CHECK(worst <= 2e-2);
}

TEST_CASE("inconsistent inputs are rejected") {
  CHECK_THROWS_AS(solve_homogenized(sin_env_table(), 0.5, 1.0, 1, 4.0, 0.005),
                  std::invalid_argument);
}

TEST_CASE("visibility predicate") {
  CHECK(defect_visible(1.0, flat_table()));
  CHECK_FALSE(defect_visible(sin_env_table().hbar_min, sin_env_table()));
  CHECK_FALSE(defect_visible(0.0, flat_table()));
}

TEST_CASE("shell decay: sin preset agrees exactly beyond mu") {
  const Homogenized1D ref =
      analytic_homogenized_1d(make_periodic_sin(1), make_defect_cos2(1.0, 1));
  const HomogenizedSolution sol = solve_homogenized(sin_env_table(), kGolden, 1.0, 1, 4.0, 0.005);
  std::vector<double> radii;
  for (double r = 0.25; r <= 3.5; r += 0.25) radii.push_back(r);
  const DecayReport rep = check_infinity(sol, radii, 1e-6);
  REQUIRE(rep.exact_agreement_radius.has_value());
  CHECK(*rep.exact_agreement_radius <= ref.mu + 2.0 * sol.u.h + 0.25);
}

TEST_CASE("shell decay: flat preset only decays, never agrees") {
  const HomogenizedSolution sol = solve_homogenized(flat_table(), 1.0, 1.0, 1, 4.0, 0.005);
  const std::vector<double> radii = {1.0, 2.0, 3.0};
  const DecayReport rep = check_infinity(sol, radii, 1e-6);
  CHECK_FALSE(rep.exact_agreement_radius.has_value());
  for (size_t i = 0; i < radii.size(); ++i)
    CHECK(std::abs(rep.shell_error[i] - std::exp(-radii[i])) <= 2e-2);
}

TEST_CASE("no defect: shell error identically zero") {
  const HomogenizedSolution sol =
      solve_homogenized(sin_env_table(), sin_env_table().hbar_min, 1.0, 1, 4.0, 0.005);
  const DecayReport rep = check_infinity(sol, {1.0, 2.0, 3.0}, 2e-2);
  REQUIRE(rep.exact_agreement_radius.has_value());
  CHECK(*rep.exact_agreement_radius == 1.0);
}

TEST_CASE("closed form limit cases") {
  // no downward defect: mu = 0 and the constant branch only
  const Homogenized1D up =
      analytic_homogenized_1d(make_periodic_sin(1), make_defect_cos2(1.0, 1, /*upward=*/true));
  CHECK(up.mu == 0.0);
  CHECK(up.u(0.0) == doctest::Approx(-1.0));
  CHECK(up.u(2.0) == doctest::Approx(-1.0));

  // flat environment: mu = infinity and the exponential branch everywhere
  const Homogenized1D flat =
      analytic_homogenized_1d(make_periodic_zero(1), make_defect_cos2(1.0, 1));
  CHECK(std::isinf(flat.mu));
  CHECK(flat.u(0.0) == doctest::Approx(-1.0));
  CHECK(flat.u(2.0) == doctest::Approx(-std::exp(-2.0)));

  CHECK_THROWS_AS(analytic_homogenized_1d(make_periodic_sin(1), make_defect_cos2(1.0, 1), 2.0),
                  std::invalid_argument);
}

TEST_CASE("solution stays below the periodic level and the origin pin holds") {
  for (double e_value : {1.0, 1.3}) {
    const HomogenizedSolution sol = solve_homogenized(flat_table(), e_value, 1.0, 1, 4.0, 0.005);
    const int origin = sol.u.nearest_node(vec1(0.0));
    CHECK(sol.u.values[origin] == doctest::Approx(-e_value));
    CHECK(sol.u.min_active() >= -e_value - 1e-9);
    for (int i = 0; i < sol.u.size(); ++i)
      CHECK(sol.u.values[i] <= sol.u_per_value + 2e-2);
    // the minimum sits at the origin and only there
    for (int i = 0; i < sol.u.size(); ++i)
      if (i != origin) CHECK(sol.u.values[i] > sol.u.values[origin]);
  }
}

TEST_CASE("oracle equivalence for both shipped downward presets") {
  struct Case {
    const EffectiveHamiltonianTable& table;
    PeriodicCost per;
  } cases[] = {{flat_table(), make_periodic_zero(1)}, {sin_env_table(), make_periodic_sin(1)}};
  for (const Case& c : cases) {
    const DefectCost bump = make_defect_cos2(1.0, 1);
    const double e_value = -composite_inf(c.per, bump);
    const Homogenized1D ref = analytic_homogenized_1d(c.per, bump);
    const HomogenizedSolution sol = solve_homogenized(c.table, e_value, 1.0, 1, 4.0, 0.005);
    double worst = 0.0;
    for (int i = 0; i < sol.u.size(); ++i) {
      const double x = sol.u.node(i)[0];
      if (std::abs(x) > 3.0) continue;
      worst = std::max(worst, std::abs(sol.u.values[i] - ref.u(x)));
    }
    CHECK(worst <= 2e-2);
  }
}
