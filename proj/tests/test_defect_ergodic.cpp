#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hjhom/ergodic.hpp"

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

constexpr double kGolden = 1.6180339887498949;

}  // namespace

TEST_CASE("zero cost gives a zero ergodic constant") {
  const HamiltonianSpec spec = spec_1d(make_periodic_zero(1), make_defect_none(1), "zero");
  const TruncatedErgodic e = ergodic_constant_truncated(spec, 2.0, default_lambda_schedule(), 0.01);
  CHECK(std::abs(e.value) <= 1e-6);
}

TEST_CASE("flat environment, depth-1 defect: E^R = 1") {
  const HamiltonianSpec spec = spec_1d(make_periodic_zero(1), make_defect_cos2(1.0, 1), "flat");
  const TruncatedErgodic e = ergodic_constant_truncated(spec, 4.0, default_lambda_schedule(), 0.01);
  CHECK(std::abs(e.value - 1.0) <= 2e-2);
  CHECK_FALSE(e.warn);
}

TEST_CASE("sin environment with defect reaches the golden ratio") {
  const HamiltonianSpec spec = spec_1d(make_periodic_sin(1), make_defect_cos2(1.0, 1), "sin-down");
  const TruncatedErgodic e = ergodic_constant_truncated(spec, 6.0, default_lambda_schedule(), 0.005);
  const double oracle = analytic_E_1d(make_periodic_sin(1), make_defect_cos2(1.0, 1));
  CHECK(std::abs(oracle - kGolden) <= 1e-6);
  CHECK(std::abs(e.value - oracle) <= 3e-2);
}

TEST_CASE("R sweep: no defect recovers the periodic minimum") {
  const HamiltonianSpec spec = spec_1d(make_periodic_sin(1), make_defect_none(1), "sin");
  const ErgodicEstimate est =
      ergodic_constant(spec, {2.0, 4.0, 8.0}, default_lambda_schedule(), 0.01);
  CHECK(std::abs(est.value - 1.0) <= 3e-2);  // E = hbar(p0) = 1
  CHECK(est.monotonicity_violation <= 1e-2);
  CHECK(est.converged);
}

TEST_CASE("R sweep: flat preset settles at depth 1") {
  const HamiltonianSpec spec = spec_1d(make_periodic_zero(1), make_defect_cos2(1.0, 1), "flat");
  const ErgodicEstimate est =
      ergodic_constant(spec, {2.0, 4.0, 8.0}, default_lambda_schedule(), 0.01);
  CHECK(std::abs(est.value - 1.0) <= 2e-2);
  CHECK(est.converged);
  CHECK(est.monotonicity_violation <= 1e-2);
}

TEST_CASE("truncation radius must exceed the support") {
  const HamiltonianSpec spec = spec_1d(make_periodic_zero(1), make_defect_cos2(1.0, 1), "flat");
  CHECK_THROWS_AS(ergodic_constant_truncated(spec, 0.4, default_lambda_schedule(), 0.01),
                  std::invalid_argument);
}

TEST_CASE("analytic 1d values") {
  CHECK(std::abs(analytic_E_1d(make_periodic_zero(1), make_defect_cos2(1.0, 1)) - 1.0) <= 1e-9);
  CHECK(std::abs(analytic_E_1d(make_periodic_zero(1), make_defect_cos2(2.0, 1)) - 2.0) <= 1e-9);
  CHECK(std::abs(analytic_E_1d(make_periodic_sin(1), make_defect_cos2(1.0, 1)) - kGolden) <= 1e-6);
  CHECK_THROWS_AS(analytic_E_1d(make_periodic_sin(1), make_defect_cos2(1.0, 1, /*upward=*/true)),
                  std::invalid_argument);
}

TEST_CASE("analytic radial values") {
  CHECK(analytic_E_radial(0.0, make_defect_cos2(1.0, 2)) == doctest::Approx(1.0));
  CHECK(analytic_E_radial(0.3, make_defect_none(2)) == doctest::Approx(0.3));
}

TEST_CASE("2d disk cross-check of the radial formula") {
  SeparableSpec s;
  s.dim = 2;
  s.kinetic = [](Vec p) { return std::sqrt(1.0 + dot(p, p)) - 1.0; };
  s.kinetic_lipschitz = 1.0;
  s.periodic = make_periodic_zero(2);
  s.defect = make_defect_cos2(1.0, 2);
  s.name = "radial";
  const HamiltonianSpec spec = make_separable(s);
  const TruncatedErgodic e = ergodic_constant_truncated(spec, 3.0, {1e-1, 3e-2, 1e-2}, 0.06);
  CHECK(std::abs(e.value - analytic_E_radial(0.0, s.defect)) <= 5e-2);
}

TEST_CASE("upward defects do not move E") {
  const HamiltonianSpec down = spec_1d(make_periodic_sin(1), make_defect_cos2(1.0, 1), "down");
  const HamiltonianSpec up =
      spec_1d(make_periodic_sin(1), make_defect_cos2(1.0, 1, /*upward=*/true), "up");
  const HamiltonianSpec none = spec_1d(make_periodic_sin(1), make_defect_none(1), "none");
  const auto schedule = default_lambda_schedule();
  const double e_down = ergodic_constant_truncated(down, 4.0, schedule, 0.01).value;
  const double e_up = ergodic_constant_truncated(up, 4.0, schedule, 0.01).value;
  const double e_none = ergodic_constant_truncated(none, 4.0, schedule, 0.01).value;
  CHECK(e_down > 1.0 + 1e-2);            // strictly above hbar(p0) = 1
  CHECK(std::abs(e_up - e_none) <= 1e-2);  // upward bump invisible
}

TEST_CASE("constant shifts move E linearly") {
  const HamiltonianSpec base = spec_1d(make_periodic_zero(1), make_defect_none(1), "zero");
  const HamiltonianSpec shifted = spec_1d(make_periodic_constant(0.8, 1), make_defect_none(1), "c");
  const auto schedule = default_lambda_schedule();
  const double e0 = ergodic_constant_truncated(base, 2.0, schedule, 0.01).value;
  const double e1 = ergodic_constant_truncated(shifted, 2.0, schedule, 0.01).value;
  CHECK(std::abs((e1 - e0) - (-0.8)) <= 1e-6);  // E = -inf l drops by the added constant
}

TEST_CASE("deepening the defect deepens E") {
  const auto schedule = default_lambda_schedule();
  double prev = -1.0;
  for (double depth : {0.5, 1.0, 1.5}) {
    const HamiltonianSpec spec =
        spec_1d(make_periodic_zero(1), make_defect_cos2(depth, 1), "flat");
    const double e = ergodic_constant_truncated(spec, 3.0, schedule, 0.01).value;
    CHECK(e > prev);
    prev = e;
  }
}
