#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hjhom/oracles1d.hpp"
#include "hjhom/solver.hpp"

using namespace hjhom;

namespace {

const DefectCost kBump = make_defect_cos2(1.0, 1);
const DefectCost kBumpUp = make_defect_cos2(1.0, 1, /*upward=*/true);

HamiltonianSpec flat_spec() {
  SeparableSpec s;
  s.dim = 1;
  s.kinetic = [](Vec p) { return norm(p); };
  s.kinetic_lipschitz = 1.0;
  s.periodic = make_periodic_zero(1);
  s.defect = kBump;
  s.name = "flat-down";
  return make_separable(s);
}

}  // namespace

TEST_CASE("quadrature sanity") {
  CHECK(std::abs(integrate([](double t) { return std::exp(t); }, 0.0, 1.0) - (std::exp(1.0) - 1.0)) <=
        1e-10);
  // cos^2 bump integral over half its support
  CHECK(std::abs(integrate([](double t) { return std::cos(M_PI * t) * std::cos(M_PI * t); }, 0.0,
                           0.5) -
                 0.25) <= 1e-10);
}

TEST_CASE("u_eps_flat at the origin returns the defect bottom") {
  for (double eps : {0.5, 0.1, 0.01}) CHECK(u_eps_flat(kBump, eps, 0.0) == doctest::Approx(-1.0));
}

TEST_CASE("u_eps_flat approaches -e^{-|x|} for small eps") {
  const double v = u_eps_flat(kBump, 0.05, 1.0);
  CHECK(std::abs(v - (-std::exp(-1.0))) <= 1e-2);
  // evenness of the closed form for an even defect
  for (double x : {0.3, 0.8, 2.0})
    CHECK(std::abs(u_eps_flat(kBump, 0.05, x) - u_eps_flat(kBump, 0.05, -x)) <= 1e-12);
}

TEST_CASE("u_eps_flat satisfies its own equation") {
  const double eps = 0.07;
  for (int i = 0; i < 100; ++i) {
    const double x = -2.0 + 4.0 * (i + 0.37) / 100.0;
    if (std::abs(x) < 1e-3) continue;  // kink of |u'| at the origin
    const double u = u_eps_flat(kBump, eps, x);
    const double du = u_eps_flat_derivative(kBump, eps, x);
    const double residual = u + std::abs(du) - kBump(vec1(x / eps));
    CHECK(std::abs(residual) <= 1e-6);
  }
}

TEST_CASE("u_eps_flat refuses an upward bump") {
  CHECK_THROWS_AS(u_eps_flat(kBumpUp, 0.1, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(u_eps_flat_upward(kBump, 0.1, 0.3), std::invalid_argument);
}

TEST_CASE("upward variant is nonnegative and O(eps)") {
  CHECK(u_eps_flat_upward(make_defect_cos2(0.0, 1, true), 0.1, 0.2) == 0.0);
  for (double x : {-1.0, -0.2, 0.0, 0.03, 0.4, 2.0}) {
    const double v = u_eps_flat_upward(kBumpUp, 0.05, x);
    CHECK(v >= 0.0);
    CHECK(v <= 0.05);
  }
}

TEST_CASE("w_lambda_flat recovers the ergodic constant and the linear growth") {
  const WLambdaFlat at0 = w_lambda_flat(kBump, 1e-3, 0.0);
  CHECK(std::abs(-1e-3 * at0.value - 1.0) <= 1e-3);

  // normalized limit at x = 3: -l0(0) x + int_0^3 l0 = 3 - 1/4
  const WLambdaFlat at3 = w_lambda_flat(kBump, 1e-4, 3.0);
  CHECK(std::abs(at3.limit - 2.75) <= 1e-8);
  CHECK(std::abs(at3.normalized - at3.limit) <= 1e-2);

  // residual of lambda w + |w'| = l0 via finite differences off the kink
  const double lam = 0.01, dx = 1e-6;
  for (double x : {-2.0, -0.3, 0.2, 1.5}) {
    const double w = w_lambda_flat(kBump, lam, x).value;
    const double wp = (w_lambda_flat(kBump, lam, x + dx).value - w) / dx;
    CHECK(std::abs(lam * w + std::abs(wp) - kBump(vec1(x))) <= 1e-5);
  }
}

TEST_CASE("w_lambda_flat of the zero defect vanishes") {
  DefectCost none = make_defect_none(1);
  none.single_extremum_at_origin = true;  // degenerate but admissible
  for (double x : {-1.0, 0.0, 2.0}) CHECK(w_lambda_flat(none, 0.01, x).value == 0.0);
}

TEST_CASE("g and h periodic kernels") {
  const PeriodicCost c = make_periodic_constant(0.7, 1);
  const PeriodicAveraged gc = g_h_periodic(c, 0.1);
  for (double x : {0.0, 0.03, 1.4}) CHECK(std::abs(gc.g(x) - 0.7) <= 1e-9);

  const PeriodicCost sin = make_periodic_sin(1);
  const PeriodicAveraged gs = g_h_periodic(sin, 0.1);
  CHECK(std::abs(gs.g_mean - sin.mean_value) <= 1e-8);
  // g' + g = lper(./eps), derivative by central differences
  const double dx = 1e-5;
  for (double x : {0.01, 0.33, 0.72}) {
    const double g = gs.g(x);
    const double gp = (gs.g(x + dx) - gs.g(x - dx)) / (2.0 * dx);
    CHECK(std::abs(g + gp - sin(vec1(x / 0.1))) <= 1e-6);
    const double h = gs.h(x);
    const double hp = (gs.h(x + dx) - gs.h(x - dx)) / (2.0 * dx);
    CHECK(std::abs(h - hp - sin(vec1(x / 0.1))) <= 1e-6);
  }
  // eps-periodicity of the kernel
  CHECK(std::abs(gs.g(0.23) - gs.g(0.23 + 0.1)) <= 1e-9);
}

TEST_CASE("two defects: the min formula solves the two-bump equation") {
  const double eps = 0.1;
  // midpoint symmetry: both arguments agree
  CHECK(std::abs(u_eps_flat(kBump, eps, eps / 2) - u_eps_flat(kBump, eps, -eps / 2)) <= 1e-12);

  // residual of z + |z'| = l0(x/eps) + l0((x-eps)/eps) off the kink set
  const double dx = 1e-6;
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const double x = -1.0 + 3.0 * (i + 0.41) / 100.0;
    // kinks: origin of each bump and the midpoint where the min switches
    if (std::abs(x) < 1e-2 || std::abs(x - eps) < 1e-2 || std::abs(x - eps / 2) < 1e-2) continue;
    const double z = two_defect_min(kBump, eps, x);
    const double zp = (two_defect_min(kBump, eps, x + dx) - two_defect_min(kBump, eps, x - dx)) /
                      (2.0 * dx);
    const double rhs = kBump(vec1(x / eps)) + kBump(vec1((x - eps) / eps));
    CHECK(std::abs(z + std::abs(zp) - rhs) <= 1e-5);
    ++checked;
  }
  CHECK(checked >= 90);

  // left support: the near defect wins
  for (double x : {-0.04, -0.02, 0.01, 0.04})
    CHECK(two_defect_min(kBump, eps, x) == u_eps_flat(kBump, eps, x));

  DefectCost uneven = kBump;
  uneven.even_symmetric = false;
  CHECK_THROWS_AS(two_defect_min(uneven, eps, 0.0), std::invalid_argument);
}

TEST_CASE("oracle equivalence: the eps solver against the closed form") {
  const double eps = 0.05, h = eps / 20.0;
  const DiscountedSolve s = solve_eps_problem(flat_spec(), 1.0, eps, 8.0, h);
  double worst = 0.0;
  for (int i = 0; i < s.field.size(); ++i) {
    const double x = s.field.node(i)[0];
    if (std::abs(x) > 2.0) continue;
    worst = std::max(worst, std::abs(s.field.values[i] - u_eps_flat(kBump, eps, x)));
  }
  CHECK(worst <= std::max(3.0 * h, 3e-2));
}
