#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "hjhom/control.hpp"
#include "hjhom/costs.hpp"

using namespace hjhom;

namespace {

HamiltonianSpec flat_defect_spec() {
  SeparableSpec s;
  s.dim = 1;
  s.kinetic = [](Vec p) { return norm(p); };
  s.kinetic_lipschitz = 1.0;
  s.periodic = make_periodic_zero(1);
  s.defect = make_defect_cos2(1.0, 1);
  s.name = "flat";
  return make_separable(s);
}

}  // namespace

TEST_CASE("periodic costs satisfy their invariants") {
  const PeriodicCost sin = make_periodic_sin(1);
  CHECK(periodicity_violation(sin) <= 1e-12);
  CHECK(std::abs(sin.inf_value - (-1.0)) <= 1e-6);
  CHECK(std::abs(sin.mean_value) <= 1e-6);
  for (int i = 0; i < 100; ++i) {
    const double y = -3.0 + 0.06 * i;
    CHECK(std::abs(sin(vec1(y))) <= sin.bound + 1e-12);
  }
}

TEST_CASE("defect support and flags") {
  const DefectCost d = make_defect_cos2(1.0, 1);
  CHECK(support_violation(d) == 0.0);
  CHECK(d.value_at_origin == -1.0);
  CHECK(d(vec1(0.0)) == -1.0);
  CHECK(d(vec1(0.51)) == 0.0);
  // single minimum at 0, monotone on each side
  for (double y = 0.01; y < 0.5; y += 0.01) {
    CHECK(d(vec1(y)) > d(vec1(y - 0.01)));
    CHECK(d(vec1(-y)) == d(vec1(y)));
  }
}

TEST_CASE("hamiltonian evaluation, separable branch") {
  const HamiltonianSpec spec = flat_defect_spec();
  CHECK(eval_hamiltonian(spec, vec1(0.0), vec1(0.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eval_hamiltonian(spec, vec1(2.0), vec1(3.0)) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(eval_hamiltonian(spec, vec1(std::nan("")), vec1(0.0)), std::domain_error);
}

TEST_CASE("control-form max over the discrete set matches |p| - l") {
  const HamiltonianSpec sep = flat_defect_spec();
  const ControlFormSpec cf = to_control_form(*sep.separable);
  const HamiltonianSpec spec = make_control_form(cf);
  for (double p : {-2.0, 0.0, 2.0}) {
    for (double x : {0.0, 0.3, 2.0}) {
      const double expected = std::abs(p) - (sep.separable->cost(vec1(x)));
      CHECK(std::abs(eval_hamiltonian(spec, vec1(x), vec1(p)) - expected) <= 1e-12);
    }
  }
}

TEST_CASE("legendre conjugate of the norm vanishes on the unit ball") {
  const ControlSet cs = make_control_set_1d(1.0, 21);
  const auto cost = legendre_cost([](Vec p) { return norm(p); }, cs);
  for (double c : cost) CHECK(std::abs(c) <= 1e-9);
}

TEST_CASE("legendre conjugate of sqrt(1+p^2)-1 matches the closed form") {
  const ControlSet cs = make_control_set_1d(1.0, 21);
  const auto cost = legendre_cost([](Vec p) { return std::sqrt(1.0 + dot(p, p)) - 1.0; }, cs);
  for (size_t j = 0; j < cs.velocities.size(); ++j) {
    const double a = std::abs(cs.velocities[j][0]);
    if (a > 0.95) continue;  // conjugate blows up toward |a| = 1
    const double expected = 1.0 - std::sqrt(1.0 - a * a);
    CHECK(std::abs(cost[j] - expected) <= 1e-3);
  }
  // the spec points of the closed form
  for (double a : {0.0, 0.5, 0.9}) {
    const ControlSet single{1, {vec1(a)}, 1.0, 1, 1};
    const auto c = legendre_cost([](Vec p) { return std::sqrt(1.0 + dot(p, p)) - 1.0; }, single);
    CHECK(std::abs(c[0] - (1.0 - std::sqrt(1.0 - a * a))) <= 1e-3);
  }
}

TEST_CASE("legendre rejects kinetic parts unbounded below") {
  const ControlSet cs = make_control_set_1d(1.0, 5);
  CHECK_THROWS_AS(legendre_cost([](Vec p) { return -norm(p); }, cs), std::invalid_argument);
}

TEST_CASE("legendre round-trip rebuilds the kinetic part") {
  auto kinetic = [](Vec p) { return std::sqrt(1.0 + dot(p, p)) - 1.0; };
  const ControlSet cs = make_control_set_1d(1.0, 201);
  const auto cost = legendre_cost(kinetic, cs);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  const double spacing = 2.0 / 200;  // control grid spacing bounds the defect
  for (int trial = 0; trial < 50; ++trial) {
    const double p = dist(rng);
    double rebuilt = -1e300;
    for (size_t j = 0; j < cs.velocities.size(); ++j)
      rebuilt = std::max(rebuilt, -p * cs.velocities[j][0] - cost[j]);
    CHECK(std::abs(rebuilt - kinetic(vec1(p))) <= 2.0 * spacing);
  }
}

TEST_CASE("shift by p0 relocates the p argument") {
  const HamiltonianSpec sep = flat_defect_spec();
  const ControlFormSpec cf = to_control_form(*sep.separable);
  const ControlFormSpec zero_shift = shift_hamiltonian(cf, vec1(0.0));
  const ControlFormSpec unit_shift = shift_hamiltonian(cf, vec1(1.0));
  const HamiltonianSpec base = make_control_form(cf);
  const HamiltonianSpec s0 = make_control_form(zero_shift);
  const HamiltonianSpec s1 = make_control_form(unit_shift);
  for (double x : {-1.0, 0.0, 0.4}) {
    CHECK(std::abs(eval_hamiltonian(s0, vec1(x), vec1(0.7)) -
                   eval_hamiltonian(base, vec1(x), vec1(0.7))) <= 1e-12);
    CHECK(std::abs(eval_hamiltonian(s1, vec1(x), vec1(0.0)) -
                   eval_hamiltonian(base, vec1(x), vec1(1.0))) <= 1e-12);
  }
  // structural witnesses survive the shift with the adjusted cost bound
  const WitnessReport w = sample_witnesses(s1, zero_shift.controls.inner_radius(),
                                           cf.spatial_bound + 1.0, cf.controls.max_speed);
  CHECK(w.ok(1e-9));
}

TEST_CASE("sampled convexity in p") {
  for (const HamiltonianSpec& spec :
       {flat_defect_spec(), make_control_form(to_control_form(*flat_defect_spec().separable))}) {
    for (double x : {0.0, 0.2}) {
      for (double p = -2.0; p <= 2.0; p += 0.5) {
        for (double q = -2.0; q <= 2.0; q += 0.5) {
          const double mid = eval_hamiltonian(spec, vec1(x), vec1(0.5 * (p + q)));
          const double avg = 0.5 * (eval_hamiltonian(spec, vec1(x), vec1(p)) +
                                    eval_hamiltonian(spec, vec1(x), vec1(q)));
          CHECK(mid <= avg + 1e-10);
        }
      }
    }
  }
}

TEST_CASE("composite equals the periodic cost outside the support") {
  const PeriodicCost sin = make_periodic_sin(1);
  const DefectCost d = make_defect_cos2(1.0, 1);
  const auto composite = composite_cost(sin, d);
  for (double y = 0.5001; y < 4.0; y += 0.07) {
    CHECK(composite(vec1(y)) == sin(vec1(y)));
    CHECK(composite(vec1(-y)) == sin(vec1(-y)));
  }
}

TEST_CASE("downward predicate by dense sampling") {
  const PeriodicCost sin = make_periodic_sin(1);
  CHECK(downward_defect(sin, make_defect_cos2(1.0, 1)));
  CHECK(downward_defect(make_periodic_zero(1), make_defect_cos2(1.0, 1)));
  CHECK_FALSE(downward_defect(sin, make_defect_none(1)));
  CHECK_FALSE(downward_defect(make_periodic_zero(1), make_defect_cos2(1.0, 1, /*upward=*/true)));
}

TEST_CASE("dense sampling oracle pins the golden-ratio minimum") {
  const PeriodicCost sin = make_periodic_sin(1);
  const DefectCost d = make_defect_cos2(1.0, 1);
  const double golden = 0.5 * (1.0 + std::sqrt(5.0));
  CHECK(std::abs(composite_inf(sin, d) - (-golden)) <= 1e-6);
}

TEST_CASE("costs load from two-column csv samples") {
  {
    std::ofstream env("env_samples.csv");
    env << "y,value\n";
    for (int i = 0; i <= 400; ++i) {
      const double y = static_cast<double>(i) / 400;
      env << y << "," << std::sin(2 * M_PI * y) << "\n";
    }
  }
  const PeriodicCost loaded = make_periodic_from_samples("env_samples.csv");
  const PeriodicCost builtin = make_periodic_sin(1);
  CHECK(std::abs(loaded.inf_value - builtin.inf_value) <= 1e-3);
  CHECK(std::abs(loaded.mean_value - builtin.mean_value) <= 1e-3);
  for (double y : {-0.7, 0.1, 1.3}) CHECK(std::abs(loaded(vec1(y)) - builtin(vec1(y))) <= 1e-4);

  {
    std::ofstream def("defect_samples.csv");
    def << "y,value\n";
    for (int i = 0; i <= 200; ++i) {
      const double y = -0.5 + static_cast<double>(i) / 200;
      const double c = std::cos(M_PI * y);
      def << y << "," << -c * c << "\n";
    }
  }
  const DefectCost dl = make_defect_from_samples("defect_samples.csv");
  CHECK(dl.support_radius == doctest::Approx(0.5));
  CHECK(dl.nonpositive);
  CHECK(dl.even_symmetric);
  CHECK(std::abs(dl(vec1(0.0)) - (-1.0)) <= 1e-4);
  CHECK(dl(vec1(0.8)) == 0.0);
  std::remove("env_samples.csv");
  std::remove("defect_samples.csv");
}

TEST_CASE("control sets contain the idle control and their symmetry group") {
  const ControlSet c1 = make_control_set_1d(1.0, 21);
  CHECK(c1.contains_zero());
  CHECK(c1.inner_radius() == doctest::Approx(1.0));
  const ControlSet c2 = make_control_set_2d(1.0, 32, 11);
  CHECK(c2.contains_zero());
  CHECK(c2.inner_radius() > 0.95);
  // closed under the generating rotation by 2*pi/32
  const double th = 2.0 * M_PI / 32.0;
  for (const Vec& v : c2.velocities) {
    const Vec rot = vec2(std::cos(th) * v[0] - std::sin(th) * v[1],
                         std::sin(th) * v[0] + std::cos(th) * v[1]);
    bool found = false;
    for (const Vec& w : c2.velocities)
      if (norm(w - rot) <= 1e-12) found = true;
    CHECK(found);
  }
}

TEST_CASE("structural witnesses for the flat spec") {
  const HamiltonianSpec sep = flat_defect_spec();
  const ControlFormSpec cf = to_control_form(*sep.separable);
  const WitnessReport w =
      sample_witnesses(make_control_form(cf), cf.controls.inner_radius(), 1.0, 1.0);
  CHECK(w.ok(1e-9));
}
