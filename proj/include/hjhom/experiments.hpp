#pragma once

#include <string>
#include <vector>

#include "hjhom/control.hpp"
#include "hjhom/homogenized.hpp"
#include "hjhom/io.hpp"

namespace hjhom {

struct Preset {
  std::string name;
  int dim = 1;
  std::string environment = "zero";  // "zero" | "sin" | "const"
  double environment_level = 0.0;    // for "const"
  bool has_defect = true;
  double defect_depth = 1.0;
  bool defect_upward = false;
  double alpha = 1.0;
  std::vector<double> lambda_schedule = default_lambda_schedule();
  std::vector<double> radii = {2.0, 4.0, 8.0};
  std::vector<double> eps_sweep = {0.2, 0.1, 0.05};
  int torus_nodes = 400;
  double ball_h = 0.005;
  double homog_h = 0.005;
  double homog_half_width = 4.0;
  double eps_half_width = 8.0;
  int eps_nodes_per_eps = 20;  // h = eps / this
  double p_min = -3.0, p_max = 3.0;
  int n_p = 61;
  uint64_t seed = 20240817;
  double budget_seconds = 300.0;
  // 2D radial preset
  double disk_radius = 4.0;
  double h_2d = 0.04;

  PeriodicCost make_environment() const;
  DefectCost make_defect() const;
  HamiltonianSpec make_spec() const;  // separable: |p| in 1D, sqrt(1+|p|^2)-1 in 2D
};

const Preset& preset_by_name(const std::string& name);
std::vector<std::string> preset_names();

struct ErrorTable {
  std::vector<double> eps;
  std::vector<double> sup_error_excl_origin;  // window minus the origin node
  std::vector<double> sup_error_incl_origin;
  std::vector<double> seconds;
};

// eps-sweep against the homogenized limit on the window [-2, 2]^d; the
// reference is the 1D closed form.
ErrorTable convergence_study(const Preset& preset);

void write_error_table_csv(const ErrorTable& t, const std::string& path);

// Full pipeline on one preset: hbar table, E estimate, visibility,
// homogenized solve, growth ladder, oracle deltas. Timing lands in a
// separate "timing" object so reruns stay byte-comparable without it.
json pipeline_report(const Preset& preset, int jobs = 1);

}  // namespace hjhom
