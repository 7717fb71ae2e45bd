#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hjhom/vec.hpp"

namespace hjhom {

enum class GeometryKind { Torus, Ball, Box };

struct Geometry {
  GeometryKind kind = GeometryKind::Torus;
  double radius = 0.0;  // ball R or box half-width L; unused for torus

  static Geometry torus() { return {GeometryKind::Torus, 0.0}; }
  static Geometry ball(double r) { return {GeometryKind::Ball, r}; }
  static Geometry box(double l) { return {GeometryKind::Box, l}; }
  const char* name() const;
};

// Uniform grid over the unit torus, a ball or a box, with one value per
// node. For ball geometry the nodes of the bounding box stay allocated and
// the ones outside |x| <= R are inactive.
struct GridField {
  Geometry geom;
  int dim = 1;
  double h = 0.0;
  int n[2] = {1, 1};  // nodes per axis, n[1] == 1 in 1D
  std::vector<double> values;
  std::vector<uint8_t> active;  // empty means all nodes active

  int size() const { return n[0] * n[1]; }
  int index(int i, int j = 0) const { return i + n[0] * j; }
  bool is_active(int idx) const { return active.empty() || active[idx] != 0; }
  Vec node(int idx) const;
  Vec node(int i, int j) const;
  int nearest_node(Vec x) const;

  double min_active() const;
  double max_active() const;
  double mean_active() const;
};

GridField make_torus_grid(int dim, int nodes_per_axis);
// Nodes x = -R + i h with exactly representable endpoints; h is adjusted to
// the nearest value with 2R/h integral.
GridField make_ball_grid(int dim, double radius, double h);
GridField make_box_grid(int dim, double half_width, double h);

// Multilinear interpolation. Torus wraps; ball/box clamps to the grid hull
// (callers needing state constraints must not ask for exterior points).
double interpolate(const GridField& f, Vec x);

// Max |f - g| over active nodes (same layout required).
double sup_diff(const GridField& f, const GridField& g);

// Discrete gradient sup-norm via one-sided differences between active nodes.
double max_gradient_norm(const GridField& f);

// CSV dump: coordinate columns then value, "%.12g" formatting.
void write_field_csv(const GridField& f, const std::string& path);

}  // namespace hjhom
