#include "hjhom/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace hjhom {

const char* Geometry::name() const {
  switch (kind) {
    case GeometryKind::Torus: return "torus";
    case GeometryKind::Ball: return "ball";
    case GeometryKind::Box: return "box";
  }
  return "?";
}

Vec GridField::node(int idx) const { return node(idx % n[0], idx / n[0]); }

Vec GridField::node(int i, int j) const {
  if (geom.kind == GeometryKind::Torus) return dim == 1 ? vec1(i * h) : vec2(i * h, j * h);
  const double x = -geom.radius + i * h;
  const double y = -geom.radius + j * h;
  return dim == 1 ? vec1(x) : vec2(x, y);
}

int GridField::nearest_node(Vec x) const {
  auto clampi = [&](double t, int nmax) {
    return std::max(0, std::min(nmax - 1, static_cast<int>(std::lround(t))));
  };
  if (geom.kind == GeometryKind::Torus) {
    auto wrap = [&](double v, int nn) {
      int i = static_cast<int>(std::lround(v / h));
      i %= nn;
      return i < 0 ? i + nn : i;
    };
    return index(wrap(x[0], n[0]), dim == 1 ? 0 : wrap(x[1], n[1]));
  }
  const int i = clampi((x[0] + geom.radius) / h, n[0]);
  const int j = dim == 1 ? 0 : clampi((x[1] + geom.radius) / h, n[1]);
  return index(i, j);
}

double GridField::min_active() const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i)
    if (is_active(i)) m = std::min(m, values[i]);
  return m;
}

double GridField::max_active() const {
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i)
    if (is_active(i)) m = std::max(m, values[i]);
  return m;
}

double GridField::mean_active() const {
  double s = 0.0;
  long cnt = 0;
  for (int i = 0; i < size(); ++i)
    if (is_active(i)) {
      s += values[i];
      ++cnt;
    }
  return cnt ? s / cnt : 0.0;
}

GridField make_torus_grid(int dim, int nodes_per_axis) {
  if (nodes_per_axis < 4) throw std::invalid_argument("torus grid too coarse");
  GridField g;
  g.geom = Geometry::torus();
  g.dim = dim;
  g.n[0] = nodes_per_axis;
  g.n[1] = dim == 1 ? 1 : nodes_per_axis;
  g.h = 1.0 / nodes_per_axis;
  g.values.assign(g.size(), 0.0);
  return g;
}

static GridField make_centered_grid(GeometryKind kind, int dim, double radius, double h) {
  if (radius <= 0 || h <= 0) throw std::invalid_argument("grid needs positive radius and spacing");
  const int half = std::max(2, static_cast<int>(std::lround(radius / h)));
  GridField g;
  g.geom = {kind, radius};
  g.dim = dim;
  g.h = radius / half;
  g.n[0] = 2 * half + 1;
  g.n[1] = dim == 1 ? 1 : 2 * half + 1;
  g.values.assign(g.size(), 0.0);
  if (kind == GeometryKind::Ball) {
    g.active.assign(g.size(), 0);
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const Vec x = g.node(i, j);
        g.active[g.index(i, j)] = norm(x) <= radius + 1e-12 ? 1 : 0;
      }
  }
  return g;
}

GridField make_ball_grid(int dim, double radius, double h) {
  return make_centered_grid(GeometryKind::Ball, dim, radius, h);
}

GridField make_box_grid(int dim, double half_width, double h) {
  return make_centered_grid(GeometryKind::Box, dim, half_width, h);
}

double interpolate(const GridField& f, Vec x) {
  if (f.geom.kind == GeometryKind::Torus) {
    auto locate = [&](double v, int nn, int& i0, double& th) {
      double t = v / f.h;
      t -= std::floor(t / nn) * nn;
      i0 = static_cast<int>(std::floor(t));
      th = t - i0;
      if (i0 >= nn) {
        i0 = 0;
        th = 0.0;
      }
    };
    int i0, j0 = 0;
    double tx, ty = 0.0;
    locate(x[0], f.n[0], i0, tx);
    if (f.dim == 2) locate(x[1], f.n[1], j0, ty);
    const int i1 = (i0 + 1) % f.n[0];
    if (f.dim == 1) return (1 - tx) * f.values[i0] + tx * f.values[i1];
    const int j1 = (j0 + 1) % f.n[1];
    return (1 - tx) * (1 - ty) * f.values[f.index(i0, j0)] +
           tx * (1 - ty) * f.values[f.index(i1, j0)] +
           (1 - tx) * ty * f.values[f.index(i0, j1)] + tx * ty * f.values[f.index(i1, j1)];
  }
  auto locate = [&](double v, int nn, int& i0, double& th) {
    double t = (v + f.geom.radius) / f.h;
    t = std::max(0.0, std::min(static_cast<double>(nn - 1), t));
    i0 = std::min(nn - 2, static_cast<int>(std::floor(t)));
    th = t - i0;
  };
  int i0, j0 = 0;
  double tx, ty = 0.0;
  locate(x[0], f.n[0], i0, tx);
  if (f.dim == 2) locate(x[1], f.n[1], j0, ty);
  if (f.dim == 1) return (1 - tx) * f.values[i0] + tx * f.values[i0 + 1];
  return (1 - tx) * (1 - ty) * f.values[f.index(i0, j0)] +
         tx * (1 - ty) * f.values[f.index(i0 + 1, j0)] +
         (1 - tx) * ty * f.values[f.index(i0, j0 + 1)] +
         tx * ty * f.values[f.index(i0 + 1, j0 + 1)];
}

double sup_diff(const GridField& f, const GridField& g) {
  if (f.size() != g.size()) throw std::invalid_argument("sup_diff: layout mismatch");
  double m = 0.0;
  for (int i = 0; i < f.size(); ++i)
    if (f.is_active(i) && g.is_active(i)) m = std::max(m, std::abs(f.values[i] - g.values[i]));
  return m;
}

double max_gradient_norm(const GridField& f) {
  double m = 0.0;
  for (int j = 0; j < f.n[1]; ++j)
    for (int i = 0; i < f.n[0]; ++i) {
      const int idx = f.index(i, j);
      if (!f.is_active(idx)) continue;
      double gx = 0.0, gy = 0.0;
      const bool torus = f.geom.kind == GeometryKind::Torus;
      const int ip = torus ? (i + 1) % f.n[0] : i + 1;
      if (ip < f.n[0] && f.is_active(f.index(ip, j)))
        gx = (f.values[f.index(ip, j)] - f.values[idx]) / f.h;
      if (f.dim == 2) {
        const int jp = torus ? (j + 1) % f.n[1] : j + 1;
        if (jp < f.n[1] && f.is_active(f.index(i, jp)))
          gy = (f.values[f.index(i, jp)] - f.values[idx]) / f.h;
      }
      m = std::max(m, std::hypot(gx, gy));
    }
  return m;
}

void write_field_csv(const GridField& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << (f.dim == 1 ? "x,value\n" : "x,y,value\n");
  char buf[160];
  for (int j = 0; j < f.n[1]; ++j)
    for (int i = 0; i < f.n[0]; ++i) {
      const int idx = f.index(i, j);
      if (!f.is_active(idx)) continue;
      const Vec x = f.node(i, j);
      if (f.dim == 1)
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", x[0], f.values[idx]);
      else
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", x[0], x[1], f.values[idx]);
      out << buf;
    }
}

}  // namespace hjhom
