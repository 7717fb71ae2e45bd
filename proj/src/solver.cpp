#include "hjhom/solver.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace hjhom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Foot-point stencil of one control: the grid is uniform and the dynamics
// x-independent, so the integer offset and interpolation weights are shared
// by every node.
struct Stencil {
  int bx = 0, by = 0;
  double fx = 0.0, fy = 0.0;
  bool needs_x1 = false, needs_y1 = false;
};

struct Lattice {
  const GridField* g;
  std::vector<Stencil> st;
  bool torus;

  Lattice(const GridField& grid, const ControlSet& controls, double dt) : g(&grid) {
    torus = grid.geom.kind == GeometryKind::Torus;
    st.reserve(controls.velocities.size());
    for (const Vec& v : controls.velocities) {
      Stencil s;
      const double ox = dt * v[0] / grid.h;
      const double oy = grid.dim == 2 ? dt * v[1] / grid.h : 0.0;
      s.bx = static_cast<int>(std::floor(ox + 1e-13));
      s.by = static_cast<int>(std::floor(oy + 1e-13));
      s.fx = ox - s.bx;
      s.fy = oy - s.by;
      if (s.fx < 1e-12) s.fx = 0.0;
      if (s.fy < 1e-12) s.fy = 0.0;
      if (s.fx > 1.0 - 1e-12) {
        s.bx += 1;
        s.fx = 0.0;
      }
      if (s.fy > 1.0 - 1e-12) {
        s.by += 1;
        s.fy = 0.0;
      }
      s.needs_x1 = s.fx > 0.0;
      s.needs_y1 = s.fy > 0.0;
      st.push_back(s);
    }
  }

  int wrap(int i, int n) const {
    i %= n;
    return i < 0 ? i + n : i;
  }

  // Corner indices and weights of control j's foot from node (i,jy);
  // returns the number of corners, or -1 when the move is inadmissible
  // (foot outside the box hull or touching inactive ball nodes).
  int corners(int j, int i, int jy, int idx[4], double w[4]) const {
    const Stencil& s = st[j];
    const int nx = g->n[0], ny = g->n[1];
    int ix0 = i + s.bx, iy0 = jy + s.by;
    if (torus) {
      ix0 = wrap(ix0, nx);
      const int ix1 = s.needs_x1 ? wrap(ix0 + 1, nx) : ix0;
      if (g->dim == 1) {
        idx[0] = ix0;
        w[0] = 1.0 - s.fx;
        if (!s.needs_x1) return 1;
        idx[1] = ix1;
        w[1] = s.fx;
        return 2;
      }
      iy0 = wrap(iy0, ny);
      const int iy1 = s.needs_y1 ? wrap(iy0 + 1, ny) : iy0;
      int nc = 0;
      const double wx[2] = {1.0 - s.fx, s.fx};
      const double wy[2] = {1.0 - s.fy, s.fy};
      const int xi[2] = {ix0, ix1};
      const int yi[2] = {iy0, iy1};
      for (int a = 0; a <= (s.needs_x1 ? 1 : 0); ++a)
        for (int b = 0; b <= (s.needs_y1 ? 1 : 0); ++b) {
          idx[nc] = xi[a] + nx * yi[b];
          w[nc] = wx[a] * wy[b];
          ++nc;
        }
      return nc;
    }
    const int xhi = s.needs_x1 ? ix0 + 1 : ix0;
    if (ix0 < 0 || xhi > nx - 1) return -1;
    int iy1 = iy0;
    if (g->dim == 2) {
      iy1 = s.needs_y1 ? iy0 + 1 : iy0;
      if (iy0 < 0 || iy1 > ny - 1) return -1;
    } else {
      iy0 = iy1 = 0;
    }
    int nc = 0;
    const double wx[2] = {1.0 - s.fx, s.fx};
    const double wy[2] = {1.0 - s.fy, s.fy};
    const int xi[2] = {ix0, xhi};
    const int yi[2] = {iy0, iy1};
    for (int a = 0; a <= (s.needs_x1 ? 1 : 0); ++a)
      for (int b = 0; b <= (s.needs_y1 ? 1 : 0); ++b) {
        const int id = xi[a] + nx * yi[b];
        if (!g->is_active(id)) return -1;
        idx[nc] = id;
        w[nc] = wx[a] * wy[b];
        ++nc;
      }
    return nc;
  }
};

int zero_control_index(const ControlSet& cs) {
  for (size_t j = 0; j < cs.velocities.size(); ++j)
    if (norm(cs.velocities[j]) <= 1e-14) return static_cast<int>(j);
  throw std::logic_error("control set lacks a = 0");
}

}  // namespace

DiscreteProblem make_discrete_problem(const GridField& grid, const ControlSet& controls,
                                      std::vector<double> control_cost,
                                      const std::function<double(Vec)>& spatial_cost,
                                      double rate) {
  DiscreteProblem p;
  p.grid = &grid;
  p.controls = &controls;
  p.control_cost = std::move(control_cost);
  p.dt = grid.h / controls.max_speed;
  p.discount = 1.0 - rate * p.dt;
  if (p.discount <= 0.0 || p.discount >= 1.0)
    throw std::invalid_argument("discount rate out of range for this grid");
  p.node_cost.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    p.node_cost[i] = grid.is_active(i) ? spatial_cost(grid.node(i)) : 0.0;
  return p;
}

namespace {

// One in-place Gauss-Seidel pass of the Bellman operator in the given
// sweep ordering. In-place updates let fronts cross the whole domain in a
// single pass, which plain (Jacobi) improvement cannot do.
void gauss_seidel_sweep(const DiscreteProblem& problem, const Lattice& lat,
                        const std::vector<uint8_t>& fixed, int ordering,
                        std::vector<double>& w) {
  const GridField& grid = *problem.grid;
  const int nctl = static_cast<int>(problem.controls->velocities.size());
  const int nx = grid.n[0], ny = grid.n[1];
  const bool x_fwd = ordering & 1;
  const bool y_fwd = ordering & 2;
  int idx[4];
  double cw[4];
  for (int jj = 0; jj < ny; ++jj) {
    const int jy = y_fwd ? jj : ny - 1 - jj;
    for (int ii = 0; ii < nx; ++ii) {
      const int i = x_fwd ? ii : nx - 1 - ii;
      const int id = grid.index(i, jy);
      if (fixed[id]) continue;
      double best = kInf;
      for (int j = 0; j < nctl; ++j) {
        const int nc = lat.corners(j, i, jy, idx, cw);
        if (nc < 0) continue;
        double interp = 0.0;
        for (int c = 0; c < nc; ++c) interp += cw[c] * w[idx[c]];
        best = std::min(best, problem.dt * (problem.node_cost[id] + problem.control_cost[j]) +
                                  problem.discount * interp);
      }
      w[id] = best;
    }
  }
}

}  // namespace

DiscountedSolve policy_iteration(const DiscreteProblem& problem, const SolveOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const GridField& grid = *problem.grid;
  const int n = grid.size();
  const int nctl = static_cast<int>(problem.controls->velocities.size());
  const double beta = problem.discount;
  const double dt = problem.dt;
  const Lattice lat(grid, *problem.controls, dt);

  std::vector<uint8_t> fixed(n, 0);
  std::vector<double> fixed_value(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (!grid.is_active(i)) fixed[i] = 1;
  for (size_t k = 0; k < problem.pinned_nodes.size(); ++k) {
    fixed[problem.pinned_nodes[k]] = 1;
    fixed_value[problem.pinned_nodes[k]] = problem.pinned_values[k];
  }

  std::vector<int> policy(n, zero_control_index(*problem.controls));
  if (opts.warm_policy && static_cast<int>(opts.warm_policy->size()) == n)
    policy = *opts.warm_policy;

  Eigen::VectorXd w(n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) * 5);
  int idx[4];
  double cw[4];

  // exact value of the current policy: (I - beta P) w = dt * running cost,
  // Dirichlet rows for pinned and inactive nodes
  auto evaluate = [&]() {
    trips.clear();
    Eigen::VectorXd rhs(n);
    for (int jy = 0; jy < grid.n[1]; ++jy)
      for (int i = 0; i < grid.n[0]; ++i) {
        const int id = grid.index(i, jy);
        if (fixed[id]) {
          trips.emplace_back(id, id, 1.0);
          rhs[id] = fixed_value[id];
          continue;
        }
        const int j = policy[id];
        const int nc = lat.corners(j, i, jy, idx, cw);
        if (nc < 0) throw SolverError("policy stepped outside the domain", 0.0);
        double diag = 1.0;
        rhs[id] = dt * (problem.node_cost[id] + problem.control_cost[j]);
        for (int c = 0; c < nc; ++c) {
          if (idx[c] == id)
            diag -= beta * cw[c];
          else
            trips.emplace_back(id, idx[c], -beta * cw[c]);
        }
        trips.emplace_back(id, id, diag);
      }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success)
      throw SolverError("policy evaluation factorization failed", 0.0);
    w = lu.solve(rhs);
  };

  DiscountedSolve out;
  out.report.contraction = beta;
  out.report.dt = dt;

  const int sweeps = grid.dim == 1 ? 2 : 4;
  evaluate();
  for (int iter = 1; iter <= opts.max_policy_iterations; ++iter) {
    const double scale = 1.0 + w.cwiseAbs().maxCoeff();

    // Bellman residual of the exact policy value; exits when the greedy
    // operator no longer improves anything beyond the tolerance
    double bellman = 0.0;
    for (int jy = 0; jy < grid.n[1]; ++jy)
      for (int i = 0; i < grid.n[0]; ++i) {
        const int id = grid.index(i, jy);
        if (fixed[id]) continue;
        double best = kInf;
        for (int j = 0; j < nctl; ++j) {
          const int nc = lat.corners(j, i, jy, idx, cw);
          if (nc < 0) continue;
          double interp = 0.0;
          for (int c = 0; c < nc; ++c) interp += cw[c] * w[idx[c]];
          best = std::min(best, dt * (problem.node_cost[id] + problem.control_cost[j]) +
                                    beta * interp);
        }
        if (best == kInf) throw SolverError("no admissible control at a node", 0.0);
        bellman = std::max(bellman, std::abs(w[id] - best));
      }
    out.report.iterations = iter;
    out.report.final_update = bellman;
    if (bellman <= opts.tol * scale) {
      out.report.converged = true;
      break;
    }

    // propagate fronts with Gauss-Seidel passes, then read off the greedy
    // policy from the propagated values
    std::vector<double> ws(w.data(), w.data() + n);
    for (int pass = 0; pass < sweeps; ++pass)
      gauss_seidel_sweep(problem, lat, fixed, pass, ws);
    for (int jy = 0; jy < grid.n[1]; ++jy)
      for (int i = 0; i < grid.n[0]; ++i) {
        const int id = grid.index(i, jy);
        if (fixed[id]) continue;
        double best = kInf;
        int best_j = policy[id];
        for (int j = 0; j < nctl; ++j) {
          const int nc = lat.corners(j, i, jy, idx, cw);
          if (nc < 0) continue;
          double interp = 0.0;
          for (int c = 0; c < nc; ++c) interp += cw[c] * ws[idx[c]];
          const double q = dt * (problem.node_cost[id] + problem.control_cost[j]) + beta * interp;
          if (q < best - 1e-13 * scale) {
            best = q;
            best_j = j;
          }
        }
        policy[id] = best_j;
      }
    evaluate();
  }
  if (!out.report.converged)
    throw SolverError("policy iteration did not converge", out.report.final_update);

  out.field = grid;
  out.field.values.assign(w.data(), w.data() + n);
  for (int i = 0; i < n; ++i)
    if (!grid.is_active(i)) out.field.values[i] = 0.0;
  out.policy = std::move(policy);
  out.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::vector<double> value_iteration(const DiscreteProblem& problem, GridField& inout,
                                    long iterations) {
  const GridField& grid = *problem.grid;
  const int n = grid.size();
  const int nctl = static_cast<int>(problem.controls->velocities.size());
  const Lattice lat(grid, *problem.controls, problem.dt);
  std::vector<uint8_t> fixed(n, 0);
  for (int i = 0; i < n; ++i)
    if (!grid.is_active(i)) fixed[i] = 1;
  for (size_t k = 0; k < problem.pinned_nodes.size(); ++k) {
    fixed[problem.pinned_nodes[k]] = 1;
    inout.values[problem.pinned_nodes[k]] = problem.pinned_values[k];
  }
  std::vector<double> history;
  std::vector<double> next(inout.values);
  int idx[4];
  double cw[4];
  for (long it = 0; it < iterations; ++it) {
    double update = 0.0;
    for (int jy = 0; jy < grid.n[1]; ++jy)
      for (int i = 0; i < grid.n[0]; ++i) {
        const int id = grid.index(i, jy);
        if (fixed[id]) continue;
        double best = kInf;
        for (int j = 0; j < nctl; ++j) {
          const int nc = lat.corners(j, i, jy, idx, cw);
          if (nc < 0) continue;
          double interp = 0.0;
          for (int c = 0; c < nc; ++c) interp += cw[c] * inout.values[idx[c]];
          best = std::min(best, problem.dt * (problem.node_cost[id] + problem.control_cost[j]) +
                                    problem.discount * interp);
        }
        next[id] = best;
        update = std::max(update, std::abs(best - inout.values[id]));
      }
    inout.values.swap(next);
    history.push_back(update);
  }
  return history;
}

namespace {

ControlFormSpec control_form_of(const HamiltonianSpec& spec, bool include_defect) {
  if (spec.separable) {
    SeparableSpec s = *spec.separable;
    if (!include_defect) s.defect = make_defect_none(s.dim);
    return to_control_form(s);
  }
  return *spec.control_form;
}

}  // namespace

DiscountedSolve solve_discounted_periodic(const HamiltonianSpec& spec, Vec p, double lambda,
                                          const GridField& torus_grid, const SolveOptions& opts) {
  if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
  if (torus_grid.geom.kind != GeometryKind::Torus)
    throw std::invalid_argument("periodic solve needs a torus grid");
  ControlFormSpec cf = control_form_of(spec, /*include_defect=*/false);
  for (size_t j = 0; j < cf.control_cost.size(); ++j)
    cf.control_cost[j] += dot(p, cf.controls.velocities[j]);
  DiscreteProblem prob =
      make_discrete_problem(torus_grid, cf.controls, cf.control_cost, cf.spatial_cost, lambda);
  return policy_iteration(prob, opts);
}

DiscountedSolve solve_discounted_constrained(const HamiltonianSpec& spec, double lambda,
                                             double radius, double h, const SolveOptions& opts) {
  if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
  if (spec.separable && radius <= spec.separable->defect.support_radius)
    throw std::invalid_argument("truncation radius must exceed the defect support");
  const GridField grid = make_ball_grid(spec.dim(), radius, h);
  ControlFormSpec cf = control_form_of(spec, /*include_defect=*/true);
  DiscreteProblem prob =
      make_discrete_problem(grid, cf.controls, cf.control_cost, cf.spatial_cost, lambda);
  return policy_iteration(prob, opts);
}

DiscountedSolve solve_eps_problem(const HamiltonianSpec& spec, double alpha, double eps,
                                  double half_width, double h, const SolveOptions& opts) {
  if (alpha <= 0 || eps <= 0) throw std::invalid_argument("alpha and eps must be positive");
  if (h > eps / 4.0)
    throw std::invalid_argument("grid too coarse for this eps (need h <= eps/4)");
  if (spec.separable) {
    const double r0 = spec.separable->defect.support_radius;
    if (half_width <= eps * r0 + 2 * h)
      throw std::invalid_argument("domain too small: rescaled defect support not interior");
  }
  const GridField grid = make_box_grid(spec.dim(), half_width, h);
  ControlFormSpec cf = control_form_of(spec, /*include_defect=*/true);
  auto cost = cf.spatial_cost;
  auto oscillatory = [cost, eps](Vec x) { return cost((1.0 / eps) * x); };
  DiscreteProblem prob =
      make_discrete_problem(grid, cf.controls, cf.control_cost, oscillatory, alpha);
  return policy_iteration(prob, opts);
}

GridField solve_dirichlet_level(const HamiltonianSpec& spec, double level, double radius,
                                double h, const std::function<double(Vec)>& boundary_data,
                                SolveReport* report, const SolveOptions& opts) {
  ControlFormSpec cf = control_form_of(spec, /*include_defect=*/true);
  GridField grid = make_ball_grid(spec.dim(), radius, h);
  const double dt = grid.h / cf.controls.max_speed;
  const Lattice lat(grid, cf.controls, dt);
  const int n = grid.size();
  const int nctl = static_cast<int>(cf.controls.velocities.size());

  std::vector<double> node_cost(n, 0.0);
  std::vector<uint8_t> fixed(n, 0);
  double data_max = -kInf;
  for (int i = 0; i < n; ++i) {
    if (!grid.is_active(i)) {
      fixed[i] = 1;
      continue;
    }
    const Vec y = grid.node(i);
    if (norm(y) > radius - 2.5 * grid.h) {
      fixed[i] = 1;
      grid.values[i] = boundary_data(y);
      data_max = std::max(data_max, grid.values[i]);
    } else {
      node_cost[i] = cf.spatial_cost(y) + level;
    }
  }
  for (int i = 0; i < n; ++i)
    if (!fixed[i]) grid.values[i] = data_max + 10.0 * radius * (1.0 + std::abs(level));

  int idx[4];
  double cw[4];
  double update = kInf;
  long sweeps = 0;
  const long max_sweeps = opts.max_value_iterations;
  while (update > opts.tol * (1.0 + std::abs(data_max)) && sweeps < max_sweeps) {
    update = 0.0;
    const bool fwd = sweeps % 2 == 0;
    for (int k = 0; k < n; ++k) {
      const int id = fwd ? k : n - 1 - k;
      if (fixed[id]) continue;
      const int i = id % grid.n[0];
      const int jy = id / grid.n[0];
      double best = kInf;
      for (int j = 0; j < nctl; ++j) {
        const int nc = lat.corners(j, i, jy, idx, cw);
        if (nc < 0) continue;
        double interp = 0.0;
        for (int c = 0; c < nc; ++c) interp += cw[c] * grid.values[idx[c]];
        best = std::min(best, dt * (node_cost[id] + cf.control_cost[j]) + interp);
      }
      update = std::max(update, std::abs(best - grid.values[id]));
      grid.values[id] = best;
    }
    ++sweeps;
  }
  if (sweeps >= max_sweeps) throw SolverError("stationary sweeps did not converge", update);
  if (report) {
    report->iterations = static_cast<int>(sweeps);
    report->final_update = update;
    report->contraction = 1.0;
    report->dt = dt;
    report->converged = true;
  }
  return grid;
}

}  // namespace hjhom
