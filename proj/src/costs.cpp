#include "hjhom/costs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hjhom {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Golden-section search for the minimum of f on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b, double tol,
                  double* argmin) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  double x = 0.5 * (a + b);
  if (argmin) *argmin = x;
  return f(x);
}

std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cost file: " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double y, v;
    if (!(ss >> y >> v)) {
      if (first) {
        first = false;  // header row
        continue;
      }
      throw std::runtime_error("malformed row in " + path + ": " + line);
    }
    first = false;
    rows.emplace_back(y, v);
  }
  if (rows.size() < 2) throw std::runtime_error("cost file needs at least two samples: " + path);
  std::sort(rows.begin(), rows.end());
  return rows;
}

double interp_rows(const std::vector<std::pair<double, double>>& rows, double y) {
  if (y <= rows.front().first) return rows.front().second;
  if (y >= rows.back().first) return rows.back().second;
  auto it = std::upper_bound(rows.begin(), rows.end(), std::make_pair(y, std::numeric_limits<double>::lowest()));
  auto lo = std::prev(it);
  double t = (y - lo->first) / (it->first - lo->first);
  return (1.0 - t) * lo->second + t * it->second;
}

}  // namespace

SampleStats sample_statistics_1d(const std::function<double(double)>& f, double a, double b,
                                 int samples, double tol) {
  SampleStats s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  const double dx = (b - a) / samples;
  double sum = 0.0;
  int imin = 0;
  for (int i = 0; i <= samples; ++i) {
    const double x = a + i * dx;
    const double v = f(x);
    const double w = (i == 0 || i == samples) ? 0.5 : 1.0;  // trapezoid
    sum += w * v;
    if (v < s.min) {
      s.min = v;
      s.argmin = x;
      imin = i;
    }
    s.max = std::max(s.max, v);
  }
  s.mean = sum / samples;
  const double lo = a + std::max(0, imin - 1) * dx;
  const double hi = a + std::min(samples, imin + 1) * dx;
  double xr = s.argmin;
  const double refined = golden_min(f, lo, hi, tol, &xr);
  if (refined < s.min) {
    s.min = refined;
    s.argmin = xr;
  }
  return s;
}

SampleStats periodic_statistics(const ScalarField& f, int dim, int samples_per_axis) {
  if (dim == 1) {
    return sample_statistics_1d([&](double x) { return f(vec1(x)); }, 0.0, 1.0, samples_per_axis);
  }
  // 2D: tensor sampling on a coarser grid, then 1D refinement along each axis
  // through the discrete minimizer.
  const int n = std::min(samples_per_axis, 512);
  SampleStats s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  Vec best = {0, 0};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec y = {static_cast<double>(i) / n, static_cast<double>(j) / n};
      const double v = f(y);
      sum += v;
      if (v < s.min) {
        s.min = v;
        best = y;
      }
      s.max = std::max(s.max, v);
    }
  }
  s.mean = sum / (static_cast<double>(n) * n);
  const double dx = 1.0 / n;
  double x0 = best[0];
  golden_min([&](double x) { return f(vec2(x, best[1])); }, best[0] - dx, best[0] + dx, 1e-8, &x0);
  double y0 = best[1];
  s.min = golden_min([&](double y) { return f(vec2(x0, y)); }, best[1] - dx, best[1] + dx, 1e-8, &y0);
  s.argmin = x0;
  return s;
}

PeriodicCost make_periodic_zero(int dim) { return make_periodic_constant(0.0, dim); }

PeriodicCost make_periodic_constant(double c, int dim) {
  PeriodicCost p;
  p.dim = dim;
  p.eval = [c](Vec) { return c; };
  p.bound = std::abs(c);
  p.inf_value = c;
  p.mean_value = c;
  p.lipschitz = 0.0;
  p.name = c == 0.0 ? "zero" : "const";
  return p;
}

PeriodicCost make_periodic_sin(int dim) {
  PeriodicCost p;
  p.dim = dim;
  p.eval = [](Vec y) { return std::sin(2.0 * kPi * y[0]); };
  p.bound = 1.0;
  p.lipschitz = 2.0 * kPi;
  p.name = "sin";
  const SampleStats s = periodic_statistics(p.eval, dim);
  p.inf_value = s.min;
  p.mean_value = s.mean;
  return p;
}

PeriodicCost make_periodic_from_samples(const std::string& csv_path) {
  auto rows = std::make_shared<std::vector<std::pair<double, double>>>(read_two_column_csv(csv_path));
  const double x0 = rows->front().first;
  const double span = rows->back().first - x0;
  PeriodicCost p;
  p.dim = 1;
  p.eval = [rows, x0, span](Vec y) {
    double t = std::fmod(y[0] - x0, span >= 1.0 ? span : 1.0);
    if (t < 0) t += (span >= 1.0 ? span : 1.0);
    return interp_rows(*rows, x0 + t);
  };
  p.name = "csv:" + csv_path;
  const SampleStats s = periodic_statistics(p.eval, 1);
  p.inf_value = s.min;
  p.mean_value = s.mean;
  p.bound = std::max(std::abs(s.min), std::abs(s.max));
  double lip = 0.0;
  for (size_t i = 1; i < rows->size(); ++i) {
    const double dy = (*rows)[i].first - (*rows)[i - 1].first;
    if (dy > 0) lip = std::max(lip, std::abs((*rows)[i].second - (*rows)[i - 1].second) / dy);
  }
  p.lipschitz = lip;
  return p;
}

DefectCost make_defect_cos2(double depth, int dim, bool upward) {
  DefectCost d;
  d.dim = dim;
  const double sign = upward ? 1.0 : -1.0;
  d.eval = [depth, sign](Vec y) {
    const double r = norm(y);
    if (r > 0.5) return 0.0;
    const double c = std::cos(kPi * r);
    return sign * depth * c * c;
  };
  d.support_radius = 0.5;
  d.nonpositive = !upward;
  d.even_symmetric = true;
  d.single_extremum_at_origin = true;
  d.value_at_origin = sign * depth;
  d.name = upward ? "cos2bump-up" : "cos2bump";
  return d;
}

DefectCost make_defect_none(int dim) {
  DefectCost d;
  d.dim = dim;
  d.eval = [](Vec) { return 0.0; };
  d.support_radius = 0.0;
  d.nonpositive = true;
  d.even_symmetric = true;
  d.single_extremum_at_origin = false;
  d.value_at_origin = 0.0;
  d.name = "none";
  return d;
}

DefectCost make_defect_from_samples(const std::string& csv_path) {
  auto rows = std::make_shared<std::vector<std::pair<double, double>>>(read_two_column_csv(csv_path));
  DefectCost d;
  d.dim = 1;
  const double r0 = std::max(std::abs(rows->front().first), std::abs(rows->back().first));
  d.eval = [rows, r0](Vec y) {
    if (std::abs(y[0]) >= r0) return 0.0;
    return interp_rows(*rows, y[0]);
  };
  d.support_radius = r0;
  d.name = "csv:" + csv_path;
  d.value_at_origin = interp_rows(*rows, 0.0);
  bool nonpos = true, even = true;
  for (auto& [y, v] : *rows) {
    if (v > 1e-12) nonpos = false;
    if (std::abs(v - interp_rows(*rows, -y)) > 1e-9) even = false;
  }
  d.nonpositive = nonpos;
  d.even_symmetric = even;
  d.single_extremum_at_origin = false;
  return d;
}

ScalarField composite_cost(const PeriodicCost& per, const DefectCost& defect) {
  auto p = per.eval;
  auto d = defect.eval;
  return [p, d](Vec y) { return p(y) + d(y); };
}

double composite_inf(const PeriodicCost& per, const DefectCost& defect, int samples) {
  const double r = defect.support_radius;
  if (per.dim == 1) {
    // The composite equals l_per outside the support; covering the support
    // plus a full period on each side sees every value the composite takes.
    auto f = [&](double x) { return per(vec1(x)) + defect(vec1(x)); };
    return sample_statistics_1d(f, -r - 1.0, r + 1.0, samples).min;
  }
  // 2D presets have a constant environment, so the minimum sits in the
  // defect ball; scan it radially on top of the cell statistics.
  double best = periodic_statistics(per.eval, 2).min;
  auto along = [&](double x) { return per(vec1(x)) + defect(vec1(x)); };
  best = std::min(best, sample_statistics_1d(along, -r - 1.0, r + 1.0, samples).min);
  return best;
}

bool downward_defect(const PeriodicCost& per, const DefectCost& defect, double tol) {
  return composite_inf(per, defect) < per.inf_value - tol;
}

double periodicity_violation(const PeriodicCost& per, int samples) {
  double worst = 0.0;
  for (int axis = 0; axis < per.dim; ++axis) {
    Vec e = {0, 0};
    e[axis] = 1.0;
    for (int i = 0; i < samples; ++i) {
      const double t = static_cast<double>(i) / samples;
      const Vec y = per.dim == 1 ? vec1(t) : vec2(t, 0.37 + 0.11 * t);
      worst = std::max(worst, std::abs(per(y + e) - per(y)));
    }
  }
  return worst;
}

double support_violation(const DefectCost& defect, int samples) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = defect.support_radius * (1.0 + 1e-9) + 0.01 * (i + 1);
    worst = std::max(worst, std::abs(defect(vec1(r))));
    worst = std::max(worst, std::abs(defect(vec1(-r))));
    if (defect.dim == 2) worst = std::max(worst, std::abs(defect(vec2(r / std::sqrt(2.0), r / std::sqrt(2.0)))));
  }
  return worst;
}

}  // namespace hjhom
