#include "hjhom/oracles1d.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hjhom/io.hpp"

namespace hjhom {

namespace {

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double m, double fm,
                double b, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, flm, m, fm);
  const double right = simpson(m, fm, frm, b, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

void require_downward_flags(const DefectCost& d, const char* who) {
  if (!d.single_extremum_at_origin || !d.nonpositive)
    throw std::invalid_argument(std::string(who) +
                                ": defect must be nonpositive with a single minimum at 0");
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive(f, a, fa, m, fm, b, fb, simpson(a, fa, fm, b, fb), tol, 32);
}

double u_eps_flat(const DefectCost& defect, double eps, double x) {
  require_downward_flags(defect, "u_eps_flat");
  const double r0 = defect.support_radius * eps;
  const double l00 = defect(vec1(0.0));
  if (x >= 0.0) {
    const double hi = std::min(x, r0);
    const double integral =
        hi <= 0.0 ? 0.0
                  : integrate([&](double t) { return std::exp(t) * defect(vec1(t / eps)); }, 0.0,
                              hi, 1e-10);
    return std::exp(-x) * (l00 + integral);
  }
  const double lo = std::max(x, -r0);
  const double integral =
      lo >= 0.0 ? 0.0
                : integrate([&](double t) { return std::exp(-t) * defect(vec1(t / eps)); }, lo,
                            0.0, 1e-10);
  return std::exp(x) * (l00 + integral);
}

double u_eps_flat_derivative(const DefectCost& defect, double eps, double x) {
  // differentiate each branch: u' = -u + l0(x/eps) for x > 0, u' = u - l0 for x < 0
  const double u = u_eps_flat(defect, eps, x);
  const double l = defect(vec1(x / eps));
  return x >= 0.0 ? l - u : u - l;
}

double u_eps_flat_upward(const DefectCost& defect, double eps, double x) {
  if (!defect.single_extremum_at_origin || defect.nonpositive)
    throw std::invalid_argument("u_eps_flat_upward: defect must be a nonnegative bump");
  const double r0 = defect.support_radius * eps;
  if (x <= 0.0) {
    const double hi = std::min(x, r0);
    if (hi <= -r0) return 0.0;
    const double integral = integrate(
        [&](double t) { return std::exp(t) * defect(vec1(t / eps)); }, -r0, hi, 1e-10);
    return std::exp(-x) * integral;
  }
  const double lo = std::max(x, -r0);
  if (lo >= r0) return 0.0;
  const double integral =
      integrate([&](double t) { return std::exp(-t) * defect(vec1(t / eps)); }, lo, r0, 1e-10);
  return std::exp(x) * integral;
}

WLambdaFlat w_lambda_flat(const DefectCost& defect, double lambda, double x) {
  require_downward_flags(defect, "w_lambda_flat");
  const double r0 = defect.support_radius;
  const double l00 = defect(vec1(0.0));
  WLambdaFlat out;
  // w(x) = u_{eps=1}(lambda x)/lambda for the rescaled defect: substituting
  // s = t/lambda in the displayed integrals gives the forms below.
  auto tail = [&](double xx) {
    if (xx >= 0.0) {
      const double hi = std::min(xx, r0);
      return hi <= 0.0 ? 0.0
                       : integrate([&](double s) { return std::exp(lambda * s) * defect(vec1(s)); },
                                   0.0, hi, 1e-10);
    }
    const double lo = std::max(xx, -r0);
    return lo >= 0.0 ? 0.0
                     : integrate([&](double s) { return std::exp(-lambda * s) * defect(vec1(s)); },
                                 lo, 0.0, 1e-10);
  };
  const double e = std::exp(-lambda * std::abs(x));
  out.value = e * (l00 / lambda + tail(x));
  out.normalized = (e - 1.0) * l00 / lambda + e * tail(x);
  // limit of the normalized value: -l0(0)|x| + int over [0,x] (or [x,0]) of l0
  const double plain =
      x >= 0.0 ? integrate([&](double s) { return defect(vec1(s)); }, 0.0, std::min(x, r0), 1e-10)
               : integrate([&](double s) { return defect(vec1(s)); }, std::max(x, -r0), 0.0, 1e-10);
  out.limit = -l00 * std::abs(x) + plain;
  return out;
}

PeriodicAveraged g_h_periodic(const PeriodicCost& per, double eps) {
  if (per.dim != 1) throw std::invalid_argument("g_h_periodic: 1d only");
  auto lp = per.eval;
  const double geom = 1.0 - std::exp(-eps);
  PeriodicAveraged out;
  out.g = [lp, eps, geom](double x) {
    const double one =
        integrate([&](double t) { return std::exp(t - x) * lp(vec1(t / eps)); }, x - eps, x, 1e-10);
    return one / geom;
  };
  out.h = [lp, eps, geom](double x) {
    const double one =
        integrate([&](double t) { return std::exp(x - t) * lp(vec1(t / eps)); }, x, x + eps, 1e-10);
    return one / geom;
  };
  auto g = out.g;
  out.g_mean = integrate([&](double x) { return g(x); }, 0.0, eps, 1e-9) / eps;
  return out;
}

double two_defect_min(const DefectCost& defect, double eps, double x) {
  if (!defect.even_symmetric)
    throw std::invalid_argument("two_defect_min: defect must be even (else separate by q*eps)");
  return std::min(u_eps_flat(defect, eps, x), u_eps_flat(defect, eps, x - eps));
}

void dump_evaluator_csv(const std::function<double(double)>& f, double a, double b, int n,
                        const std::string& path) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i <= n; ++i) {
    const double x = a + (b - a) * i / n;
    rows.push_back({x, f(x)});
  }
  write_csv(path, {"x", "value"}, rows);
}

}  // namespace hjhom
