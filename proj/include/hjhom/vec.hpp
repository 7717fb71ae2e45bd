#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace hjhom {

// Points, velocities and covectors in dimension 1 or 2. The second
// component is ignored (kept at zero) in one-dimensional problems.
using Vec = std::array<double, 2>;

inline constexpr Vec vec1(double x) { return {x, 0.0}; }
inline constexpr Vec vec2(double x, double y) { return {x, y}; }

inline Vec operator+(Vec a, Vec b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec operator-(Vec a, Vec b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec operator*(double s, Vec a) { return {s * a[0], s * a[1]}; }

inline double dot(Vec a, Vec b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(Vec a) { return std::hypot(a[0], a[1]); }

inline bool finite(Vec a) { return std::isfinite(a[0]) && std::isfinite(a[1]); }

}  // namespace hjhom
