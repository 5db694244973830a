#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "symrad/errors.hpp"

namespace symrad {

// Uniform sampling axis with the midpoint convention: count samples at
// min + (k + 1/2) * spacing, k = 0..count-1.  The endpoints themselves are
// never sample points, which keeps every quadrature in the library a plain
// midpoint rule.
struct Axis {
  double min = 0.0;
  double max = 0.0;
  std::uint32_t count = 0;

  double spacing() const { return (max - min) / static_cast<double>(count); }
  double point(std::uint32_t k) const { return min + (static_cast<double>(k) + 0.5) * spacing(); }
};

inline void check_axis(const Axis& a, const char* who) {
  if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.min < a.max))
    throw ValidationError("InvalidGrid", std::string(who) + ": axis bounds must be finite with min < max");
  if (a.count < 8)
    throw ValidationError("InvalidGrid", std::string(who) + ": axis count must be at least 8");
}

inline void check_axes(const std::vector<Axis>& axes, const char* who) {
  if (axes.empty()) throw ValidationError("InvalidGrid", std::string(who) + ": no axes given");
  for (const Axis& a : axes) check_axis(a, who);
}

// Conjugate momentum axis of a position axis: same count, spanning
// +-pi*hbar/spacing symmetrically, midpoint convention.
inline Axis conjugate_axis(const Axis& a, double hbar) {
  const double half_width = M_PI * hbar / a.spacing();
  return Axis{-half_width, half_width, a.count};
}

inline std::size_t total_points(const std::vector<Axis>& axes) {
  std::size_t t = 1;
  for (const Axis& a : axes) t *= a.count;
  return t;
}

// Row-major strides: the last axis varies fastest.
inline std::vector<std::size_t> strides(const std::vector<Axis>& axes) {
  std::vector<std::size_t> s(axes.size());
  std::size_t acc = 1;
  for (std::size_t d = axes.size(); d-- > 0;) {
    s[d] = acc;
    acc *= axes[d].count;
  }
  return s;
}

inline void unflatten(std::size_t flat, const std::vector<Axis>& axes, std::vector<std::uint32_t>& idx) {
  idx.resize(axes.size());
  for (std::size_t d = axes.size(); d-- > 0;) {
    idx[d] = static_cast<std::uint32_t>(flat % axes[d].count);
    flat /= axes[d].count;
  }
}

inline double cell_volume(const std::vector<Axis>& axes) {
  double v = 1.0;
  for (const Axis& a : axes) v *= a.spacing();
  return v;
}

inline bool same_axis(const Axis& a, const Axis& b, double tol = 1e-12) {
  return a.count == b.count && std::abs(a.min - b.min) <= tol * std::max(1.0, std::abs(a.min)) &&
         std::abs(a.max - b.max) <= tol * std::max(1.0, std::abs(a.max));
}

}  // namespace symrad
