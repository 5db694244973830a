#pragma once

// Separable 4-point (cubic) Lagrange interpolation on uniform row-major grids.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "symrad/errors.hpp"
#include "symrad/grid.hpp"
#include "symrad/matrix.hpp"

namespace symrad {

enum class OutsidePolicy { zero, error };

inline constexpr int kMaxInterpDims = 6;

namespace detail {

struct CubicStencil {
  int base = 0;
  std::array<double, 4> w{};
};

// Stencils are centered where possible and clamped at the grid edges, so the
// interpolant is defined on the full declared axis range [min, max].
inline CubicStencil cubic_stencil(const Axis& axis, double x) {
  const double h = axis.spacing();
  const double t = (x - axis.min) / h - 0.5;  // continuous sample index
  int base = static_cast<int>(std::floor(t)) - 1;
  const int max_base = static_cast<int>(axis.count) - 4;
  if (base < 0) base = 0;
  if (base > max_base) base = max_base;
  CubicStencil s;
  s.base = base;
  for (int j = 0; j < 4; ++j) {
    double w = 1.0;
    for (int k = 0; k < 4; ++k)
      if (k != j) w *= (t - (base + k)) / static_cast<double>(j - k);
    s.w[j] = w;
  }
  return s;
}

}  // namespace detail

template <class T>
T interpolate(const std::vector<Axis>& axes, const std::vector<T>& values, const Vec& x,
              OutsidePolicy policy) {
  const int n = static_cast<int>(axes.size());
  if (static_cast<int>(x.size()) != n || n < 1 || n > kMaxInterpDims)
    throw ValidationError("DimensionMismatch", "interpolate: point rank does not match the grid");
  for (int d = 0; d < n; ++d) {
    const double slack = 1e-9 * axes[d].spacing();
    if (!(x[d] >= axes[d].min - slack && x[d] <= axes[d].max + slack)) {
      if (policy == OutsidePolicy::zero) return T{};
      throw GuardError("InterpolationOutOfRange", "interpolate: point leaves the sampled grid");
    }
  }
  std::array<detail::CubicStencil, kMaxInterpDims> st;
  for (int d = 0; d < n; ++d) st[d] = detail::cubic_stencil(axes[d], x[d]);
  std::array<std::size_t, kMaxInterpDims> str;
  str[n - 1] = 1;
  for (int d = n - 2; d >= 0; --d) str[d] = str[d + 1] * axes[d + 1].count;

  std::array<int, kMaxInterpDims> idx{};
  T acc{};
  for (;;) {
    double w = st[0].w[idx[0]];
    std::size_t off = static_cast<std::size_t>(st[0].base + idx[0]) * str[0];
    for (int d = 1; d < n; ++d) {
      w *= st[d].w[idx[d]];
      off += static_cast<std::size_t>(st[d].base + idx[d]) * str[d];
    }
    acc += values[off] * w;
    int d = n - 1;
    while (d >= 0 && ++idx[d] == 4) {
      idx[d] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return acc;
}

// One-dimensional fast path (no per-call setup beyond the stencil).
template <class T>
T interpolate_line(const Axis& axis, const T* values, double x) {
  const auto s = detail::cubic_stencil(axis, x);
  T acc{};
  for (int j = 0; j < 4; ++j) acc += values[s.base + j] * s.w[j];
  return acc;
}

}  // namespace symrad
