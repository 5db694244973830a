#pragma once

// Frame profiles of quantum states, angle sinograms, the line and surface
// integral forms over phase space, and filtered back-projection inversion.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "symrad/errors.hpp"
#include "symrad/fft.hpp"
#include "symrad/grid.hpp"
#include "symrad/interp.hpp"
#include "symrad/matrix.hpp"
#include "symrad/metaplectic.hpp"
#include "symrad/states.hpp"
#include "symrad/symplectic.hpp"
#include "symrad/threading.hpp"
#include "symrad/wigner.hpp"

namespace symrad {

struct RadonProfile {
  int n = 0;
  std::vector<Axis> axes;      // profile coordinate axes
  std::vector<double> values;  // row-major samples, nonnegative
  double hbar = 1.0;
};

inline RadonFrame frame_from_direction(double a, double b) {
  return make_frame(SquareMatrix(1, {a}), SquareMatrix(1, {b}));
}

namespace detail {

// Profile coordinate axes may be arbitrarily short (single points included);
// only basic sanity is demanded.
inline void check_profile_axes(const std::vector<Axis>& axes, int n, const char* who) {
  if (static_cast<int>(axes.size()) != n)
    throw ValidationError("DimensionMismatch", std::string(who) + ": one axis per dimension");
  for (const Axis& a : axes) {
    if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.min < a.max) || a.count < 1)
      throw ValidationError("InvalidGrid",
                            std::string(who) + ": axis bounds must be finite with min < max");
  }
}

// Transformed wavefunction with the final output chirp dropped: the chirp is
// unimodular, so moduli are unchanged and the remaining function is smooth
// enough for polynomial interpolation.
inline WaveFunction dechirped_transform(const MetaplecticPlan& plan, const WaveFunction& wf,
                                        const std::vector<Axis>& out_axes) {
  QuadraticFourierSpec last = plan.factors.back();
  last.P = SquareMatrix(last.n);
  if (!plan.split) return quadratic_fourier(last, wf, out_axes);
  const WaveFunction mid =
      quadratic_fourier(plan.factors[0], wf, intermediate_axes(plan, wf.axes, out_axes, wf.hbar));
  return quadratic_fourier(last, mid, out_axes);
}

}  // namespace detail

// Profile R(X) = det(Lambda)^-1 |U psi(Lambda^-1 X)|^2 sampled on the given
// axes.  In dimension one the transform is evaluated exactly at the mapped
// points; in higher dimension it is interpolated off a covering grid.
inline RadonProfile radon_profile(const WaveFunction& wf, const RadonFrame& frame,
                                  const std::vector<Axis>& x_axes) {
  check_wavefunction(wf, "radon_profile");
  check_state_containment(wf, "radon_profile");
  if (frame.n != wf.n)
    throw ValidationError("DimensionMismatch", "radon_profile: frame/state dimensions differ");
  detail::check_profile_axes(x_axes, wf.n, "radon_profile");

  const MetaplecticPlan plan = plan_metaplectic(frame);
  const double det_inv = 1.0 / frame.det_lambda;

  RadonProfile out;
  out.n = wf.n;
  out.axes = x_axes;
  out.hbar = wf.hbar;

  if (wf.n == 1) {
    const Axis& xa = x_axes[0];
    const std::uint32_t count = std::max<std::uint32_t>(xa.count, 8);
    const Axis ext{xa.min, xa.min + static_cast<double>(count) * xa.spacing(), count};
    const double li = frame.LambdaInv(0, 0);
    const Axis eval{li * ext.min, li * ext.max, count};
    const WaveFunction phi = detail::dechirped_transform(plan, wf, {eval});
    out.values.resize(xa.count);
    for (std::uint32_t j = 0; j < xa.count; ++j) out.values[j] = det_inv * std::norm(phi.values[j]);
    return out;
  }

  // Covering grid: the bounding box of Lambda^-1 applied to the axis box.
  std::vector<Axis> cover(static_cast<std::size_t>(wf.n));
  for (int d = 0; d < wf.n; ++d) {
    double hw = 0.0;
    for (int e = 0; e < wf.n; ++e)
      hw += std::abs(frame.LambdaInv(d, e)) *
            detail::axis_halfwidth(x_axes[static_cast<std::size_t>(e)]);
    cover[static_cast<std::size_t>(d)] =
        Axis{-hw, hw, std::max<std::uint32_t>(wf.axes[static_cast<std::size_t>(d)].count, 8)};
  }
  const WaveFunction phi = detail::dechirped_transform(plan, wf, cover);

  const std::size_t total = total_points(x_axes);
  out.values.resize(total);
  parallel_for(total, [&](std::size_t f) {
    thread_local std::vector<std::uint32_t> idx;
    thread_local Vec x, mapped;
    idx.resize(static_cast<std::size_t>(wf.n));
    x.resize(static_cast<std::size_t>(wf.n));
    mapped.assign(static_cast<std::size_t>(wf.n), 0.0);
    unflatten(f, x_axes, idx);
    for (int d = 0; d < wf.n; ++d)
      x[static_cast<std::size_t>(d)] =
          x_axes[static_cast<std::size_t>(d)].point(idx[static_cast<std::size_t>(d)]);
    for (int d = 0; d < wf.n; ++d) {
      double s = 0.0;
      for (int e = 0; e < wf.n; ++e) s += frame.LambdaInv(d, e) * x[static_cast<std::size_t>(e)];
      mapped[static_cast<std::size_t>(d)] = s;
    }
    const Cplx c = interpolate<Cplx>(phi.axes, phi.values, mapped, OutsidePolicy::zero);
    out.values[f] = det_inv * std::norm(c);
  });
  return out;
}

// Angle family theta_j = j pi / K with frames (cos theta, sin theta); rows
// are stored angle-major.
struct Sinogram {
  Axis x_axis;
  std::uint32_t angles = 0;
  double hbar = 1.0;
  std::vector<double> values;

  double theta(std::uint32_t j) const { return M_PI * static_cast<double>(j) / angles; }
  const double* row(std::uint32_t j) const { return values.data() + static_cast<std::size_t>(j) * x_axis.count; }
};

inline Sinogram sinogram(const WaveFunction& wf, std::uint32_t angles, const Axis& x_axis) {
  if (wf.n != 1)
    throw ValidationError("DimensionNotOne", "sinogram: state must be one dimensional");
  if (angles < 1) throw ValidationError("InvalidGrid", "sinogram: need at least one angle");
  detail::check_profile_axes({x_axis}, 1, "sinogram");

  Sinogram sg;
  sg.x_axis = x_axis;
  sg.angles = angles;
  sg.hbar = wf.hbar;
  sg.values.resize(static_cast<std::size_t>(angles) * x_axis.count);
  for (std::uint32_t j = 0; j < angles; ++j) {
    const double th = sg.theta(j);
    const RadonFrame f = frame_from_direction(std::cos(th), std::sin(th));
    const RadonProfile p = radon_profile(wf, f, {x_axis});
    std::copy(p.values.begin(), p.values.end(),
              sg.values.begin() + static_cast<std::size_t>(j) * x_axis.count);
  }
  return sg;
}

// Unit-speed line integral of W over the line a x + b p = X, scaled by the
// inverse direction length; homogeneous of degree -1 in (a, b, X).
inline double radon_line_integral(const WignerFunction& w, double a, double b, double X) {
  if (w.n != 1)
    throw ValidationError("DimensionNotOne", "radon_line_integral: need a planar distribution");
  const double lambda = std::hypot(a, b);
  if (!(lambda > 1e-12 * std::max(1.0, std::abs(X))))
    throw ValidationError("DegenerateDirection", "radon_line_integral: direction is numerically zero");
  const double ua = a / lambda, ub = b / lambda;
  const double x0 = ua * X / lambda, p0 = ub * X / lambda;

  const double ht = std::min(w.x_axis(0).spacing(), w.p_axis(0).spacing()) / 2.0;
  const double t_hard =
      4.0 * (detail::axis_halfwidth(w.x_axis(0)) + detail::axis_halfwidth(w.p_axis(0)));
  double sum = 0.0;
  Vec z(2);
  for (int dir = 0; dir < 2; ++dir) {
    int small = 0;
    for (std::uint64_t k = 0;; ++k) {
      const double t = (dir == 0 ? 1.0 : -1.0) * (static_cast<double>(k) + 0.5) * ht;
      if (std::abs(t) > t_hard) break;
      z[0] = x0 - ub * t;
      z[1] = p0 + ua * t;
      const double v = interpolate<double>(w.axes, w.values, z, OutsidePolicy::zero);
      sum += v;
      small = (std::abs(v) < 1e-14) ? small + 1 : 0;
      if (small >= 3) break;
    }
  }
  return sum * ht / lambda;
}

// n-dimensional plane integral: over P the point
//   z(P) = (A^T Lam^-2 X - B^T Lam^-1 P,  B^T Lam^-2 X + A^T Lam^-1 P)
// sweeps the plane A x + B p = X at unit density; det(Lambda)^-1 normalizes.
inline double radon_surface_integral(const WignerFunction& w, const RadonFrame& frame,
                                     const Vec& X) {
  if (frame.n != w.n)
    throw ValidationError("DimensionMismatch", "radon_surface_integral: frame/distribution differ");
  if (static_cast<int>(X.size()) != w.n)
    throw ValidationError("DimensionMismatch", "radon_surface_integral: X must have dimension n");
  if (w.n > 2)
    throw GuardError("DimensionGuard", "radon_surface_integral: quadrature is limited to n <= 2");

  const SquareMatrix at_l1 = transpose(frame.A) * frame.LambdaInv;
  const SquareMatrix bt_l1 = transpose(frame.B) * frame.LambdaInv;
  const Vec base_x = at_l1 * (frame.LambdaInv * X);
  const Vec base_p = bt_l1 * (frame.LambdaInv * X);

  const int n = w.n;
  std::vector<double> step(static_cast<std::size_t>(n));
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    const Axis& pa = w.p_axis(d);
    step[static_cast<std::size_t>(d)] = pa.spacing() / 2.0;
    counts[static_cast<std::size_t>(d)] = 2 * pa.count;
  }

  std::size_t total = 1;
  for (std::uint32_t c : counts) total *= c;
  double sum = 0.0;
  Vec p(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(2 * n));
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t f = 0; f < total; ++f) {
    for (int d = 0; d < n; ++d)
      p[static_cast<std::size_t>(d)] =
          w.p_axis(d).min + (static_cast<double>(idx[static_cast<std::size_t>(d)]) + 0.5) *
                                step[static_cast<std::size_t>(d)];
    for (int d = 0; d < n; ++d) {
      double sx = 0.0, sp = 0.0;
      for (int e = 0; e < n; ++e) {
        sx += bt_l1(d, e) * p[static_cast<std::size_t>(e)];
        sp += at_l1(d, e) * p[static_cast<std::size_t>(e)];
      }
      z[static_cast<std::size_t>(d)] = base_x[static_cast<std::size_t>(d)] - sx;
      z[static_cast<std::size_t>(n + d)] = base_p[static_cast<std::size_t>(d)] + sp;
    }
    sum += interpolate<double>(w.axes, w.values, z, OutsidePolicy::zero);
    int d = n - 1;
    while (d >= 0 && ++idx[static_cast<std::size_t>(d)] == counts[static_cast<std::size_t>(d)]) {
      idx[static_cast<std::size_t>(d)] = 0;
      --d;
    }
  }
  double cell = 1.0;
  for (double s : step) cell *= s;
  return sum * cell / frame.det_lambda;
}

// Filtered back-projection onto the requested phase-space grid.  The ramp is
// apodized by a Hann window at the profile Nyquist frequency; pixel sums run
// over angles in a fixed order, so results do not depend on thread count.
inline WignerFunction inverse_radon(const Sinogram& sg, const Axis& x_out, const Axis& p_out) {
  if (sg.angles < 60)
    throw GuardError("TooFewAngles", "inverse_radon: need at least 60 angles");
  check_axis(x_out, "inverse_radon");
  check_axis(p_out, "inverse_radon");
  if (sg.values.size() != static_cast<std::size_t>(sg.angles) * sg.x_axis.count)
    throw ValidationError("InvalidGrid", "inverse_radon: sinogram size mismatch");
  if (!(sg.hbar > 0.0))
    throw ValidationError("InvalidState", "inverse_radon: hbar must be positive");
  const double h_x = sg.x_axis.spacing();
  if (h_x > 2.0 * std::min(x_out.spacing(), p_out.spacing()) * (1.0 + 1e-12))
    throw GuardError("NyquistViolation",
                     "inverse_radon: profile sampling is coarser than twice the output spacing");

  const double hbar = sg.hbar;
  const std::uint32_t n_in = sg.x_axis.count;
  const std::uint32_t n_r = 2 * n_in;
  const double dr = M_PI * hbar / (static_cast<double>(n_in) * h_x);
  const double r_nyq = static_cast<double>(n_in) * dr;

  // Common filtered-profile axis in the shared variable s = x cos + p sin.
  const double hw_s = detail::axis_halfwidth(x_out) + detail::axis_halfwidth(p_out);
  const double ds = h_x / 4.0;
  const std::uint32_t n_s = 2 * (static_cast<std::uint32_t>(hw_s / ds) + 4);
  const double s_half = 0.5 * static_cast<double>(n_s) * ds;
  const Axis s_axis{-s_half, s_half, n_s};

  const detail::CztPlan plan_r = detail::czt_plan(
      static_cast<int>(n_in), static_cast<int>(n_r),
      static_cast<long double>(sg.x_axis.min) + 0.5L * static_cast<long double>(h_x),
      static_cast<long double>(h_x), -static_cast<long double>(n_in) * static_cast<long double>(dr),
      static_cast<long double>(dr), 1.0L / hbar, Cplx{h_x, 0.0});
  const detail::CztPlan plan_q = detail::czt_plan(
      static_cast<int>(n_r), static_cast<int>(n_s),
      -static_cast<long double>(n_in) * static_cast<long double>(dr), static_cast<long double>(dr),
      static_cast<long double>(s_axis.min) + 0.5L * static_cast<long double>(ds),
      static_cast<long double>(ds), -1.0L / hbar, Cplx{dr, 0.0});

  std::vector<double> filter(n_r);
  for (std::uint32_t k = 0; k < n_r; ++k) {
    const double r = (static_cast<double>(k) - static_cast<double>(n_in)) * dr;
    filter[k] = std::abs(r) * 0.5 * (1.0 + std::cos(M_PI * r / r_nyq));
  }

  std::vector<double> q(static_cast<std::size_t>(sg.angles) * n_s);
  parallel_for(sg.angles, [&](std::size_t j) {
    thread_local std::vector<Cplx> in, spec, out, work;
    in.resize(n_in);
    spec.resize(n_r);
    out.resize(n_s);
    const double* row = sg.row(static_cast<std::uint32_t>(j));
    for (std::uint32_t i = 0; i < n_in; ++i) in[i] = Cplx{row[i], 0.0};
    detail::czt_apply(plan_r, in.data(), spec.data(), work);
    for (std::uint32_t k = 0; k < n_r; ++k) spec[k] *= filter[k];
    detail::czt_apply(plan_q, spec.data(), out.data(), work);
    double* dst = q.data() + j * n_s;
    for (std::uint32_t i = 0; i < n_s; ++i) dst[i] = out[i].real();
  });

  std::vector<double> cos_t(sg.angles), sin_t(sg.angles);
  for (std::uint32_t j = 0; j < sg.angles; ++j) {
    cos_t[j] = std::cos(sg.theta(j));
    sin_t[j] = std::sin(sg.theta(j));
  }

  WignerFunction w;
  w.n = 1;
  w.hbar = hbar;
  w.axes = {x_out, p_out};
  w.values.resize(static_cast<std::size_t>(x_out.count) * p_out.count);
  const double norm = M_PI / static_cast<double>(sg.angles) /
                      (4.0 * M_PI * M_PI * hbar * hbar);
  parallel_for(w.values.size(), [&](std::size_t f) {
    const std::uint32_t xi = static_cast<std::uint32_t>(f / p_out.count);
    const std::uint32_t pi = static_cast<std::uint32_t>(f % p_out.count);
    const double x = x_out.point(xi), p = p_out.point(pi);
    double acc = 0.0;
    for (std::uint32_t j = 0; j < sg.angles; ++j)
      acc += interpolate_line(s_axis, q.data() + static_cast<std::size_t>(j) * n_s,
                              x * cos_t[j] + p * sin_t[j]);
    w.values[f] = acc * norm;
  });
  return w;
}

// Convex mixture profile: weighted sum of component profiles.  Gaussian
// components are sampled on axes derived from their own marginal widths.
inline RadonProfile radon_mixed(const MixedState& ms, const RadonFrame& frame,
                                const std::vector<Axis>& x_axes) {
  detail::check_profile_axes(x_axes, frame.n, "radon_mixed");

  RadonProfile acc;
  acc.n = frame.n;
  acc.axes = x_axes;
  acc.values.assign(total_points(x_axes), 0.0);
  bool first = true;

  for (const auto& comp : ms.components) {
    RadonProfile part;
    if (std::holds_alternative<WaveFunction>(comp.state)) {
      part = radon_profile(std::get<WaveFunction>(comp.state), frame, x_axes);
    } else {
      const GaussianState& g = std::get<GaussianState>(comp.state);
      if (g.n != frame.n)
        throw ValidationError("DimensionMismatch", "radon_mixed: component dimension differs");
      const SquareMatrix vinv = inverse(g.V);
      std::vector<Axis> axes(static_cast<std::size_t>(g.n));
      for (int d = 0; d < g.n; ++d) {
        // 12 sigma, so the truncation edge rings below the chirp guards'
        // occupancy floor.
        const double sigma = std::sqrt(0.5 * g.hbar * vinv(d, d));
        axes[static_cast<std::size_t>(d)] =
            Axis{-12.0 * sigma, 12.0 * sigma, g.n == 1 ? 256u : 64u};
      }
      part = radon_profile(sample_gaussian(g, axes), frame, x_axes);
    }
    if (first) {
      acc.hbar = part.hbar;
      first = false;
    } else if (std::abs(acc.hbar - part.hbar) > 1e-12 * acc.hbar) {
      throw ValidationError("InvalidState", "radon_mixed: components disagree on hbar");
    }
    for (std::size_t k = 0; k < acc.values.size(); ++k)
      acc.values[k] += comp.weight * part.values[k];
  }
  return acc;
}

}  // namespace symrad
