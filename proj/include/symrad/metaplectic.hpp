#pragma once

// Quadratic Fourier operators attached to free symplectic matrices, factor
// plans for non-free rotations, and their application to grid wavefunctions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "symrad/errors.hpp"
#include "symrad/grid.hpp"
#include "symrad/matrix.hpp"
#include "symrad/states.hpp"
#include "symrad/symplectic.hpp"
#include "symrad/threading.hpp"

namespace symrad {

// Integral operator
//   (U psi)(x) = i^(m - n/2) |det B|^(-1/2) e^(i P x.x / 2 hbar)
//                * (F [e^(i R y.y / 2 hbar) psi])(Q x)
// with F the hbar-scaled Fourier transform.  P and R are symmetric, Q is
// invertible, and the parity of m is tied to the sign of det B = 1 / det Q.
struct QuadraticFourierSpec {
  int n = 0;
  int maslov = 0;
  SquareMatrix P, Q, R;
  double abs_det_b = 1.0;
};

namespace detail {

inline int resolve_maslov(double det_b, int requested, const char* who) {
  const bool positive = det_b > 0.0;
  if (requested < 0) return positive ? 0 : 1;
  if (requested > 3)
    throw ValidationError("BadMaslov", std::string(who) + ": index must lie in 0..3");
  if ((requested % 2 == 0) != positive)
    throw ValidationError("BadMaslov",
                          std::string(who) + ": index parity must match the sign of det B");
  return requested;
}

}  // namespace detail

inline QuadraticFourierSpec quadratic_fourier_spec(const SymplecticMatrix& s, int maslov = -1) {
  const QuadraticForm q = free_generating_function(s);
  QuadraticFourierSpec spec;
  spec.n = s.A.n;
  spec.P = q.P;
  spec.Q = q.Q;
  spec.R = q.R;
  const double det_b = determinant(s.B);
  spec.abs_det_b = std::abs(det_b);
  spec.maslov = detail::resolve_maslov(det_b, maslov, "quadratic_fourier_spec");
  return spec;
}

inline QuadraticFourierSpec make_quadratic_fourier(const SquareMatrix& P, const SquareMatrix& Q,
                                                   const SquareMatrix& R, int maslov = -1) {
  if (P.n != Q.n || Q.n != R.n || Q.n < 1)
    throw ValidationError("DimensionMismatch",
                          "make_quadratic_fourier: blocks must be square of equal dimension");
  check_free_block(Q, "make_quadratic_fourier");
  (void)symplectic_from_generating(QuadraticForm{P, Q, R});  // symmetry + symplectic checks
  QuadraticFourierSpec spec;
  spec.n = Q.n;
  spec.P = P;
  spec.Q = Q;
  spec.R = R;
  const double det_q = determinant(Q);
  spec.abs_det_b = 1.0 / std::abs(det_q);
  // det B and det Q share their sign: B = Q^-1.
  spec.maslov = detail::resolve_maslov(det_q, maslov, "make_quadratic_fourier");
  return spec;
}

inline SymplecticMatrix quadratic_fourier_matrix(const QuadraticFourierSpec& spec) {
  return symplectic_from_generating(QuadraticForm{spec.P, spec.Q, spec.R});
}

namespace detail {

inline double axis_halfwidth(const Axis& a) { return std::max(std::abs(a.min), std::abs(a.max)); }

// Pointwise multiplication by exp(i sign C x.x / 2 hbar).  Refuses grids on
// which the chirp advances by more than pi per step across the occupied
// region; samples at the noise floor may alias freely, they carry nothing.
inline void apply_chirp(std::vector<Cplx>& values, const std::vector<Axis>& axes,
                        const SquareMatrix& c, double hbar, double sign, const char* what) {
  const int n = c.n;
  if (max_abs(c) == 0.0) return;
  double sup = 0.0;
  for (const Cplx& v : values) sup = std::max(sup, std::abs(v));
  const double floor_v = 1e-12 * sup;
  std::vector<double> hw(static_cast<std::size_t>(n), 0.0);
  {
    std::vector<std::uint32_t> pos(static_cast<std::size_t>(n), 0);
    for (std::size_t f = 0; f < values.size(); ++f) {
      if (std::abs(values[f]) > floor_v) {
        for (int d = 0; d < n; ++d) {
          const double xd = std::abs(axes[static_cast<std::size_t>(d)].point(pos[static_cast<std::size_t>(d)]));
          if (xd > hw[static_cast<std::size_t>(d)]) hw[static_cast<std::size_t>(d)] = xd;
        }
      }
      int d = n - 1;
      while (d >= 0 && ++pos[static_cast<std::size_t>(d)] == axes[static_cast<std::size_t>(d)].count) {
        pos[static_cast<std::size_t>(d)] = 0;
        --d;
      }
    }
  }
  for (int d = 0; d < n; ++d) {
    double row = 0.0;
    for (int e = 0; e < n; ++e) row += std::abs(c(d, e)) * hw[static_cast<std::size_t>(e)];
    if (row * axes[static_cast<std::size_t>(d)].spacing() > M_PI * hbar * (1.0 + 1e-9))
      throw GuardError("GridTooCoarse",
                       std::string(what) + ": chirp phase advances more than pi per grid step");
  }
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(n));
  Vec x(static_cast<std::size_t>(n));
  for (std::size_t f = 0; f < values.size(); ++f) {
    unflatten(f, axes, idx);
    for (int d = 0; d < n; ++d) x[static_cast<std::size_t>(d)] = axes[static_cast<std::size_t>(d)].point(idx[static_cast<std::size_t>(d)]);
    values[f] *= std::polar(1.0, sign * dot(x, c * x) / (2.0 * hbar));
  }
}

inline bool nearly_diagonal(const SquareMatrix& q) {
  const double scale = max_abs(q);
  for (int i = 0; i < q.n; ++i) {
    if (q(i, i) == 0.0) return false;
    for (int j = 0; j < q.n; ++j)
      if (i != j && std::abs(q(i, j)) > 1e-12 * scale) return false;
  }
  return true;
}

}  // namespace detail

// Applies the operator, evaluating the result on out_axes.  Q maps the output
// grid into the frequency domain of the input grid; guards reject requests
// the input resolution cannot represent.
inline WaveFunction quadratic_fourier(const QuadraticFourierSpec& spec, const WaveFunction& wf,
                                      const std::vector<Axis>& out_axes) {
  check_wavefunction(wf, "quadratic_fourier");
  if (spec.n != wf.n)
    throw ValidationError("DimensionMismatch", "quadratic_fourier: operator/state dimensions differ");
  if (static_cast<int>(out_axes.size()) != wf.n)
    throw ValidationError("DimensionMismatch", "quadratic_fourier: one output axis per dimension");
  check_axes(out_axes, "quadratic_fourier");
  const int n = wf.n;
  const double hbar = wf.hbar;

  std::vector<Cplx> phi = wf.values;
  detail::apply_chirp(phi, wf.axes, spec.R, hbar, 1.0, "quadratic_fourier");

  // Kernel band guard: every requested frequency Q x must stay under the
  // input Nyquist bound, axis by axis.
  for (int d = 0; d < n; ++d) {
    double row = 0.0;
    for (int e = 0; e < n; ++e)
      row += std::abs(spec.Q(d, e)) * detail::axis_halfwidth(out_axes[static_cast<std::size_t>(e)]);
    if (row * wf.axes[static_cast<std::size_t>(d)].spacing() > M_PI * hbar * (1.0 + 1e-9))
      throw GuardError("GridTooCoarse",
                       "quadratic_fourier: requested frequencies exceed the input Nyquist range");
  }

  const std::size_t n_out = total_points(out_axes);
  std::vector<Cplx> out;
  if (detail::nearly_diagonal(spec.Q)) {
    // Separable evaluation: along axis d the targets q_dd * x_d form an
    // arithmetic sequence, so one chirp-z per axis suffices.
    std::vector<Axis> cur = wf.axes;
    for (int d = 0; d < n; ++d) {
      const double q = spec.Q(d, d);
      const Axis& o = out_axes[static_cast<std::size_t>(d)];
      const Axis target{q * o.min, q * o.max, o.count};
      const Cplx scale{cur[static_cast<std::size_t>(d)].spacing() / std::sqrt(2.0 * M_PI * hbar),
                       0.0};
      detail::transform_axis(phi, cur, static_cast<std::size_t>(d), target, 1, hbar, scale);
    }
    out = std::move(phi);
  } else if (n <= 2) {
    const std::size_t n_in = phi.size();
    if (n_in > (1ull << 31) / std::max<std::size_t>(n_out, 1))
      throw GuardError("DenseGuard", "quadratic_fourier: dense quadrature size is unreasonable");
    double cell = 1.0;
    for (const Axis& a : wf.axes) cell *= a.spacing();
    const double scale = cell / std::pow(2.0 * M_PI * hbar, n / 2.0);
    const std::uint32_t m0 = wf.axes[0].count;
    const std::uint32_t m1 = (n == 2) ? wf.axes[1].count : 1;
    std::vector<double> y0(m0), y1(m1);
    for (std::uint32_t k = 0; k < m0; ++k) y0[k] = wf.axes[0].point(k);
    for (std::uint32_t k = 0; k < m1; ++k) y1[k] = (n == 2) ? wf.axes[1].point(k) : 0.0;
    out.resize(n_out);
    parallel_for(n_out, [&](std::size_t f) {
      thread_local std::vector<Cplx> t0, t1;
      thread_local std::vector<std::uint32_t> idx;
      idx.resize(static_cast<std::size_t>(n));
      unflatten(f, out_axes, idx);
      double u0, u1 = 0.0;
      if (n == 1) {
        u0 = spec.Q(0, 0) * out_axes[0].point(idx[0]);
      } else {
        const double x0 = out_axes[0].point(idx[0]);
        const double x1 = out_axes[1].point(idx[1]);
        u0 = spec.Q(0, 0) * x0 + spec.Q(0, 1) * x1;
        u1 = spec.Q(1, 0) * x0 + spec.Q(1, 1) * x1;
      }
      t0.resize(m0);
      t1.resize(m1);
      for (std::uint32_t k = 0; k < m0; ++k) t0[k] = std::polar(1.0, -u0 * y0[k] / hbar);
      if (n == 2)
        for (std::uint32_t k = 0; k < m1; ++k) t1[k] = std::polar(1.0, -u1 * y1[k] / hbar);
      Cplx s{0.0, 0.0};
      if (n == 1) {
        for (std::uint32_t k = 0; k < m0; ++k) s += phi[k] * t0[k];
      } else {
        for (std::uint32_t k0 = 0; k0 < m0; ++k0) {
          const Cplx* row = phi.data() + static_cast<std::size_t>(k0) * m1;
          Cplx inner{0.0, 0.0};
          for (std::uint32_t k1 = 0; k1 < m1; ++k1) inner += row[k1] * t1[k1];
          s += t0[k0] * inner;
        }
      }
      out[f] = s * scale;
    });
  } else {
    throw GuardError("DimensionGuard",
                     "quadratic_fourier: non-diagonal Q is limited to dimension 2");
  }

  detail::apply_chirp(out, out_axes, spec.P, hbar, 1.0, "quadratic_fourier");

  // i^m on the exact unit lattice, so that m and m+2 negate each other
  // bitwise; the n-dependent eighth root is a common factor.
  static const Cplx lattice[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  const Cplx pre = lattice[spec.maslov % 4] * std::polar(1.0, -M_PI * n / 4.0) /
                   std::sqrt(spec.abs_det_b);
  for (Cplx& v : out) v *= pre;

  WaveFunction result;
  result.n = n;
  result.hbar = hbar;
  result.axes = out_axes;
  result.values = std::move(out);
  return result;
}

inline WaveFunction quadratic_fourier(const QuadraticFourierSpec& spec, const WaveFunction& wf) {
  return quadratic_fourier(spec, wf, wf.axes);
}

// Factorization of a frame rotation into at most two free factors, applied
// first-to-last.  split is true when the singular-value health check forced
// U = (U R_-theta) R_theta.
struct MetaplecticPlan {
  int n = 0;
  bool split = false;
  double theta = 0.0;
  std::vector<QuadraticFourierSpec> factors;
};

namespace detail {

inline double smallest_singular_value(const SquareMatrix& m) {
  const auto g = eigen_symmetric(transpose(m) * m);
  return std::sqrt(std::max(0.0, g.values.front()));
}

}  // namespace detail

inline MetaplecticPlan plan_metaplectic(const RadonFrame& f) {
  MetaplecticPlan plan;
  plan.n = f.n;

  if (detail::smallest_singular_value(f.UB) >= 0.5) {
    plan.factors.push_back(quadratic_fourier_spec(f.u()));
  } else {
    // Primary candidates demand healthy blocks on both factors; the fallback
    // list settles for plain invertibility.
    const double primary[] = {M_PI / 2.0, M_PI / 4.0, M_PI / 8.0};
    const double fallback[] = {3.0 * M_PI / 8.0, M_PI / 3.0, M_PI / 6.0, 1.0, 0.7, 0.4};
    std::ostringstream tried;
    bool found = false;
    for (int pass = 0; pass < 2 && !found; ++pass) {
      for (double theta : (pass == 0 ? std::vector<double>(std::begin(primary), std::end(primary))
                                     : std::vector<double>(std::begin(fallback), std::end(fallback)))) {
        const double c = std::cos(theta), s = std::sin(theta);
        const SquareMatrix ao = c * f.UA + s * f.UB;
        const SquareMatrix bo = c * f.UB - s * f.UA;
        const double smin = detail::smallest_singular_value(bo);
        const bool healthy = (pass == 0) ? (smin >= 0.2 && s >= 0.2)
                                         : (smin > 1e-10 * std::max(1.0, max_abs(bo)));
        tried << " theta=" << theta << " sigma_min=" << smin;
        if (!healthy) continue;

        SquareMatrix rp(f.n), rq(f.n);
        for (int i = 0; i < f.n; ++i) {
          rp(i, i) = c / s;
          rq(i, i) = 1.0 / s;
        }
        plan.factors.push_back(make_quadratic_fourier(rp, rq, rp));
        plan.factors.push_back(
            quadratic_fourier_spec(SymplecticMatrix(ao, bo, -1.0 * bo, ao)));
        plan.split = true;
        plan.theta = theta;
        found = true;
        break;
      }
    }
    if (!found)
      throw GuardError("PlanFailure",
                       "plan_metaplectic: no rotation split yields invertible factors;" +
                           tried.str());
  }

  // The factor product must reproduce the rotation exactly.
  SquareMatrix product = quadratic_fourier_matrix(plan.factors[0]).full();
  for (std::size_t k = 1; k < plan.factors.size(); ++k)
    product = quadratic_fourier_matrix(plan.factors[k]).full() * product;
  if (max_abs(product - f.u_full()) > 1e-10)
    throw GuardError("PlanFailure", "plan_metaplectic: factor product drifts from the rotation");
  return plan;
}

// Default grid between the two factors of a split plan: the image of the
// input Nyquist band under the rotation by theta, which the band guard of the
// first factor is guaranteed to accept.  The point count grows with the
// requested output extent so the second factor's band guard passes too.
inline std::vector<Axis> intermediate_axes(const MetaplecticPlan& plan,
                                           const std::vector<Axis>& in_axes,
                                           const std::vector<Axis>& out_axes, double hbar) {
  const std::size_t n = in_axes.size();
  std::vector<Axis> mid(n);
  std::vector<double> hw(n);
  const double s = std::abs(std::sin(plan.theta));
  for (std::size_t d = 0; d < n; ++d) {
    const Axis& a = in_axes[d];
    hw[d] = s * (M_PI * hbar / a.spacing()) * (static_cast<double>(a.count) - 1.0) /
            static_cast<double>(a.count);
  }
  const QuadraticFourierSpec& outer = plan.factors.back();
  for (std::size_t d = 0; d < n; ++d) {
    // Nyquist budget of the second factor: its band must reach every output
    // point and its input chirp must resolve across this whole grid.
    double band = 0.0;
    for (std::size_t e = 0; e < out_axes.size(); ++e)
      band += std::abs(outer.Q(static_cast<int>(d), static_cast<int>(e))) *
              detail::axis_halfwidth(out_axes[e]);
    double chirp = 0.0;
    for (std::size_t e = 0; e < n; ++e)
      chirp += std::abs(outer.R(static_cast<int>(d), static_cast<int>(e))) * hw[e];
    const double needed =
        std::ceil(2.0 * hw[d] * std::max(band, chirp) * (1.0 + 1e-6) / (M_PI * hbar));
    if (!(needed < static_cast<double>(1u << 20)))
      throw GuardError("GridTooCoarse",
                       "intermediate_axes: output extent demands an unreasonable grid");
    std::uint32_t count = in_axes[d].count;
    if (needed > static_cast<double>(count)) count = static_cast<std::uint32_t>(needed);
    mid[d] = Axis{-hw[d], hw[d], count};
  }
  return mid;
}

inline WaveFunction metaplectic_apply(const MetaplecticPlan& plan, const WaveFunction& wf,
                                      const std::vector<Axis>& out_axes) {
  if (plan.factors.empty())
    throw ValidationError("InvalidState", "metaplectic_apply: empty plan");
  if (!plan.split) return quadratic_fourier(plan.factors[0], wf, out_axes);
  const WaveFunction mid =
      quadratic_fourier(plan.factors[0], wf, intermediate_axes(plan, wf.axes, out_axes, wf.hbar));
  return quadratic_fourier(plan.factors[1], mid, out_axes);
}

inline WaveFunction metaplectic_apply(const MetaplecticPlan& plan, const WaveFunction& wf) {
  return metaplectic_apply(plan, wf, wf.axes);
}

}  // namespace symrad
