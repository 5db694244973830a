#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symrad/errors.hpp"
#include "symrad/grid.hpp"
#include "symrad/matrix.hpp"
#include "symrad/radon.hpp"
#include "symrad/states.hpp"
#include "symrad/symplectic.hpp"

namespace symrad {

// Centered Gaussian profile density in the frame variable X:
//   R(X) = (pi hbar)^{-n/2} det(M)^{-1/2} exp(-M^{-1}X.X / hbar),
// the constant forced by unit mass.  M is the profile covariance scale.
struct GaussianRadonForm {
  RadonFrame frame;
  SquareMatrix M;
  SquareMatrix M_inv;
  double hbar = 1.0;
  double normalization = 0.0;

  double operator()(const Vec& X) const {
    if (static_cast<int>(X.size()) != frame.n)
      throw ValidationError("DimensionMismatch", "gaussian radon form: point has wrong dimension");
    return normalization * std::exp(-dot(M_inv * X, X) / hbar);
  }
};

// Second moments of a one-dimensional state.  A pure Gaussian wavepacket
// saturates sigma_xx sigma_pp - sigma_xp^2 = hbar^2/4.
struct MomentTriple {
  double sigma_xx = 0.0;
  double sigma_pp = 0.0;
  double sigma_xp = 0.0;
  double hbar = 1.0;
};

namespace detail {

// Averages away the round-off asymmetry of products that are symmetric
// analytically.
inline SquareMatrix symmetrized(SquareMatrix m) {
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j) {
      const double s = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = s;
      m(j, i) = s;
    }
  return m;
}

}  // namespace detail

inline GaussianRadonForm gaussian_radon_closed_form(const GaussianState& g, const RadonFrame& f) {
  if (g.n != f.n)
    throw ValidationError("DimensionMismatch",
                          "gaussian_radon_closed_form: state and frame dimensions differ");
  const SquareMatrix vinv = inverse(g.V);
  const SquareMatrix shear = f.A - f.B * g.W;
  const SquareMatrix m = detail::symmetrized(f.B * g.V * transpose(f.B) +
                                             shear * vinv * transpose(shear));
  const double det_m = determinant(m);
  if (!(det_m > 0.0))
    throw GuardError("SingularM", "gaussian_radon_closed_form: profile covariance is singular");
  GaussianRadonForm form;
  form.frame = f;
  form.M = m;
  form.M_inv = detail::symmetrized(inverse(m));
  form.hbar = g.hbar;
  form.normalization =
      1.0 / std::sqrt(std::pow(M_PI * g.hbar, static_cast<double>(g.n)) * det_m);
  return form;
}

// Covariance of the transformed wavepacket: V' = Lambda M^{-1} Lambda.
inline SquareMatrix transformed_V(const GaussianState& g, const RadonFrame& f) {
  const GaussianRadonForm form = gaussian_radon_closed_form(g, f);
  return detail::symmetrized(f.Lambda * form.M_inv * f.Lambda);
}

// Inverts the width/phase dictionary v = hbar/(2 sigma_xx), w = -sigma_xp/sigma_xx.
// Only saturated triples describe a pure wavepacket; the family is two-parameter.
inline GaussianState wavepacket_from_moments(const MomentTriple& m) {
  if (!(m.sigma_xx > 0.0) || !(m.sigma_pp > 0.0) || !(m.hbar > 0.0))
    throw ValidationError("InvalidState",
                          "wavepacket_from_moments: widths and hbar must be positive");
  const double bound = 0.25 * m.hbar * m.hbar;
  const double gap = std::abs(m.sigma_xx * m.sigma_pp - m.sigma_xp * m.sigma_xp - bound);
  if (gap > 1e-6 * bound)
    throw ValidationError("NotSaturated",
                          "wavepacket_from_moments: moments do not saturate the uncertainty bound");
  const double v = 0.5 * m.hbar / m.sigma_xx;
  const double w = -m.sigma_xp / m.sigma_xx;
  return GaussianState(SquareMatrix(1, {v}), SquareMatrix(1, {w}), m.hbar);
}

// Profile covariance scale of the frame (a, b) written in the moments:
//   K = b^2 hbar/(2 sigma_xx) + (a + b sigma_xp/sigma_xx)^2 (2 sigma_xx/hbar).
inline double pauli_K(const MomentTriple& m, double a, double b) {
  if (!(m.sigma_xx > 0.0) || !(m.hbar > 0.0))
    throw ValidationError("InvalidState", "pauli_K: sigma_xx and hbar must be positive");
  const double tilt = a + b * m.sigma_xp / m.sigma_xx;
  return 0.5 * b * b * m.hbar / m.sigma_xx + tilt * tilt * 2.0 * m.sigma_xx / m.hbar;
}

// Least-squares fit of log R against X^2 over the central half of the mass;
// returns the scalar M of the matching Gaussian form.  The central window
// keeps truncated or noisy tails out of the fit.
inline double fit_gaussian_m(const RadonProfile& p) {
  if (p.n != 1)
    throw ValidationError("DimensionNotOne", "fit_gaussian_m: profile must be one-dimensional");
  const Axis& ax = p.axes[0];
  const double h = ax.spacing();
  double mass = 0.0;
  for (double v : p.values) mass += v * h;
  if (!(mass > 0.0))
    throw GuardError("DegenerateFit", "fit_gaussian_m: profile carries no mass");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t used = 0;
  double cum = 0.0;
  for (std::uint32_t k = 0; k < ax.count; ++k) {
    const double v = p.values[k];
    const double center = cum + 0.5 * v * h;
    cum += v * h;
    if (center < 0.25 * mass || center > 0.75 * mass || !(v > 0.0)) continue;
    const double x = ax.point(k) * ax.point(k);
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used < 3)
    throw GuardError("DegenerateFit", "fit_gaussian_m: too few points in the central mass window");
  const double denom = static_cast<double>(used) * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0))
    throw GuardError("DegenerateFit", "fit_gaussian_m: fit abscissas are degenerate");
  const double slope = (static_cast<double>(used) * sxy - sx * sy) / denom;
  if (!(slope < 0.0))
    throw GuardError("DegenerateFit", "fit_gaussian_m: profile does not decay");
  return -1.0 / (slope * p.hbar);
}

// Recovers sigma_xp from covariance-scale measurements along b = 1: the
// minimum over a sits at a* = -sigma_xp/sigma_xx and equals hbar/(2 sigma_xx)
// for every pure Gaussian, which doubles as the consistency check.
inline double pauli_recover(const std::function<double(double, double)>& oracle, double sigma_xx,
                            double hbar, double a_max = 8.0) {
  if (!(sigma_xx > 0.0) || !(hbar > 0.0) || !(a_max > 0.0))
    throw ValidationError("InvalidState",
                          "pauli_recover: sigma_xx, hbar and the scan range must be positive");
  constexpr int kScan = 129;
  const auto at = [&](int i) {
    return -a_max + 2.0 * a_max * static_cast<double>(i) / (kScan - 1);
  };
  int best = 0;
  double best_k = oracle(at(0), 1.0);
  for (int i = 1; i < kScan; ++i) {
    const double k = oracle(at(i), 1.0);
    if (k < best_k) {
      best = i;
      best_k = k;
    }
  }
  if (best == 0 || best == kScan - 1)
    throw GuardError("BracketFailure", "pauli_recover: minimum sits on the scan boundary");
  double lo = at(best - 1);
  double hi = at(best + 1);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double fc = oracle(c, 1.0);
  double fd = oracle(d, 1.0);
  while (hi - lo > 1e-7) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = oracle(c, 1.0);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = oracle(d, 1.0);
    }
  }
  const double a_star = 0.5 * (lo + hi);
  const double k_min = oracle(a_star, 1.0);
  const double expect = 0.5 * hbar / sigma_xx;
  if (std::abs(k_min - expect) > 0.05 * expect)
    throw GuardError("MinimumMismatch",
                     "pauli_recover: minimum deviates from hbar/(2 sigma_xx) by more than 5 percent");
  return -a_star * sigma_xx;
}

}  // namespace symrad
