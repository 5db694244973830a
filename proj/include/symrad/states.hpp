#pragma once

#include <complex>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "symrad/fft.hpp"
#include "symrad/grid.hpp"
#include "symrad/matrix.hpp"
#include "symrad/threading.hpp"

namespace symrad {

using Cplx = std::complex<double>;

// Complex wavefunction sampled on a midpoint grid.  values is row-major over
// the axes (last axis fastest).
struct WaveFunction {
  int n = 0;
  std::vector<Axis> axes;
  std::vector<Cplx> values;
  double hbar = 1.0;
};

inline void check_wavefunction(const WaveFunction& wf, const char* who) {
  if (wf.n < 1 || static_cast<int>(wf.axes.size()) != wf.n)
    throw ValidationError("DimensionMismatch", std::string(who) + ": axis list must match dimension");
  check_axes(wf.axes, who);
  if (wf.values.size() != total_points(wf.axes))
    throw ValidationError("DimensionMismatch", std::string(who) + ": sample count must match the grid");
  if (!(wf.hbar > 0.0) || !std::isfinite(wf.hbar))
    throw ValidationError("InvalidState", std::string(who) + ": hbar must be positive and finite");
}

// Centered Gaussian psi_{V,W}(x) = (pi*hbar)^{-n/4} det(V)^{1/4}
// exp(-(V + iW)x.x / (2*hbar)) with V symmetric positive definite and W
// symmetric.
struct GaussianState {
  int n = 0;
  SquareMatrix V, W;
  double hbar = 1.0;

  GaussianState(SquareMatrix v, SquareMatrix w, double hb) : n(v.n), V(std::move(v)), W(std::move(w)), hbar(hb) {
    if (W.n != V.n || V.n < 1)
      throw ValidationError("InvalidState", "V and W must be square of equal dimension");
    const double scale = std::max({1.0, max_abs(V), max_abs(W)});
    if (asymmetry(V) > 1e-10 * scale || asymmetry(W) > 1e-10 * scale)
      throw ValidationError("InvalidState", "V and W must be symmetric");
    const auto ev = eigen_symmetric(V);
    if (!(ev.values.front() > 1e-12 * std::max(1.0, ev.values.back())))
      throw ValidationError("InvalidState", "V must be positive definite");
    if (!(hbar > 0.0) || !std::isfinite(hbar))
      throw ValidationError("InvalidState", "hbar must be positive and finite");
  }
};

inline Cplx gaussian_evaluate(const GaussianState& g, const Vec& x) {
  const Vec vx = g.V * x;
  const Vec wx = g.W * x;
  const double quad_re = dot(vx, x) / (2.0 * g.hbar);
  const double quad_im = dot(wx, x) / (2.0 * g.hbar);
  const double det_v = determinant(g.V);
  const double amp = std::pow(M_PI * g.hbar, -0.25 * g.n) * std::pow(det_v, 0.25);
  return amp * std::exp(Cplx{-quad_re, -quad_im});
}

// Statistical mixture with nonnegative weights summing to one.  Components
// may be sampled wavefunctions or analytic Gaussians.
struct MixedState {
  struct Component {
    double weight = 0.0;
    std::variant<WaveFunction, GaussianState> state;
  };
  std::vector<Component> components;

  explicit MixedState(std::vector<Component> comps) : components(std::move(comps)) {
    if (components.empty())
      throw ValidationError("InvalidState", "a mixed state needs at least one component");
    double sum = 0.0;
    for (const auto& c : components) {
      if (c.weight < -1e-12)
        throw ValidationError("InvalidState", "mixture weights must be nonnegative");
      sum += c.weight;
    }
    if (std::abs(sum - 1.0) > 1e-10)
      throw ValidationError("InvalidState", "mixture weights must sum to one");
  }
};

// Coverage diagnostics are warnings, not errors: undersampled Gaussians are
// still usable, the caller just deserves to know.
struct CoverageReport {
  std::vector<std::string> warnings;
  bool ok() const { return warnings.empty(); }
};

inline WaveFunction sample_gaussian(const GaussianState& g, const std::vector<Axis>& axes,
                                    CoverageReport* report = nullptr) {
  if (static_cast<int>(axes.size()) != g.n)
    throw ValidationError("DimensionMismatch", "sample_gaussian: one axis per dimension required");
  check_axes(axes, "sample_gaussian");

  if (report) {
    const SquareMatrix vinv = inverse(g.V, "InvalidState");
    for (int d = 0; d < g.n; ++d) {
      // Marginal standard deviation of |psi|^2 along axis d.
      const double sigma = std::sqrt(0.5 * g.hbar * vinv(d, d));
      const Axis& a = axes[static_cast<std::size_t>(d)];
      if (a.min > -5.0 * sigma || a.max < 5.0 * sigma) {
        std::ostringstream os;
        os << "BadCoverage: axis " << d << " spans [" << a.min << ", " << a.max
           << "] but the density needs +-" << 5.0 * sigma;
        report->warnings.push_back(os.str());
      }
      if (2.0 * sigma / a.spacing() < 16.0) {
        std::ostringstream os;
        os << "BadCoverage: axis " << d << " has fewer than 16 points within one standard deviation";
        report->warnings.push_back(os.str());
      }
    }
  }

  WaveFunction wf;
  wf.n = g.n;
  wf.axes = axes;
  wf.hbar = g.hbar;
  wf.values.resize(total_points(axes));
  std::vector<std::uint32_t> idx;
  Vec x(static_cast<std::size_t>(g.n));
  for (std::size_t flat = 0; flat < wf.values.size(); ++flat) {
    unflatten(flat, axes, idx);
    for (int d = 0; d < g.n; ++d) x[d] = axes[static_cast<std::size_t>(d)].point(idx[static_cast<std::size_t>(d)]);
    wf.values[flat] = gaussian_evaluate(g, x);
  }
  return wf;
}

// Rejects the zero state and states whose boundary amplitude shows the grid
// clips significant mass: downstream transforms would silently alias.
inline void check_state_containment(const WaveFunction& wf, const char* who) {
  double sup = 0.0, edge = 0.0;
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(wf.n));
  for (std::size_t f = 0; f < wf.values.size(); ++f) {
    const double a = std::abs(wf.values[f]);
    sup = std::max(sup, a);
    unflatten(f, wf.axes, idx);
    for (int d = 0; d < wf.n; ++d)
      if (idx[static_cast<std::size_t>(d)] == 0 ||
          idx[static_cast<std::size_t>(d)] + 1 == wf.axes[static_cast<std::size_t>(d)].count) {
        edge = std::max(edge, a);
        break;
      }
  }
  if (!(sup > 0.0))
    throw ValidationError("InvalidState", std::string(who) + ": zero wavefunction");
  if (edge > 1e-3 * sup)
    throw GuardError("GridTooCoarse",
                     std::string(who) +
                         ": state amplitude at the grid boundary exceeds 1e-3 of the peak; "
                         "enlarge the axes");
}

inline double l2_norm(const WaveFunction& wf) {
  check_wavefunction(wf, "l2_norm");
  double s = 0.0;
  for (const Cplx& v : wf.values) s += std::norm(v);
  return std::sqrt(s * cell_volume(wf.axes));
}

namespace detail {

// Applies, along axis d of a row-major array, the oscillatory sum
//   out_j = scale * sum_k in_k exp(-i*sign*(p_j * x_k)/hbar)
// where x_k are the source axis points and p_j the target axis points.
// Implemented with one chirp-z plan shared by every line, parallel over
// lines; each line writes only its own output slots.
inline void transform_axis(std::vector<Cplx>& values, std::vector<Axis>& axes, std::size_t d,
                           const Axis& target, int sign, double hbar, Cplx scale) {
  const Axis src = axes[d];
  const std::size_t n_in = src.count;
  const std::size_t n_out = target.count;
  std::size_t inner = 1;
  for (std::size_t k = d + 1; k < axes.size(); ++k) inner *= axes[k].count;
  std::size_t outer = 1;
  for (std::size_t k = 0; k < d; ++k) outer *= axes[k].count;

  const CztPlan plan = czt_plan(
      static_cast<int>(n_in), static_cast<int>(n_out), static_cast<long double>(src.min) + 0.5L * static_cast<long double>(src.spacing()),
      static_cast<long double>(src.spacing()), static_cast<long double>(target.min) + 0.5L * static_cast<long double>(target.spacing()),
      static_cast<long double>(target.spacing()), static_cast<long double>(sign) / static_cast<long double>(hbar), scale);

  std::vector<Cplx> out(outer * n_out * inner);
  parallel_for(outer * inner, [&](std::size_t line) {
    thread_local std::vector<Cplx> work, in_buf, out_buf;
    in_buf.resize(n_in);
    out_buf.resize(n_out);
    const std::size_t o = line / inner;
    const std::size_t i = line % inner;
    const Cplx* src_base = values.data() + (o * n_in) * inner + i;
    for (std::size_t k = 0; k < n_in; ++k) in_buf[k] = src_base[k * inner];
    czt_apply(plan, in_buf.data(), out_buf.data(), work);
    Cplx* dst_base = out.data() + (o * n_out) * inner + i;
    for (std::size_t j = 0; j < n_out; ++j) dst_base[j * inner] = out_buf[j];
  });
  values = std::move(out);
  axes[d] = target;
}

}  // namespace detail

enum class FtDirection { forward, inverse };

// hbar-scaled Fourier transform
//   (F psi)(p) = (2*pi*hbar)^{-n/2} integral exp(-i p.x / hbar) psi(x) dx
// by midpoint quadrature, evaluated exactly on the given target axes (the
// conjugate axes by default).  The inverse direction flips the kernel sign;
// inverse(forward(psi)) is an exact grid identity up to rounding.
inline WaveFunction fourier_transform_onto(const WaveFunction& wf, const std::vector<Axis>& target,
                                           FtDirection dir = FtDirection::forward) {
  check_wavefunction(wf, "fourier_transform");
  if (target.size() != wf.axes.size())
    throw ValidationError("DimensionMismatch", "fourier_transform: target axes must match dimension");
  check_axes(target, "fourier_transform");
  WaveFunction out = wf;
  const int sign = (dir == FtDirection::forward) ? 1 : -1;
  for (std::size_t d = 0; d < out.axes.size(); ++d) {
    const double h = out.axes[d].spacing();
    const Cplx scale{h / std::sqrt(2.0 * M_PI * wf.hbar), 0.0};
    detail::transform_axis(out.values, out.axes, d, target[d], sign, wf.hbar, scale);
  }
  return out;
}

inline WaveFunction fourier_transform(const WaveFunction& wf, FtDirection dir = FtDirection::forward) {
  check_wavefunction(wf, "fourier_transform");
  std::vector<Axis> target;
  target.reserve(wf.axes.size());
  for (const Axis& a : wf.axes) target.push_back(conjugate_axis(a, wf.hbar));
  return fourier_transform_onto(wf, target, dir);
}

}  // namespace symrad
