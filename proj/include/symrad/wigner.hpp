#pragma once

// Wigner transform of grid wavefunctions, marginal densities, and the
// closed-form Gaussian phase-space data.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "symrad/errors.hpp"
#include "symrad/fft.hpp"
#include "symrad/grid.hpp"
#include "symrad/matrix.hpp"
#include "symrad/states.hpp"
#include "symrad/symplectic.hpp"
#include "symrad/threading.hpp"

namespace symrad {

struct WignerFunction {
  int n = 0;
  std::vector<Axis> axes;      // x axes first, then p axes
  std::vector<double> values;  // row-major over (x..., p...)
  double hbar = 1.0;

  const Axis& x_axis(int d) const { return axes[static_cast<std::size_t>(d)]; }
  const Axis& p_axis(int d) const { return axes[static_cast<std::size_t>(n + d)]; }
  std::vector<Axis> x_axes() const { return {axes.begin(), axes.begin() + n}; }
  std::vector<Axis> p_axes() const { return {axes.begin() + n, axes.end()}; }
};

struct Density {
  std::vector<Axis> axes;
  std::vector<double> values;
};

inline double integrate(const Density& d) {
  double s = 0.0;
  for (double v : d.values) s += v;
  return s * cell_volume(d.axes);
}

namespace detail {

// Replaces axis d of a row-major complex array, feeding every line through fn
// (which maps dims[d] inputs to new_len outputs).  Lines are independent.
template <class LineFn>
inline void remap_axis(std::vector<Cplx>& data, std::vector<std::uint32_t>& dims, int d,
                       std::uint32_t new_len, LineFn&& fn) {
  std::size_t outer = 1, inner = 1;
  for (int e = 0; e < d; ++e) outer *= dims[static_cast<std::size_t>(e)];
  for (int e = d + 1; e < static_cast<int>(dims.size()); ++e)
    inner *= dims[static_cast<std::size_t>(e)];
  const std::uint32_t m = dims[static_cast<std::size_t>(d)];
  std::vector<Cplx> out(outer * new_len * inner);
  parallel_for(outer * inner, [&](std::size_t li) {
    const std::size_t o = li / inner, i = li % inner;
    thread_local std::vector<Cplx> in_line, out_line;
    in_line.resize(m);
    out_line.resize(new_len);
    const Cplx* src = data.data() + o * m * inner + i;
    for (std::uint32_t k = 0; k < m; ++k) in_line[k] = src[k * inner];
    fn(in_line.data(), out_line.data());
    Cplx* dst = out.data() + o * new_len * inner + i;
    for (std::uint32_t k = 0; k < new_len; ++k) dst[k * inner] = out_line[k];
  });
  data = std::move(out);
  dims[static_cast<std::size_t>(d)] = new_len;
}

// Doubles the resolution of axis d by evaluating the trigonometric
// interpolant of the sample sequence at the half-step lattice
// min + q h/2, q = 0..2m-1; the original samples sit at odd q and are
// reproduced exactly.
inline void upsample_axis(std::vector<Cplx>& data, std::vector<std::uint32_t>& dims, int d) {
  const std::uint32_t m = dims[static_cast<std::size_t>(d)];
  constexpr long double pi_l = 3.141592653589793238462643383279503L;
  const CztPlan dft = czt_plan(static_cast<int>(m), static_cast<int>(m), 0.0L, 1.0L, 0.0L,
                               2.0L * pi_l / m, 1.0L, Cplx{1.0, 0.0});
  const CztPlan band =
      czt_plan(static_cast<int>(m), static_cast<int>(2 * m), -static_cast<long double>(m) / 2.0L,
               1.0L, -pi_l / m, pi_l / m, -1.0L, Cplx{1.0 / m, 0.0});
  remap_axis(data, dims, d, 2 * m, [&](const Cplx* in, Cplx* out) {
    thread_local std::vector<Cplx> c, b, work;
    c.resize(m);
    b.resize(m);
    czt_apply(dft, in, c.data(), work);
    for (std::uint32_t t = 0; t < m; ++t) b[t] = c[(t + m / 2) % m];
    czt_apply(band, b.data(), out, work);
  });
}

}  // namespace detail

// Wigner transform on the state's own x grid.  The p grid spans the conjugate
// band (total span 2 pi hbar / h per axis) with count pad * (x count); p = 0
// lies exactly on every p axis.  pad refines the p sampling only.
inline WignerFunction wigner(const WaveFunction& wf, int pad = 0) {
  check_wavefunction(wf, "wigner");
  const int n = wf.n;
  if (pad <= 0) pad = (n == 1) ? 8 : 1;
  for (const Axis& a : wf.axes)
    if (a.count % 2 != 0)
      throw ValidationError("InvalidGrid", "wigner: axis counts must be even");

  // The correlation window is the grid itself, so significant amplitude at
  // the boundary means the y integral would be visibly truncated.
  check_state_containment(wf, "wigner");

  // Half-step resolution intermediate.
  std::vector<std::uint32_t> fdims(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) fdims[static_cast<std::size_t>(d)] = wf.axes[static_cast<std::size_t>(d)].count;
  std::vector<Cplx> fine = wf.values;
  for (int d = 0; d < n; ++d) detail::upsample_axis(fine, fdims, d);

  WignerFunction out;
  out.n = n;
  out.hbar = wf.hbar;
  out.axes = wf.axes;
  std::vector<detail::CztPlan> yplans;
  std::size_t p_total = 1;
  for (int d = 0; d < n; ++d) {
    const Axis& ax = wf.axes[static_cast<std::size_t>(d)];
    const std::uint32_t m = ax.count;
    const double h = ax.spacing();
    const std::uint32_t pc = static_cast<std::uint32_t>(pad) * m;
    const double dpf = 2.0 * M_PI * wf.hbar / (static_cast<double>(pc) * h);
    Axis pax;
    pax.min = -static_cast<double>(pc + 1) * dpf / 2.0;
    pax.max = pax.min + static_cast<double>(pc) * dpf;
    pax.count = pc;
    out.axes.push_back(pax);
    p_total *= pc;
    yplans.push_back(detail::czt_plan(
        static_cast<int>(2 * m), static_cast<int>(pc), -static_cast<long double>(m) * h, h,
        -static_cast<long double>(pc) / 2.0L * static_cast<long double>(dpf), dpf, 1.0L / wf.hbar,
        Cplx{h / (2.0 * M_PI * wf.hbar), 0.0}));
  }

  const std::vector<Axis> xaxes(wf.axes.begin(), wf.axes.end());
  const std::size_t x_total = total_points(xaxes);
  const std::size_t y_total = fine.size();
  out.values.resize(x_total * p_total);
  std::vector<double> im_res(x_total, 0.0);

  // Row-major strides of the fine lattice.
  std::vector<std::size_t> fstr(static_cast<std::size_t>(n), 1);
  for (int d = n - 2; d >= 0; --d)
    fstr[static_cast<std::size_t>(d)] =
        fstr[static_cast<std::size_t>(d + 1)] * fdims[static_cast<std::size_t>(d + 1)];

  parallel_for(x_total, [&](std::size_t xi) {
    thread_local std::vector<Cplx> g, tmp, line_in, line_out, work;
    thread_local std::vector<std::int64_t> su, sv;
    thread_local std::vector<std::uint32_t> cur, counter, midx;
    thread_local std::vector<std::size_t> dim_off;

    midx.resize(static_cast<std::size_t>(n));
    unflatten(xi, xaxes, midx);

    // Per-axis index maps: for half-offset j (stored index jj = j + m), the
    // fine indexes of x + y/2 and x - y/2, premultiplied by the stride, or -1
    // when the point leaves the lattice (zero extension).
    su.resize(0);
    sv.resize(0);
    for (int d = 0; d < n; ++d) {
      const std::uint32_t m = xaxes[static_cast<std::size_t>(d)].count;
      const std::int64_t base = 2 * static_cast<std::int64_t>(midx[static_cast<std::size_t>(d)]) + 1;
      for (std::uint32_t jj = 0; jj < 2 * m; ++jj) {
        const std::int64_t j = static_cast<std::int64_t>(jj) - static_cast<std::int64_t>(m);
        const std::int64_t u = base + j, v = base - j;
        const std::int64_t s = static_cast<std::int64_t>(fstr[static_cast<std::size_t>(d)]);
        su.push_back(u >= 0 && u < 2 * m ? u * s : -1);
        sv.push_back(v >= 0 && v < 2 * m ? v * s : -1);
      }
    }

    g.resize(y_total);
    counter.assign(static_cast<std::size_t>(n), 0);
    dim_off.assign(static_cast<std::size_t>(n), 0);
    for (int d = 1; d < n; ++d)
      dim_off[static_cast<std::size_t>(d)] =
          dim_off[static_cast<std::size_t>(d - 1)] + 2 * xaxes[static_cast<std::size_t>(d - 1)].count;
    for (std::size_t yf = 0; yf < y_total; ++yf) {
      std::int64_t uf = 0, vf = 0;
      bool valid = true;
      for (int d = 0; d < n; ++d) {
        const std::size_t e = dim_off[static_cast<std::size_t>(d)] + counter[static_cast<std::size_t>(d)];
        if (su[e] < 0 || sv[e] < 0) {
          valid = false;
          break;
        }
        uf += su[e];
        vf += sv[e];
      }
      g[yf] = valid ? fine[static_cast<std::size_t>(uf)] *
                          std::conj(fine[static_cast<std::size_t>(vf)])
                    : Cplx{0.0, 0.0};
      int d = n - 1;
      while (d >= 0 && ++counter[static_cast<std::size_t>(d)] ==
                           2 * xaxes[static_cast<std::size_t>(d)].count) {
        counter[static_cast<std::size_t>(d)] = 0;
        --d;
      }
    }

    // Serial per-axis transform y -> p (this loop already runs inside the
    // parallel region).
    cur.resize(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) cur[static_cast<std::size_t>(d)] = 2 * xaxes[static_cast<std::size_t>(d)].count;
    for (int d = 0; d < n; ++d) {
      const std::uint32_t m = cur[static_cast<std::size_t>(d)];
      const std::uint32_t nl = static_cast<std::uint32_t>(yplans[static_cast<std::size_t>(d)].n_out);
      std::size_t outer = 1, inner = 1;
      for (int e = 0; e < d; ++e) outer *= cur[static_cast<std::size_t>(e)];
      for (int e = d + 1; e < n; ++e) inner *= cur[static_cast<std::size_t>(e)];
      tmp.resize(outer * nl * inner);
      line_in.resize(m);
      line_out.resize(nl);
      for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < inner; ++i) {
          const Cplx* src = g.data() + o * m * inner + i;
          for (std::uint32_t k = 0; k < m; ++k) line_in[k] = src[k * inner];
          detail::czt_apply(yplans[static_cast<std::size_t>(d)], line_in.data(), line_out.data(),
                            work);
          Cplx* dst = tmp.data() + o * nl * inner + i;
          for (std::uint32_t k = 0; k < nl; ++k) dst[k * inner] = line_out[k];
        }
      std::swap(g, tmp);
      cur[static_cast<std::size_t>(d)] = nl;
    }

    double im = 0.0;
    double* dst = out.values.data() + xi * p_total;
    for (std::size_t l = 0; l < p_total; ++l) {
      dst[l] = g[l].real();
      im = std::max(im, std::abs(g[l].imag()));
    }
    im_res[xi] = im;
  });

  double sup_re = 0.0, im_max = 0.0;
  for (double v : out.values) sup_re = std::max(sup_re, std::abs(v));
  for (double v : im_res) im_max = std::max(im_max, v);
  if (im_max > 1e-10 * std::max(sup_re, 1e-30))
    throw GuardError("ComplexResidue", "wigner: imaginary residue above tolerance");
  return out;
}

inline Density marginal_position(const WignerFunction& w) {
  Density d;
  d.axes = w.x_axes();
  const std::size_t x_total = total_points(d.axes);
  const std::size_t p_total = w.values.size() / x_total;
  const double p_cell = cell_volume(w.p_axes());
  d.values.resize(x_total);
  parallel_for(x_total, [&](std::size_t xi) {
    const double* src = w.values.data() + xi * p_total;
    double s = 0.0;
    for (std::size_t l = 0; l < p_total; ++l) s += src[l];
    d.values[xi] = s * p_cell;
  });
  return d;
}

inline Density marginal_momentum(const WignerFunction& w) {
  Density d;
  d.axes = w.p_axes();
  const std::size_t p_total = total_points(d.axes);
  const std::size_t x_total = w.values.size() / p_total;
  const double x_cell = cell_volume(w.x_axes());
  d.values.assign(p_total, 0.0);
  parallel_for(p_total, [&](std::size_t l) {
    double s = 0.0;
    for (std::size_t xi = 0; xi < x_total; ++xi) s += w.values[xi * p_total + l];
    d.values[l] = s * x_cell;
  });
  return d;
}

// Closed-form Gaussian Wigner data: the symmetric symplectic matrix
// G = [[V + W V^-1 W, W V^-1], [V^-1 W, V^-1]] and the density
// (pi hbar)^-n exp(-G z . z / hbar).
struct GaussianWigner {
  int n = 0;
  double hbar = 1.0;
  SquareMatrix G;
  double norm = 1.0;

  double operator()(const Vec& z) const {
    if (static_cast<int>(z.size()) != 2 * n)
      throw ValidationError("DimensionMismatch", "gaussian wigner: point must have dimension 2n");
    return norm * std::exp(-dot(z, G * z) / hbar);
  }
};

inline GaussianWigner gaussian_wigner(const GaussianState& g) {
  const SquareMatrix vinv =
      symmetric_apply(eigen_symmetric(g.V), [](double v) { return 1.0 / v; });
  const SquareMatrix wv = g.W * vinv;
  const SquareMatrix vw = vinv * g.W;
  const SquareMatrix upper = g.V + wv * g.W;
  GaussianWigner gw;
  gw.n = g.n;
  gw.hbar = g.hbar;
  gw.norm = std::pow(M_PI * g.hbar, -g.n);
  gw.G = SquareMatrix(2 * g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      gw.G(i, j) = upper(i, j);
      gw.G(i, g.n + j) = wv(i, j);
      gw.G(g.n + i, j) = vw(i, j);
      gw.G(g.n + i, g.n + j) = vinv(i, j);
    }
  return gw;
}

// S = [[V^1/2, 0], [V^-1/2 W, V^-1/2]]; S^T S equals the matrix G above.
inline SymplecticMatrix gaussian_symplectic_factor(const GaussianState& g) {
  const auto ev = eigen_symmetric(g.V);
  const SquareMatrix vh = symmetric_apply(ev, [](double v) { return std::sqrt(v); });
  const SquareMatrix vmh = symmetric_apply(ev, [](double v) { return 1.0 / std::sqrt(v); });
  return SymplecticMatrix(vh, SquareMatrix(g.n), vmh * g.W, vmh);
}

}  // namespace symrad
