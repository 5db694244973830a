#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "symrad/errors.hpp"

namespace symrad {
namespace detail {

using Cplx = std::complex<double>;

// exp(i*phi) with explicit range reduction in long double, so phases of order
// 1e4 radians (Bluestein chirps on long transforms) keep ~1e-15 accuracy.
inline Cplx cis_l(long double phi) {
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  phi = std::fmod(phi, two_pi);
  return {static_cast<double>(std::cos(phi)), static_cast<double>(std::sin(phi))};
}

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Iterative radix-2 FFT over a power-of-two buffer using a precomputed
// twiddle table (table[t] = exp(-2*pi*i*t/L), t < L/2).  The inverse pass
// conjugates the lookups and applies the 1/L normalization.
inline void fft_pow2(Cplx* x, std::size_t len, const std::vector<Cplx>& table, bool inverse) {
  const std::size_t L = table.size() * 2;
  for (std::size_t i = 1, j = 0; i < len; ++i) {
    std::size_t bit = len >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t sub = 2; sub <= len; sub <<= 1) {
    const std::size_t stride = L / sub;
    for (std::size_t start = 0; start < len; start += sub)
      for (std::size_t k = 0; k < sub / 2; ++k) {
        Cplx w = table[k * stride];
        if (inverse) w = std::conj(w);
        const Cplx u = x[start + k];
        const Cplx v = x[start + k + sub / 2] * w;
        x[start + k] = u + v;
        x[start + k + sub / 2] = u - v;
      }
  }
  if (inverse) {
    const double s = 1.0 / static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i) x[i] *= s;
  }
}

// Chirp-z evaluation of
//   S_j = scale * sum_{k=0}^{n_in-1} x_k exp(-i*sgn*(p0 + j*dp)*(x0 + k*h)/hbar)
// for j = 0..n_out-1, via Bluestein's substitution j*k = (j^2+k^2-(j-k)^2)/2.
// This covers the plain conjugate-grid DFT (dp*h/hbar = 2*pi/n) and every
// scaled or offset target grid with the same O(L log L) cost, which is what
// makes one primitive serve Fourier transforms, Wigner kernels, metaplectic
// chirps, and filtered backprojection alike.
struct CztPlan {
  int n_in = 0;
  int n_out = 0;
  std::size_t conv_len = 0;
  std::vector<Cplx> twiddle;  // conv_len/2 entries
  std::vector<Cplx> pre;      // input ramp * chirp
  std::vector<Cplx> filter_f; // FFT of the Bluestein filter
  std::vector<Cplx> post;     // output ramp * chirp * constant * scale
};

inline CztPlan czt_plan(int n_in, int n_out, long double x0, long double h, long double p0,
                        long double dp, long double sgn_over_hbar, Cplx scale) {
  CztPlan plan;
  plan.n_in = n_in;
  plan.n_out = n_out;
  const std::size_t L = next_pow2(static_cast<std::size_t>(n_in) + n_out - 1);
  plan.conv_len = L;
  plan.twiddle.resize(L / 2);
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  for (std::size_t t = 0; t < L / 2; ++t)
    plan.twiddle[t] = cis_l(-two_pi * static_cast<long double>(t) / static_cast<long double>(L));

  const long double alpha = sgn_over_hbar * dp * h;
  plan.pre.resize(static_cast<std::size_t>(n_in));
  for (int k = 0; k < n_in; ++k) {
    const long double kk = static_cast<long double>(k);
    plan.pre[static_cast<std::size_t>(k)] =
        cis_l(-(sgn_over_hbar * p0 * h * kk + alpha * kk * kk / 2.0L));
  }
  std::vector<Cplx> filt(L, Cplx{0.0, 0.0});
  for (int m = 0; m < n_out; ++m) {
    const long double mm = static_cast<long double>(m);
    filt[static_cast<std::size_t>(m)] = cis_l(alpha * mm * mm / 2.0L);
  }
  for (int m = 1; m < n_in; ++m) {
    const long double mm = static_cast<long double>(m);
    filt[L - static_cast<std::size_t>(m)] = cis_l(alpha * mm * mm / 2.0L);
  }
  fft_pow2(filt.data(), L, plan.twiddle, false);
  plan.filter_f = std::move(filt);

  plan.post.resize(static_cast<std::size_t>(n_out));
  for (int j = 0; j < n_out; ++j) {
    const long double jj = static_cast<long double>(j);
    plan.post[static_cast<std::size_t>(j)] =
        scale * cis_l(-(sgn_over_hbar * dp * x0 * jj + alpha * jj * jj / 2.0L +
                        sgn_over_hbar * p0 * x0));
  }
  return plan;
}

// work must have conv_len capacity; reused across calls to avoid allocation.
inline void czt_apply(const CztPlan& plan, const Cplx* in, Cplx* out, std::vector<Cplx>& work) {
  work.assign(plan.conv_len, Cplx{0.0, 0.0});
  for (int k = 0; k < plan.n_in; ++k)
    work[static_cast<std::size_t>(k)] = in[k] * plan.pre[static_cast<std::size_t>(k)];
  fft_pow2(work.data(), plan.conv_len, plan.twiddle, false);
  for (std::size_t i = 0; i < plan.conv_len; ++i) work[i] *= plan.filter_f[i];
  fft_pow2(work.data(), plan.conv_len, plan.twiddle, true);
  for (int j = 0; j < plan.n_out; ++j)
    out[j] = work[static_cast<std::size_t>(j)] * plan.post[static_cast<std::size_t>(j)];
}

}  // namespace detail
}  // namespace symrad
