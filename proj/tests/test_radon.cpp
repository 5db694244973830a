#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "symrad/radon.hpp"
#include "symrad/states.hpp"
#include "symrad/symplectic.hpp"
#include "symrad/wigner.hpp"

using namespace symrad;

namespace {

Axis wide_axis() { return Axis{-12.0, 12.0, 256}; }

GaussianState g1(double v, double w, double hbar) {
  return GaussianState(SquareMatrix(1, {v}), SquareMatrix(1, {w}), hbar);
}

WaveFunction sample1(double v, double w, double hbar) {
  return sample_gaussian(g1(v, w, hbar), {wide_axis()});
}

// Position density of the centered Gaussian family; the imaginary part of the
// exponent drops out of the modulus.
double pos_density(double v, double hbar, double x) {
  return std::sqrt(v / (M_PI * hbar)) * std::exp(-v * x * x / hbar);
}

RadonFrame direction_frame(double theta) {
  return frame_from_direction(std::cos(theta), std::sin(theta));
}

double rel_l2(const std::vector<double>& got, const std::vector<double>& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < got.size(); ++k) {
    num += (got[k] - want[k]) * (got[k] - want[k]);
    den += want[k] * want[k];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("axis-aligned frames reduce to position and momentum densities") {
  const WaveFunction wf = sample1(1.3, 0.4, 1.0);
  const Axis xa{-6.0, 6.0, 64};

  const RadonProfile p10 = radon_profile(wf, frame_from_direction(1.0, 0.0), {xa});
  for (std::uint32_t k = 0; k < xa.count; ++k)
    REQUIRE(std::abs(p10.values[k] - pos_density(1.3, 1.0, xa.point(k))) < 1e-8);

  const RadonProfile p20 = radon_profile(wf, frame_from_direction(2.0, 0.0), {xa});
  for (std::uint32_t k = 0; k < xa.count; ++k)
    REQUIRE(std::abs(p20.values[k] - 0.5 * pos_density(1.3, 1.0, xa.point(k) / 2.0)) < 1e-8);

  const RadonProfile p01 = radon_profile(wf, frame_from_direction(0.0, 1.0), {xa});
  const WaveFunction ft = fourier_transform_onto(wf, {xa});
  for (std::uint32_t k = 0; k < xa.count; ++k)
    REQUIRE(std::abs(p01.values[k] - std::norm(ft.values[k])) < 1e-10);
}

TEST_CASE("the isotropic ground state is invariant under every direction") {
  const double hbar = 0.7;
  const WaveFunction wf = sample1(1.0, 0.0, hbar);
  const Axis xa{-5.0, 5.0, 40};
  for (double theta : {0.0, 0.4, M_PI / 4.0, 1.1, M_PI / 2.0, 2.2, 3.0}) {
    const RadonProfile p = radon_profile(wf, direction_frame(theta), {xa});
    for (std::uint32_t k = 0; k < xa.count; ++k)
      REQUIRE(std::abs(p.values[k] - pos_density(1.0, hbar, xa.point(k))) < 1e-8);
  }
}

TEST_CASE("short profile axes are evaluated at their declared points") {
  const WaveFunction wf = sample1(1.0, 0.0, 1.0);
  const Axis tiny{-2.0, 2.0, 5};
  const RadonProfile p = radon_profile(wf, direction_frame(0.9), {tiny});
  REQUIRE(p.values.size() == 5);
  for (std::uint32_t k = 0; k < 5; ++k)
    REQUIRE(std::abs(p.values[k] - pos_density(1.0, 1.0, tiny.point(k))) < 1e-8);
}

TEST_CASE("sinogram rows are nonnegative unit-mass densities") {
  const WaveFunction wf = sample1(1.3, 0.4, 1.0);
  const Axis xa{-10.0, 10.0, 200};
  const Sinogram sg = sinogram(wf, 16, xa);
  REQUIRE(sg.values.size() == 16u * 200u);
  for (double v : sg.values) REQUIRE(v >= 0.0);
  for (std::uint32_t j = 0; j < sg.angles; ++j) {
    double mass = 0.0;
    for (std::uint32_t k = 0; k < xa.count; ++k) mass += sg.row(j)[k];
    REQUIRE(std::abs(mass * xa.spacing() - 1.0) < 1e-6);
  }

  const GaussianState round(SquareMatrix(2, {1.0, 0.0, 0.0, 1.0}), SquareMatrix(2), 1.0);
  const WaveFunction wf2 = sample_gaussian(round, {Axis{-6.0, 6.0, 32}, Axis{-6.0, 6.0, 32}});
  try {
    sinogram(wf2, 8, xa);
    FAIL("expected DimensionNotOne");
  } catch (const ValidationError& e) {
    REQUIRE(e.name() == "DimensionNotOne");
  }
}

TEST_CASE("line integrals of the distribution match frame profiles") {
  const WaveFunction wf =
      sample_gaussian(g1(1.3, 0.4, 1.0), {Axis{-12.0, 12.0, 512}});
  const WignerFunction w = wigner(wf, 4);

  const double triples[][3] = {{std::cos(0.7), std::sin(0.7), 0.9},
                               {1.0, 0.0, -0.5},
                               {0.6, -0.8, 0.3},
                               {2.0, 0.0, 1.0}};
  for (const auto& t : triples) {
    const double line = radon_line_integral(w, t[0], t[1], t[2]);
    const RadonFrame frame =
        make_frame(SquareMatrix(1, {t[0]}), SquareMatrix(1, {t[1]}));
    const RadonProfile p = radon_profile(wf, frame, {Axis{t[2] - 0.5, t[2] + 0.5, 1}});
    REQUIRE(std::abs(line - p.values[0]) < 1e-6);
  }

  const double base = radon_line_integral(w, std::cos(0.7), std::sin(0.7), 0.9);
  for (double mu : {2.5, -1.7}) {
    const double scaled =
        radon_line_integral(w, mu * std::cos(0.7), mu * std::sin(0.7), mu * 0.9);
    REQUIRE(std::abs(std::abs(mu) * scaled - base) < 1e-12);
  }

  try {
    radon_line_integral(w, 0.0, 0.0, 1.0);
    FAIL("expected DegenerateDirection");
  } catch (const ValidationError& e) {
    REQUIRE(e.name() == "DegenerateDirection");
  }
  try {
    radon_line_integral(w, 1e-15, 0.0, 5.0);
    FAIL("expected DegenerateDirection");
  } catch (const ValidationError& e) {
    REQUIRE(e.name() == "DegenerateDirection");
  }
}

TEST_CASE("surface and line integrals coincide in dimension one") {
  const WaveFunction wf =
      sample_gaussian(g1(1.3, 0.4, 1.0), {Axis{-12.0, 12.0, 512}});
  const WignerFunction w = wigner(wf, 4);
  const double dirs[][2] = {{std::cos(0.7), std::sin(0.7)}, {2.0, 0.0}, {0.6, -0.8}};
  for (const auto& d : dirs) {
    const RadonFrame frame = make_frame(SquareMatrix(1, {d[0]}), SquareMatrix(1, {d[1]}));
    for (double X : {-0.8, 0.0, 1.1}) {
      const double line = radon_line_integral(w, d[0], d[1], X);
      const double surf = radon_surface_integral(w, frame, Vec{X});
      REQUIRE(std::abs(surf - line) < 1e-6);
    }
  }
}

TEST_CASE("plane integrals recover the closed form in dimension two") {
  const double c = std::cos(0.6), s = std::sin(0.6);
  const GaussianState round(SquareMatrix(2, {1.0, 0.0, 0.0, 1.0}), SquareMatrix(2), 1.0);
  const GaussianWigner exact = gaussian_wigner(round);

  // Exact distribution sampled on a compact grid: the test isolates the plane
  // quadrature itself.
  const Axis ga{-4.0, 4.0, 48};
  WignerFunction w;
  w.n = 2;
  w.hbar = 1.0;
  w.axes.assign(4, ga);
  w.values.resize(48ull * 48ull * 48ull * 48ull);
  {
    std::size_t f = 0;
    Vec z(4);
    for (std::uint32_t i0 = 0; i0 < 48; ++i0)
      for (std::uint32_t i1 = 0; i1 < 48; ++i1)
        for (std::uint32_t i2 = 0; i2 < 48; ++i2)
          for (std::uint32_t i3 = 0; i3 < 48; ++i3) {
            z[0] = ga.point(i0);
            z[1] = ga.point(i1);
            z[2] = ga.point(i2);
            z[3] = ga.point(i3);
            w.values[f++] = exact(z);
          }
  }

  SquareMatrix a(2), b(2);
  for (int i = 0; i < 2; ++i) {
    a(i, i) = c;
    b(i, i) = s;
  }
  const RadonFrame frame = make_frame(a, b);
  // The frame is an isotropic rotation, so the closed-form profile of the
  // round state is exp(-|X|^2) / pi.
  for (const Vec& X : {Vec{0.0, 0.0}, Vec{0.3, -0.2}}) {
    const double got = radon_surface_integral(w, frame, X);
    const double want = std::exp(-(X[0] * X[0] + X[1] * X[1])) / M_PI;
    REQUIRE(std::abs(got - want) < 1e-3);
  }

  // The sweep must stay inside the affine plane the frame row equations cut out.
  const Vec X{0.3, -0.2};
  const AffineLagrangianPlane plane(frame, X);
  const SquareMatrix at_l1 = transpose(frame.A) * frame.LambdaInv;
  const SquareMatrix bt_l1 = transpose(frame.B) * frame.LambdaInv;
  const Vec base_x = at_l1 * (frame.LambdaInv * X);
  const Vec base_p = bt_l1 * (frame.LambdaInv * X);
  for (double u : {-1.3, 0.0, 0.8}) {
    for (double v : {-0.5, 0.4, 1.7}) {
      const Vec p{u, v};
      Vec z(4);
      for (int d = 0; d < 2; ++d) {
        double sx = 0.0, sp = 0.0;
        for (int e = 0; e < 2; ++e) {
          sx += bt_l1(d, e) * p[static_cast<std::size_t>(e)];
          sp += at_l1(d, e) * p[static_cast<std::size_t>(e)];
        }
        z[static_cast<std::size_t>(d)] = base_x[static_cast<std::size_t>(d)] - sx;
        z[static_cast<std::size_t>(2 + d)] = base_p[static_cast<std::size_t>(d)] + sp;
      }
      REQUIRE(plane_contains(plane, z, 1e-9));
    }
  }

  WignerFunction fake;
  fake.n = 3;
  fake.hbar = 1.0;
  fake.axes.assign(6, Axis{-1.0, 1.0, 8});
  fake.values.assign(262144, 0.0);
  SquareMatrix a3(3);
  for (int i = 0; i < 3; ++i) a3(i, i) = 1.0;
  try {
    radon_surface_integral(fake, make_frame(a3, SquareMatrix(3)), Vec{0.0, 0.0, 0.0});
    FAIL("expected DimensionGuard");
  } catch (const GuardError& e) {
    REQUIRE(e.name() == "DimensionGuard");
  }
}

TEST_CASE("opposite directions mirror the profile axis") {
  const WaveFunction wf = sample1(1.3, 0.4, 1.0);
  const Axis xa{-6.0, 6.0, 64};
  const double c = std::cos(0.8), s = std::sin(0.8);
  const RadonProfile plus = radon_profile(wf, frame_from_direction(c, s), {xa});
  const RadonProfile minus = radon_profile(wf, frame_from_direction(-c, -s), {xa});
  for (std::uint32_t k = 0; k < xa.count; ++k)
    REQUIRE(std::abs(minus.values[k] - plus.values[xa.count - 1 - k]) < 1e-6);
}

TEST_CASE("filtered back-projection reconstructs a squeezed Gaussian") {
  // Strong squeezing keeps 180 angles genuinely under-sampled, so doubling
  // the angle count must help; a fine profile step keeps the filter bias low.
  const GaussianState g = g1(56.0, 0.0, 1.0);
  const Axis xa{-22.0, 22.0, 4096};
  const WaveFunction wf = sample_gaussian(g, {xa});
  const Axis out{-4.0, 4.0, 128};

  const GaussianWigner exact = gaussian_wigner(g);
  std::vector<double> want(static_cast<std::size_t>(out.count) * out.count);
  for (std::uint32_t i = 0; i < out.count; ++i)
    for (std::uint32_t j = 0; j < out.count; ++j)
      want[static_cast<std::size_t>(i) * out.count + j] =
          exact(Vec{out.point(i), out.point(j)});

  double errs[2] = {0.0, 0.0};
  const std::uint32_t angle_counts[2] = {180, 360};
  for (int c = 0; c < 2; ++c) {
    const Sinogram sg = sinogram(wf, angle_counts[c], xa);
    const WignerFunction rec = inverse_radon(sg, out, out);
    errs[c] = rel_l2(rec.values, want);
  }
  REQUIRE(errs[0] < 8e-3);
  REQUIRE(errs[1] < 4.5e-3);
  REQUIRE(errs[1] < errs[0]);

  Sinogram few;
  few.x_axis = xa;
  few.angles = 59;
  few.hbar = 1.0;
  few.values.assign(59u * 4096u, 0.0);
  try {
    inverse_radon(few, out, out);
    FAIL("expected TooFewAngles");
  } catch (const GuardError& e) {
    REQUIRE(e.name() == "TooFewAngles");
  }

  Sinogram coarse;
  coarse.x_axis = Axis{-12.0, 12.0, 64};  // spacing 0.375 beats twice the output step
  coarse.angles = 90;
  coarse.hbar = 1.0;
  coarse.values.assign(90u * 64u, 0.0);
  try {
    inverse_radon(coarse, out, out);
    FAIL("expected NyquistViolation");
  } catch (const GuardError& e) {
    REQUIRE(e.name() == "NyquistViolation");
  }
}

TEST_CASE("mixtures transform convexly") {
  const WaveFunction psi = sample1(1.3, 0.4, 1.0);
  const GaussianState g = g1(2.0, 0.5, 1.0);
  const RadonFrame frame = direction_frame(0.5);
  const Axis xa{-6.0, 6.0, 48};

  MixedState ms({{0.3, psi}, {0.7, g}});
  const RadonProfile mix = radon_mixed(ms, frame, {xa});

  const RadonProfile pa = radon_profile(psi, frame, {xa});
  const RadonProfile pb = radon_profile(sample_gaussian(g, {wide_axis()}), frame, {xa});
  for (std::uint32_t k = 0; k < xa.count; ++k)
    REQUIRE(std::abs(mix.values[k] - (0.3 * pa.values[k] + 0.7 * pb.values[k])) < 1e-8);

  MixedState bad({{0.5, psi}, {0.5, g1(1.0, 0.0, 0.5)}});
  try {
    radon_mixed(bad, frame, {xa});
    FAIL("expected InvalidState");
  } catch (const ValidationError& e) {
    REQUIRE(e.name() == "InvalidState");
  }
}
