#include <cmath>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include <nlx/error.hpp>
#include <nlx/kernel.hpp>

using namespace nlx;

TEST(FracLapConstant, KnownValues) {
  EXPECT_NEAR(frac_lap_constant(1.0, 0.25), 0.19947114020071633897, 1e-15);
  EXPECT_NEAR(frac_lap_constant(1.0, 0.5), 1.0 / M_PI, 1e-15);
  EXPECT_NEAR(frac_lap_constant(1.0, 0.3), 0.23009638168163210465, 1e-15);
  EXPECT_NEAR(frac_lap_constant(3.0, 0.5), 1.0 / (M_PI * M_PI), 1e-15);
  EXPECT_THROW(frac_lap_constant(1.0, 1.0), Error);
  EXPECT_THROW(frac_lap_constant(1.0, 0.0), Error);
}

TEST(Kernel, FractionalLaplacianUsesUnitWeight) {
  const auto k = SpectralKernel::fractional_laplacian(0.3);
  EXPECT_EQ(k.family(), KernelFamily::FractionalLaplacian);
  EXPECT_EQ(k.dim(), 1);
  EXPECT_DOUBLE_EQ(k.density(1.0), 1.0);
  EXPECT_DOUBLE_EQ(k.density(-1.0), 1.0);
  EXPECT_DOUBLE_EQ(k.normalization(), frac_lap_constant(1.0, 0.3));
  EXPECT_DOUBLE_EQ(k.jump(0.5), k.normalization() * std::pow(0.5, -1.6));
}

TEST(Kernel, RejectsUnevenOrZeroWeights) {
  EXPECT_THROW(SpectralKernel::weighted_even(0.5, 1.0, 2.0), Error);
  try {
    check_ellipticity(SpectralKernel::weighted_even(0.5, 0.0, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EllipticityViolation);
  }
  EXPECT_THROW(SpectralKernel::weighted_even(0.5, -1.0, -1.0), Error);
  EXPECT_THROW(SpectralKernel::fractional_laplacian(1.0), Error);
}

TEST(Kernel, EvenAndHomogeneous) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uy(-5.0, 5.0), ut(0.01, 20.0), us(0.05, 0.95);
  for (int i = 0; i < 500; ++i) {
    const auto k = SpectralKernel::weighted_even(us(rng), 0.7, 0.7);
    const double y = uy(rng), t = ut(rng);
    if (y == 0.0) continue;
    EXPECT_EQ(k.jump(y), k.jump(-y));
    const double scaled = std::pow(t, -(1.0 + 2.0 * k.order())) * k.jump(y);
    EXPECT_NEAR(k.jump(t * y), scaled, 1e-13 * scaled);
  }
}

TEST(Ellipticity, TwoPointSphere) {
  const auto k = SpectralKernel::fractional_laplacian(0.4);
  const EllipticityCertificate c = check_ellipticity(k);
  EXPECT_NEAR(c.c1, 2.0, 1e-12);
  EXPECT_NEAR(c.c2, 1.0, 1e-12);
  EXPECT_EQ(c.grid_resolution, 1);
  const EllipticityCertificate w = check_ellipticity(SpectralKernel::weighted_even(0.4, 0.25, 0.25));
  EXPECT_NEAR(w.c1, 0.5, 1e-12);
  EXPECT_NEAR(w.c2, 0.25, 1e-12);
}

TEST(ExteriorMass, ClosedFormAtMidpoint) {
  // x = 0.5, R = 1, s = 0.5: c ∫ over |z| >= 1 of |x-z|^{-2} = c (1/0.5 + 1/1.5)
  const auto k = SpectralKernel::fractional_laplacian(0.5);
  EXPECT_NEAR(exterior_mass(k, 0.5, 1.0), (2.0 + 2.0 / 3.0) / M_PI, 1e-14);
}

TEST(ExteriorMass, MatchesQuadratureAtRandomPoints) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-0.95, 0.95), us(0.05, 0.95);
  boost::math::quadrature::exp_sinh<double> es;
  for (int i = 0; i < 100; ++i) {
    const double x = ux(rng), s = us(rng);
    const auto k = SpectralKernel::fractional_laplacian(s);
    // ∫_{1}^{∞} J(z - x) + J(z + x) dz after the shift w = z - 1
    auto f = [&](double w) { return k.jump(1.0 + w - x) + k.jump(1.0 + w + x); };
    const double quad = es.integrate(f, 1e-14);
    const double closed = exterior_mass(k, x, 1.0);
    EXPECT_NEAR(closed, quad, 1e-10 * quad) << "x = " << x << " s = " << s;
  }
}

TEST(ExteriorMass, SymmetricAndDomainChecked) {
  const auto k = SpectralKernel::fractional_laplacian(0.3);
  EXPECT_DOUBLE_EQ(exterior_mass(k, 0.3, 2.0), exterior_mass(k, -0.3, 2.0));
  EXPECT_THROW(exterior_mass(k, 1.0, 1.0), Error);
  EXPECT_THROW(exterior_mass(k, 0.0, -1.0), Error);
}
