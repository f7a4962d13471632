#include <gtest/gtest.h>

#include <cmath>

#include "driftkit/error.hpp"
#include "driftkit/kernel.hpp"
#include "driftkit/quadrature.hpp"

using namespace driftkit;

namespace {

const Kernel kGauss = Kernel::gaussian();

TEST(Kernel, ScaledGaussianValues)
{
  EXPECT_NEAR(eval_scaled(kGauss, 1.0, 0.0), 0.3989422804014327, 1e-15);
  EXPECT_NEAR(eval_scaled(kGauss, 0.5, 0.0), 0.7978845608028654, 1e-15);
  // 10 * (2 pi)^{-1/2} e^{-2}
  EXPECT_NEAR(eval_scaled(kGauss, 0.1, 0.2), 0.5399096651318805, 1e-14);
}

TEST(Kernel, NonPositiveBandwidthRejected)
{
  for (double h : { 0.0, -0.1, static_cast<double>(NAN), static_cast<double>(INFINITY) }) {
    try {
      eval_scaled(kGauss, h, 0.0);
      FAIL() << "accepted h = " << h;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::invalid_bandwidth);
    }
  }
}

TEST(Kernel, ScaledKernelIsSymmetric)
{
  for (double h : { 0.01, 0.1, 1.0, 3.7 })
    for (double u = -3.0; u <= 3.0; u += 0.0137)
      EXPECT_NEAR(eval_scaled(kGauss, h, u), eval_scaled(kGauss, h, -u), 1e-12);
}

TEST(Kernel, ScaledKernelHasUnitMass)
{
  for (double h : { 0.01, 0.1, 1.0 }) {
    const double R = kGauss.tail_radius();
    const double mass = simpson([h](double u) { return eval_scaled(kGauss, h, u); }, -h * R, h * R, 4096);
    EXPECT_NEAR(mass, 1.0, 1e-8) << "h = " << h;
  }
}

TEST(Kernel, GaussianPassesOrderOne)
{
  const AssumptionReport r = check_kernel_assumptions(kGauss, 1024);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.symmetry_defect, 1e-12);
  EXPECT_NEAR(r.mass, 1.0, 1e-8);
  ASSERT_EQ(r.moments.size(), 2u);
  EXPECT_NEAR(r.moments[0], 0.0, 1e-8);
  EXPECT_NEAR(r.moments[1], 1.0, 1e-8); // reported moment order + 1
}

TEST(Kernel, GaussianDeclaredOrderTwoFails)
{
  const Kernel k("gaussian-as-order-2", [](double z) { return kGauss(z); }, 2, 10.0);
  const AssumptionReport r = check_kernel_assumptions(k, 1024);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.vanishing_moments);
  EXPECT_TRUE(r.symmetric);
  EXPECT_TRUE(r.unit_mass);
  // Quadrature oracle value of the second moment is 1.
  EXPECT_NEAR(r.moments[1], 1.0, 1e-8);
}

TEST(Kernel, ShiftedKernelFailsSymmetry)
{
  const Kernel k("shifted", [](double z) { return kGauss(z - 0.3); }, 1, 10.0);
  const AssumptionReport r = check_kernel_assumptions(k, 1024);
  EXPECT_FALSE(r.symmetric);
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.symmetry_defect, 1e-3);
}

TEST(Kernel, EpanechnikovOrderOnePasses)
{
  const Kernel k("epanechnikov", [](double z) { return std::abs(z) <= 1.0 ? 0.75 * (1.0 - z * z) : 0.0; }, 1, 1.0);
  const AssumptionReport r = check_kernel_assumptions(k, 4097);
  EXPECT_TRUE(r.passed()) << "mass defect " << r.mass_defect;
}

TEST(Kernel, TooFewQuadraturePointsRejected)
{
  EXPECT_THROW(check_kernel_assumptions(kGauss, 64), Error);
}

TEST(Kernel, ConstructorValidates)
{
  EXPECT_THROW(Kernel("bad", nullptr, 1, 1.0), Error);
  EXPECT_THROW(Kernel("bad", [](double) { return 0.0; }, 0, 1.0), Error);
  EXPECT_THROW(Kernel("bad", [](double) { return 0.0; }, 1, -1.0), Error);
}

TEST(Quadrature, SimpsonIsExactForCubics)
{
  auto cubic = [](double x) { return 2.0 * x * x * x - x + 3.0; };
  // integral over [-1, 2] = 2 * (16 - 1) / 4 - (4 - 1) / 2 + 9 = 15
  EXPECT_NEAR(simpson(cubic, -1.0, 2.0, 10), 15.0, 1e-12);
  // Even sample count goes through the 3/8 tail.
  std::vector<double> y;
  const double dx = 3.0 / 9.0;
  for (int k = 0; k < 10; ++k)
    y.push_back(cubic(-1.0 + k * dx));
  EXPECT_NEAR(simpson(y, dx), 15.0, 1e-12);
}

} // namespace
