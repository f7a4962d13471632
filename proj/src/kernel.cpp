#include "driftkit/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "driftkit/error.hpp"
#include "driftkit/quadrature.hpp"

namespace driftkit {

namespace {

constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

double
gaussian_density(double z)
{
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

} // namespace

Kernel::Kernel(std::string name, Function fn, int order, double tail_radius)
  : name_(std::move(name))
  , fn_(std::move(fn))
  , order_(order)
  , tail_radius_(tail_radius)
{
  if (!fn_)
    fail(ErrorKind::invalid_argument, "kernel function is empty");
  if (order_ < 1)
    fail(ErrorKind::invalid_argument, "kernel order must be a positive integer");
  if (!(tail_radius_ > 0.0) || !std::isfinite(tail_radius_))
    fail(ErrorKind::invalid_argument, "kernel tail radius must be positive and finite");
}

Kernel
Kernel::gaussian()
{
  Kernel k("gaussian", &gaussian_density, 1, 10.0);
  k.gaussian_ = true;
  return k;
}

double
eval_scaled(const Kernel& kernel, double h, double u)
{
  if (!(h > 0.0) || !std::isfinite(h))
    fail(ErrorKind::invalid_bandwidth, "bandwidth must be positive and finite, got " + std::to_string(h));
  return kernel(u / h) / h;
}

AssumptionReport
check_kernel_assumptions(const Kernel& kernel, int quadrature_points)
{
  if (quadrature_points < 128)
    fail(ErrorKind::invalid_argument, "kernel checks need at least 128 quadrature points");

  const std::size_t points = std::max<std::size_t>(static_cast<std::size_t>(quadrature_points), 1024);
  const std::size_t intervals = (points - 1) % 2 == 0 ? points - 1 : points;
  const double R = kernel.tail_radius();
  const double dz = 2.0 * R / static_cast<double>(intervals);

  std::vector<double> z(intervals + 1);
  std::vector<double> k(intervals + 1);
  for (std::size_t m = 0; m <= intervals; ++m) {
    // Symmetric construction keeps z[m] == -z[intervals - m] exactly.
    z[m] = m * 2 <= intervals ? -R + static_cast<double>(m) * dz
                              : R - static_cast<double>(intervals - m) * dz;
    k[m] = kernel(z[m]);
  }

  AssumptionReport report;
  for (std::size_t m = 0; m <= intervals; ++m)
    report.symmetry_defect = std::max(report.symmetry_defect, std::abs(k[m] - kernel(-z[m])));

  report.mass = simpson(k, dz);
  report.mass_defect = std::abs(report.mass - 1.0);

  std::vector<double> integrand(intervals + 1);
  const int beta = kernel.order();
  for (int l = 1; l <= beta + 1; ++l) {
    for (std::size_t m = 0; m <= intervals; ++m)
      integrand[m] = std::pow(z[m], l) * k[m];
    report.moments.push_back(simpson(integrand, dz));
  }
  for (std::size_t m = 0; m <= intervals; ++m)
    integrand[m] = std::pow(std::abs(z[m]), beta + 1) * std::abs(k[m]);
  report.tail_moment = simpson(integrand, dz);

  report.symmetric = report.symmetry_defect <= kSymmetryTolerance;
  report.unit_mass = report.mass_defect <= kMomentTolerance;
  report.vanishing_moments = std::all_of(report.moments.begin(),
                                         report.moments.begin() + beta,
                                         [](double mu) { return std::abs(mu) <= kMomentTolerance; });
  report.finite_tail_moment = std::isfinite(report.tail_moment);
  return report;
}

} // namespace driftkit
