#pragma once

#include <cmath>
#include <numbers>

#include "driftkit/error.hpp"
#include "driftkit/kernel.hpp"

namespace driftkit::detail {

//! K_h bound to one bandwidth. Same arithmetic as eval_scaled (K(u / h) / h)
//! with the std::function call skipped for the Gaussian kernel.
class ScaledKernel
{
public:
  ScaledKernel(const Kernel& kernel, double h)
    : kernel_(&kernel)
    , h_(h)
    , gaussian_(kernel.is_gaussian())
  {
    if (!(h > 0.0) || !std::isfinite(h))
      fail(ErrorKind::invalid_bandwidth, "bandwidth must be positive and finite, got " + std::to_string(h));
  }

  double operator()(double u) const
  {
    const double z = u / h_;
    if (gaussian_)
      return kInvSqrt2Pi * std::exp(-0.5 * z * z) / h_;
    return (*kernel_)(z) / h_;
  }

private:
  static constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

  const Kernel* kernel_;
  double h_;
  bool gaussian_;
};

} // namespace driftkit::detail
