#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "driftkit/kernel.hpp"
#include "driftkit/sde.hpp"

namespace driftkit {

enum class CurveKind
{
  density,
  bf,
  drift
};

std::string_view to_string(CurveKind kind);
CurveKind curve_kind_from_string(std::string_view text);

//! Lower bound applied to the density estimate in the drift denominator.
//! absolute(m) floors at m / 2; data_driven(fraction) floors at
//! fraction * max over the evaluation grid of the density estimate.
class FloorSpec
{
public:
  enum class Mode
  {
    absolute,
    data_driven
  };

  static FloorSpec absolute(double m);
  static FloorSpec data_driven(double fraction);
  static FloorSpec standard() { return data_driven(0.01); }

  Mode mode() const { return mode_; }
  double parameter() const { return parameter_; }

  //! Resolves the floor for a given density curve.
  double floor_value(std::span<const double> density) const;

private:
  FloorSpec(Mode mode, double parameter)
    : mode_(mode)
    , parameter_(parameter)
  {}

  Mode mode_;
  double parameter_;
};

struct EstimateCurve
{
  std::vector<double> xs;
  std::vector<double> values;
  CurveKind kind = CurveKind::density;
  double h = NAN;
  double eta = NAN;         // denominator bandwidth (drift only)
  double floor_value = NAN; // resolved denominator floor (drift only)
  std::size_t floored_points = 0;
};

//! Validates the abscissae: nonempty, finite and strictly increasing.
void check_abscissae(std::span<const double> xs);

//! f(x) = 1/(nN) sum_i sum_{j<n} K_h(X^i_{t_j} - x). The last observation
//! t_n never enters a kernel sum.
EstimateCurve estimate_density(const PathEnsemble& ens,
                               const Kernel& kernel,
                               double h,
                               std::span<const double> xs);

//! bf(x) = 1/(N (T - t0)) sum_i sum_{j<n} K_h(X^i_{t_j} - x) (X^i_{t_{j+1}} - X^i_{t_j}).
EstimateCurve estimate_bf(const PathEnsemble& ens,
                          const Kernel& kernel,
                          double h,
                          std::span<const double> xs);

//! b(x) = bf(x) / max(f(x), floor).
EstimateCurve estimate_drift(const PathEnsemble& ens,
                             const Kernel& kernel,
                             double h,
                             std::span<const double> xs,
                             const FloorSpec& floor = FloorSpec::standard());

//! Two-bandwidth variant: numerator with h, density denominator with eta.
EstimateCurve estimate_drift_2b(const PathEnsemble& ens,
                                const Kernel& kernel,
                                double h,
                                double eta,
                                std::span<const double> xs,
                                const FloorSpec& floor = FloorSpec::standard());

//! Row-major N x n matrix of weights w^i_j(x) = K_h(X^i_{t_j} - x) /
//! (dt * sum K_h), so dt * sum w = 1 and sum w * dX is the unfloored drift.
struct WeightMatrix
{
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

WeightMatrix weights(const PathEnsemble& ens, const Kernel& kernel, double h, double x);

//! G equally spaced points over the [q, 1 - q] empirical quantile range of
//! the kernel-sum observations X^i_{t_j}, j < n.
std::vector<double> evaluation_grid(const PathEnsemble& ens, double q = 0.05, std::size_t points = 200);

//! G equally spaced points over [min - radius * h, max + radius * h] of the
//! kernel-sum observations; covers essentially all of a density estimate's
//! mass for kernels negligible beyond |z| = radius.
std::vector<double> full_range_grid(const PathEnsemble& ens, double h, double radius = 5.0, std::size_t points = 200);

//! Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> data, double q);

} // namespace driftkit
