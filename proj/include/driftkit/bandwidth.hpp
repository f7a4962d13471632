#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "driftkit/kernel.hpp"
#include "driftkit/sde.hpp"

namespace driftkit {

//! Strictly increasing, positive candidate bandwidths.
class BandwidthGrid
{
public:
  explicit BandwidthGrid(std::vector<double> hs);

  //! {start + k * step ; k = 0..count-1}, each point computed as
  //! start + k * step rather than by repeated addition.
  static BandwidthGrid arithmetic(double start, double step, std::size_t count);
  //! "start:step:count" or a comma separated list.
  static BandwidthGrid parse(const std::string& text);

  //! {0.02 k ; k = 1..10}
  static BandwidthGrid h1();
  //! {0.01 k ; k = 1..10}
  static BandwidthGrid h2();

  const std::vector<double>& values() const { return hs_; }
  std::size_t size() const { return hs_.size(); }
  double operator[](std::size_t k) const { return hs_[k]; }
  double min() const { return hs_.front(); }

private:
  std::vector<double> hs_;
};

struct LooOptions
{
  //! Re-sum the weight denominator over the N - 1 retained paths instead of
  //! all N paths.
  bool renormalized = false;
};

//! Leave-path-i-out drift b^{-i}(x) = sum_{i' != i, j < n} w^{i'}_j(x) dX^{i'}_j.
std::vector<double> loo_drift(const PathEnsemble& ens,
                              const Kernel& kernel,
                              double h,
                              std::size_t held_out,
                              std::span<const double> xpoints,
                              const LooOptions& options = {});

struct CvBreakdown
{
  double value = 0.0;     // quadratic - 2 * cross
  double quadratic = 0.0; // sum_i dt * sum_j b^{-i}(X^i_j)^2
  double cross = 0.0;     // sum_i sum_j b^{-i}(X^i_j) dX^i_j
  std::size_t degenerate_points = 0;
};

//! CV_n(h) = sum_i [ dt sum_{j<n} b^{-i}(X^i_{t_j})^2 - 2 sum_{j<n} b^{-i}(X^i_{t_j}) dX^i_j ].
//! A held-out point with a zero weight denominator contributes 0 and is
//! counted in degenerate_points.
CvBreakdown cv_breakdown(const PathEnsemble& ens, const Kernel& kernel, double h, const LooOptions& options = {});

inline double
cv_criterion(const PathEnsemble& ens, const Kernel& kernel, double h, const LooOptions& options = {})
{
  return cv_breakdown(ens, kernel, h, options).value;
}

struct CvReport
{
  std::vector<double> hs;
  std::vector<double> criteria; // NaN where evaluation failed
  std::vector<std::size_t> degenerate_points;
  std::vector<std::string> failures; // empty string where evaluation succeeded
  double selected = 0.0;
  std::size_t selected_index = 0;
};

//! Minimises CV_n over the grid. Exact ties go to the larger bandwidth.
//! Throws selection_failed when every bandwidth fails.
CvReport select_bandwidth(const PathEnsemble& ens,
                          const Kernel& kernel,
                          const BandwidthGrid& grid,
                          const LooOptions& options = {});

} // namespace driftkit
