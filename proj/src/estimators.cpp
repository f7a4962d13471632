#include "driftkit/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "driftkit/error.hpp"
#include "driftkit/parallel.hpp"
#include "scaled_kernel.hpp"

namespace driftkit {

std::string_view
to_string(CurveKind kind)
{
  switch (kind) {
    case CurveKind::density:
      return "density";
    case CurveKind::bf:
      return "bf";
    case CurveKind::drift:
      return "drift";
  }
  return "unknown";
}

CurveKind
curve_kind_from_string(std::string_view text)
{
  if (text == "density")
    return CurveKind::density;
  if (text == "bf")
    return CurveKind::bf;
  if (text == "drift")
    return CurveKind::drift;
  fail(ErrorKind::invalid_argument, "unknown curve kind '" + std::string(text) + "'");
}

FloorSpec
FloorSpec::absolute(double m)
{
  if (!(m > 0.0) || !std::isfinite(m))
    fail(ErrorKind::invalid_argument, "absolute floor needs m > 0");
  return { Mode::absolute, m };
}

FloorSpec
FloorSpec::data_driven(double fraction)
{
  if (!(fraction > 0.0 && fraction <= 1.0))
    fail(ErrorKind::invalid_argument, "data-driven floor fraction must lie in (0, 1]");
  return { Mode::data_driven, fraction };
}

double
FloorSpec::floor_value(std::span<const double> density) const
{
  if (mode_ == Mode::absolute)
    return parameter_ / 2.0;
  double peak = 0.0;
  for (double f : density)
    peak = std::max(peak, f);
  return parameter_ * peak;
}

void
check_abscissae(std::span<const double> xs)
{
  if (xs.empty())
    fail(ErrorKind::invalid_argument, "evaluation grid is empty");
  for (std::size_t g = 0; g < xs.size(); ++g) {
    if (!std::isfinite(xs[g]))
      fail(ErrorKind::invalid_argument, "evaluation grid contains a non-finite abscissa");
    if (g > 0 && !(xs[g] > xs[g - 1]))
      fail(ErrorKind::invalid_argument, "evaluation grid must be strictly increasing");
  }
}

namespace {

// Per-abscissa kernel sums over (i, j < n) in row-major order. with_increments
// selects sum K_h * dX instead of sum K_h.
std::vector<double>
kernel_sums(const PathEnsemble& ens, const Kernel& kernel, double h, std::span<const double> xs, bool with_increments)
{
  const detail::ScaledKernel kh(kernel, h);
  check_abscissae(xs);
  const std::size_t n = ens.increments();
  std::vector<double> sums(xs.size());
  parallel_for(xs.size(), [&](std::size_t g) {
    const double x = xs[g];
    double acc = 0.0;
    for (std::size_t i = 0; i < ens.paths(); ++i) {
      const auto p = ens.path(i);
      if (with_increments) {
        for (std::size_t j = 0; j < n; ++j)
          acc += kh(p[j] - x) * (p[j + 1] - p[j]);
      } else {
        for (std::size_t j = 0; j < n; ++j)
          acc += kh(p[j] - x);
      }
    }
    sums[g] = acc;
  });
  return sums;
}

EstimateCurve
make_curve(std::span<const double> xs, std::vector<double> values, CurveKind kind, double h)
{
  EstimateCurve c;
  c.xs.assign(xs.begin(), xs.end());
  c.values = std::move(values);
  c.kind = kind;
  c.h = h;
  return c;
}

} // namespace

EstimateCurve
estimate_density(const PathEnsemble& ens, const Kernel& kernel, double h, std::span<const double> xs)
{
  auto sums = kernel_sums(ens, kernel, h, xs, false);
  const double scale = static_cast<double>(ens.increments()) * static_cast<double>(ens.paths());
  for (double& s : sums)
    s /= scale;
  return make_curve(xs, std::move(sums), CurveKind::density, h);
}

EstimateCurve
estimate_bf(const PathEnsemble& ens, const Kernel& kernel, double h, std::span<const double> xs)
{
  auto sums = kernel_sums(ens, kernel, h, xs, true);
  const double scale = static_cast<double>(ens.paths()) * ens.grid().span();
  for (double& s : sums)
    s /= scale;
  return make_curve(xs, std::move(sums), CurveKind::bf, h);
}

EstimateCurve
estimate_drift(const PathEnsemble& ens,
               const Kernel& kernel,
               double h,
               std::span<const double> xs,
               const FloorSpec& floor)
{
  return estimate_drift_2b(ens, kernel, h, h, xs, floor);
}

EstimateCurve
estimate_drift_2b(const PathEnsemble& ens,
                  const Kernel& kernel,
                  double h,
                  double eta,
                  std::span<const double> xs,
                  const FloorSpec& floor)
{
  const EstimateCurve numerator = estimate_bf(ens, kernel, h, xs);
  const EstimateCurve density = estimate_density(ens, kernel, eta, xs);

  const double floor_value = floor.floor_value(density.values);
  if (!(floor_value > 0.0))
    fail(ErrorKind::degenerate_density, "density estimate vanishes on the whole evaluation grid");

  EstimateCurve out = make_curve(xs, std::vector<double>(xs.size()), CurveKind::drift, h);
  out.eta = eta;
  out.floor_value = floor_value;
  for (std::size_t g = 0; g < xs.size(); ++g) {
    const double f = density.values[g];
    if (f < floor_value)
      ++out.floored_points;
    out.values[g] = numerator.values[g] / std::max(f, floor_value);
  }
  return out;
}

WeightMatrix
weights(const PathEnsemble& ens, const Kernel& kernel, double h, double x)
{
  const detail::ScaledKernel kh(kernel, h);
  const std::size_t N = ens.paths();
  const std::size_t n = ens.increments();

  WeightMatrix w;
  w.rows = N;
  w.cols = n;
  w.data.resize(N * n);
  double total = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const auto p = ens.path(i);
    for (std::size_t j = 0; j < n; ++j) {
      w.data[i * n + j] = kh(p[j] - x);
      total += w.data[i * n + j];
    }
  }
  if (!(total > 0.0))
    fail(ErrorKind::degenerate_weights, "kernel weights vanish at x = " + std::to_string(x));
  const double denominator = ens.grid().step() * total;
  for (double& v : w.data)
    v /= denominator;
  return w;
}

double
quantile(std::vector<double> data, double q)
{
  if (data.empty())
    fail(ErrorKind::invalid_argument, "quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0))
    fail(ErrorKind::invalid_argument, "quantile level must lie in [0, 1]");
  std::sort(data.begin(), data.end());
  const double pos = q * static_cast<double>(data.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, data.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return data[lo] + frac * (data[hi] - data[lo]);
}

namespace {

std::vector<double>
kernel_sum_observations(const PathEnsemble& ens)
{
  std::vector<double> obs;
  obs.reserve(ens.paths() * ens.increments());
  for (std::size_t i = 0; i < ens.paths(); ++i) {
    const auto p = ens.path(i);
    obs.insert(obs.end(), p.begin(), p.end() - 1);
  }
  return obs;
}

std::vector<double>
linspace(double lo, double hi, std::size_t points)
{
  if (!(hi > lo)) {
    // Constant data: fall back to a unit window around the value.
    lo -= 0.5;
    hi += 0.5;
  }
  if (points == 1)
    return { 0.5 * (lo + hi) };
  std::vector<double> xs(points);
  const double dx = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t g = 0; g < points; ++g)
    xs[g] = lo + static_cast<double>(g) * dx;
  xs.back() = hi;
  return xs;
}

} // namespace

std::vector<double>
full_range_grid(const PathEnsemble& ens, double h, double radius, std::size_t points)
{
  if (!(h > 0.0) || !std::isfinite(h))
    fail(ErrorKind::invalid_bandwidth, "bandwidth must be positive and finite");
  if (!(radius >= 0.0) || points == 0)
    fail(ErrorKind::invalid_argument, "full-range grid needs radius >= 0 and at least one point");
  const auto obs = kernel_sum_observations(ens);
  const auto [lo, hi] = std::minmax_element(obs.begin(), obs.end());
  return linspace(*lo - radius * h, *hi + radius * h, points);
}

std::vector<double>
evaluation_grid(const PathEnsemble& ens, double q, std::size_t points)
{
  if (!(q > 0.0 && q < 0.5))
    fail(ErrorKind::invalid_argument, "evaluation quantile must lie in (0, 0.5)");
  if (points == 0)
    fail(ErrorKind::invalid_argument, "evaluation grid needs at least one point");

  auto obs = kernel_sum_observations(ens);
  const double lo = quantile(obs, q);
  const double hi = quantile(std::move(obs), 1.0 - q);
  return linspace(lo, hi, points);
}

} // namespace driftkit
