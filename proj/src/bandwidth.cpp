#include "driftkit/bandwidth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "driftkit/error.hpp"
#include "driftkit/parallel.hpp"
#include "scaled_kernel.hpp"

namespace driftkit {

BandwidthGrid::BandwidthGrid(std::vector<double> hs)
  : hs_(std::move(hs))
{
  if (hs_.empty())
    fail(ErrorKind::invalid_argument, "bandwidth grid is empty");
  for (double h : hs_)
    if (!(h > 0.0) || !std::isfinite(h))
      fail(ErrorKind::invalid_bandwidth, "bandwidth grid entries must be positive and finite");
  std::sort(hs_.begin(), hs_.end());
  if (std::adjacent_find(hs_.begin(), hs_.end()) != hs_.end())
    fail(ErrorKind::invalid_argument, "bandwidth grid contains duplicates");
}

BandwidthGrid
BandwidthGrid::arithmetic(double start, double step, std::size_t count)
{
  if (count == 0)
    fail(ErrorKind::invalid_argument, "bandwidth grid needs count >= 1");
  std::vector<double> hs(count);
  for (std::size_t k = 0; k < count; ++k)
    hs[k] = start + static_cast<double>(k) * step;
  return BandwidthGrid(std::move(hs));
}

namespace {

double
parse_number(const std::string& text)
{
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    fail(ErrorKind::parse_error, "cannot parse '" + text + "' as a number");
  return value;
}

} // namespace

BandwidthGrid
BandwidthGrid::parse(const std::string& text)
{
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');)
      parts.push_back(part);
    if (parts.size() != 3)
      fail(ErrorKind::parse_error, "grid must look like start:step:count");
    const double count = parse_number(parts[2]);
    if (!(count >= 1.0) || count != std::floor(count))
      fail(ErrorKind::parse_error, "grid count must be a positive integer");
    return arithmetic(parse_number(parts[0]), parse_number(parts[1]), static_cast<std::size_t>(count));
  }
  std::vector<double> hs;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');)
    hs.push_back(parse_number(part));
  return BandwidthGrid(std::move(hs));
}

BandwidthGrid
BandwidthGrid::h1()
{
  return arithmetic(0.02, 0.02, 10);
}

BandwidthGrid
BandwidthGrid::h2()
{
  return arithmetic(0.01, 0.01, 10);
}

namespace {

struct LooValue
{
  double value = 0.0;
  bool degenerate = false;
};

// b^{-i}(x): numerator over paths other than `held_out`; denominator over
// all paths unless renormalized.
LooValue
loo_at(const PathEnsemble& ens, const detail::ScaledKernel& kh, std::size_t held_out, double x, bool renormalized)
{
  const std::size_t n = ens.increments();
  double numerator = 0.0;
  double kept = 0.0;
  double all = 0.0;
  for (std::size_t i = 0; i < ens.paths(); ++i) {
    const auto p = ens.path(i);
    if (i == held_out) {
      for (std::size_t j = 0; j < n; ++j)
        all += kh(p[j] - x);
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double k = kh(p[j] - x);
      all += k;
      kept += k;
      numerator += k * (p[j + 1] - p[j]);
    }
  }
  const double denominator = renormalized ? kept : all;
  if (std::isnan(denominator) || std::isnan(numerator))
    return { std::numeric_limits<double>::quiet_NaN(), false };
  if (!(denominator > 0.0))
    return { 0.0, true };
  return { numerator / (ens.grid().step() * denominator), false };
}

void
require_loo_inputs(const PathEnsemble& ens)
{
  if (ens.paths() < 2)
    fail(ErrorKind::insufficient_paths, "leave-one-out needs at least two paths");
}

} // namespace

std::vector<double>
loo_drift(const PathEnsemble& ens,
          const Kernel& kernel,
          double h,
          std::size_t held_out,
          std::span<const double> xpoints,
          const LooOptions& options)
{
  require_loo_inputs(ens);
  const detail::ScaledKernel kh(kernel, h);
  if (held_out >= ens.paths())
    fail(ErrorKind::invalid_argument, "held-out path index out of range");

  std::vector<double> out(xpoints.size());
  for (std::size_t g = 0; g < xpoints.size(); ++g) {
    const LooValue v = loo_at(ens, kh, held_out, xpoints[g], options.renormalized);
    if (v.degenerate)
      fail(ErrorKind::degenerate_weights,
           "leave-one-out weights vanish at x = " + std::to_string(xpoints[g]));
    out[g] = v.value;
  }
  return out;
}

CvBreakdown
cv_breakdown(const PathEnsemble& ens, const Kernel& kernel, double h, const LooOptions& options)
{
  require_loo_inputs(ens);
  const detail::ScaledKernel kh(kernel, h);
  const std::size_t N = ens.paths();
  const std::size_t n = ens.increments();
  const double dt = ens.grid().step();

  struct PathTerm
  {
    double squares = 0.0;
    double cross = 0.0;
    std::size_t degenerate = 0;
  };
  std::vector<PathTerm> terms(N);

  parallel_for(N, [&](std::size_t i) {
    const auto p = ens.path(i);
    PathTerm& t = terms[i];
    for (std::size_t j = 0; j < n; ++j) {
      const LooValue v = loo_at(ens, kh, i, p[j], options.renormalized);
      if (v.degenerate) {
        ++t.degenerate;
        continue;
      }
      t.squares += v.value * v.value;
      t.cross += v.value * (p[j + 1] - p[j]);
    }
  });

  CvBreakdown out;
  for (const PathTerm& t : terms) {
    out.value += dt * t.squares - 2.0 * t.cross;
    out.quadratic += dt * t.squares;
    out.cross += t.cross;
    out.degenerate_points += t.degenerate;
  }
  return out;
}

CvReport
select_bandwidth(const PathEnsemble& ens, const Kernel& kernel, const BandwidthGrid& grid, const LooOptions& options)
{
  require_loo_inputs(ens);

  CvReport report;
  report.hs = grid.values();
  report.criteria.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
  report.degenerate_points.assign(grid.size(), 0);
  report.failures.assign(grid.size(), std::string());

  bool any = false;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    try {
      const CvBreakdown cv = cv_breakdown(ens, kernel, grid[k], options);
      if (!std::isfinite(cv.value))
        fail(ErrorKind::degenerate_weights, "criterion is not finite");
      report.criteria[k] = cv.value;
      report.degenerate_points[k] = cv.degenerate_points;
    } catch (const Error& e) {
      report.failures[k] = e.what();
      continue;
    }
    // The grid is ascending, so <= sends exact ties to the larger bandwidth.
    if (!any || report.criteria[k] <= report.criteria[report.selected_index]) {
      report.selected_index = k;
      any = true;
    }
  }
  if (!any)
    fail(ErrorKind::selection_failed, "cross-validation failed at every bandwidth");
  report.selected = report.hs[report.selected_index];
  return report;
}

} // namespace driftkit
