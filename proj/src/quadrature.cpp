#include "driftkit/quadrature.hpp"

#include <vector>

namespace driftkit {

double
simpson(std::span<const double> y, double dx)
{
  const std::size_t m = y.size();
  if (m < 2)
    return 0.0;
  if (m == 2)
    return 0.5 * dx * (y[0] + y[1]);

  // Simpson needs an even number of intervals; with an odd count the last
  // three intervals take the 3/8 rule instead.
  const std::size_t intervals = m - 1;
  const std::size_t simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;

  double total = 0.0;
  if (simpson_end > 0) {
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t k = 1; k < simpson_end; ++k)
      (k % 2 == 1 ? odd : even) += y[k];
    total = dx / 3.0 * (y[0] + 4.0 * odd + 2.0 * even + y[simpson_end]);
  }
  if (simpson_end != intervals) {
    const std::size_t a = simpson_end;
    total += 3.0 * dx / 8.0 * (y[a] + 3.0 * y[a + 1] + 3.0 * y[a + 2] + y[a + 3]);
  }
  return total;
}

double
simpson(const std::function<double(double)>& f, double a, double b, std::size_t intervals)
{
  if (intervals < 2)
    intervals = 2;
  if (intervals % 2 == 1)
    ++intervals;
  const double dx = (b - a) / static_cast<double>(intervals);
  std::vector<double> y(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k)
    y[k] = f(a + static_cast<double>(k) * dx);
  return simpson(y, dx);
}

} // namespace driftkit
