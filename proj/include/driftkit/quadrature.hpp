#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace driftkit {

//! Composite Simpson rule on equally spaced samples with spacing dx. An even
//! number of samples is handled with a 3/8 rule on the last three intervals.
//! Fewer than three samples fall back to the trapezoid rule.
double simpson(std::span<const double> samples, double dx);

//! Composite Simpson rule for f over [a, b] with `intervals` subintervals
//! (rounded up to an even number).
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t intervals);

} // namespace driftkit
