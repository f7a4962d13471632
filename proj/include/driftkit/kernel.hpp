#pragma once

#include <functional>
#include <string>
#include <vector>

namespace driftkit {

//! A smoothing kernel K with a declared order (the number of vanishing
//! moments) and a radius beyond which it is negligible for quadrature.
//! Immutable after construction.
class Kernel
{
public:
  using Function = std::function<double(double)>;

  Kernel(std::string name, Function fn, int order, double tail_radius);

  //! (2 pi)^{-1/2} exp(-z^2 / 2), order 1, tail radius 10.
  static Kernel gaussian();

  double operator()(double z) const { return fn_(z); }

  const std::string& name() const { return name_; }
  int order() const { return order_; }
  double tail_radius() const { return tail_radius_; }
  bool is_gaussian() const { return gaussian_; }

private:
  std::string name_;
  Function fn_;
  int order_;
  double tail_radius_;
  bool gaussian_ = false;
};

//! K_h(u) = K(u / h) / h. Throws invalid_bandwidth unless h > 0.
double eval_scaled(const Kernel& kernel, double h, double u);

struct AssumptionReport
{
  double symmetry_defect = 0.0; // max |K(z) - K(-z)| over the sample grid
  double mass = 0.0;            // integral of K over [-R, R]
  double mass_defect = 0.0;     // |mass - 1|
  std::vector<double> moments;  // moments[l - 1] = integral of z^l K(z), l = 1..order+1
  double tail_moment = 0.0;     // integral of |z|^{order+1} |K(z)|

  bool symmetric = false;
  bool unit_mass = false;
  bool vanishing_moments = false;
  bool finite_tail_moment = false;

  bool passed() const
  {
    return symmetric && unit_mass && vanishing_moments && finite_tail_moment;
  }
};

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kMomentTolerance = 1e-8;

//! Numerically checks symmetry, unit mass, vanishing moments 1..order and
//! finiteness of the (order+1)-th absolute moment with composite Simpson on
//! [-R, R]. The effective number of points is max(quadrature_points, 1024).
//! Failures are reported, never thrown (except quadrature_points < 128).
AssumptionReport check_kernel_assumptions(const Kernel& kernel, int quadrature_points = 1 << 12);

} // namespace driftkit
