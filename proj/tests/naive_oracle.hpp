#pragma once

// Direct double-loop reference formulas, written from the estimator
// definitions and independent of the library code paths. Test-only.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "driftkit/sde.hpp"

namespace oracle {

using Paths = std::vector<std::vector<double>>;

inline double
gauss(double z)
{
  return std::exp(-z * z / 2.0) / std::sqrt(2.0 * M_PI);
}

inline double
kh(double h, double u)
{
  return gauss(u / h) / h;
}

inline double
density(const Paths& X, double h, double x)
{
  const std::size_t N = X.size();
  const std::size_t n = X[0].size() - 1;
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < n; ++j)
      s += kh(h, X[i][j] - x);
  return s / (static_cast<double>(n) * static_cast<double>(N));
}

inline double
bf(const Paths& X, double h, double span, double x)
{
  const std::size_t N = X.size();
  const std::size_t n = X[0].size() - 1;
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < n; ++j)
      s += kh(h, X[i][j] - x) * (X[i][j + 1] - X[i][j]);
  return s / (static_cast<double>(N) * span);
}

inline double
drift(const Paths& X, double h, double eta, double span, double x, double floor_value)
{
  return bf(X, h, span, x) / std::max(density(X, eta, x), floor_value);
}

// Weight of observation (i, j) at x: K_h(X^i_j - x) / (dt * sum over all (i', j')).
inline double
weight(const Paths& X, double h, double dt, std::size_t i, std::size_t j, double x)
{
  const std::size_t n = X[0].size() - 1;
  double denom = 0.0;
  for (const auto& p : X)
    for (std::size_t jj = 0; jj < n; ++jj)
      denom += kh(h, p[jj] - x);
  return kh(h, X[i][j] - x) / (dt * denom);
}

inline double
loo(const Paths& X, double h, double dt, std::size_t held_out, double x)
{
  const std::size_t n = X[0].size() - 1;
  double s = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (i == held_out)
      continue;
    for (std::size_t j = 0; j < n; ++j)
      s += weight(X, h, dt, i, j, x) * (X[i][j + 1] - X[i][j]);
  }
  return s;
}

inline double
cv_quadratic(const Paths& X, double h, double dt)
{
  const std::size_t n = X[0].size() - 1;
  double s = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double b = loo(X, h, dt, i, X[i][j]);
      s += dt * b * b;
    }
  return s;
}

inline double
cv_cross(const Paths& X, double h, double dt)
{
  const std::size_t n = X[0].size() - 1;
  double s = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      s += loo(X, h, dt, i, X[i][j]) * (X[i][j + 1] - X[i][j]);
  return s;
}

inline double
cv(const Paths& X, double h, double dt)
{
  return cv_quadratic(X, h, dt) - 2.0 * cv_cross(X, h, dt);
}

struct Instance
{
  Paths paths;
  double t0 = 0.0;
  double T = 1.0;
  double h = 1.0;

  double span() const { return T - t0; }
  double dt() const { return span() / static_cast<double>(paths[0].size() - 1); }

  driftkit::PathEnsemble ensemble() const
  {
    std::vector<double> v;
    for (const auto& p : paths)
      v.insert(v.end(), p.begin(), p.end());
    return { driftkit::ObservationGrid(t0, T, paths[0].size() - 1), paths.size(), std::move(v) };
  }
};

//! Random walk paths, N in [min_paths, 5], n in [1, 6], h in [0.1, 2].
inline Instance
random_instance(std::mt19937_64& rng, std::size_t min_paths = 1)
{
  std::uniform_int_distribution<std::size_t> paths(min_paths, 5);
  std::uniform_int_distribution<std::size_t> incs(1, 6);
  std::uniform_real_distribution<double> start(-1.5, 1.5);
  std::normal_distribution<double> step(0.0, 0.4);
  std::uniform_real_distribution<double> bw(0.1, 2.0);
  std::uniform_real_distribution<double> t0(0.0, 2.0);
  std::uniform_real_distribution<double> span(0.5, 5.0);

  Instance inst;
  const std::size_t N = paths(rng);
  const std::size_t n = incs(rng);
  for (std::size_t i = 0; i < N; ++i) {
    std::vector<double> p{ start(rng) };
    for (std::size_t j = 0; j < n; ++j)
      p.push_back(p.back() + step(rng));
    inst.paths.push_back(std::move(p));
  }
  inst.t0 = t0(rng);
  inst.T = inst.t0 + span(rng);
  inst.h = bw(rng);
  return inst;
}

} // namespace oracle
