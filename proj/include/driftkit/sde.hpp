#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace driftkit {

//! dX_t = b(X_t) dt + sigma(X_t) dW_t, X_0 = x0.
struct SdeModel
{
  std::string name;
  std::function<double(double)> drift;
  std::function<double(double)> diffusion;
  double x0 = 0.0;
  int preset_id = 0; // 1..4 for the benchmark presets, 0 for user models
};

//! Benchmark models 1-4, all started at x0 = 2. Throws invalid_model for any
//! other id.
SdeModel make_preset(int model_id);

//! Throws invalid_model unless drift and diffusion are finite on a probe
//! grid over [-10, 10].
void validate_model(const SdeModel& model);

//! Uniform dissection t_j = t0 + j (T - t0) / n, j = 0..n.
class ObservationGrid
{
public:
  ObservationGrid(double t0, double T, std::size_t n);

  double t0() const { return t0_; }
  double T() const { return T_; }
  std::size_t n() const { return n_; }
  double span() const { return T_ - t0_; }
  double step() const { return (T_ - t0_) / static_cast<double>(n_); }
  double time(std::size_t j) const;
  std::vector<double> times() const;

  bool operator==(const ObservationGrid&) const = default;

private:
  double t0_;
  double T_;
  std::size_t n_;
};

//! N paths observed on a grid, stored row-major: value(i, j) = X^i_{t_j}.
class PathEnsemble
{
public:
  PathEnsemble(ObservationGrid grid, std::size_t paths, std::vector<double> values);

  const ObservationGrid& grid() const { return grid_; }
  std::size_t paths() const { return paths_; }
  std::size_t increments() const { return grid_.n(); }
  std::size_t columns() const { return grid_.n() + 1; }

  double value(std::size_t i, std::size_t j) const { return values_[i * columns() + j]; }
  std::span<const double> path(std::size_t i) const
  {
    return { values_.data() + i * columns(), columns() };
  }
  std::span<const double> values() const { return values_; }

  //! Paths of *this followed by paths of other. Grids must match.
  PathEnsemble concatenate(const PathEnsemble& other) const;

private:
  ObservationGrid grid_;
  std::size_t paths_;
  std::vector<double> values_;
};

struct SimulationSettings
{
  std::size_t paths = 50;
  std::size_t substeps = 10;
  std::uint64_t seed = 0;
};

//! Euler-Maruyama from time 0 with internal step (T - t0) / (n * substeps).
//! The burn-in [0, t0] uses ceil(t0 / step) equal steps. Path i draws from a
//! counter-based stream keyed by (seed, i), so the output does not depend on
//! thread scheduling. Throws simulation_diverged on a non-finite state.
PathEnsemble simulate_ensemble(const SdeModel& model,
                               const ObservationGrid& grid,
                               const SimulationSettings& settings);

//! SplitMix64 finaliser; used to derive stream keys and replication seeds.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

//! Counter-based generator: the k-th draw is mix64(key + (k+1) * golden).
class PathRng
{
public:
  explicit PathRng(std::uint64_t key)
    : key_(key)
  {}

  std::uint64_t next_u64();
  //! Uniform on (0, 1), 53-bit resolution, never exactly 0.
  double next_uniform();
  //! Standard normal via Box-Muller; the second variate of each pair is kept.
  double next_normal();

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace driftkit
