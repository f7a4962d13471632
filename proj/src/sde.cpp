#include "driftkit/sde.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "driftkit/error.hpp"
#include "driftkit/parallel.hpp"

namespace driftkit {

SdeModel
make_preset(int model_id)
{
  SdeModel m;
  m.x0 = 2.0;
  m.preset_id = model_id;
  switch (model_id) {
    case 1:
      m.name = "langevin";
      m.drift = [](double x) { return -x; };
      m.diffusion = [](double) { return 0.1; };
      break;
    case 2:
      m.name = "hyperbolic";
      m.drift = [](double x) { return -x; };
      m.diffusion = [](double x) { return 0.1 * std::sqrt(1.0 + x * x); };
      break;
    case 3:
      m.name = "sine-additive";
      m.drift = [](double x) { return -(x + std::sin(4.0 * x)); };
      m.diffusion = [](double) { return 0.1; };
      break;
    case 4:
      m.name = "sine-multiplicative";
      m.drift = [](double x) { return -(x + std::sin(4.0 * x)); };
      m.diffusion = [](double x) { return 0.1 * (2.0 + std::cos(x)); };
      break;
    default:
      fail(ErrorKind::invalid_model, "unknown model id " + std::to_string(model_id) + " (expected 1..4)");
  }
  return m;
}

void
validate_model(const SdeModel& model)
{
  if (!model.drift || !model.diffusion)
    fail(ErrorKind::invalid_model, "model '" + model.name + "' is missing drift or diffusion");
  if (!std::isfinite(model.x0))
    fail(ErrorKind::invalid_model, "model '" + model.name + "' has a non-finite x0");
  for (int k = 0; k <= 200; ++k) {
    const double x = -10.0 + 0.1 * k;
    if (!std::isfinite(model.drift(x)) || !std::isfinite(model.diffusion(x)))
      fail(ErrorKind::invalid_model,
           "model '" + model.name + "' is not finite at x = " + std::to_string(x));
  }
}

ObservationGrid::ObservationGrid(double t0, double T, std::size_t n)
  : t0_(t0)
  , T_(T)
  , n_(n)
{
  if (!std::isfinite(t0) || !std::isfinite(T) || t0 < 0.0 || !(T > t0))
    fail(ErrorKind::invalid_argument, "observation grid needs 0 <= t0 < T");
  if (n == 0)
    fail(ErrorKind::invalid_argument, "observation grid needs n >= 1");
}

double
ObservationGrid::time(std::size_t j) const
{
  if (j == n_)
    return T_;
  return t0_ + static_cast<double>(j) * (T_ - t0_) / static_cast<double>(n_);
}

std::vector<double>
ObservationGrid::times() const
{
  std::vector<double> t(n_ + 1);
  for (std::size_t j = 0; j <= n_; ++j)
    t[j] = time(j);
  return t;
}

PathEnsemble::PathEnsemble(ObservationGrid grid, std::size_t paths, std::vector<double> values)
  : grid_(grid)
  , paths_(paths)
  , values_(std::move(values))
{
  if (paths_ == 0)
    fail(ErrorKind::invalid_argument, "an ensemble needs at least one path");
  if (values_.size() != paths_ * columns())
    fail(ErrorKind::invalid_argument, "ensemble values do not match N x (n + 1)");
  for (double v : values_)
    if (!std::isfinite(v))
      fail(ErrorKind::invalid_argument, "ensemble contains a non-finite value");
}

PathEnsemble
PathEnsemble::concatenate(const PathEnsemble& other) const
{
  if (!(grid_ == other.grid_))
    fail(ErrorKind::invalid_argument, "cannot concatenate ensembles on different grids");
  std::vector<double> v(values_);
  v.insert(v.end(), other.values_.begin(), other.values_.end());
  return { grid_, paths_ + other.paths_, std::move(v) };
}

std::uint64_t
mix64(std::uint64_t x)
{
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t
derive_seed(std::uint64_t seed, std::uint64_t index)
{
  return mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ (index * 0xd1342543de82ef95ULL + 1));
}

std::uint64_t
PathRng::next_u64()
{
  ++counter_;
  return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
}

double
PathRng::next_uniform()
{
  // (k + 0.5) / 2^53 lies strictly inside (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double
PathRng::next_normal()
{
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

namespace {

[[noreturn]] void
diverged(std::size_t path, double t)
{
  std::ostringstream msg;
  msg << "simulation diverged on path " << path << " at t = " << t;
  fail(ErrorKind::simulation_diverged, msg.str());
}

} // namespace

PathEnsemble
simulate_ensemble(const SdeModel& model, const ObservationGrid& grid, const SimulationSettings& settings)
{
  if (settings.paths == 0)
    fail(ErrorKind::invalid_argument, "simulation needs N >= 1");
  if (settings.substeps == 0)
    fail(ErrorKind::invalid_argument, "simulation needs substeps >= 1");
  validate_model(model);

  const std::size_t cols = grid.n() + 1;
  const double dt = grid.step() / static_cast<double>(settings.substeps);
  const double sqrt_dt = std::sqrt(dt);

  std::size_t burn_steps = 0;
  double burn_dt = 0.0;
  if (grid.t0() > 0.0) {
    burn_steps = static_cast<std::size_t>(std::ceil(grid.t0() / dt - 1e-9));
    burn_steps = std::max<std::size_t>(burn_steps, 1);
    burn_dt = grid.t0() / static_cast<double>(burn_steps);
  }
  const double sqrt_burn_dt = std::sqrt(burn_dt);

  std::vector<double> values(settings.paths * cols);
  parallel_for(settings.paths, [&](std::size_t i) {
    PathRng rng(derive_seed(settings.seed, i));
    double x = model.x0;
    double t = 0.0;
    for (std::size_t s = 0; s < burn_steps; ++s) {
      x += model.drift(x) * burn_dt + model.diffusion(x) * sqrt_burn_dt * rng.next_normal();
      t += burn_dt;
      if (!std::isfinite(x))
        diverged(i, t);
    }
    double* row = values.data() + i * cols;
    row[0] = x;
    for (std::size_t j = 0; j < grid.n(); ++j) {
      for (std::size_t s = 0; s < settings.substeps; ++s) {
        x += model.drift(x) * dt + model.diffusion(x) * sqrt_dt * rng.next_normal();
        if (!std::isfinite(x))
          diverged(i, grid.time(j) + static_cast<double>(s + 1) * dt);
      }
      row[j + 1] = x;
    }
  });

  return { grid, settings.paths, std::move(values) };
}

} // namespace driftkit
