#include "driftkit/experiments.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "driftkit/error.hpp"
#include "driftkit/quadrature.hpp"

namespace driftkit {

void
ExperimentConfig::validate() const
{
  validate_model(model);
  (void)grid();
  if (N < 2)
    fail(ErrorKind::insufficient_paths, "experiments need N >= 2 for leave-one-out selection");
  if (replications < 1)
    fail(ErrorKind::invalid_argument, "experiments need at least one replication");
  if (!(eval_quantile > 0.0 && eval_quantile < 0.5))
    fail(ErrorKind::invalid_argument, "evaluation quantile must lie in (0, 0.5)");
  if (eval_points < 1)
    fail(ErrorKind::invalid_argument, "evaluation grid needs at least one point");
  if (substeps < 1)
    fail(ErrorKind::invalid_argument, "substeps must be at least 1");
}

ExperimentConfig
default_config(int model_id)
{
  ExperimentConfig cfg;
  cfg.model = make_preset(model_id);
  cfg.bandwidths = model_id <= 2 ? BandwidthGrid::h1() : BandwidthGrid::h2();
  return cfg;
}

double
mse(const EstimateCurve& curve, const std::function<double(double)>& true_drift)
{
  if (curve.xs.empty() || curve.xs.size() != curve.values.size())
    fail(ErrorKind::invalid_argument, "mse needs a nonempty curve");
  double acc = 0.0;
  for (std::size_t g = 0; g < curve.xs.size(); ++g) {
    const double e = curve.values[g] - true_drift(curve.xs[g]);
    acc += e * e;
  }
  return acc / static_cast<double>(curve.xs.size());
}

std::uint64_t
replication_seed(const ExperimentConfig& cfg, std::size_t rep_index)
{
  return cfg.forced_seed ? *cfg.forced_seed : derive_seed(cfg.base_seed, rep_index);
}

ReplicationResult
run_replication(const ExperimentConfig& cfg, std::size_t rep_index)
{
  cfg.validate();
  ReplicationResult r;
  r.rep_index = rep_index;
  r.seed = replication_seed(cfg, rep_index);
  try {
    const PathEnsemble ens = simulate_ensemble(cfg.model, cfg.grid(), { cfg.N, cfg.substeps, r.seed });
    r.cv = select_bandwidth(ens, cfg.kernel, cfg.bandwidths, cfg.loo);
    r.selected_h = r.cv.selected;

    const std::vector<double> xs = evaluation_grid(ens, cfg.eval_quantile, cfg.eval_points);
    r.curve = estimate_drift(ens, cfg.kernel, r.selected_h, xs, cfg.floor);
    r.mse = mse(r.curve, cfg.model.drift);

    double proposals = 0.0;
    for (double h : cfg.bandwidths.values())
      proposals += mse(estimate_drift(ens, cfg.kernel, h, xs, cfg.floor), cfg.model.drift);
    r.proposal_mean_mse = proposals / static_cast<double>(cfg.bandwidths.size());
  } catch (const Error& e) {
    throw Error(e.kind(), "replication " + std::to_string(rep_index) + ": " + e.what());
  }
  return r;
}

bool
Table1Summary::policy_breached() const
{
  return failures.size() * 5 > attempted();
}

Table1Summary
table1_experiment(const ExperimentConfig& cfg)
{
  cfg.validate();
  Table1Summary s;
  s.single_replication = cfg.replications == 1;
  for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
    try {
      s.per_rep.push_back(run_replication(cfg, rep));
    } catch (const Error& e) {
      s.failures.push_back({ rep, e.what() });
    }
  }

  const std::size_t m = s.per_rep.size();
  if (m == 0) {
    s.mean_mse = s.std_mse = s.mean_proposal_mse = std::nan("");
    return s;
  }
  for (const auto& r : s.per_rep) {
    s.mean_mse += r.mse;
    s.mean_proposal_mse += r.proposal_mean_mse;
  }
  s.mean_mse /= static_cast<double>(m);
  s.mean_proposal_mse /= static_cast<double>(m);
  if (m >= 2) {
    double ss = 0.0;
    for (const auto& r : s.per_rep)
      ss += (r.mse - s.mean_mse) * (r.mse - s.mean_mse);
    s.std_mse = std::sqrt(ss / static_cast<double>(m - 1));
  }
  return s;
}

double
least_squares_slope(const std::vector<double>& x, const std::vector<double>& y)
{
  if (x.size() != y.size() || x.size() < 2)
    fail(ErrorKind::invalid_argument, "slope needs at least two (x, y) pairs");
  const double m = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  if (!(sxx > 0.0))
    fail(ErrorKind::invalid_argument, "slope needs at least two distinct x values");
  return sxy / sxx;
}

RiskRateResult
risk_rate_study(const SdeModel& model,
                const std::vector<std::size_t>& Ns,
                const ExperimentConfig& base,
                std::size_t reps,
                const RiskRateSettings& settings)
{
  const std::set<std::size_t> distinct(Ns.begin(), Ns.end());
  if (distinct.size() < 3 || distinct.count(0) != 0)
    fail(ErrorKind::invalid_argument, "risk-rate study needs at least three distinct positive N values");
  if (reps < 1)
    fail(ErrorKind::invalid_argument, "risk-rate study needs reps >= 1");
  validate_model(model);

  const ObservationGrid grid = base.grid();
  const int beta = base.kernel.order();
  const double exponent = -1.0 / (2.0 * beta + 1.0);

  RiskRateResult out;
  out.theoretical_slope = -2.0 * beta / (2.0 * beta + 1.0);
  out.reference_paths = settings.reference_multiplier * *distinct.rbegin();

  const PathEnsemble reference = simulate_ensemble(
    model, grid, { out.reference_paths, base.substeps, derive_seed(base.base_seed, 0x5245464552454e43ULL) });
  out.xs = evaluation_grid(reference, base.eval_quantile, base.eval_points);
  out.reference = estimate_density(reference, base.kernel, settings.pilot_bandwidth, out.xs).values;
  const double dx = out.xs.size() > 1 ? out.xs[1] - out.xs[0] : 0.0;

  std::vector<double> log_n;
  std::vector<double> log_mise;
  for (std::size_t N : Ns) {
    RiskRatePoint pt;
    pt.N = N;
    pt.h = std::pow(static_cast<double>(N), exponent);
    const std::uint64_t size_seed = derive_seed(base.base_seed, N);
    for (std::size_t r = 0; r < reps; ++r) {
      const PathEnsemble ens = simulate_ensemble(model, grid, { N, base.substeps, derive_seed(size_seed, r) });
      const auto f = estimate_density(ens, base.kernel, pt.h, out.xs).values;
      std::vector<double> sq(f.size());
      for (std::size_t g = 0; g < f.size(); ++g)
        sq[g] = (f[g] - out.reference[g]) * (f[g] - out.reference[g]);
      pt.mise += simpson(sq, dx);
    }
    pt.mise /= static_cast<double>(reps);
    out.points.push_back(pt);
    log_n.push_back(std::log(static_cast<double>(N)));
    log_mise.push_back(std::log(pt.mise));
  }
  out.slope = least_squares_slope(log_n, log_mise);
  return out;
}

double
ou_occupation_density(double x0, double sigma, const ObservationGrid& grid, double x)
{
  double acc = 0.0;
  for (std::size_t j = 0; j < grid.n(); ++j) {
    const double t = grid.time(j);
    const double mean = x0 * std::exp(-t);
    const double var = sigma * sigma * (1.0 - std::exp(-2.0 * t)) / 2.0;
    const double z = (x - mean);
    acc += std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * std::numbers::pi * var);
  }
  return acc / static_cast<double>(grid.n());
}

} // namespace driftkit
