#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "driftkit/bandwidth.hpp"
#include "driftkit/estimators.hpp"
#include "driftkit/kernel.hpp"
#include "driftkit/sde.hpp"

namespace driftkit {

struct ExperimentConfig
{
  SdeModel model;
  Kernel kernel = Kernel::gaussian();
  std::size_t N = 50;
  std::size_t n = 50;
  double T = 5.0;
  double t0 = 1.0;
  BandwidthGrid bandwidths = BandwidthGrid::h1();
  std::size_t replications = 10;
  double eval_quantile = 0.05;
  std::size_t eval_points = 200;
  std::size_t substeps = 10;
  std::uint64_t base_seed = 7;
  FloorSpec floor = FloorSpec::standard();
  LooOptions loo;
  //! Replication seeds are derive_seed(base_seed, rep) unless forced here.
  std::optional<std::uint64_t> forced_seed;

  ObservationGrid grid() const { return { t0, T, n }; }
  void validate() const;
};

//! Benchmark settings for preset 1..4: N = n = 50, T = 5, t0 = 1, x0 = 2,
//! Gaussian kernel, H1 for models 1-2 and H2 for models 3-4.
ExperimentConfig default_config(int model_id);

//! (1/G) sum_g (values[g] - b(xs[g]))^2 over the curve's own abscissae.
double mse(const EstimateCurve& curve, const std::function<double(double)>& true_drift);

struct ReplicationResult
{
  std::size_t rep_index = 0;
  std::uint64_t seed = 0;
  double selected_h = 0.0;
  double mse = 0.0;
  //! Mean over the bandwidth grid of the MSE of each proposal curve.
  double proposal_mean_mse = 0.0;
  EstimateCurve curve;
  CvReport cv;
};

std::uint64_t replication_seed(const ExperimentConfig& cfg, std::size_t rep_index);

//! Simulate, select h by leave-one-out CV, estimate on the trimmed grid and
//! score against the model drift. Errors are rethrown tagged with rep_index.
ReplicationResult run_replication(const ExperimentConfig& cfg, std::size_t rep_index);

struct ReplicationFailure
{
  std::size_t rep_index = 0;
  std::string message;
};

struct Table1Summary
{
  double mean_mse = 0.0;
  double std_mse = 0.0; // sample standard deviation over successful reps
  double mean_proposal_mse = 0.0;
  std::vector<ReplicationResult> per_rep;
  std::vector<ReplicationFailure> failures;
  bool single_replication = false;

  //! More than 20% of the replications failed.
  bool policy_breached() const;
  std::size_t attempted() const { return per_rep.size() + failures.size(); }
};

Table1Summary table1_experiment(const ExperimentConfig& cfg);

struct RiskRatePoint
{
  std::size_t N = 0;
  double h = 0.0;
  double mise = 0.0;
};

struct RiskRateSettings
{
  std::size_t reference_multiplier = 50; // N_ref = multiplier * max(Ns)
  double pilot_bandwidth = 0.01;
};

struct RiskRateResult
{
  double slope = 0.0;
  double theoretical_slope = 0.0; // -2 beta / (2 beta + 1)
  std::vector<RiskRatePoint> points;
  std::vector<double> xs;           // trimmed evaluation grid
  std::vector<double> reference;    // f_ref on xs
  std::size_t reference_paths = 0;
};

//! For each N, h = N^{-1/(2 beta + 1)}; MISE of the density estimate
//! against a mega-ensemble reference, by Simpson quadrature on the trimmed
//! grid, averaged over reps. Returns the least-squares slope of log MISE
//! against log N. Needs at least three distinct Ns.
RiskRateResult risk_rate_study(const SdeModel& model,
                               const std::vector<std::size_t>& Ns,
                               const ExperimentConfig& base,
                               std::size_t reps,
                               const RiskRateSettings& settings = {});

//! Occupation density (1/n) sum_{j<n} p_{t_j}(x) of dX = -X dt + sigma dW
//! started at x0, where each p_t is Gaussian with mean x0 e^{-t} and
//! variance sigma^2 (1 - e^{-2t}) / 2.
double ou_occupation_density(double x0, double sigma, const ObservationGrid& grid, double x);

//! Least-squares slope of y on x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace driftkit
