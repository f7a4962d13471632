// driftkit command-line front end: simulate, estimate, cv, experiment, rate.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "driftkit/bandwidth.hpp"
#include "driftkit/error.hpp"
#include "driftkit/estimators.hpp"
#include "driftkit/experiments.hpp"
#include "driftkit/io.hpp"
#include "driftkit/sde.hpp"

#ifndef DRIFTKIT_VERSION
#define DRIFTKIT_VERSION "0.0.0"
#endif

using nlohmann::json;
using namespace driftkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitPolicy = 4;

int
exit_code_for(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::simulation_diverged:
    case ErrorKind::degenerate_density:
    case ErrorKind::degenerate_weights:
    case ErrorKind::selection_failed:
      return kExitNumerical;
    case ErrorKind::experiment_failed:
      return kExitPolicy;
    default:
      return kExitUsage;
  }
}

// Files are staged in memory and written only after all computation is done.
class OutputSet
{
public:
  void add(const std::string& path, std::string contents) { files_.emplace_back(path, std::move(contents)); }

  void add_json(const std::string& path, const json& j) { add(path, j.dump(2) + "\n"); }

  std::vector<std::string> paths() const
  {
    std::vector<std::string> p;
    for (const auto& f : files_)
      p.push_back(f.first);
    return p;
  }

  void write_all() const
  {
    for (const auto& [path, contents] : files_) {
      std::ofstream out(path, std::ios::binary);
      if (!out)
        fail(ErrorKind::invalid_argument, "cannot open '" + path + "' for writing");
      out << contents;
      if (!out)
        fail(ErrorKind::invalid_argument, "failed writing '" + path + "'");
    }
  }

private:
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string
timestamp()
{
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void
finish(OutputSet& outputs, const std::string& manifest_path, const std::string& command, const json& config)
{
  auto artifacts = outputs.paths();
  artifacts.push_back(manifest_path);
  outputs.add_json(manifest_path,
                   { { "command", command },
                     { "config", config },
                     { "artifacts", artifacts },
                     { "tool_version", DRIFTKIT_VERSION },
                     { "timestamp", timestamp() } });
  outputs.write_all();
}

template<class Writer>
std::string
render(Writer&& w)
{
  std::ostringstream out;
  w(out);
  return out.str();
}

PathEnsemble
load_ensemble(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    fail(ErrorKind::parse_error, "cannot open input '" + path + "'");
  return io::read_ensemble_csv(in);
}

FloorSpec
parse_floor(const std::string& text)
{
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    fail(ErrorKind::invalid_argument, "floor must be data:FRACTION or abs:M");
  const std::string mode = text.substr(0, colon);
  const double value = io::parse_double(text.substr(colon + 1));
  if (mode == "data")
    return FloorSpec::data_driven(value);
  if (mode == "abs")
    return FloorSpec::absolute(value);
  fail(ErrorKind::invalid_argument, "floor mode must be 'data' or 'abs'");
}

std::string
or_default(const std::string& given, const std::string& base, const std::string& suffix)
{
  return given.empty() ? base + suffix : given;
}

struct SimulateArgs
{
  int model = 1;
  std::size_t N = 50;
  std::size_t n = 50;
  double T = 5.0;
  double t0 = 1.0;
  std::uint64_t seed = 7;
  std::size_t substeps = 10;
  std::string output;
  std::string json_path;
  std::string manifest;
};

int
run_simulate(const SimulateArgs& a)
{
  const SdeModel model = make_preset(a.model);
  const ObservationGrid grid(a.t0, a.T, a.n);
  const SimulationSettings settings{ a.N, a.substeps, a.seed };
  const PathEnsemble ens = simulate_ensemble(model, grid, settings);

  OutputSet outputs;
  outputs.add(a.output, render([&](std::ostream& o) { io::write_ensemble_csv(o, ens); }));
  const json envelope = io::ensemble_envelope(model, grid, settings);
  outputs.add_json(or_default(a.json_path, a.output, ".json"), envelope);
  finish(outputs, or_default(a.manifest, a.output, ".manifest.json"), "simulate", envelope);
  return kExitOk;
}

struct EstimateArgs
{
  std::string input;
  double h = 0.0;
  std::optional<double> eta;
  std::string kind = "drift";
  std::string floor = "data:0.01";
  std::string range;
  double quantile = 0.05;
  std::size_t points = 200;
  std::string output;
  std::string json_path;
  std::string manifest;
};

int
run_estimate(const EstimateArgs& a)
{
  const CurveKind kind = curve_kind_from_string(a.kind);
  const FloorSpec floor = parse_floor(a.floor);
  if (a.eta && kind != CurveKind::drift)
    fail(ErrorKind::invalid_argument, "--eta only applies to --kind drift");
  const std::string range = a.range.empty() ? (kind == CurveKind::density ? "full" : "trimmed") : a.range;
  if (range != "full" && range != "trimmed")
    fail(ErrorKind::invalid_argument, "--range must be 'full' or 'trimmed'");

  const PathEnsemble ens = load_ensemble(a.input);
  const std::vector<double> xs = range == "full" ? full_range_grid(ens, a.h, 5.0, a.points)
                                                 : evaluation_grid(ens, a.quantile, a.points);

  EstimateCurve curve;
  switch (kind) {
    case CurveKind::density:
      curve = estimate_density(ens, Kernel::gaussian(), a.h, xs);
      break;
    case CurveKind::bf:
      curve = estimate_bf(ens, Kernel::gaussian(), a.h, xs);
      break;
    case CurveKind::drift:
      curve = a.eta ? estimate_drift_2b(ens, Kernel::gaussian(), a.h, *a.eta, xs, floor)
                    : estimate_drift(ens, Kernel::gaussian(), a.h, xs, floor);
      break;
  }

  json meta = io::curve_json(curve, kind == CurveKind::drift ? &floor : nullptr);
  meta["kernel"] = "gaussian";
  meta["grid_rule"] = range == "full" ? json{ { "rule", "data range +/- 5h" }, { "points", a.points } }
                                      : json{ { "rule", "empirical quantile range" },
                                              { "quantile", a.quantile },
                                              { "points", a.points } };
  meta["input"] = a.input;

  OutputSet outputs;
  outputs.add(a.output, render([&](std::ostream& o) { io::write_curve_csv(o, curve); }));
  outputs.add_json(or_default(a.json_path, a.output, ".json"), meta);
  json config = { { "input", a.input },  { "h", a.h },         { "kind", a.kind },   { "floor", a.floor },
                  { "range", range },    { "quantile", a.quantile }, { "points", a.points } };
  config["eta"] = a.eta ? json(*a.eta) : json(nullptr);
  finish(outputs, or_default(a.manifest, a.output, ".manifest.json"), "estimate", config);
  return kExitOk;
}

struct CvArgs
{
  std::string input;
  std::string grid = "0.02:0.02:10";
  bool renormalized = false;
  std::string output;
  std::string json_path;
  std::string manifest;
};

int
run_cv(const CvArgs& a)
{
  const BandwidthGrid grid = BandwidthGrid::parse(a.grid);
  const PathEnsemble ens = load_ensemble(a.input);
  const CvReport report = select_bandwidth(ens, Kernel::gaussian(), grid, { a.renormalized });

  json j = io::cv_json(report);
  j["loo_renormalized"] = a.renormalized;
  j["input"] = a.input;

  OutputSet outputs;
  outputs.add(a.output, render([&](std::ostream& o) { io::write_cv_csv(o, report); }));
  outputs.add_json(or_default(a.json_path, a.output, ".json"), j);
  finish(outputs,
         or_default(a.manifest, a.output, ".manifest.json"),
         "cv",
         { { "input", a.input }, { "grid", a.grid }, { "renormalized", a.renormalized } });
  return kExitOk;
}

struct ExperimentArgs
{
  int model = 1;
  bool all = false;
  std::size_t reps = 10;
  std::uint64_t seed = 7;
  std::optional<std::size_t> N;
  std::optional<std::size_t> n;
  std::optional<double> T;
  std::optional<double> t0;
  std::optional<std::size_t> substeps;
  std::optional<std::string> grid;
  std::string floor = "data:0.01";
  bool renormalized = false;
  std::string output = "experiment";
};

ExperimentConfig
experiment_config(const ExperimentArgs& a, int model_id)
{
  ExperimentConfig cfg = default_config(model_id);
  cfg.replications = a.reps;
  cfg.base_seed = a.seed;
  if (a.N)
    cfg.N = *a.N;
  if (a.n)
    cfg.n = *a.n;
  if (a.T)
    cfg.T = *a.T;
  if (a.t0)
    cfg.t0 = *a.t0;
  if (a.substeps)
    cfg.substeps = *a.substeps;
  if (a.grid)
    cfg.bandwidths = BandwidthGrid::parse(*a.grid);
  cfg.floor = parse_floor(a.floor);
  cfg.loo.renormalized = a.renormalized;
  cfg.validate();
  return cfg;
}

int
run_experiment(const ExperimentArgs& a)
{
  std::vector<int> models;
  if (a.all)
    models = { 1, 2, 3, 4 };
  else
    models = { a.model };

  std::vector<ExperimentConfig> configs;
  for (int m : models)
    configs.push_back(experiment_config(a, m));

  std::vector<std::string> labels;
  std::vector<Table1Summary> summaries;
  json runs = json::array();
  bool breached = false;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    summaries.push_back(table1_experiment(configs[k]));
    labels.push_back("Model " + std::to_string(models[k]));
    runs.push_back(io::summary_json(configs[k], summaries.back()));
    breached = breached || summaries.back().policy_breached();
    if (summaries.back().single_replication)
      std::cerr << "warning: " << labels.back() << " ran a single replication; std reported as 0\n";
  }

  OutputSet outputs;
  const json summary = a.all ? json{ { "models", runs } } : runs.front();
  outputs.add_json(a.output + ".json", summary);
  outputs.add(a.output + ".csv", render([&](std::ostream& o) { io::write_table1_csv(o, labels, summaries); }));
  json config = { { "models", models }, { "reps", a.reps }, { "seed", a.seed }, { "floor", a.floor } };
  finish(outputs, a.output + ".manifest.json", "experiment", config);

  if (breached) {
    std::cerr << "error: more than 20% of replications failed\n";
    return kExitPolicy;
  }
  return kExitOk;
}

struct RateArgs
{
  int model = 1;
  std::vector<std::size_t> Ns{ 25, 50, 100, 200, 400 };
  std::size_t reps = 20;
  std::uint64_t seed = 7;
  std::string output = "rate";
};

int
run_rate(const RateArgs& a)
{
  ExperimentConfig cfg = default_config(a.model);
  cfg.base_seed = a.seed;
  const RiskRateResult r = risk_rate_study(cfg.model, a.Ns, cfg, a.reps);

  json points = json::array();
  std::ostringstream csv;
  csv << "N,h,mise\n";
  for (const auto& p : r.points) {
    points.push_back({ { "N", p.N }, { "h", p.h }, { "mise", p.mise } });
    csv << p.N << ',' << io::format_double(p.h) << ',' << io::format_double(p.mise) << '\n';
  }
  OutputSet outputs;
  outputs.add_json(a.output + ".json",
                   { { "slope", r.slope },
                     { "theoretical_slope", r.theoretical_slope },
                     { "reference_paths", r.reference_paths },
                     { "points", points } });
  outputs.add(a.output + ".csv", csv.str());
  finish(outputs,
         a.output + ".manifest.json",
         "rate",
         { { "model", a.model }, { "Ns", a.Ns }, { "reps", a.reps }, { "seed", a.seed } });
  return kExitOk;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Nadaraya-Watson drift estimation for i.i.d. diffusion paths" };
  app.set_version_flag("--version", DRIFTKIT_VERSION);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a preset model and write the paths as CSV");
  sim_cmd->add_option("--model", sim.model, "Preset model 1..4")->check(CLI::Range(1, 4));
  sim_cmd->add_option("--N", sim.N, "Number of paths")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--n", sim.n, "Number of observation increments")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--T", sim.T, "Horizon");
  sim_cmd->add_option("--t0", sim.t0, "First observation time");
  sim_cmd->add_option("--seed", sim.seed, "Random seed");
  sim_cmd->add_option("--substeps", sim.substeps, "Euler steps per observation interval")->check(CLI::PositiveNumber);
  sim_cmd->add_option("-o,--output", sim.output, "Path CSV")->required();
  sim_cmd->add_option("--json", sim.json_path, "Envelope JSON (default: OUTPUT.json)");
  sim_cmd->add_option("--manifest", sim.manifest, "Run manifest (default: OUTPUT.manifest.json)");

  EstimateArgs est;
  double eta = 0.0;
  auto* est_cmd = app.add_subcommand("estimate", "Evaluate the density, bf or drift estimator");
  // --h is the bandwidth here, so help is long-form only.
  est_cmd->set_help_flag("--help", "Print this help message and exit");
  est_cmd->add_option("-i,--input", est.input, "Path CSV")->required();
  est_cmd->add_option("--h", est.h, "Bandwidth")->required();
  auto* eta_opt = est_cmd->add_option("--eta", eta, "Denominator bandwidth (two-bandwidth drift)");
  est_cmd->add_option("--kind", est.kind, "density | bf | drift")
    ->check(CLI::IsMember({ "density", "bf", "drift" }));
  est_cmd->add_option("--floor", est.floor, "Denominator floor: data:FRACTION or abs:M");
  est_cmd->add_option("--range", est.range, "Grid rule: trimmed (quantile range) or full (data +/- 5h)");
  est_cmd->add_option("--quantile", est.quantile, "Quantile trimming level for the trimmed grid");
  est_cmd->add_option("--points", est.points, "Number of evaluation points")->check(CLI::PositiveNumber);
  est_cmd->add_option("-o,--output", est.output, "Curve CSV")->required();
  est_cmd->add_option("--json", est.json_path, "Metadata JSON (default: OUTPUT.json)");
  est_cmd->add_option("--manifest", est.manifest, "Run manifest (default: OUTPUT.manifest.json)");

  CvArgs cv;
  auto* cv_cmd = app.add_subcommand("cv", "Leave-one-out cross-validation over a bandwidth grid");
  cv_cmd->add_option("-i,--input", cv.input, "Path CSV")->required();
  cv_cmd->add_option("--grid", cv.grid, "start:step:count or comma separated list");
  cv_cmd->add_flag("--renormalized", cv.renormalized, "Re-sum leave-one-out denominators over N - 1 paths");
  cv_cmd->add_option("-o,--output", cv.output, "Criterion CSV")->required();
  cv_cmd->add_option("--json", cv.json_path, "Report JSON (default: OUTPUT.json)");
  cv_cmd->add_option("--manifest", cv.manifest, "Run manifest (default: OUTPUT.manifest.json)");

  ExperimentArgs ex;
  std::size_t ex_N = 0, ex_n = 0, ex_sub = 0;
  double ex_T = 0.0, ex_t0 = 0.0;
  std::string ex_grid;
  auto* ex_cmd = app.add_subcommand("experiment", "Monte-Carlo replications with looCV bandwidth selection");
  auto* model_opt = ex_cmd->add_option("--model", ex.model, "Preset model 1..4")->check(CLI::Range(1, 4));
  auto* all_flag = ex_cmd->add_flag("--all", ex.all, "Run all four preset models");
  model_opt->excludes(all_flag);
  ex_cmd->add_option("--reps", ex.reps, "Replications")->check(CLI::PositiveNumber);
  ex_cmd->add_option("--seed", ex.seed, "Base seed");
  auto* N_opt = ex_cmd->add_option("--N", ex_N, "Number of paths")->check(CLI::Range(2, 1 << 30));
  auto* n_opt = ex_cmd->add_option("--n", ex_n, "Number of increments")->check(CLI::PositiveNumber);
  auto* T_opt = ex_cmd->add_option("--T", ex_T, "Horizon");
  auto* t0_opt = ex_cmd->add_option("--t0", ex_t0, "First observation time");
  auto* sub_opt = ex_cmd->add_option("--substeps", ex_sub, "Euler steps per interval")->check(CLI::PositiveNumber);
  auto* grid_opt = ex_cmd->add_option("--grid", ex_grid, "Bandwidth grid override");
  ex_cmd->add_option("--floor", ex.floor, "Denominator floor: data:FRACTION or abs:M");
  ex_cmd->add_flag("--renormalized", ex.renormalized, "Re-sum leave-one-out denominators over N - 1 paths");
  ex_cmd->add_option("-o,--output", ex.output, "Output prefix (writes PREFIX.json, PREFIX.csv)");

  RateArgs rate;
  auto* rate_cmd = app.add_subcommand("rate", "Density MISE convergence study with h = N^(-1/(2 beta + 1))");
  rate_cmd->add_option("--model", rate.model, "Preset model 1..4")->check(CLI::Range(1, 4));
  rate_cmd->add_option("--Ns", rate.Ns, "Sample sizes")->delimiter(',');
  rate_cmd->add_option("--reps", rate.reps, "Replications per N")->check(CLI::PositiveNumber);
  rate_cmd->add_option("--seed", rate.seed, "Base seed");
  rate_cmd->add_option("-o,--output", rate.output, "Output prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sim_cmd)
      return run_simulate(sim);
    if (*est_cmd) {
      if (*eta_opt)
        est.eta = eta;
      return run_estimate(est);
    }
    if (*cv_cmd)
      return run_cv(cv);
    if (*ex_cmd) {
      if (*N_opt)
        ex.N = ex_N;
      if (*n_opt)
        ex.n = ex_n;
      if (*T_opt)
        ex.T = ex_T;
      if (*t0_opt)
        ex.t0 = ex_t0;
      if (*sub_opt)
        ex.substeps = ex_sub;
      if (*grid_opt)
        ex.grid = ex_grid;
      return run_experiment(ex);
    }
    if (*rate_cmd)
      return run_rate(rate);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
