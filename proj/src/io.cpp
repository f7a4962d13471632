#include "driftkit/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "driftkit/error.hpp"

namespace driftkit::io {

using nlohmann::json;

std::string
format_double(double x)
{
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc())
    fail(ErrorKind::invalid_argument, "cannot format number");
  return { buf, ptr };
}

namespace {

std::string
trim(const std::string& s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<double>
parse_row(const std::string& line, std::size_t line_no)
{
  std::vector<double> row;
  std::stringstream ss(line);
  for (std::string field; std::getline(ss, field, ',');) {
    try {
      row.push_back(parse_double(field));
    } catch (const Error& e) {
      fail(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!line.empty() && line.back() == ',')
    fail(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": trailing comma");
  return row;
}

json
floor_json(const FloorSpec& floor)
{
  return { { "mode", floor.mode() == FloorSpec::Mode::absolute ? "absolute" : "data_driven" },
           { "parameter", floor.parameter() } };
}

json
number_or_null(double x)
{
  return std::isfinite(x) ? json(x) : json(nullptr);
}

} // namespace

double
parse_double(const std::string& text)
{
  const std::string t = trim(text);
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (first != last && *first == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(value))
    fail(ErrorKind::parse_error, "'" + text + "' is not a finite number");
  return value;
}

void
write_ensemble_csv(std::ostream& out, const PathEnsemble& ens)
{
  const auto times = ens.grid().times();
  for (std::size_t j = 0; j < times.size(); ++j)
    out << (j ? "," : "") << format_double(times[j]);
  out << '\n';
  for (std::size_t i = 0; i < ens.paths(); ++i) {
    const auto p = ens.path(i);
    for (std::size_t j = 0; j < p.size(); ++j)
      out << (j ? "," : "") << format_double(p[j]);
    out << '\n';
  }
}

PathEnsemble
read_ensemble_csv(std::istream& in)
{
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> times;
  while (times.empty() && std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty())
      times = parse_row(line, line_no);
  }
  if (times.size() < 2)
    fail(ErrorKind::parse_error, "ensemble CSV needs a header with at least two observation times");

  const std::size_t n = times.size() - 1;
  std::optional<ObservationGrid> grid;
  try {
    grid.emplace(times.front(), times.back(), n);
  } catch (const Error& e) {
    fail(ErrorKind::parse_error, std::string("ensemble CSV header: ") + e.what());
  }
  const double tol = 1e-9 * std::max(1.0, std::abs(grid->T()));
  for (std::size_t j = 0; j <= n; ++j)
    if (std::abs(times[j] - grid->time(j)) > tol)
      fail(ErrorKind::parse_error, "ensemble CSV header is not a uniform dissection of [t0, T]");

  std::vector<double> values;
  std::size_t paths = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    auto row = parse_row(line, line_no);
    if (row.size() != n + 1)
      fail(ErrorKind::parse_error,
           "line " + std::to_string(line_no) + ": expected " + std::to_string(n + 1) + " values, got " +
             std::to_string(row.size()));
    values.insert(values.end(), row.begin(), row.end());
    ++paths;
  }
  if (paths == 0)
    fail(ErrorKind::parse_error, "ensemble CSV contains no paths");
  return { *grid, paths, std::move(values) };
}

json
ensemble_envelope(const SdeModel& model, const ObservationGrid& grid, const SimulationSettings& settings)
{
  return { { "model", { { "name", model.name }, { "preset_id", model.preset_id }, { "x0", model.x0 } } },
           { "parameters", { { "N", settings.paths }, { "substeps", settings.substeps }, { "scheme", "euler-maruyama" } } },
           { "seed", settings.seed },
           { "grid", { { "t0", grid.t0() }, { "T", grid.T() }, { "n", grid.n() } } } };
}

void
write_curve_csv(std::ostream& out, const EstimateCurve& curve)
{
  out << "x,value\n";
  for (std::size_t g = 0; g < curve.xs.size(); ++g)
    out << format_double(curve.xs[g]) << ',' << format_double(curve.values[g]) << '\n';
}

json
curve_json(const EstimateCurve& curve, const FloorSpec* floor)
{
  json j = { { "kind", to_string(curve.kind) },
             { "h", number_or_null(curve.h) },
             { "eta", number_or_null(curve.eta) },
             { "points", curve.xs.size() },
             { "xs", curve.xs },
             { "values", curve.values } };
  if (curve.kind == CurveKind::drift) {
    j["floor_value"] = number_or_null(curve.floor_value);
    j["floored_points"] = curve.floored_points;
    if (floor)
      j["floor"] = floor_json(*floor);
  }
  return j;
}

void
write_cv_csv(std::ostream& out, const CvReport& report)
{
  out << "h,cv\n";
  for (std::size_t k = 0; k < report.hs.size(); ++k)
    out << format_double(report.hs[k]) << ','
        << (std::isfinite(report.criteria[k]) ? format_double(report.criteria[k]) : "nan") << '\n';
}

json
cv_json(const CvReport& report)
{
  json criteria = json::array();
  json failures = json::array();
  for (std::size_t k = 0; k < report.hs.size(); ++k) {
    criteria.push_back(number_or_null(report.criteria[k]));
    if (!report.failures[k].empty())
      failures.push_back({ { "h", report.hs[k] }, { "error", report.failures[k] } });
  }
  return { { "grid", report.hs },
           { "criteria", criteria },
           { "degenerate_points", report.degenerate_points },
           { "failures", failures },
           { "selected", report.selected },
           { "selected_index", report.selected_index } };
}

json
config_json(const ExperimentConfig& cfg)
{
  return { { "model", { { "name", cfg.model.name }, { "preset_id", cfg.model.preset_id }, { "x0", cfg.model.x0 } } },
           { "kernel", { { "name", cfg.kernel.name() }, { "order", cfg.kernel.order() } } },
           { "N", cfg.N },
           { "n", cfg.n },
           { "T", cfg.T },
           { "t0", cfg.t0 },
           { "bandwidth_grid", cfg.bandwidths.values() },
           { "replications", cfg.replications },
           { "eval_quantile", cfg.eval_quantile },
           { "eval_points", cfg.eval_points },
           { "substeps", cfg.substeps },
           { "base_seed", cfg.base_seed },
           { "floor", floor_json(cfg.floor) },
           { "loo_renormalized", cfg.loo.renormalized },
           { "mse_convention", "unweighted mean over the quantile-trimmed evaluation grid" } };
}

json
summary_json(const ExperimentConfig& cfg, const Table1Summary& summary)
{
  json reps = json::array();
  for (const auto& r : summary.per_rep)
    reps.push_back({ { "rep", r.rep_index },
                     { "seed", r.seed },
                     { "h", r.selected_h },
                     { "mse", r.mse },
                     { "proposal_mean_mse", r.proposal_mean_mse },
                     { "degenerate_points", r.cv.degenerate_points[r.cv.selected_index] } });
  json failures = json::array();
  for (const auto& f : summary.failures)
    failures.push_back({ { "rep", f.rep_index }, { "error", f.message } });

  json warnings = json::array();
  if (summary.single_replication)
    warnings.push_back("single_replication: standard deviation reported as 0");

  return { { "config", config_json(cfg) },
           { "per_rep", reps },
           { "mean_mse", number_or_null(summary.mean_mse) },
           { "std_mse", number_or_null(summary.std_mse) },
           { "mean_proposal_mse", number_or_null(summary.mean_proposal_mse) },
           { "failure_count", summary.failures.size() },
           { "failures", failures },
           { "policy_breached", summary.policy_breached() },
           { "warnings", warnings } };
}

void
write_table1_csv(std::ostream& out, const std::vector<std::string>& labels, const std::vector<Table1Summary>& summaries)
{
  if (labels.size() != summaries.size())
    fail(ErrorKind::invalid_argument, "one label per summary expected");
  out << "statistic";
  for (const auto& l : labels)
    out << ',' << l;
  out << "\n100xMSE";
  for (const auto& s : summaries)
    out << ',' << format_double(100.0 * s.mean_mse);
  out << "\n100xStD";
  for (const auto& s : summaries)
    out << ',' << format_double(100.0 * s.std_mse);
  out << '\n';
}

} // namespace driftkit::io
