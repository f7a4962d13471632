#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftkit/bandwidth.hpp"
#include "driftkit/estimators.hpp"
#include "driftkit/experiments.hpp"
#include "driftkit/sde.hpp"

namespace driftkit::io {

//! Shortest decimal string that parses back to exactly x.
std::string format_double(double x);
//! Strict parse of a whole field; throws parse_error.
double parse_double(const std::string& text);

//! Header row holds the observation times t_0..t_n, then one row per path.
void write_ensemble_csv(std::ostream& out, const PathEnsemble& ens);
//! Rebuilds the grid from the header (t0 = first, T = last, n = columns - 1)
//! and checks that the header matches the uniform dissection.
PathEnsemble read_ensemble_csv(std::istream& in);

nlohmann::json ensemble_envelope(const SdeModel& model,
                                 const ObservationGrid& grid,
                                 const SimulationSettings& settings);

//! "x,value" header then one row per abscissa.
void write_curve_csv(std::ostream& out, const EstimateCurve& curve);
nlohmann::json curve_json(const EstimateCurve& curve, const FloorSpec* floor = nullptr);

//! "h,cv" header then one row per bandwidth.
void write_cv_csv(std::ostream& out, const CvReport& report);
nlohmann::json cv_json(const CvReport& report);

nlohmann::json config_json(const ExperimentConfig& cfg);
nlohmann::json summary_json(const ExperimentConfig& cfg, const Table1Summary& summary);

//! Two rows (100xMSE, 100xStD), one column per labelled summary.
void write_table1_csv(std::ostream& out,
                      const std::vector<std::string>& labels,
                      const std::vector<Table1Summary>& summaries);

} // namespace driftkit::io
