#include "driftkit/error.hpp"

namespace driftkit {

std::string_view
to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::invalid_argument:
      return "invalid-argument";
    case ErrorKind::invalid_bandwidth:
      return "invalid-bandwidth";
    case ErrorKind::invalid_model:
      return "invalid-model";
    case ErrorKind::simulation_diverged:
      return "simulation-diverged";
    case ErrorKind::degenerate_density:
      return "degenerate-density";
    case ErrorKind::degenerate_weights:
      return "degenerate-weights";
    case ErrorKind::insufficient_paths:
      return "insufficient-paths";
    case ErrorKind::selection_failed:
      return "selection-failed";
    case ErrorKind::experiment_failed:
      return "experiment-failed";
    case ErrorKind::parse_error:
      return "parse-error";
  }
  return "unknown";
}

} // namespace driftkit
