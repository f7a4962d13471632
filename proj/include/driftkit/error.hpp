#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace driftkit {

enum class ErrorKind
{
  invalid_argument,
  invalid_bandwidth,
  invalid_model,
  simulation_diverged,
  degenerate_density,
  degenerate_weights,
  insufficient_paths,
  selection_failed,
  experiment_failed,
  parse_error
};

std::string_view to_string(ErrorKind kind);

//! Every error raised by the library carries a kind so callers (the CLI in
//! particular) can map failures to exit codes without string matching.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what)
    , kind_(kind)
  {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void
fail(ErrorKind kind, const std::string& what)
{
  throw Error(kind, what);
}

} // namespace driftkit
