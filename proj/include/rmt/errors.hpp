#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rmt {

// Validation failures (bad sizes, bad parameters). CLI maps these to exit 2.
using invalid_argument = std::invalid_argument;

// Base for runtime numerical failures. CLI maps these to exit 3.
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

struct degenerate_spectrum_error : numerical_error {
  using numerical_error::numerical_error;
};

struct singular_configuration_error : numerical_error {
  using numerical_error::numerical_error;
};

// Step halving exhausted; carries the last valid state positions.
struct collision_abort_error : numerical_error {
  std::vector<double> positions;
  double t;
  collision_abort_error(const std::string& what, std::vector<double> pos, double time)
      : numerical_error(what), positions(std::move(pos)), t(time) {}
};

// Iterative scheme did not reach tolerance; carries partial estimates.
struct no_convergence_error : numerical_error {
  std::vector<double> partial;
  no_convergence_error(const std::string& what, std::vector<double> partial_estimates = {})
      : numerical_error(what), partial(std::move(partial_estimates)) {}
};

struct truncation_error : numerical_error {
  using numerical_error::numerical_error;
};

struct edge_degenerate_error : numerical_error {
  using numerical_error::numerical_error;
};

struct singular_point_error : numerical_error {
  using numerical_error::numerical_error;
};

struct insufficient_resolution_error : numerical_error {
  using numerical_error::numerical_error;
};

struct solver_failure_error : numerical_error {
  std::vector<double> trace;
  solver_failure_error(const std::string& what, std::vector<double> energy_trace = {})
      : numerical_error(what), trace(std::move(energy_trace)) {}
};

}  // namespace rmt
