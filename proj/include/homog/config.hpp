#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "homog/kernel.hpp"
#include "homog/states.hpp"

namespace homog {

/// Raised for unreadable, malformed or inconsistent configuration.
/// The CLI maps it to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double g1 = 1e-3;        // non-representability disagreement threshold
  double limit = 1e-2;     // finite-eps reproduction of a limit value
  double identity = 1e-12; // closed-form identities
};

struct RunConfig {
  double alpha = 1.0;
  double beta = 2.0;
  double lambda = 0.5;
  std::optional<nlohmann::json> kernel;  // explicit {"breakpoints", "values"}; overrides alpha/beta/lambda

  std::string potential = "infinite";  // "infinite" or "finite"
  double M = 10.0;

  std::vector<double> eps_grid;  // empty: subcommand default
  std::vector<double> t_grid;
  std::vector<double> s_grid;
  std::vector<double> M_grid;
  int t_steps = 101;

  Tolerances tolerances;

  // subcommand inputs
  double eps = 1.0 / 32.0;
  double t = 0.5;
  double c = 0.0;
  std::optional<std::size_t> n;  // cell size; subcommand default when unset
  std::optional<std::size_t> k_ones;
  std::string method = "projected_gradient";
  std::string mode = "all_subsets";
  std::string function_path;
  std::size_t quadrature_n = 0;

  std::string output_dir = "out";
  unsigned threads = 1;
  std::uint64_t seed = 1;

  PeriodicStepKernel resolved_kernel() const;
  Potential resolved_potential() const;
};

/// Reads a JSON config file. Unknown keys are rejected so typos surface.
RunConfig load_config(const std::string& path);

/// Applies a parsed JSON object onto cfg; `where` prefixes diagnostics.
void apply_config_json(RunConfig& cfg, const nlohmann::json& j, const std::string& where);

/// Throws ConfigError when a field is out of range.
void validate(const RunConfig& cfg);

/// Resolved config for provenance. Execution-only fields (threads,
/// output_dir) are left out so outputs do not depend on them.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace homog
