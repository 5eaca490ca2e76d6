#include "homog/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "homog/serialization.hpp"

namespace homog {

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* key) { return j.at(key); }

double get_number(const nlohmann::json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key);
  if (!v.is_number()) throw ConfigError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

std::string get_string(const nlohmann::json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key);
  if (!v.is_string()) throw ConfigError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::size_t get_count(const nlohmann::json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key);
  if (!v.is_number_unsigned()) throw ConfigError(where + ": field '" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<double> get_grid(const nlohmann::json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key);
  if (!v.is_array()) throw ConfigError(where + ": field '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw ConfigError(where + ": field '" + key + "[" + std::to_string(i) + "]' must be a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(std::string("field '") + name + "' must be positive");
}

}  // namespace

PeriodicStepKernel RunConfig::resolved_kernel() const {
  try {
    if (kernel) return kernel_from_json(*kernel);
    return make_lambda_kernel(alpha, beta, lambda);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("kernel: ") + e.what());
  }
}

Potential RunConfig::resolved_potential() const {
  if (potential == "infinite") return Potential::infinite();
  if (potential == "finite") return Potential::finite(M);
  throw ConfigError("field 'potential' must be \"infinite\" or \"finite\"");
}

void apply_config_json(RunConfig& cfg, const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": top level must be an object");
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "alpha") cfg.alpha = get_number(j, k, where);
    else if (key == "beta") cfg.beta = get_number(j, k, where);
    else if (key == "lambda") cfg.lambda = get_number(j, k, where);
    else if (key == "kernel") {
      if (!value.is_object()) throw ConfigError(where + ": field 'kernel' must be an object");
      cfg.kernel = value;
    } else if (key == "potential") cfg.potential = get_string(j, k, where);
    else if (key == "M") cfg.M = get_number(j, k, where);
    else if (key == "eps_grid") cfg.eps_grid = get_grid(j, k, where);
    else if (key == "t_grid") cfg.t_grid = get_grid(j, k, where);
    else if (key == "s_grid") cfg.s_grid = get_grid(j, k, where);
    else if (key == "M_grid") cfg.M_grid = get_grid(j, k, where);
    else if (key == "t_steps") cfg.t_steps = static_cast<int>(get_count(j, k, where));
    else if (key == "tolerances") {
      if (!value.is_object()) throw ConfigError(where + ": field 'tolerances' must be an object");
      for (const auto& [tk, tv] : value.items()) {
        const std::string sub = where + ": tolerances";
        if (tk == "g1") cfg.tolerances.g1 = get_number(value, "g1", sub);
        else if (tk == "limit") cfg.tolerances.limit = get_number(value, "limit", sub);
        else if (tk == "identity") cfg.tolerances.identity = get_number(value, "identity", sub);
        else throw ConfigError(sub + ": unknown field '" + tk + "'");
      }
    } else if (key == "eps") cfg.eps = get_number(j, k, where);
    else if (key == "t") cfg.t = get_number(j, k, where);
    else if (key == "c") cfg.c = get_number(j, k, where);
    else if (key == "n") cfg.n = get_count(j, k, where);
    else if (key == "k") cfg.k_ones = get_count(j, k, where);
    else if (key == "method") cfg.method = get_string(j, k, where);
    else if (key == "mode") cfg.mode = get_string(j, k, where);
    else if (key == "function") cfg.function_path = get_string(j, k, where);
    else if (key == "quadrature_n") cfg.quadrature_n = get_count(j, k, where);
    else if (key == "output_dir") cfg.output_dir = get_string(j, k, where);
    else if (key == "threads") cfg.threads = static_cast<unsigned>(get_count(j, k, where));
    else if (key == "seed") cfg.seed = get_count(j, k, where);
    else throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  RunConfig cfg;
  apply_config_json(cfg, j, path);
  return cfg;
}

void validate(const RunConfig& cfg) {
  require_positive(cfg.tolerances.g1, "tolerances.g1");
  require_positive(cfg.tolerances.limit, "tolerances.limit");
  require_positive(cfg.tolerances.identity, "tolerances.identity");
  if (!(cfg.eps > 0.0 && cfg.eps <= 1.0)) throw ConfigError("field 'eps' must lie in (0, 1]");
  for (double e : cfg.eps_grid)
    if (!(e > 0.0 && e <= 1.0)) throw ConfigError("field 'eps_grid' entries must lie in (0, 1]");
  for (double s : cfg.s_grid)
    if (!(s > 0.0 && s < 1.0)) throw ConfigError("field 's_grid' entries must lie in (0, 1)");
  for (double t : cfg.t_grid)
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("field 't_grid' entries must lie in [0, 1]");
  for (double m : cfg.M_grid) require_positive(m, "M_grid");
  if (!(cfg.t >= 0.0 && cfg.t <= 1.0)) throw ConfigError("field 't' must lie in [0, 1]");
  if (cfg.t_steps < 2) throw ConfigError("field 't_steps' must be at least 2");
  if (cfg.n && *cfg.n < 2) throw ConfigError("field 'n' must be at least 2");
  if (cfg.threads == 0) throw ConfigError("field 'threads' must be at least 1");
  (void)cfg.resolved_kernel();
  (void)cfg.resolved_potential();
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j{{"alpha", cfg.alpha},
                   {"beta", cfg.beta},
                   {"lambda", cfg.lambda},
                   {"kernel", cfg.kernel ? *cfg.kernel : nlohmann::json(nullptr)},
                   {"potential", cfg.potential},
                   {"M", cfg.M},
                   {"eps_grid", cfg.eps_grid},
                   {"t_grid", cfg.t_grid},
                   {"s_grid", cfg.s_grid},
                   {"M_grid", cfg.M_grid},
                   {"t_steps", cfg.t_steps},
                   {"tolerances",
                    {{"g1", cfg.tolerances.g1}, {"limit", cfg.tolerances.limit}, {"identity", cfg.tolerances.identity}}},
                   {"eps", cfg.eps},
                   {"t", cfg.t},
                   {"c", cfg.c},
                   {"n", cfg.n ? nlohmann::json(*cfg.n) : nlohmann::json(nullptr)},
                   {"k", cfg.k_ones ? nlohmann::json(*cfg.k_ones) : nlohmann::json(nullptr)},
                   {"method", cfg.method},
                   {"mode", cfg.mode},
                   {"function", cfg.function_path},
                   {"quadrature_n", cfg.quadrature_n},
                   {"seed", cfg.seed}};
  return j;
}

}  // namespace homog
