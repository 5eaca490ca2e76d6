#include "homog/serialization.hpp"

#include <cstdio>
#include <stdexcept>
#include <string>

namespace homog {

namespace {

std::vector<double> number_array(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) throw std::invalid_argument(std::string("missing field '") + field + "'");
  const json& a = j.at(field);
  if (!a.is_array()) throw std::invalid_argument(std::string("field '") + field + "' must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number())
      throw std::invalid_argument(std::string("field '") + field + "[" + std::to_string(i) + "]' must be a number");
    out.push_back(a[i].get<double>());
  }
  return out;
}

template <class T>
T parse_steps(const json& j) {
  auto b = number_array(j, "breakpoints");
  auto v = number_array(j, "values");
  return T(std::move(b), std::move(v));
}

json pair_to_json(std::span<const double> b, std::span<const double> v) {
  return json{{"breakpoints", std::vector<double>(b.begin(), b.end())},
              {"values", std::vector<double>(v.begin(), v.end())}};
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

json to_json(const PeriodicStepFunction& f) { return pair_to_json(f.breakpoints(), f.values()); }
json to_json(const PeriodicStepKernel& k) { return pair_to_json(k.breakpoints(), k.values()); }
json to_json(const StepFunction& u) { return pair_to_json(u.breakpoints(), u.values()); }

PeriodicStepKernel kernel_from_json(const json& j) { return parse_steps<PeriodicStepKernel>(j); }
PeriodicStepFunction periodic_step_from_json(const json& j) { return parse_steps<PeriodicStepFunction>(j); }
StepFunction step_function_from_json(const json& j) { return parse_steps<StepFunction>(j); }

json to_json(ExtendedReal x) { return x.is_finite() ? json(x.value()) : json("inf"); }

json to_json(const Potential& p) {
  if (p.kind == Potential::Kind::infinite_triple_well) return json{{"kind", "infinite_triple_well"}};
  return json{{"kind", "finite_M"}, {"M", p.M}};
}

json to_json(const EnergyReport& r) {
  return json{{"value", to_json(r.value)}, {"method", std::string(to_string(r.method))}, {"eps", r.eps},
              {"bound", r.bound}};
}

json to_json(const CellProfile& p) {
  return json{{"n", p.n()}, {"mean", p.mean()}, {"values", std::vector<double>(p.values().begin(), p.values().end())}};
}

json to_json(const CellSolveResult& r) {
  return json{{"method", std::string(to_string(r.method))},
              {"energy", r.energy},
              {"iterations", r.iterations},
              {"constraint_residual", r.constraint_residual},
              {"converged", r.converged},
              {"profile", to_json(r.profile)}};
}

json to_json(const ConvergenceStudy& s) {
  json rows = json::array();
  for (std::size_t i = 0; i < s.eps_grid.size(); ++i)
    rows.push_back({{"eps", s.eps_grid[i]}, {"value", s.values[i]}, {"abs_error", std::abs(s.values[i] - s.limit_ref)}});
  return json{{"eps_grid", s.eps_grid},
              {"values", s.values},
              {"rows", rows},
              {"limit_ref", s.limit_ref},
              {"final_error", s.final_error()},
              {"fitted_rate", optional_number(s.fitted_rate)},
              {"fitted_constant", optional_number(s.fitted_constant)},
              {"envelope_ok", s.envelope_ok()},
              {"notes", s.notes}};
}

json to_json(const Certificate& c) {
  json tol = json::object();
  for (const auto& [name, value] : c.tolerances) tol[name] = value;
  json payload = std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, StudyPayload>) {
          return json{{"study", to_json(p.study)}};
        } else if constexpr (std::is_same_v<P, NonRepresentabilityPayload>) {
          return json{{"s1", p.s1},
                      {"s2", p.s2},
                      {"g1_s1", p.g1_s1},
                      {"g1_s2", p.g1_s2},
                      {"difference", p.difference},
                      {"g0", p.g0},
                      {"abar", p.abar},
                      {"constant_reproduced", p.constant_reproduced},
                      {"steps_reproduced", p.steps_reproduced},
                      {"constant_study", to_json(p.constant_study)},
                      {"step_study_s1", to_json(p.step_study_s1)},
                      {"step_study_s2", to_json(p.step_study_s2)}};
        } else {
          json table = json::array();
          for (std::size_t m = 0; m < p.M_grid.size(); ++m) {
            json values = json::object();
            for (std::size_t d = 0; d < p.deviation_names.size(); ++d)
              values[p.deviation_names[d]] = p.deviation_values[m][d];
            table.push_back({{"M", p.M_grid[m]}, {"deviations", values}, {"all_strictly_worse", bool(p.all_strictly_worse[m])}});
          }
          return json{{"eps", p.eps},
                      {"optimum", p.optimum},
                      {"M_table", table},
                      {"threshold_M", optional_number(p.threshold_M)},
                      {"admissible_profiles", p.admissible_names},
                      {"admissible_max_diff", p.admissible_max_diff}};
        }
      },
      c.payload);
  return json{{"kind", std::string(to_string(c.kind))},
              {"verdict", std::string(to_string(c.verdict))},
              {"tolerances", tol},
              {"payload", payload}};
}

std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace homog
