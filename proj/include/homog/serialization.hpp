#pragma once

#include <json.hpp>

#include "homog/cell.hpp"
#include "homog/energy.hpp"
#include "homog/gammalab.hpp"
#include "homog/kernel.hpp"
#include "homog/states.hpp"

namespace homog {

using nlohmann::json;

/// Bumped whenever an emitted JSON layout changes.
inline constexpr int kSchemaVersion = 1;

/// {"breakpoints": [...], "values": [...]}. The readers throw
/// std::invalid_argument naming the offending field.
json to_json(const PeriodicStepFunction& f);
json to_json(const PeriodicStepKernel& k);
json to_json(const StepFunction& u);
PeriodicStepKernel kernel_from_json(const json& j);
PeriodicStepFunction periodic_step_from_json(const json& j);
StepFunction step_function_from_json(const json& j);

/// Extended reals serialise as a number, or the string "inf".
json to_json(ExtendedReal x);

json to_json(const Potential& p);
json to_json(const EnergyReport& r);
json to_json(const CellProfile& p);
json to_json(const CellSolveResult& r);
json to_json(const ConvergenceStudy& s);
json to_json(const Certificate& c);

/// Float formatting used for every CSV cell: 17 significant digits.
std::string csv_number(double x);

}  // namespace homog
