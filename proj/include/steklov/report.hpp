#pragma once

#include "steklov/appendix.hpp"
#include "steklov/applications.hpp"
#include "steklov/variational.hpp"

#include "json.hpp"

#include <string>

namespace steklov {

using json = nlohmann::json;

json to_json(const Poly& p);
json to_json(const Verblunsky& g);
json to_json(const Measure& mu, bool with_density = true);
json to_json(const TaylorPoly& t);
json to_json(const TrigPolynomial& t);
json to_json(const ConditionReport& r);
json to_json(const BoundReport& r);
json to_json(const AtomicSteklovMeasure& mu);

Poly poly_from_json(const json& j);
Verblunsky verblunsky_from_json(const json& j);
Measure measure_from_json(const json& j);

// parameters, coefficients, normalization constants, condition report and realized delta
json construction_bundle(const DecouplingConstruction& c, const ConditionReport* cond = nullptr,
                         const AssembledMeasure* am = nullptr);

// Names of the experiment commands.
const std::vector<std::string>& experiment_commands();

// One experiment. The result carries
//   command, config (defaults filled in), columns, rows, bundle, assertions[{name, passed, detail}], passed.
// Unknown keys or mistyped values throw invalid_argument.
json run_experiment(const std::string& command, const json& config);

} // namespace steklov
