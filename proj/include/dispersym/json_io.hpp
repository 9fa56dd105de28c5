// JSON serialization of reports and configs (nlohmann::json).
#ifndef DISPERSYM_JSON_IO_HPP
#define DISPERSYM_JSON_IO_HPP

#include <json.hpp>

#include "dispersym/hoelder.hpp"
#include "dispersym/simulate.hpp"
#include "dispersym/stages.hpp"
#include "dispersym/tarama.hpp"
#include "dispersym/taramanum.hpp"

namespace dispersym {

nlohmann::json to_json(const ConditionSet& cs);
nlohmann::json to_json(const StructureReport& rep);
nlohmann::json to_json(const ResidualReport& rep, int stage_index);
nlohmann::json to_json(const HoelderReport& rep);
nlohmann::json to_json(const ConditionCheckReport& rep);
nlohmann::json to_json(const TaramaSweepReport& rep);
nlohmann::json to_json(const SimResult& res);
nlohmann::json recursion_table_json(const RecursionState& state);

// run.json -> SimConfig; throws std::invalid_argument on schema problems
SimConfig sim_config_from_json(const nlohmann::json& j);
// coefficient file: {"grid": {"x0":..,"dx":..,"n":..}, "coeffs": {...}}
std::map<std::string, SampledFunction> coefficients_from_json(const nlohmann::json& j);

}  // namespace dispersym

#endif
