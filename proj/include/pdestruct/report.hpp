#pragma once

#include "json.hpp"
#include "pdestruct/baire_lambda.hpp"
#include "pdestruct/decomposition.hpp"
#include "pdestruct/regularity.hpp"
#include "pdestruct/vector_transport.hpp"

namespace pdestruct {

inline constexpr const char* kReportSchema = "pde-struct/1";

nlohmann::json to_json(const GridGeometry& grid);
/// {"t_values": [...], "values": [...]}
nlohmann::json to_json(const Profile1D& profile);
/// Grid schema plus "epsilon", "axis" and "resolution".
nlohmann::json to_json(const LambdaField& field);
nlohmann::json to_json(const OscillationEstimate& estimate);
/// Oscillation field in the grid schema, flagged nodes, verdict and witnesses.
nlohmann::json to_json(const RegularityReport& report);
nlohmann::json to_json(const ChangeableCover& cover);
nlohmann::json to_json(const ConstancyReport& report);
nlohmann::json to_json(const DecompositionResult& result);
nlohmann::json to_json(const WaveSplit& split);
/// Rows keyed by (basis, coordinate).
nlohmann::json to_json(const GateauxReport& report);
nlohmann::json to_json(const TranslationVerdict& verdict);

} // namespace pdestruct
