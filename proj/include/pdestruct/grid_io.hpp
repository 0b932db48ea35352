#pragma once

#include "json.hpp"
#include "pdestruct/function_model.hpp"

#include <iosfwd>
#include <string>

namespace pdestruct {

/// {"x0","x1","y0","y1","nx","ny","values"} with x as the slow index.
nlohmann::json grid_to_json(const GridSample& sample);
GridSample grid_from_json(const nlohmann::json& doc);

/// Header `x,y,value`, one row per node in any order. Spacing must be
/// uniform to a relative tolerance of 1e-9. `source` names the input in
/// diagnostics.
GridSample read_grid_csv(std::istream& in, const std::string& source = "<csv>");
void write_grid_csv(std::ostream& out, const GridSample& sample);

/// Dispatches on the extension (.json or .csv).
GridSample read_grid_file(const std::string& path);

void write_profile_csv(std::ostream& out, const Profile1D& profile);

} // namespace pdestruct
