#include "pdestruct/report.hpp"

#include "pdestruct/grid_io.hpp"

namespace pdestruct {

using nlohmann::json;

namespace {

json node_json(const GridGeometry& grid, GridNode n)
{
    const Point p = grid.node(n.i, n.j);
    return {{"i", n.i}, {"j", n.j}, {"x", p.x}, {"y", p.y}};
}

} // namespace

json to_json(const GridGeometry& grid)
{
    return {{"x0", grid.rect.x0}, {"x1", grid.rect.x1}, {"y0", grid.rect.y0},
            {"y1", grid.rect.y1}, {"nx", grid.nx},      {"ny", grid.ny}};
}

json to_json(const Profile1D& profile)
{
    return {{"t_values", profile.t_values()}, {"values", profile.values()}};
}

json to_json(const LambdaField& field)
{
    json out = grid_to_json(GridSample{field.grid, field.values});
    out["epsilon"] = field.epsilon;
    out["axis"] = std::string(1, static_cast<char>(field.axis));
    out["resolution"] = field.resolution;
    return out;
}

json to_json(const OscillationEstimate& estimate)
{
    return {{"radii", estimate.radii}, {"estimates", estimate.estimates}, {"value", estimate.value}};
}

json to_json(const RegularityReport& report)
{
    json flagged = json::array();
    for (const auto& n : report.flagged) {
        flagged.push_back(node_json(report.grid, n));
    }
    json witnesses = json::array();
    for (const auto& w : report.verdict.witnesses) {
        json entry{{"box", {w.box.i, w.box.j}}};
        entry["clean_sub_box"] = w.clean_sub_box ? json{w.clean_sub_box->i, w.clean_sub_box->j} : json(nullptr);
        witnesses.push_back(std::move(entry));
    }
    json divergent = json::array();
    for (std::size_t idx = 0; idx < report.lipschitz_divergent.size(); ++idx) {
        if (report.lipschitz_divergent[idx]) {
            divergent.push_back(node_json(report.grid, {static_cast<int>(idx / report.grid.ny),
                                                        static_cast<int>(idx % report.grid.ny)}));
        }
    }
    return {{"threshold", report.threshold},
            {"oscillation_field", grid_to_json(GridSample{report.grid, report.oscillation})},
            {"flagged_points", std::move(flagged)},
            {"nowhere_dense_verdict",
             {{"value", report.verdict.nowhere_dense},
              {"box", report.verdict.box},
              {"sub_box", report.verdict.sub_box},
              {"witnesses", std::move(witnesses)}}},
            {"lipschitz_constants", grid_to_json(GridSample{report.grid, report.lipschitz})},
            {"lipschitz_divergent", std::move(divergent)}};
}

json to_json(const ChangeableCover& cover)
{
    json intervals = json::array();
    for (const auto& iv : cover.intervals) {
        intervals.push_back({iv.lo, iv.hi});
    }
    return {{"epsilon", cover.epsilon}, {"intervals", std::move(intervals)}, {"dense", cover.dense}};
}

json to_json(const ConstancyReport& report)
{
    return {{"k", report.k},
            {"offsets", report.offsets},
            {"deviations", report.deviations},
            {"max_deviation", report.max_deviation},
            {"tol", report.tol},
            {"pass", report.pass}};
}

json to_json(const DecompositionResult& result)
{
    json profiles = json::array();
    for (const auto& p : result.profiles) {
        profiles.push_back(to_json(p));
    }
    return {{"order", result.order},
            {"profiles", std::move(profiles)},
            {"residual", result.residual},
            {"reconstruction_error", result.reconstruction_error},
            {"metadata",
             {{"h", result.metadata.h},
              {"grid", to_json(result.metadata.grid)},
              {"exact_partials", result.metadata.exact_partials},
              {"gates", result.metadata.gates}}}};
}

json to_json(const WaveSplit& split)
{
    return {{"phi", to_json(split.phi)},
            {"psi", to_json(split.psi)},
            {"psi_tilde", to_json(split.psi_tilde)},
            {"symmetry_defect", split.symmetry_defect},
            {"equality_defect", split.equality_defect},
            {"characteristic_defect", split.characteristic_defect},
            {"reconstruction_error", split.reconstruction_error}};
}

json to_json(const GateauxReport& report)
{
    json rows = json::array();
    for (const auto& e : report.entries) {
        rows.push_back({{"basis", e.basis},
                        {"coordinate", e.coordinate},
                        {"d_first", e.d_first},
                        {"d_second", e.d_second},
                        {"residual", e.residual}});
    }
    return {{"entries", std::move(rows)}, {"max_residual", report.max_residual}};
}

json to_json(const TranslationVerdict& verdict)
{
    return {{"pass", verdict.pass},
            {"max_defect", verdict.max_defect},
            {"defects", verdict.defects},
            {"phi", {{"points", verdict.phi_points}, {"values", verdict.phi_values}}}};
}

} // namespace pdestruct
