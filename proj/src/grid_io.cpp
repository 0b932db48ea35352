#include "pdestruct/grid_io.hpp"

#include "pdestruct/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pdestruct {

nlohmann::json grid_to_json(const GridSample& sample)
{
    const auto& r = sample.grid.rect;
    return {{"x0", r.x0}, {"x1", r.x1}, {"y0", r.y0}, {"y1", r.y1},
            {"nx", sample.grid.nx}, {"ny", sample.grid.ny}, {"values", sample.values}};
}

GridSample grid_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) {
        throw ValidationError("grid JSON must be an object");
    }
    for (const char* key : {"x0", "x1", "y0", "y1", "nx", "ny", "values"}) {
        if (!doc.contains(key)) {
            throw ValidationError(std::string("grid JSON is missing \"") + key + "\"");
        }
    }
    GridSample s;
    try {
        s.grid.rect = {doc.at("x0").get<double>(), doc.at("x1").get<double>(), doc.at("y0").get<double>(),
                       doc.at("y1").get<double>()};
        s.grid.nx = doc.at("nx").get<int>();
        s.grid.ny = doc.at("ny").get<int>();
        const auto& values = doc.at("values");
        if (!values.is_array()) {
            throw ValidationError("grid JSON \"values\" must be an array");
        }
        s.values.reserve(values.size());
        for (std::size_t k = 0; k < values.size(); ++k) {
            if (!values[k].is_number()) {
                throw ValidationError("grid JSON value #" + std::to_string(k) + " is not a number");
            }
            s.values.push_back(values[k].get<double>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed grid JSON: ") + e.what());
    }
    s.validate();
    return s;
}

namespace {

std::string trim(std::string s)
{
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

struct Row {
    double x;
    double y;
    double value;
    std::size_t line;
};

/// Distinct axis coordinates; checks they form a uniform ladder.
std::vector<double> uniform_axis(std::vector<double> coords, const std::string& source, char axis)
{
    std::sort(coords.begin(), coords.end());
    const double span = coords.back() - coords.front();
    const double merge = 1e-12 * std::max(1.0, std::abs(span));
    std::vector<double> distinct;
    for (double c : coords) {
        if (distinct.empty() || c - distinct.back() > merge) {
            distinct.push_back(c);
        }
    }
    if (distinct.size() < 2) {
        throw ValidationError(source + ": need at least two distinct " + axis + " coordinates");
    }
    const double step = span / static_cast<double>(distinct.size() - 1);
    for (std::size_t k = 0; k < distinct.size(); ++k) {
        const double expected = distinct.front() + static_cast<double>(k) * step;
        if (std::abs(distinct[k] - expected) > 1e-9 * span) {
            std::ostringstream os;
            os << source << ": " << axis << " spacing is not uniform near " << std::setprecision(17)
               << distinct[k];
            throw ValidationError(os.str());
        }
    }
    return distinct;
}

} // namespace

GridSample read_grid_csv(std::istream& in, const std::string& source)
{
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw ValidationError(source + ": empty file");
    }
    ++line_no;
    {
        std::string header;
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                header.push_back(c);
            }
        }
        if (header != "x,y,value") {
            throw ValidationError(source + ":1: expected header 'x,y,value', got '" + trim(line) + "'");
        }
    }

    std::vector<Row> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        std::array<double, 3> fields{};
        std::stringstream ss(line);
        std::string cell;
        int count = 0;
        bool ok = true;
        while (std::getline(ss, cell, ',')) {
            cell = trim(cell);
            if (count >= 3) {
                ok = false;
                break;
            }
            std::size_t used = 0;
            try {
                fields[count] = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (cell.empty() || used != cell.size() || !std::isfinite(fields[count])) {
                ok = false;
                break;
            }
            ++count;
        }
        if (!ok || count != 3) {
            throw ValidationError(source + ":" + std::to_string(line_no) + ": malformed record '" + trim(line) +
                                  "'");
        }
        rows.push_back({fields[0], fields[1], fields[2], line_no});
    }
    if (rows.empty()) {
        throw ValidationError(source + ": no data rows");
    }

    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& r : rows) {
        xs.push_back(r.x);
        ys.push_back(r.y);
    }
    const auto xaxis = uniform_axis(std::move(xs), source, 'x');
    const auto yaxis = uniform_axis(std::move(ys), source, 'y');

    GridSample s;
    s.grid = {{xaxis.front(), xaxis.back(), yaxis.front(), yaxis.back()},
              static_cast<int>(xaxis.size()),
              static_cast<int>(yaxis.size())};
    if (rows.size() != s.grid.size()) {
        throw ValidationError(source + ": " + std::to_string(rows.size()) + " rows for a " +
                              std::to_string(s.grid.nx) + "x" + std::to_string(s.grid.ny) + " grid");
    }
    s.values.assign(s.grid.size(), 0.0);
    std::vector<char> seen(s.grid.size(), 0);
    for (const auto& r : rows) {
        const int i = static_cast<int>(std::lround((r.x - s.grid.rect.x0) / s.grid.dx()));
        const int j = static_cast<int>(std::lround((r.y - s.grid.rect.y0) / s.grid.dy()));
        const std::size_t k = s.grid.index(i, j);
        if (seen[k]) {
            throw ValidationError(source + ":" + std::to_string(r.line) + ": duplicate node");
        }
        seen[k] = 1;
        s.values[k] = r.value;
    }
    s.validate();
    return s;
}

void write_grid_csv(std::ostream& out, const GridSample& sample)
{
    out << "x,y,value\n" << std::setprecision(17);
    for (int i = 0; i < sample.grid.nx; ++i) {
        for (int j = 0; j < sample.grid.ny; ++j) {
            out << sample.grid.x_at(i) << ',' << sample.grid.y_at(j) << ',' << sample.at(i, j) << '\n';
        }
    }
}

GridSample read_grid_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open grid file '" + path + "'");
    }
    const auto dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    if (ext == ".csv") {
        return read_grid_csv(in, path);
    }
    if (ext == ".json") {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError(path + ": " + e.what());
        }
        try {
            return grid_from_json(doc);
        } catch (const ValidationError& e) {
            throw ValidationError(path + ": " + e.what());
        }
    }
    throw ValidationError("grid file '" + path + "' must end in .json or .csv");
}

void write_profile_csv(std::ostream& out, const Profile1D& profile)
{
    out << "t,value\n" << std::setprecision(17);
    for (std::size_t k = 0; k < profile.size(); ++k) {
        out << profile.t_values()[k] << ',' << profile.values()[k] << '\n';
    }
}

} // namespace pdestruct
