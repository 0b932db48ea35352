#include "pdestruct/baire_lambda.hpp"

#include "pdestruct/errors.hpp"
#include "pdestruct/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdestruct {

namespace {

constexpr int kMaxResolution = 4096;

/// Whether all quotients across x within delta fit in a window of width eps.
bool admissible(const Evaluator1D& g, double x, double delta, double epsilon, int resolution,
                std::vector<double>& left, std::vector<double>& right, std::vector<double>& gl,
                std::vector<double>& gr)
{
    const double step = delta / resolution;
    for (int k = 0; k < resolution; ++k) {
        left[k] = x - delta + (k + 0.5) * step;
        right[k] = x + (k + 0.5) * step;
        gl[k] = g(left[k]);
        gr[k] = g(right[k]);
        if (!std::isfinite(gl[k]) || !std::isfinite(gr[k])) {
            throw NumericalError("non-finite sample near x = " + std::to_string(x) + " in lambda computation");
        }
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < resolution; ++a) {
        for (int b = 0; b < resolution; ++b) {
            const double r = (gr[b] - gl[a]) / (right[b] - left[a]);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        if (hi - lo > epsilon) {
            return false;
        }
    }
    return hi - lo <= epsilon;
}

} // namespace

double lambda_1d(const Evaluator1D& g, double x, double epsilon, int resolution, double max_delta)
{
    if (!(epsilon > 0.0)) {
        throw ValidationError("lambda needs epsilon > 0");
    }
    if (resolution < 8 || resolution > kMaxResolution) {
        throw ValidationError("lambda resolution must be in [8, " + std::to_string(kMaxResolution) + "]");
    }
    std::vector<double> left(resolution), right(resolution), gl(resolution), gr(resolution);
    double delta = 1.0;
    for (int k = 0; k <= resolution; ++k, delta *= 0.5) {
        if (delta > max_delta) {
            continue;
        }
        if (admissible(g, x, delta, epsilon, resolution, left, right, gl, gr)) {
            return delta;
        }
    }
    return 0.0;
}

LambdaField lambda_field(const Function2D& f, Axis axis, double epsilon, const GridGeometry& grid, int resolution,
                         int threads)
{
    grid.validate();
    if (!f.domain().contains(grid.rect)) {
        throw DomainError("lambda grid is not inside the domain of '" + f.name() + "'");
    }
    LambdaField out{grid, epsilon, axis, resolution, std::vector<double>(grid.size(), 0.0),
                    std::vector<double>(grid.size(), 0.0)};
    const Rect& dom = f.domain();
    parallel_for(grid.size(), threads, [&](std::size_t k) {
        const int i = static_cast<int>(k / grid.ny);
        const int j = static_cast<int>(k % grid.ny);
        const Point p = grid.node(i, j);
        double x = 0.0;
        double room = 0.0;
        Evaluator1D section;
        if (axis == Axis::x) {
            x = p.x;
            room = std::min(p.x - dom.x0, dom.x1 - p.x);
            section = [&f, y = p.y](double t) { return f(t, y); };
        } else {
            x = p.y;
            room = std::min(p.y - dom.y0, dom.y1 - p.y);
            section = [&f, xf = p.x](double t) { return f(xf, t); };
        }
        if (room > 0.0) {
            const double cap = std::min(1.0, room);
            double ceiling = 1.0;
            while (ceiling > cap) {
                ceiling *= 0.5;
            }
            out.ceilings[k] = ceiling;
            out.values[k] = lambda_1d(section, x, epsilon, resolution, cap);
        }
    });
    return out;
}

namespace {

std::vector<GridNode> bracketed_violations(const GridGeometry& grid, std::span<const double> lower,
                                           std::span<const double> upper, double tol)
{
    if (lower.size() != grid.size() || upper.size() != grid.size()) {
        throw ValidationError("field size does not match its grid");
    }
    std::vector<GridNode> out;
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            double neighbour_max = -std::numeric_limits<double>::infinity();
            for (int di = -1; di <= 1; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const int a = i + di;
                    const int b = j + dj;
                    if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= grid.nx || b >= grid.ny) {
                        continue;
                    }
                    neighbour_max = std::max(neighbour_max, lower[grid.index(a, b)]);
                }
            }
            if (upper[grid.index(i, j)] < neighbour_max - tol) {
                out.push_back({i, j});
            }
        }
    }
    return out;
}

} // namespace

std::vector<GridNode> usc_violations(const GridGeometry& grid, std::span<const double> values, double tol)
{
    return bracketed_violations(grid, values, values, tol);
}

std::vector<double> lambda_upper_bounds(const LambdaField& field)
{
    if (field.ceilings.size() != field.values.size()) {
        throw ValidationError("lambda field carries no ladder ceilings");
    }
    const double smallest = std::ldexp(1.0, -field.resolution);
    std::vector<double> upper(field.values.size());
    for (std::size_t k = 0; k < upper.size(); ++k) {
        const double v = field.values[k];
        if (v == field.ceilings[k]) {
            // nothing above the ceiling was tried; only the global cap 1 bounds it
            upper[k] = v == 1.0 ? 1.0 : std::numeric_limits<double>::infinity();
        } else if (v == 0.0) {
            upper[k] = smallest;
        } else {
            upper[k] = 2.0 * v;
        }
    }
    return upper;
}

std::vector<GridNode> usc_violations(const LambdaField& field, double tol)
{
    const auto upper = lambda_upper_bounds(field);
    return bracketed_violations(field.grid, field.values, upper, tol);
}

} // namespace pdestruct
