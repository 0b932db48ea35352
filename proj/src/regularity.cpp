#include "pdestruct/regularity.hpp"

#include "pdestruct/differencing.hpp"
#include "pdestruct/errors.hpp"
#include "pdestruct/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pdestruct {

namespace {

void check_radii(std::span<const double> radii, int samples)
{
    if (radii.empty()) {
        throw ValidationError("oscillation needs at least one radius");
    }
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0.0) || !std::isfinite(radii[k])) {
            throw ValidationError("oscillation radii must be positive");
        }
        if (k > 0 && !(radii[k] < radii[k - 1])) {
            throw ValidationError("oscillation radii must be strictly decreasing");
        }
    }
    if (samples < 4) {
        throw ValidationError("oscillation needs at least 4 samples per radius");
    }
}

struct BallStats {
    double range = 0.0;
    double max_quotient = 0.0;
};

struct AngleTable {
    std::vector<double> c;
    std::vector<double> s;

    explicit AngleTable(int samples) : c(samples), s(samples)
    {
        for (int m = 0; m < samples; ++m) {
            const double theta = 2.0 * std::numbers::pi * m / samples;
            c[m] = std::cos(theta);
            s[m] = std::sin(theta);
        }
    }
};

/// Sampled range of f over the ball; points outside the domain are skipped
/// when `clip` is set.
BallStats ball_stats(const Function2D& f, Point p, double r, const AngleTable& angles, bool clip)
{
    const double centre = f(p.x, p.y);
    double lo = centre;
    double hi = centre;
    double quotient = 0.0;
    const Rect& dom = f.domain();
    for (double frac : kBallRings) {
        const double rho = frac * r;
        for (std::size_t m = 0; m < angles.c.size(); ++m) {
            const Point q{p.x + rho * angles.c[m], p.y + rho * angles.s[m]};
            if (clip && !dom.contains(q)) {
                continue;
            }
            const double v = f(q.x, q.y);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            quotient = std::max(quotient, std::abs(v - centre) / rho);
        }
    }
    return {hi - lo, quotient};
}

} // namespace

OscillationEstimate oscillation(const Function2D& f, Point p, std::span<const double> radii, int samples_per_radius)
{
    check_radii(radii, samples_per_radius);
    const Rect& dom = f.domain();
    const double r0 = radii.front();
    if (!dom.contains(Rect{p.x - r0, p.x + r0, p.y - r0, p.y + r0})) {
        throw DomainError("oscillation ball of radius " + std::to_string(r0) + " leaves the domain of '" +
                          f.name() + "'");
    }
    const AngleTable angles(samples_per_radius);
    OscillationEstimate out;
    double running = std::numeric_limits<double>::infinity();
    for (double r : radii) {
        running = std::min(running, ball_stats(f, p, r, angles, false).range);
        out.radii.push_back(r);
        out.estimates.push_back(running);
    }
    out.value = out.estimates.back();
    return out;
}

NowhereDenseVerdict box_rule(int nx, int ny, const std::vector<char>& flagged, int k)
{
    if (k < 1) {
        throw ValidationError("box size must be >= 1");
    }
    if (flagged.size() != static_cast<std::size_t>(nx) * ny) {
        throw ValidationError("flag mask does not match the grid");
    }
    const int kx = std::min(k, nx);
    const int ky = std::min(k, ny);
    const int sx = (kx + 1) / 2;
    const int sy = (ky + 1) / 2;

    // prefix[(i)(ny+1)+j] = flags in [0,i) x [0,j)
    std::vector<int> prefix(static_cast<std::size_t>(nx + 1) * (ny + 1), 0);
    auto P = [&](int i, int j) -> int& { return prefix[static_cast<std::size_t>(i) * (ny + 1) + j]; };
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            P(i + 1, j + 1) = P(i, j + 1) + P(i + 1, j) - P(i, j) + (flagged[static_cast<std::size_t>(i) * ny + j] ? 1 : 0);
        }
    }
    auto count = [&](int i0, int j0, int w, int h) { return P(i0 + w, j0 + h) - P(i0, j0 + h) - P(i0 + w, j0) + P(i0, j0); };

    NowhereDenseVerdict out;
    out.box = k;
    out.sub_box = (k + 1) / 2;
    // Boxes partition the grid starting at node (0,0); a trailing partial box
    // is shifted back so it ends on the grid edge.
    auto starts = [](int n, int size) {
        std::vector<int> out;
        for (int s = 0; s < n; s += size) {
            out.push_back(std::min(s, n - size));
        }
        return out;
    };
    for (int i0 : starts(nx, kx)) {
        for (int j0 : starts(ny, ky)) {
            BoxWitness w{{i0, j0}, std::nullopt};
            for (int a = i0; a + sx <= i0 + kx && !w.clean_sub_box; ++a) {
                for (int b = j0; b + sy <= j0 + ky; ++b) {
                    if (count(a, b, sx, sy) == 0) {
                        w.clean_sub_box = GridNode{a, b};
                        break;
                    }
                }
            }
            if (!w.clean_sub_box) {
                out.nowhere_dense = false;
            }
            out.witnesses.push_back(w);
        }
    }
    return out;
}

double default_discontinuity_threshold(std::span<const double> radii, int samples_per_radius)
{
    const Function2D smooth = make_plane_wave(profile_get("sin"), 1.0);
    return 10.0 * oscillation(smooth, {0.0, 0.0}, radii, samples_per_radius).value;
}

RegularityReport discontinuity_field(const Function2D& f, const GridGeometry& grid, const DiscontinuityOptions& opts)
{
    grid.validate();
    check_radii(opts.radii, opts.samples_per_radius);
    if (!f.domain().contains(grid.rect)) {
        throw DomainError("regularity grid is not inside the domain of '" + f.name() + "'");
    }
    if (!opts.mask.empty() && opts.mask.size() != grid.size()) {
        throw ValidationError("regularity mask does not match the grid");
    }
    RegularityReport out;
    out.grid = grid;
    out.threshold = opts.threshold.value_or(default_discontinuity_threshold(opts.radii, opts.samples_per_radius));
    out.oscillation.assign(grid.size(), 0.0);
    out.lipschitz.assign(grid.size(), 0.0);
    out.lipschitz_divergent.assign(grid.size(), 0);

    if (!(opts.persistence >= 0.0 && opts.persistence <= 1.0)) {
        throw ValidationError("persistence must lie in [0, 1]");
    }
    std::vector<char> persistent(grid.size(), 0);
    const AngleTable angles(opts.samples_per_radius);
    parallel_for(grid.size(), opts.threads, [&](std::size_t k) {
        if (!opts.mask.empty() && !opts.mask[k]) {
            return;
        }
        const Point p = grid.node(static_cast<int>(k / grid.ny), static_cast<int>(k % grid.ny));
        double running = std::numeric_limits<double>::infinity();
        double previous = running;
        std::vector<double> quotients;
        for (double r : opts.radii) {
            const BallStats st = ball_stats(f, p, r, angles, true);
            previous = running;
            running = std::min(running, st.range);
            quotients.push_back(st.max_quotient);
        }
        out.oscillation[k] = running;
        persistent[k] = opts.radii.size() < 2 || running >= opts.persistence * previous ? 1 : 0;
        out.lipschitz[k] = quotients.back();
        out.lipschitz_divergent[k] = grows_without_bound(quotients) ? 1 : 0;
    });

    std::vector<char> flags(grid.size(), 0);
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t k = grid.index(i, j);
            if (out.oscillation[k] > out.threshold && persistent[k]) {
                flags[k] = 1;
                out.flagged.push_back({i, j});
            }
        }
    }
    out.verdict = box_rule(grid.nx, grid.ny, flags, opts.box);
    return out;
}

ChangeableCover lipschitz_cover(const Evaluator1D& g, double epsilon, double a, double b, int resolution)
{
    if (!(epsilon > 0.0)) {
        throw ValidationError("Lipschitz cover needs epsilon > 0");
    }
    if (!(a < b)) {
        throw ValidationError("Lipschitz cover needs a < b");
    }
    if (resolution < 1) {
        throw ValidationError("Lipschitz cover needs resolution >= 1");
    }
    constexpr int kSubCells = 4;
    constexpr int kSamples = 9;
    const int cells = kSubCells * resolution;
    const int points = cells * (kSamples - 1) + 1;
    std::vector<double> xs(points);
    std::vector<double> gs(points);
    for (int k = 0; k < points; ++k) {
        xs[k] = a + (b - a) * k / (points - 1);
        gs[k] = g(xs[k]);
    }

    std::vector<char> good(cells, 1);
    for (int c = 0; c < cells; ++c) {
        const int base = c * (kSamples - 1);
        for (int u = 0; u < kSamples && good[c]; ++u) {
            for (int v = u + 1; v < kSamples; ++v) {
                const double q = (gs[base + v] - gs[base + u]) / (xs[base + v] - xs[base + u]);
                if (!(std::abs(q) <= epsilon)) {
                    good[c] = 0;
                    break;
                }
            }
        }
    }

    ChangeableCover out;
    out.epsilon = epsilon;
    int bad_run = 0;
    int longest_bad = 0;
    for (int c = 0; c < cells;) {
        if (!good[c]) {
            ++bad_run;
            longest_bad = std::max(longest_bad, bad_run);
            ++c;
            continue;
        }
        bad_run = 0;
        int end = c;
        while (end < cells && good[end]) {
            ++end;
        }
        out.intervals.push_back({xs[c * (kSamples - 1)], xs[end * (kSamples - 1)]});
        c = end;
    }
    out.dense = longest_bad < kSubCells;
    return out;
}

ConstancyReport constancy_along_characteristics(const Function2D& f, double k, const GridGeometry& grid, double tol,
                                                int lines, int samples_per_line, int threads)
{
    if (k == 0.0 || !std::isfinite(k)) {
        throw ValidationError("characteristic slope k must be nonzero");
    }
    if (lines < 1 || samples_per_line < 2) {
        throw ValidationError("constancy check needs lines >= 1 and samples_per_line >= 2");
    }
    grid.validate();
    const Rect& r = grid.rect;
    const double corners[] = {k * r.x0 - r.y0, k * r.x0 - r.y1, k * r.x1 - r.y0, k * r.x1 - r.y1};
    const double smin = *std::min_element(std::begin(corners), std::end(corners));
    const double smax = *std::max_element(std::begin(corners), std::end(corners));

    ConstancyReport out;
    out.k = k;
    out.tol = tol;
    out.offsets.resize(lines);
    out.deviations.assign(lines, 0.0);
    parallel_for(static_cast<std::size_t>(lines), threads, [&](std::size_t m) {
        const double c = smin + (smax - smin) * static_cast<double>(m + 1) / (lines + 1);
        out.offsets[m] = c;
        // y = k x - c inside [y0, y1]
        double xa = (c + r.y0) / k;
        double xb = (c + r.y1) / k;
        if (xa > xb) {
            std::swap(xa, xb);
        }
        xa = std::max(xa, r.x0);
        xb = std::min(xb, r.x1);
        if (!(xa <= xb)) {
            return;
        }
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int q = 0; q < samples_per_line; ++q) {
            const double x = xa + (xb - xa) * q / (samples_per_line - 1);
            const double y = std::clamp(k * x - c, r.y0, r.y1);
            const double v = f(x, y);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        out.deviations[m] = hi - lo;
    });
    out.max_deviation = *std::max_element(out.deviations.begin(), out.deviations.end());
    out.pass = out.max_deviation <= tol;
    return out;
}

} // namespace pdestruct
