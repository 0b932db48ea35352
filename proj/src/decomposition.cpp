#include "pdestruct/decomposition.hpp"

#include "pdestruct/differencing.hpp"
#include "pdestruct/errors.hpp"
#include "pdestruct/parallel.hpp"
#include "pdestruct/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace pdestruct {

namespace {

constexpr std::size_t kMaxLatticePoints = 2'000'000;
constexpr int kUniformFallbackSamples = 401;
/// First rung of the convergence ladder run at singular points.
constexpr double kExistenceProbeStep = 1e-1;

/// Samples of s = cx x + cy y over the grid, lattice-aligned when possible.
std::vector<double> lattice_samples(double cx, double cy, const GridGeometry& grid, int min_samples)
{
    grid.validate();
    const Rect& r = grid.rect;
    const double corners[] = {cx * r.x0 + cy * r.y0, cx * r.x0 + cy * r.y1, cx * r.x1 + cy * r.y0,
                              cx * r.x1 + cy * r.y1};
    const double smin = *std::min_element(std::begin(corners), std::end(corners));
    const double smax = *std::max_element(std::begin(corners), std::end(corners));

    std::size_t intervals = 0;
    const double ratio = std::abs(cx) * grid.dx() / (std::abs(cy) * grid.dy());
    for (int b = 1; b <= 64 && intervals == 0; ++b) {
        const double a = std::round(ratio * b);
        if (a >= 1.0 && std::abs(a / b - ratio) <= 1e-12 * ratio) {
            // node values step by a*delta along x and b*delta along y
            const double total = a * (grid.nx - 1) + static_cast<double>(b) * (grid.ny - 1);
            if (total + 1 <= kMaxLatticePoints) {
                intervals = static_cast<std::size_t>(total);
            }
        }
    }
    if (intervals == 0) {
        intervals = static_cast<std::size_t>(std::max(min_samples, kUniformFallbackSamples) - 1);
    } else if (min_samples > 0 && intervals + 1 < static_cast<std::size_t>(min_samples)) {
        const std::size_t refine = (static_cast<std::size_t>(min_samples) - 1 + intervals - 1) / intervals;
        intervals *= refine;
    }
    std::vector<double> t(intervals + 1);
    for (std::size_t m = 0; m <= intervals; ++m) {
        t[m] = smin + (smax - smin) * static_cast<double>(m) / static_cast<double>(intervals);
    }
    t.back() = smax;
    return t;
}

/// Point of the line cx x + cy y = s inside the rectangle whose y is closest
/// to `baseline`.
Point line_point(double cx, double cy, double s, const Rect& r, double baseline)
{
    // y as x sweeps [x0, x1]
    double ya = (s - cx * r.x0) / cy;
    double yb = (s - cx * r.x1) / cy;
    if (ya > yb) {
        std::swap(ya, yb);
    }
    const double lo = std::max(ya, r.y0);
    const double hi = std::min(yb, r.y1);
    const double y = lo <= hi ? std::clamp(baseline, lo, hi) : std::clamp(baseline, r.y0, r.y1);
    const double x = std::clamp((s - cy * y) / cx, r.x0, r.x1);
    return {x, y};
}

void require_inside(const Function2D& f, const GridGeometry& grid)
{
    grid.validate();
    if (!f.domain().contains(grid.rect)) {
        throw DomainError("grid rectangle is not inside the domain of '" + f.name() + "'");
    }
}

void require_baseline(const GridGeometry& grid, double baseline)
{
    if (!(baseline >= grid.rect.y0 && baseline <= grid.rect.y1)) {
        std::ostringstream os;
        os << "baseline y = " << baseline << " does not cross the grid rectangle";
        throw ValidationError(os.str());
    }
}

template <typename Fn>
double max_over_nodes(const GridGeometry& grid, int threads, Fn&& fn)
{
    std::vector<double> vals(grid.size(), 0.0);
    parallel_for(grid.size(), threads, [&](std::size_t k) {
        vals[k] = fn(grid.node(static_cast<int>(k / grid.ny), static_cast<int>(k % grid.ny)));
    });
    return vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end());
}

/// Probe nodes: a coarse sub-grid plus declared singular points inside the rectangle.
std::vector<Point> probe_points(const Function2D& f, const GridGeometry& grid, int per_axis)
{
    const int n = std::max(2, per_axis);
    const GridGeometry probe{grid.rect, n, n};
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            pts.push_back(probe.node(i, j));
        }
    }
    for (const auto& sp : f.singular_points()) {
        if (grid.rect.contains(sp.at) &&
            std::find(pts.begin(), pts.end(), sp.at) == pts.end()) {
            pts.push_back(sp.at);
        }
    }
    return pts;
}

std::string describe(Point p)
{
    std::ostringstream os;
    os.precision(17);
    os << '(' << p.x << ", " << p.y << ')';
    return os.str();
}

} // namespace

std::vector<double> characteristic_samples(double k, const GridGeometry& grid, int min_samples)
{
    if (k == 0.0 || !std::isfinite(k)) {
        throw ValidationError("characteristic slope k must be nonzero");
    }
    return lattice_samples(k, -1.0, grid, min_samples);
}

double residual_first_order(const Function2D& f, double k, const GridGeometry& grid, double h, int threads)
{
    if (k == 0.0 || !std::isfinite(k)) {
        throw ValidationError("characteristic slope k must be nonzero");
    }
    require_inside(f, grid);
    const DerivativePath px = DerivativePath::parse("x");
    const DerivativePath py = DerivativePath::parse("y");
    return max_over_nodes(grid, threads, [&](Point p) {
        return std::abs(fd_partial(f, px, p, h).value + k * fd_partial(f, py, p, h).value);
    });
}

ProfileExtraction extract_profile(const Function2D& f, double k, const GridGeometry& grid, const ProfileOptions& opts)
{
    require_inside(f, grid);
    require_baseline(grid, opts.baseline_y);
    const auto t = characteristic_samples(k, grid, opts.min_samples);
    std::vector<double> v(t.size());
    parallel_for(t.size(), opts.threads, [&](std::size_t m) {
        const Point p = line_point(k, -1.0, t[m], grid.rect, opts.baseline_y);
        v[m] = f(p.x, p.y);
    });
    ProfileExtraction out{Profile1D(t, std::move(v)), 0.0};
    out.reconstruction_error = max_over_nodes(grid, opts.threads, [&](Point p) {
        return std::abs(f(p.x, p.y) - out.profile(k * p.x - p.y));
    });
    return out;
}

Function2D apply_d1(const Function2D& f, double h)
{
    Evaluator2D eval = [f, h](double x, double y) { return dn_apply(f, 1, {x, y}, h); };
    PartialMap partials;
    const int order = f.exact_order() - 1;
    for (int n = 1; n <= order; ++n) {
        for (const auto& path : DerivativePath::all_of_order(n)) {
            const DerivativePath via_x = path.after(Axis::x);
            const DerivativePath via_y = path.after(Axis::y);
            partials.emplace(path.str(), [f, via_x, via_y](double x, double y) {
                return *f.exact_partial(via_x, {x, y}) + *f.exact_partial(via_y, {x, y});
            });
        }
    }
    std::vector<SingularPoint> singular;
    for (const auto& sp : f.singular_points()) {
        try {
            singular.push_back({sp.at, dn_apply(f, 1, sp.at, h)});
        } catch (const Error&) {
            // outside the usable domain; nothing to declare
        }
    }
    return Function2D("D1(" + f.name() + ")", f.domain(), std::move(eval), std::move(singular),
                      std::move(partials));
}

Function2D reconstruct_poly(const std::vector<Profile1D>& profiles, Rect domain)
{
    if (profiles.empty()) {
        throw ValidationError("reconstruction needs at least one profile");
    }
    auto shared = std::make_shared<const std::vector<Profile1D>>(profiles);
    return Function2D("poly_reconstruction", domain, [shared](double x, double y) {
        const double s = x + y;
        const double t = x - y;
        double sum = 0.0;
        double power = 1.0;
        for (const auto& phi : *shared) {
            sum += power * phi(t);
            power *= s;
        }
        return sum;
    });
}

namespace {

void check_dn_gate(const Function2D& f, int n, const GridGeometry& grid, double h, double gate, int per_axis)
{
    double worst = -1.0;
    Point worst_at{};
    for (const Point& p : probe_points(f, grid, per_axis)) {
        const double r = std::abs(dn_apply(f, n, p, h));
        if (!(r <= worst) || std::isnan(r)) {
            worst = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
            worst_at = p;
        }
    }
    if (worst > gate) {
        std::ostringstream os;
        os << "residual gate exceeded: |D_" << n << " f| = " << worst << " > " << gate << " at "
           << describe(worst_at) << " for '" << f.name() << "'";
        throw HypothesisViolation("residual_gate", worst_at.x, worst_at.y, worst, os.str());
    }
}

std::vector<Profile1D> decompose_level(const Function2D& f, int n, const GridGeometry& grid,
                                       const DecompositionOptions& opts, int level, bool fd_derived,
                                       std::vector<double>& gates)
{
    const double gate = fd_derived ? opts.residual_gate / std::pow(opts.h, level) : opts.residual_gate;
    gates.push_back(gate);
    check_dn_gate(f, n, grid, opts.h, gate, opts.probe_points);

    if (n == 1) {
        return {extract_profile(f, 1.0, grid, opts.profile).profile};
    }
    const Function2D g = apply_d1(f, opts.h);
    const bool g_fd = fd_derived || f.exact_order() < 1;
    const auto psi = decompose_level(g, n - 1, grid, opts, level + 1, g_fd, gates);

    std::vector<Profile1D> phis(n);
    for (int i = 1; i <= n - 1; ++i) {
        phis[i] = psi[i - 1].scaled(1.0 / (2.0 * i));
    }
    auto upper = std::make_shared<const std::vector<Profile1D>>(phis.begin() + 1, phis.end());
    const Function2D rest(
        "(" + f.name() + ") - u", grid.rect, [f, upper](double x, double y) {
            const double s = x + y;
            const double t = x - y;
            double u = 0.0;
            double power = s;
            for (const auto& phi : *upper) {
                u += power * phi(t);
                power *= s;
            }
            return f(x, y) - u;
        });
    phis[0] = extract_profile(rest, 1.0, grid, opts.profile).profile;
    return phis;
}

} // namespace

DecompositionResult decompose_dn(const Function2D& f, int n, const GridGeometry& grid,
                                 const DecompositionOptions& opts)
{
    if (n < 1) {
        throw ValidationError("decomposition order must be >= 1");
    }
    if (n > opts.max_order) {
        throw UnsupportedError("decomposition order " + std::to_string(n) + " exceeds the cap of " +
                               std::to_string(opts.max_order));
    }
    if (!(opts.h > 0.0) || !(opts.residual_gate > 0.0)) {
        throw ValidationError("decomposition needs h > 0 and a positive residual gate");
    }
    require_inside(f, grid);
    require_baseline(grid, opts.profile.baseline_y);

    DecompositionResult out;
    out.order = n;
    out.metadata.h = opts.h;
    out.metadata.grid = grid;
    out.metadata.exact_partials = f.exact_order() >= n;
    out.profiles = decompose_level(f, n, grid, opts, 0, f.exact_order() < n, out.metadata.gates);

    const int threads = opts.profile.threads;
    out.residual = max_over_nodes(grid, threads, [&](Point p) { return std::abs(dn_apply(f, n, p, opts.h)); });
    const Function2D rebuilt = reconstruct_poly(out.profiles, grid.rect);
    out.reconstruction_error =
        max_over_nodes(grid, threads, [&](Point p) { return std::abs(f(p.x, p.y) - rebuilt(p.x, p.y)); });
    return out;
}

// ---------------------------------------------------------------------------
// Wave split

namespace {

void check_wave_hypotheses(const Function2D& f, const GridGeometry& grid, const WaveOptions& opts, WaveSplit& out)
{
    const DerivativePath xx = DerivativePath::parse("xx");
    const DerivativePath yy = DerivativePath::parse("yy");
    const DerivativePath xy = DerivativePath::parse("xy");
    const DerivativePath yx = DerivativePath::parse("yx");

    // At declared singular points the formulas give no exact partials; the
    // mixed partials must at least converge there.
    for (const auto& sp : f.singular_points()) {
        if (!grid.rect.contains(sp.at)) {
            continue;
        }
        for (const auto* path : {&xy, &yx}) {
            const auto ladder = fd_ladder(f, *path, sp.at, kExistenceProbeStep);
            if (ladder.diverged) {
                std::ostringstream os;
                os << "f''_" << path->str() << " does not exist at " << describe(sp.at)
                   << ": difference quotients grow without bound (";
                for (std::size_t r = 0; r < ladder.values.size(); ++r) {
                    os << (r ? ", " : "") << ladder.values[r];
                }
                os << ")";
                throw HypothesisViolation("mixed_partial_existence", sp.at.x, sp.at.y, ladder.values.back(),
                                          os.str());
            }
        }
    }

    Point worst_sym{};
    Point worst_eq{};
    for (const Point& p : probe_points(f, grid, opts.probe_points)) {
        const double sym = std::abs(fd_partial(f, xy, p, opts.h).value - fd_partial(f, yx, p, opts.h).value);
        const double eq = std::abs(fd_partial(f, xx, p, opts.h).value - fd_partial(f, yy, p, opts.h).value);
        if (!(sym <= out.symmetry_defect)) {
            out.symmetry_defect = std::isnan(sym) ? std::numeric_limits<double>::infinity() : sym;
            worst_sym = p;
        }
        if (!(eq <= out.equality_defect)) {
            out.equality_defect = std::isnan(eq) ? std::numeric_limits<double>::infinity() : eq;
            worst_eq = p;
        }
    }
    if (out.symmetry_defect > opts.gate) {
        std::ostringstream os;
        os << "f''_xy = f''_yx fails: defect " << out.symmetry_defect << " > " << opts.gate << " at "
           << describe(worst_sym);
        throw HypothesisViolation("mixed_partial_symmetry", worst_sym.x, worst_sym.y, out.symmetry_defect, os.str());
    }
    if (out.equality_defect > opts.gate) {
        std::ostringstream os;
        os << "f''_xx = f''_yy fails: defect " << out.equality_defect << " > " << opts.gate << " at "
           << describe(worst_eq);
        throw HypothesisViolation("second_partial_equality", worst_eq.x, worst_eq.y, out.equality_defect, os.str());
    }
}

} // namespace

WaveSplit decompose_wave(const Function2D& f, const GridGeometry& grid, const WaveOptions& opts)
{
    require_inside(f, grid);
    require_baseline(grid, opts.baseline_y);
    if (!(opts.h > 0.0) || !(opts.gate > 0.0) || opts.samples < 2 || opts.quadrature_refinement < 1) {
        throw ValidationError("wave split needs h > 0, gate > 0, samples >= 2 and refinement >= 1");
    }
    WaveSplit out;
    check_wave_hypotheses(f, grid, opts, out);

    const DerivativePath px = DerivativePath::parse("x");
    const DerivativePath py = DerivativePath::parse("y");
    const double h = opts.h;
    const Function2D g("f'_x - f'_y", f.domain(), [f, px, py, h](double x, double y) {
        return fd_partial(f, px, {x, y}, h).value - fd_partial(f, py, {x, y}, h).value;
    });

    const auto constancy = constancy_along_characteristics(g, 1.0, grid, opts.gate, 101, 101, opts.threads);
    out.characteristic_defect = constancy.max_deviation;
    if (!constancy.pass) {
        const auto worst = std::max_element(constancy.deviations.begin(), constancy.deviations.end());
        const double c = constancy.offsets[static_cast<std::size_t>(worst - constancy.deviations.begin())];
        const Point at = line_point(1.0, -1.0, c, grid.rect, opts.baseline_y);
        std::ostringstream os;
        os << "f'_x - f'_y is not a function of x - y: deviation " << *worst << " > " << opts.gate
           << " on the line x - y = " << c;
        throw HypothesisViolation("characteristic_constancy", at.x, at.y, *worst, os.str());
    }

    const Rect& rect = grid.rect;
    const double base = opts.baseline_y;
    const auto g_on_line = [&](double t) {
        const Point p = line_point(1.0, -1.0, t, rect, base);
        return g(p.x, p.y);
    };

    // psi~ and the refined cumulative trapezoid of psi~ over t = x - y
    const auto t = characteristic_samples(1.0, grid, opts.samples);
    const int refine = opts.quadrature_refinement;
    std::vector<double> tilde(t.size());
    std::vector<double> segment(t.size(), 0.0);
    parallel_for(t.size(), opts.threads, [&](std::size_t m) {
        tilde[m] = g_on_line(t[m]);
        if (m + 1 < t.size()) {
            const double a = t[m];
            const double step = (t[m + 1] - a) / refine;
            double acc = 0.0;
            double prev = g_on_line(a);
            for (int q = 1; q <= refine; ++q) {
                const double next = g_on_line(q == refine ? t[m + 1] : a + q * step);
                acc += 0.5 * (prev + next) * step;
                prev = next;
            }
            segment[m] = acc;
        }
    });
    std::vector<double> integral(t.size(), 0.0);
    for (std::size_t m = 1; m < t.size(); ++m) {
        integral[m] = integral[m - 1] + segment[m - 1];
    }

    // gauge psi(0) = 0, or at the nearest end of the range when 0 is outside it
    double at_zero = 0.0;
    if (0.0 <= t.front()) {
        at_zero = integral.front();
    } else if (0.0 >= t.back()) {
        at_zero = integral.back();
    } else {
        const std::size_t m =
            static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), 0.0) - t.begin()) - 1;
        const double step = (0.0 - t[m]) / refine;
        double acc = 0.0;
        if (step > 0.0) {
            double prev = g_on_line(t[m]);
            for (int q = 1; q <= refine; ++q) {
                const double next = g_on_line(q == refine ? 0.0 : t[m] + q * step);
                acc += 0.5 * (prev + next) * step;
                prev = next;
            }
        }
        at_zero = integral[m] + acc;
    }
    std::vector<double> psi(t.size());
    for (std::size_t m = 0; m < t.size(); ++m) {
        psi[m] = 0.5 * (integral[m] - at_zero);
    }
    out.psi_tilde = Profile1D(t, tilde);
    out.psi = Profile1D(t, std::move(psi));

    // phi over s = x + y
    const auto s = lattice_samples(1.0, 1.0, grid, opts.samples);
    std::vector<double> phi(s.size());
    parallel_for(s.size(), opts.threads, [&](std::size_t m) {
        const Point p = line_point(1.0, 1.0, s[m], rect, base);
        phi[m] = f(p.x, p.y) - out.psi(p.x - p.y);
    });
    out.phi = Profile1D(s, std::move(phi));

    out.reconstruction_error = max_over_nodes(grid, opts.threads, [&](Point p) {
        return std::abs(f(p.x, p.y) - out.phi(p.x + p.y) - out.psi(p.x - p.y));
    });
    return out;
}

} // namespace pdestruct
