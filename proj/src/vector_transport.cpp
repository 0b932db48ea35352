#include "pdestruct/vector_transport.hpp"

#include "pdestruct/differencing.hpp"
#include "pdestruct/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pdestruct {

bool Box::contains(std::span<const double> p) const noexcept
{
    if (p.size() != lo.size()) {
        return false;
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (!(p[k] >= lo[k] && p[k] <= hi[k])) {
            return false;
        }
    }
    return true;
}

void Box::validate() const
{
    if (lo.empty() || lo.size() != hi.size()) {
        throw ValidationError("box bounds must be non-empty and of equal length");
    }
    for (std::size_t k = 0; k < lo.size(); ++k) {
        if (!(lo[k] < hi[k])) {
            throw ValidationError("box needs lo < hi in every coordinate");
        }
    }
}

VectorMap::VectorMap(std::string name, int d, int m, Box x_box, Box y_box, VectorEvaluator evaluator)
    : name_(std::move(name)), d_(d), m_(m), x_box_(std::move(x_box)), y_box_(std::move(y_box)),
      eval_(std::move(evaluator))
{
    if (d < 1 || m < 1) {
        throw ValidationError("vector map needs d >= 1 and m >= 1");
    }
    x_box_.validate();
    y_box_.validate();
    if (x_box_.dim() != d || y_box_.dim() != d) {
        throw ValidationError("vector map boxes must have dimension d");
    }
    if (!eval_) {
        throw ValidationError("vector map needs an evaluator");
    }
}

namespace {

std::string describe(std::span<const double> v)
{
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t k = 0; k < v.size(); ++k) {
        os << (k ? ", " : "") << v[k];
    }
    os << ')';
    return os.str();
}

} // namespace

Vec VectorMap::operator()(std::span<const double> x, std::span<const double> y) const
{
    if (!x_box_.contains(x) || !y_box_.contains(y)) {
        throw DomainError("probe " + describe(x) + ", " + describe(y) + " outside the domain of '" + name_ + "'");
    }
    Vec out = eval_(x, y);
    if (static_cast<int>(out.size()) != m_) {
        throw ValidationError("vector map '" + name_ + "' returned the wrong number of coordinates");
    }
    for (double v : out) {
        if (!std::isfinite(v)) {
            throw NumericalError("non-finite output of '" + name_ + "' at " + describe(x) + ", " + describe(y));
        }
    }
    return out;
}

DirectionalDerivative l_directional_derivative(const SectionMap& g, std::span<const double> x0,
                                               std::span<const double> direction, int coordinate, double step)
{
    if (x0.size() != direction.size()) {
        throw ValidationError("direction and base point differ in dimension");
    }
    if (std::all_of(direction.begin(), direction.end(), [](double v) { return v == 0.0; })) {
        throw ValidationError("direction must be nonzero");
    }
    if (!(step > 0.0)) {
        throw ValidationError("step must be positive");
    }
    auto along = [&](double t) {
        Vec p(x0.begin(), x0.end());
        for (std::size_t k = 0; k < p.size(); ++k) {
            p[k] += t * direction[k];
        }
        const Vec v = g(p);
        if (coordinate < 0 || coordinate >= static_cast<int>(v.size())) {
            throw ValidationError("coordinate functional index out of range");
        }
        return v[coordinate];
    };
    auto central = [&](double s) { return (along(s) - along(-s)) / (2.0 * s); };

    DirectionalDerivative out;
    out.coarse = central(step);
    out.fine = central(step / kLadderRefinement);
    out.error_estimate = std::abs(out.fine - out.coarse);
    if (grows_without_bound({out.coarse, out.fine})) {
        std::ostringstream os;
        os.precision(17);
        os << "not differentiable at " << describe(x0) << " along " << describe(direction) << ": quotient grew from "
           << out.coarse << " to " << out.fine;
        throw NumericalError(os.str());
    }
    const double r2 = kLadderRefinement * kLadderRefinement;
    out.value = (r2 * out.fine - out.coarse) / (r2 - 1.0);
    return out;
}

std::vector<Vec> standard_basis(int d)
{
    std::vector<Vec> basis(d, Vec(d, 0.0));
    for (int k = 0; k < d; ++k) {
        basis[k][k] = 1.0;
    }
    return basis;
}

GateauxReport gateaux_residual(const VectorMap& f, std::span<const double> x, std::span<const double> y,
                               const std::vector<Vec>& basis, double step)
{
    if (static_cast<int>(x.size()) != f.d() || static_cast<int>(y.size()) != f.d()) {
        throw ValidationError("probe dimension does not match the map");
    }
    if (static_cast<int>(basis.size()) < f.d()) {
        throw ValidationError("basis must span R^d");
    }
    const Vec xv(x.begin(), x.end());
    const Vec yv(y.begin(), y.end());
    const SectionMap first = [&](std::span<const double> p) { return f(p, yv); };
    const SectionMap second = [&](std::span<const double> p) { return f(xv, p); };

    GateauxReport out;
    for (std::size_t b = 0; b < basis.size(); ++b) {
        for (int l = 0; l < f.m(); ++l) {
            GateauxEntry e;
            e.basis = static_cast<int>(b);
            e.coordinate = l;
            e.d_first = l_directional_derivative(first, xv, basis[b], l, step).value;
            e.d_second = l_directional_derivative(second, yv, basis[b], l, step).value;
            e.residual = std::abs(e.d_first + e.d_second);
            out.max_residual = std::max(out.max_residual, e.residual);
            out.entries.push_back(e);
        }
    }
    return out;
}

std::vector<ProbePair> probe_pairs(const Box& x_region, const Box& y_region, int count)
{
    x_region.validate();
    y_region.validate();
    if (count < 1) {
        throw ValidationError("probe count must be >= 1");
    }
    // Kronecker sequence with square roots of primes as generators
    static constexpr double kGenerators[] = {1.4142135623730951, 1.7320508075688772, 2.2360679774997898,
                                             2.6457513110645907, 3.3166247903554,    3.6055512754639891};
    auto sequence = [&](const Box& box, int offset) {
        std::vector<Vec> pts;
        for (int i = 0; i < count; ++i) {
            Vec p(box.dim());
            for (int k = 0; k < box.dim(); ++k) {
                const double g = kGenerators[(k + offset) % 6];
                const double frac = std::fmod((i + 1) * g, 1.0);
                p[k] = box.lo[k] + frac * (box.hi[k] - box.lo[k]);
            }
            pts.push_back(std::move(p));
        }
        return pts;
    };
    const auto xs = sequence(x_region, 0);
    const auto ys = sequence(y_region, 3);
    std::vector<ProbePair> out;
    for (const auto& x : xs) {
        for (const auto& y : ys) {
            out.push_back({x, y});
        }
    }
    return out;
}

TranslationVerdict verify_translation(const VectorMap& f, const std::vector<ProbePair>& probes, double tol,
                                      int phi_points_per_axis)
{
    if (f.d() > 3) {
        throw UnsupportedError("translation check tabulates phi on a grid and supports d <= 3, got d = " +
                               std::to_string(f.d()));
    }
    if (phi_points_per_axis < 2) {
        throw ValidationError("phi tabulation needs at least 2 points per axis");
    }
    const Vec zero(f.d(), 0.0);
    TranslationVerdict out;
    for (const auto& pr : probes) {
        Vec diff(f.d());
        for (int k = 0; k < f.d(); ++k) {
            diff[k] = pr.x[k] - pr.y[k];
        }
        const Vec direct = f(pr.x, pr.y);
        const Vec shifted = f(diff, zero);
        double defect = 0.0;
        for (int l = 0; l < f.m(); ++l) {
            defect = std::max(defect, std::abs(direct[l] - shifted[l]));
        }
        out.defects.push_back(defect);
        out.max_defect = std::max(out.max_defect, defect);
    }
    out.pass = out.max_defect <= tol;

    const Box& box = f.x_box();
    std::size_t total = 1;
    for (int k = 0; k < f.d(); ++k) {
        total *= static_cast<std::size_t>(phi_points_per_axis);
    }
    for (std::size_t idx = 0; idx < total; ++idx) {
        Vec p(f.d());
        std::size_t rest = idx;
        for (int k = f.d() - 1; k >= 0; --k) {
            const std::size_t i = rest % phi_points_per_axis;
            rest /= phi_points_per_axis;
            p[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * static_cast<double>(i) / (phi_points_per_axis - 1);
        }
        out.phi_values.push_back(f(p, zero));
        out.phi_points.push_back(std::move(p));
    }
    return out;
}

std::vector<std::string> vector_catalog_names() { return {"translation", "sum", "chain", "sin_square"}; }

VectorMap vector_catalog_get(std::string_view name, int d)
{
    auto cube = [](int dim) { return Box{Vec(dim, -2.0), Vec(dim, 2.0)}; };
    if (name == "translation" || name == "sum") {
        const double sign = name == "translation" ? -1.0 : 1.0;
        return VectorMap(std::string(name), d, d, cube(d), cube(d),
                         [sign](std::span<const double> x, std::span<const double> y) {
                             Vec out(x.size());
                             for (std::size_t k = 0; k < x.size(); ++k) {
                                 out[k] = x[k] + sign * y[k];
                             }
                             return out;
                         });
    }
    if (name == "chain" || name == "sin_square") {
        if (d != 2) {
            throw ValidationError("vector map '" + std::string(name) + "' is defined for d = 2");
        }
        if (name == "chain") {
            return VectorMap("chain", 2, 2, cube(2), cube(2), [](std::span<const double> x, std::span<const double> y) {
                const double u1 = x[0] - y[0];
                const double u2 = x[1] - y[1];
                return Vec{u1 * u1 + u2 * u2, u1};
            });
        }
        return VectorMap("sin_square", 2, 2, cube(2), cube(2),
                         [](std::span<const double> x, std::span<const double> y) {
                             const double u2 = x[1] - y[1];
                             return Vec{std::sin(x[0] - y[0]), u2 * u2};
                         });
    }
    std::string known;
    for (const auto& n : vector_catalog_names()) {
        known += (known.empty() ? "" : ", ") + n;
    }
    throw LookupError("unknown vector map '" + std::string(name) + "'; available: " + known);
}

} // namespace pdestruct
