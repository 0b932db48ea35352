#include "pdestruct/differencing.hpp"

#include "pdestruct/errors.hpp"

#include <cmath>
#include <sstream>

namespace pdestruct {

double diff_quotient(const Evaluator1D& g, double x1, double x2)
{
    if (x1 == x2) {
        throw DegenerateInputError("difference quotient needs distinct arguments");
    }
    return (g(x1) - g(x2)) / (x1 - x2);
}

namespace {

std::string describe(Point p)
{
    std::ostringstream os;
    os.precision(17);
    os << '(' << p.x << ", " << p.y << ')';
    return os.str();
}

Point shifted(Point p, Axis a, double d)
{
    return a == Axis::x ? Point{p.x + d, p.y} : Point{p.x, p.y + d};
}

/// steps[k] is the step used for axes[k]; axes[0] is applied first.
double nested(const Function2D& f, const std::vector<Axis>& axes, const std::vector<double>& steps,
              std::size_t level, Point p)
{
    if (level == 0) {
        const double v = f(p.x, p.y);
        if (!std::isfinite(v)) {
            throw NumericalError("non-finite value " + std::to_string(v) + " at stencil point " + describe(p) +
                                 " of '" + f.name() + "'");
        }
        return v;
    }
    const Axis axis = axes[level - 1];
    const double h = steps[level - 1];
    const Rect& dom = f.domain();
    const auto inside = [&](double d) { return dom.contains(shifted(p, axis, d)); };
    const auto inner = [&](double d) { return nested(f, axes, steps, level - 1, shifted(p, axis, d)); };

    if (inside(h) && inside(-h)) {
        return (inner(h) - inner(-h)) / (2.0 * h);
    }
    if (inside(h) && inside(2.0 * h) && dom.contains(p)) {
        return (-3.0 * inner(0.0) + 4.0 * inner(h) - inner(2.0 * h)) / (2.0 * h);
    }
    if (inside(-h) && inside(-2.0 * h) && dom.contains(p)) {
        return (3.0 * inner(0.0) - 4.0 * inner(-h) + inner(-2.0 * h)) / (2.0 * h);
    }
    throw DomainError("difference stencil of step " + std::to_string(h) + " at " + describe(p) +
                      " does not fit in the domain of '" + f.name() + "'");
}

double nested_with_steps(const Function2D& f, const DerivativePath& path, Point p, const std::vector<double>& steps)
{
    for (double h : steps) {
        if (!(h > 0.0) || !std::isfinite(h)) {
            throw ValidationError("difference step must be positive and finite");
        }
    }
    if (!f.domain().contains(p)) {
        throw DomainError("point " + describe(p) + " outside domain of '" + f.name() + "'");
    }
    return nested(f, path.axes(), steps, path.axes().size(), p);
}

} // namespace

double nested_difference(const Function2D& f, const DerivativePath& path, Point p, double h)
{
    return nested_with_steps(f, path, p, std::vector<double>(path.axes().size(), h));
}

PartialEstimate fd_partial(const Function2D& f, const DerivativePath& path, Point p, double h)
{
    PartialEstimate out;
    if (auto exact = f.exact_partial(path, p)) {
        out.value = *exact;
        out.exact_used = true;
        try {
            out.fd_value = nested_difference(f, path, p, h);
        } catch (const DomainError&) {
            // the exact value stands on its own when no stencil fits
        } catch (const NumericalError&) {
        }
        return out;
    }
    out.value = nested_difference(f, path, p, h);
    out.fd_value = out.value;
    return out;
}

bool grows_without_bound(const std::vector<double>& values)
{
    if (values.size() < 2) {
        return false;
    }
    // 1e-9 absorbs rounding when the growth is exactly the refinement ratio
    const double factor = kDivergenceGrowth * (1.0 - 1e-9);
    for (std::size_t k = 1; k < values.size(); ++k) {
        const double prev = std::abs(values[k - 1]);
        const double next = std::abs(values[k]);
        if (!(prev > 0.0) || !(next >= factor * prev)) {
            return false;
        }
    }
    return true;
}

ConvergenceLadder fd_ladder(const Function2D& f, const DerivativePath& path, Point p, double h, int rungs)
{
    if (rungs < 2) {
        throw ValidationError("convergence ladder needs at least two rungs");
    }
    ConvergenceLadder out;
    double step = h;
    for (int r = 0; r < rungs; ++r) {
        out.steps.push_back(step);
        // outermost axis uses `step`; each inner axis the cube of the next outer one
        std::vector<double> steps(path.axes().size());
        double inner = step;
        for (std::size_t k = steps.size(); k-- > 0;) {
            steps[k] = inner;
            inner = inner * inner * inner;
        }
        out.values.push_back(nested_with_steps(f, path, p, steps));
        step /= kLadderRefinement;
    }
    out.diverged = grows_without_bound(out.values);
    return out;
}

double dn_apply(const Function2D& f, int n, Point p, double h)
{
    double sum = 0.0;
    for (const auto& path : DerivativePath::all_of_order(n)) {
        if (auto exact = f.exact_partial(path, p)) {
            sum += *exact;
        } else {
            sum += nested_difference(f, path, p, h);
        }
    }
    return sum;
}

QuotientSample directional_quotient(const Function2D& f, Point p, Point q)
{
    if (p == q) {
        throw DegenerateInputError("directional quotient needs distinct points");
    }
    QuotientSample s;
    s.p = p;
    s.q = q;
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    s.distance = std::hypot(dx, dy);
    s.cos_alpha = dx / s.distance;
    s.sin_alpha = dy / s.distance;
    s.quotient = (f(q.x, q.y) - f(p.x, p.y)) / s.distance;
    return s;
}

} // namespace pdestruct
