#include "pdestruct/function_model.hpp"

#include "pdestruct/errors.hpp"
#include "pdestruct/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pdestruct {

namespace {

std::string describe(Point p)
{
    std::ostringstream os;
    os.precision(17);
    os << '(' << p.x << ", " << p.y << ')';
    return os.str();
}

std::string describe(const Rect& r)
{
    std::ostringstream os;
    os.precision(17);
    os << '[' << r.x0 << ", " << r.x1 << "] x [" << r.y0 << ", " << r.y1 << ']';
    return os.str();
}

} // namespace

void Rect::validate() const
{
    if (!(std::isfinite(x0) && std::isfinite(x1) && std::isfinite(y0) && std::isfinite(y1))) {
        throw ValidationError("rectangle corners must be finite");
    }
    if (!(x0 < x1) || !(y0 < y1)) {
        throw ValidationError("degenerate rectangle " + describe(*this) + ": need x0 < x1 and y0 < y1");
    }
}

// ---------------------------------------------------------------------------
// DerivativePath

DerivativePath::DerivativePath(std::vector<Axis> axes) : axes_(std::move(axes))
{
    if (axes_.empty()) {
        throw ValidationError("derivative path must have order >= 1");
    }
}

DerivativePath DerivativePath::parse(std::string_view text)
{
    std::vector<Axis> axes;
    for (char c : text) {
        if (c == 'x') {
            axes.push_back(Axis::x);
        } else if (c == 'y') {
            axes.push_back(Axis::y);
        } else {
            throw ValidationError("invalid derivative path '" + std::string(text) + "'");
        }
    }
    return DerivativePath(std::move(axes));
}

std::vector<DerivativePath> DerivativePath::all_of_order(int order)
{
    if (order < 1 || order > 20) {
        throw ValidationError("derivative order must be in [1, 20]");
    }
    std::vector<DerivativePath> out;
    const unsigned total = 1u << order;
    out.reserve(total);
    for (unsigned mask = 0; mask < total; ++mask) {
        std::vector<Axis> axes(order);
        for (int b = 0; b < order; ++b) {
            // most significant bit first so the list is lexicographic
            const bool is_y = (mask >> (order - 1 - b)) & 1u;
            axes[b] = is_y ? Axis::y : Axis::x;
        }
        out.emplace_back(std::move(axes));
    }
    return out;
}

int DerivativePath::count(Axis a) const noexcept
{
    return static_cast<int>(std::count(axes_.begin(), axes_.end(), a));
}

std::string DerivativePath::str() const
{
    std::string s;
    s.reserve(axes_.size());
    for (Axis a : axes_) {
        s.push_back(static_cast<char>(a));
    }
    return s;
}

DerivativePath DerivativePath::after(Axis first) const
{
    std::vector<Axis> axes;
    axes.reserve(axes_.size() + 1);
    axes.push_back(first);
    axes.insert(axes.end(), axes_.begin(), axes_.end());
    return DerivativePath(std::move(axes));
}

// ---------------------------------------------------------------------------
// Function2D

struct Function2D::Impl {
    std::string name;
    Rect domain;
    Evaluator2D evaluator;
    std::vector<SingularPoint> singular;
    PartialMap partials;
    int exact_order = 0;
};

Function2D::Function2D(std::string name, Rect domain, Evaluator2D evaluator,
                       std::vector<SingularPoint> singular_points, PartialMap exact_partials)
{
    domain.validate();
    if (!evaluator) {
        throw ValidationError("Function2D '" + name + "' needs an evaluator");
    }
    for (const auto& sp : singular_points) {
        if (!std::isfinite(sp.value)) {
            throw ValidationError("singular point " + describe(sp.at) + " of '" + name +
                                  "' needs a finite declared value");
        }
    }
    auto impl = std::make_shared<Impl>();
    impl->name = std::move(name);
    impl->domain = domain;
    impl->evaluator = std::move(evaluator);
    impl->singular = std::move(singular_points);
    impl->partials = std::move(exact_partials);
    int order = 0;
    for (int n = 1; n <= 8; ++n) {
        bool all = true;
        for (const auto& path : DerivativePath::all_of_order(n)) {
            if (!impl->partials.contains(path.str())) {
                all = false;
                break;
            }
        }
        if (!all) {
            break;
        }
        order = n;
    }
    impl->exact_order = order;
    impl_ = std::move(impl);
}

const std::string& Function2D::name() const noexcept { return impl_->name; }
const Rect& Function2D::domain() const noexcept { return impl_->domain; }
const std::vector<SingularPoint>& Function2D::singular_points() const noexcept { return impl_->singular; }
int Function2D::exact_order() const noexcept { return impl_->exact_order; }

double Function2D::operator()(double x, double y) const
{
    const Point p{x, y};
    if (!impl_->domain.contains(p)) {
        throw DomainError("point " + describe(p) + " outside domain " + describe(impl_->domain) +
                          " of '" + impl_->name + "'");
    }
    for (const auto& sp : impl_->singular) {
        if (sp.at == p) {
            return sp.value;
        }
    }
    return impl_->evaluator(x, y);
}

bool Function2D::is_singular(Point p) const noexcept
{
    return std::any_of(impl_->singular.begin(), impl_->singular.end(),
                       [&](const SingularPoint& sp) { return sp.at == p; });
}

bool Function2D::has_exact_partial(const DerivativePath& path) const noexcept
{
    return impl_->partials.contains(path.str());
}

std::optional<double> Function2D::exact_partial(const DerivativePath& path, Point p) const
{
    auto it = impl_->partials.find(path.str());
    if (it == impl_->partials.end() || is_singular(p)) {
        return std::nullopt;
    }
    if (!impl_->domain.contains(p)) {
        throw DomainError("point " + describe(p) + " outside domain of '" + impl_->name + "'");
    }
    return it->second(p.x, p.y);
}

Function2D Function2D::with_domain(Rect domain) const
{
    return Function2D(impl_->name, domain, impl_->evaluator, impl_->singular, impl_->partials);
}

Function2D Function2D::with_name(std::string name) const
{
    return Function2D(std::move(name), impl_->domain, impl_->evaluator, impl_->singular, impl_->partials);
}

Function2D linear_combination(double a, const Function2D& f, double b, const Function2D& g)
{
    const Rect& rf = f.domain();
    const Rect& rg = g.domain();
    const Rect domain{std::max(rf.x0, rg.x0), std::min(rf.x1, rg.x1), std::max(rf.y0, rg.y0),
                      std::min(rf.y1, rg.y1)};
    // Combined evaluation goes through the public call operators so each
    // operand keeps intercepting its own singular points.
    Evaluator2D eval = [a, b, f, g](double x, double y) { return a * f(x, y) + b * g(x, y); };

    std::vector<SingularPoint> singular;
    auto add_singular = [&](const Function2D& h) {
        for (const auto& sp : h.singular_points()) {
            if (domain.contains(sp.at)) {
                singular.push_back({sp.at, a * f(sp.at.x, sp.at.y) + b * g(sp.at.x, sp.at.y)});
            }
        }
    };
    add_singular(f);
    add_singular(g);

    PartialMap partials;
    const int order = std::min(f.exact_order(), g.exact_order());
    for (int n = 1; n <= order; ++n) {
        for (const auto& path : DerivativePath::all_of_order(n)) {
            partials.emplace(path.str(), [a, b, f, g, path](double x, double y) {
                return a * *f.exact_partial(path, {x, y}) + b * *g.exact_partial(path, {x, y});
            });
        }
    }
    return Function2D(std::to_string(a) + "*" + f.name() + " + " + std::to_string(b) + "*" + g.name(),
                      domain, std::move(eval), std::move(singular), std::move(partials));
}

double eval2d(const Function2D& f, Point p) { return f.eval(p); }

// ---------------------------------------------------------------------------
// Grids

void GridGeometry::validate() const
{
    rect.validate();
    if (nx < 2 || ny < 2) {
        throw ValidationError("grid needs nx >= 2 and ny >= 2");
    }
}

void GridSample::validate() const
{
    grid.validate();
    if (values.size() != grid.size()) {
        throw ValidationError("grid sample has " + std::to_string(values.size()) + " values, expected " +
                              std::to_string(grid.size()));
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k])) {
            throw ValidationError("grid sample value #" + std::to_string(k) + " is not finite");
        }
    }
}

GridSample sample_grid(const Function2D& f, const GridGeometry& grid, int threads)
{
    grid.validate();
    if (!f.domain().contains(grid.rect)) {
        throw DomainError("grid rectangle " + describe(grid.rect) + " not inside domain " +
                          describe(f.domain()) + " of '" + f.name() + "'");
    }
    GridSample out{grid, std::vector<double>(grid.size())};
    parallel_for(static_cast<std::size_t>(grid.nx), threads, [&](std::size_t i) {
        for (int j = 0; j < grid.ny; ++j) {
            out.values[grid.index(static_cast<int>(i), j)] = f(grid.x_at(static_cast<int>(i)), grid.y_at(j));
        }
    });
    return out;
}

namespace {

/// Cell index and fractional offset, snapping to nodes within 1e-9 cells.
std::pair<int, double> locate(double u, int n)
{
    const double nearest = std::round(u);
    if (std::abs(u - nearest) < 1e-9) {
        u = nearest;
    }
    int cell = static_cast<int>(std::floor(u));
    cell = std::clamp(cell, 0, n - 2);
    return {cell, u - cell};
}

} // namespace

Function2D from_grid(const GridSample& sample, std::string name)
{
    sample.validate();
    auto data = std::make_shared<const GridSample>(sample);
    Evaluator2D eval = [data](double x, double y) {
        const GridGeometry& g = data->grid;
        const auto [i, fx] = locate((x - g.rect.x0) / g.dx(), g.nx);
        const auto [j, fy] = locate((y - g.rect.y0) / g.dy(), g.ny);
        if (fx == 0.0 && fy == 0.0) {
            return data->at(i, j);
        }
        const double v00 = data->at(i, j);
        const double v10 = data->at(i + 1, j);
        const double v01 = data->at(i, j + 1);
        const double v11 = data->at(i + 1, j + 1);
        return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 + (1 - fx) * fy * v01 + fx * fy * v11;
    };
    return Function2D(std::move(name), sample.grid.rect, std::move(eval));
}

// ---------------------------------------------------------------------------
// Profile1D

Profile1D::Profile1D(std::vector<double> t_values, std::vector<double> values)
    : t_(std::move(t_values)), v_(std::move(values))
{
    if (t_.size() != v_.size()) {
        throw ValidationError("profile t/value length mismatch");
    }
    if (t_.size() < 2) {
        throw ValidationError("profile needs at least two samples");
    }
    for (std::size_t k = 1; k < t_.size(); ++k) {
        if (!(t_[k] > t_[k - 1])) {
            throw ValidationError("profile t_values must be strictly increasing");
        }
    }
}

Profile1D Profile1D::tabulate(const Evaluator1D& g, std::span<const double> t_values)
{
    std::vector<double> t(t_values.begin(), t_values.end());
    std::vector<double> v;
    v.reserve(t.size());
    for (double s : t) {
        v.push_back(g(s));
    }
    return Profile1D(std::move(t), std::move(v));
}

double Profile1D::operator()(double t) const
{
    const double slack = 1e-9 * std::max(1.0, t_.back() - t_.front());
    if (t < t_.front() - slack || t > t_.back() + slack || std::isnan(t)) {
        std::ostringstream os;
        os.precision(17);
        os << "profile evaluated at " << t << " outside [" << t_.front() << ", " << t_.back() << ']';
        throw DomainError(os.str());
    }
    if (t <= t_.front()) {
        return v_.front();
    }
    if (t >= t_.back()) {
        return v_.back();
    }
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - t_.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - t_[lo]) / (t_[hi] - t_[lo]);
    if (w == 0.0) {
        return v_[lo];
    }
    return v_[lo] + w * (v_[hi] - v_[lo]);
}

Profile1D Profile1D::scaled(double factor) const
{
    std::vector<double> v(v_);
    for (double& x : v) {
        x *= factor;
    }
    return Profile1D(t_, std::move(v));
}

} // namespace pdestruct
