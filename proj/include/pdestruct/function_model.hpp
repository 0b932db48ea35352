#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdestruct {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Closed axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
    double x0 = -2.0;
    double x1 = 2.0;
    double y0 = -2.0;
    double y1 = 2.0;

    bool contains(Point p) const noexcept
    {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
    bool contains(const Rect& r) const noexcept
    {
        return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
    }
    void validate() const;

    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Window used for catalog entries when the caller does not pick one.
inline constexpr Rect kDefaultWindow{-2.0, 2.0, -2.0, 2.0};

enum class Axis : char { x = 'x', y = 'y' };

/// Ordered list of differentiation axes; axes()[0] is applied first.
class DerivativePath {
public:
    explicit DerivativePath(std::vector<Axis> axes);

    /// Parses "xxy"-style strings.
    static DerivativePath parse(std::string_view text);
    /// All 2^order paths, enumerated in binary order with x before y.
    static std::vector<DerivativePath> all_of_order(int order);

    const std::vector<Axis>& axes() const noexcept { return axes_; }
    int order() const noexcept { return static_cast<int>(axes_.size()); }
    int count(Axis a) const noexcept;
    std::string str() const;

    /// Path that first differentiates along `first`, then along this path.
    DerivativePath after(Axis first) const;

    friend bool operator==(const DerivativePath&, const DerivativePath&) = default;
    friend auto operator<=>(const DerivativePath& a, const DerivativePath& b)
    {
        return a.str() <=> b.str();
    }

private:
    std::vector<Axis> axes_;
};

using Evaluator1D = std::function<double(double)>;
using Evaluator2D = std::function<double(double, double)>;

/// Exact partial derivatives keyed by DerivativePath::str().
using PartialMap = std::map<std::string, Evaluator2D, std::less<>>;

struct SingularPoint {
    Point at;
    double value = 0.0;
};

/// Immutable scalar field on a rectangle.
///
/// Declared singular points are intercepted before the evaluator runs, so
/// formulas that divide by zero there never see the point. Exact partial
/// derivatives are optional and are only trusted away from singular points.
class Function2D {
public:
    Function2D(std::string name, Rect domain, Evaluator2D evaluator,
               std::vector<SingularPoint> singular_points = {}, PartialMap exact_partials = {});

    const std::string& name() const noexcept;
    const Rect& domain() const noexcept;
    const std::vector<SingularPoint>& singular_points() const noexcept;

    /// Throws DomainError outside the domain.
    double operator()(double x, double y) const;
    double eval(Point p) const { return (*this)(p.x, p.y); }

    bool is_singular(Point p) const noexcept;
    bool has_exact_partial(const DerivativePath& path) const noexcept;
    /// Exact partial at p, or nullopt when absent or p is a singular point.
    std::optional<double> exact_partial(const DerivativePath& path, Point p) const;
    /// Highest order for which every path has an exact partial.
    int exact_order() const noexcept;

    /// Same function on another rectangle; evaluation outside the original
    /// formula's validity is the caller's concern.
    Function2D with_domain(Rect domain) const;
    Function2D with_name(std::string name) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// a*f + b*g on the intersection of the domains; exact partials survive
/// for paths present in both.
Function2D linear_combination(double a, const Function2D& f, double b, const Function2D& g);

double eval2d(const Function2D& f, Point p);

/// Vertex-centred uniform grid geometry.
struct GridGeometry {
    Rect rect{};
    int nx = 101;
    int ny = 101;

    void validate() const;
    double dx() const noexcept { return (rect.x1 - rect.x0) / (nx - 1); }
    double dy() const noexcept { return (rect.y1 - rect.y0) / (ny - 1); }
    double x_at(int i) const noexcept { return rect.x0 + i * dx(); }
    double y_at(int j) const noexcept { return rect.y0 + j * dy(); }
    Point node(int i, int j) const noexcept { return {x_at(i), y_at(j)}; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(nx) * ny; }
    /// Row-major with x as the slow index.
    std::size_t index(int i, int j) const noexcept { return static_cast<std::size_t>(i) * ny + j; }

    friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

struct GridNode {
    int i = 0;
    int j = 0;

    friend bool operator==(const GridNode&, const GridNode&) = default;
};

/// Values of a field at the nodes of a GridGeometry.
struct GridSample {
    GridGeometry grid;
    std::vector<double> values;

    void validate() const;
    double at(int i, int j) const { return values[grid.index(i, j)]; }
};

GridSample sample_grid(const Function2D& f, const GridGeometry& grid, int threads = 1);

/// Bilinear interpolant of the sample, exact at the nodes.
Function2D from_grid(const GridSample& sample, std::string name = "grid");

/// Piecewise-linear table t -> value.
class Profile1D {
public:
    Profile1D() = default;
    Profile1D(std::vector<double> t_values, std::vector<double> values);

    static Profile1D tabulate(const Evaluator1D& g, std::span<const double> t_values);

    /// Throws DomainError outside [t_min, t_max] beyond a relative slack of 1e-9.
    double operator()(double t) const;

    const std::vector<double>& t_values() const noexcept { return t_; }
    const std::vector<double>& values() const noexcept { return v_; }
    std::size_t size() const noexcept { return t_.size(); }
    double t_min() const { return t_.front(); }
    double t_max() const { return t_.back(); }

    Profile1D scaled(double factor) const;

private:
    std::vector<double> t_;
    std::vector<double> v_;
};

/// One-variable analytic function with derivatives up to max_order.
///
/// derivatives[k] is the k-th derivative; derivatives[0] is the function.
struct Analytic1D {
    std::string name;
    std::vector<Evaluator1D> derivatives;

    double operator()(double t) const { return derivatives.front()(t); }
    int max_order() const noexcept { return static_cast<int>(derivatives.size()) - 1; }
};

/// Named one-variable profiles usable as catalog parameters.
Analytic1D profile_get(std::string_view name);
std::vector<std::string> profile_names();

/// Parsed catalog identifier: name, profile arguments and numeric knobs.
///
/// Text form: `name[:arg]...` where an arg is either a profile name or
/// `key=value`, e.g. `plane_wave:sin:k=2` or `poly_transport:square:cube`.
struct CatalogRequest {
    std::string name;
    std::vector<std::string> profiles;
    std::map<std::string, double, std::less<>> numbers;
    std::optional<Rect> domain;

    static CatalogRequest parse(std::string_view text);
    std::string str() const;
};

struct CatalogEntryInfo {
    std::string name;
    std::string usage;
    std::string formula;
};

std::vector<CatalogEntryInfo> catalog_list();
Function2D catalog_get(const CatalogRequest& request);
Function2D catalog_get(std::string_view text);

// Direct constructors for the parametrised families.
Function2D make_schwartz(Rect domain = kDefaultWindow);
Function2D make_sextic(Rect domain = kDefaultWindow);
/// phi(k x - y)
Function2D make_plane_wave(const Analytic1D& phi, double k, Rect domain = kDefaultWindow);
/// sum_i (x+y)^(i-1) phi_i(x-y)
Function2D make_poly_transport(std::vector<Analytic1D> phis, Rect domain = kDefaultWindow);
/// phi(x+y) + psi(x-y)
Function2D make_wave_pair(const Analytic1D& phi, const Analytic1D& psi, Rect domain = kDefaultWindow);
/// a x + b y + c
Function2D make_affine(double a, double b, double c, Rect domain = kDefaultWindow);

} // namespace pdestruct
