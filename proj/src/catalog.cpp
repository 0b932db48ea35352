#include "pdestruct/errors.hpp"
#include "pdestruct/function_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace pdestruct {

namespace {

constexpr int kCatalogPartialOrder = 3;

double falling(int m, int a)
{
    double r = 1.0;
    for (int k = 0; k < a; ++k) {
        r *= m - k;
    }
    return r;
}

double ipow(double base, int e)
{
    double r = 1.0;
    for (int k = 0; k < e; ++k) {
        r *= base;
    }
    return r;
}

/// Coefficients c[b] of u^(n-b) v^b in (u+v)^nx (u-v)^ny, where u = d/ds and
/// v = d/dt in the rotated coordinates s = x+y, t = x-y.
std::vector<double> rotated_operator(const DerivativePath& path)
{
    std::vector<double> c{1.0};
    for (Axis a : path.axes()) {
        std::vector<double> next(c.size() + 1, 0.0);
        const double sign = a == Axis::x ? 1.0 : -1.0;
        for (std::size_t b = 0; b < c.size(); ++b) {
            next[b] += c[b];
            next[b + 1] += sign * c[b];
        }
        c = std::move(next);
    }
    return c;
}

// Bivariate polynomial, enough to differentiate the rational counterexamples.
struct Monomial {
    double coef;
    int px;
    int py;
};
using Poly2 = std::vector<Monomial>;

double poly_partial(const Poly2& p, int i, int j, double x, double y)
{
    double sum = 0.0;
    for (const auto& m : p) {
        if (m.px < i || m.py < j) {
            continue;
        }
        sum += m.coef * falling(m.px, i) * falling(m.py, j) * ipow(x, m.px - i) * ipow(y, m.py - j);
    }
    return sum;
}

/// d^(a+b)/dx^a dy^b of N/D from the Leibniz rule applied to (N/D)*D = N.
double rational_partial(const Poly2& num, const Poly2& den, int a, int b, double x, double y)
{
    std::array<std::array<double, kCatalogPartialOrder + 1>, kCatalogPartialOrder + 1> f{};
    std::array<std::array<double, kCatalogPartialOrder + 1>, kCatalogPartialOrder + 1> d{};
    for (int i = 0; i <= a; ++i) {
        for (int j = 0; j <= b; ++j) {
            d[i][j] = poly_partial(den, i, j, x, y);
        }
    }
    auto binom = [](int n, int k) { return falling(n, k) / falling(k, k); };
    for (int i = 0; i <= a; ++i) {
        for (int j = 0; j <= b; ++j) {
            double acc = poly_partial(num, i, j, x, y);
            for (int k = 0; k <= i; ++k) {
                for (int l = 0; l <= j; ++l) {
                    if (k == i && l == j) {
                        continue;
                    }
                    acc -= binom(i, k) * binom(j, l) * f[k][l] * d[i - k][j - l];
                }
            }
            f[i][j] = acc / d[0][0];
        }
    }
    return f[a][b];
}

Function2D make_rational(std::string name, Rect domain, Poly2 num, Poly2 den)
{
    Evaluator2D eval = [num, den](double x, double y) {
        return poly_partial(num, 0, 0, x, y) / poly_partial(den, 0, 0, x, y);
    };
    PartialMap partials;
    for (int n = 1; n <= kCatalogPartialOrder; ++n) {
        for (const auto& path : DerivativePath::all_of_order(n)) {
            const int a = path.count(Axis::x);
            const int b = path.count(Axis::y);
            partials.emplace(path.str(), [num, den, a, b](double x, double y) {
                return rational_partial(num, den, a, b, x, y);
            });
        }
    }
    return Function2D(std::move(name), domain, std::move(eval), {{{0.0, 0.0}, 0.0}}, std::move(partials));
}

Analytic1D constant_profile(std::string name, double c)
{
    return {std::move(name),
            {[c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; },
             [](double) { return 0.0; }, [](double) { return 0.0; }}};
}

std::string format_number(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

// ---------------------------------------------------------------------------
// Profiles

std::vector<std::string> profile_names()
{
    return {"zero", "one", "identity", "square", "cube", "sin", "cos", "exp", "abs"};
}

Analytic1D profile_get(std::string_view name)
{
    auto zero = [](double) { return 0.0; };
    if (name == "zero") {
        return constant_profile("zero", 0.0);
    }
    if (name == "one") {
        return constant_profile("one", 1.0);
    }
    if (name == "identity") {
        return {"identity", {[](double t) { return t; }, [](double) { return 1.0; }, zero, zero, zero}};
    }
    if (name == "square") {
        return {"square",
                {[](double t) { return t * t; }, [](double t) { return 2 * t; }, [](double) { return 2.0; },
                 zero, zero}};
    }
    if (name == "cube") {
        return {"cube",
                {[](double t) { return t * t * t; }, [](double t) { return 3 * t * t; },
                 [](double t) { return 6 * t; }, [](double) { return 6.0; }, zero}};
    }
    if (name == "sin") {
        return {"sin",
                {[](double t) { return std::sin(t); }, [](double t) { return std::cos(t); },
                 [](double t) { return -std::sin(t); }, [](double t) { return -std::cos(t); },
                 [](double t) { return std::sin(t); }}};
    }
    if (name == "cos") {
        return {"cos",
                {[](double t) { return std::cos(t); }, [](double t) { return -std::sin(t); },
                 [](double t) { return -std::cos(t); }, [](double t) { return std::sin(t); },
                 [](double t) { return std::cos(t); }}};
    }
    if (name == "exp") {
        auto e = [](double t) { return std::exp(t); };
        return {"exp", {e, e, e, e, e}};
    }
    if (name == "abs") {
        // kink at 0: no exact derivatives are offered
        return {"abs", {[](double t) { return std::abs(t); }}};
    }
    std::string known;
    for (const auto& n : profile_names()) {
        known += (known.empty() ? "" : ", ") + n;
    }
    throw LookupError("unknown profile '" + std::string(name) + "'; available: " + known);
}

// ---------------------------------------------------------------------------
// Families

Function2D make_schwartz(Rect domain)
{
    return make_rational("schwartz", domain, {{2.0, 1, 1}}, {{1.0, 2, 0}, {1.0, 0, 2}});
}

Function2D make_sextic(Rect domain)
{
    return make_rational("sextic", domain, {{2.0, 3, 3}}, {{1.0, 6, 0}, {1.0, 0, 6}});
}

Function2D make_plane_wave(const Analytic1D& phi, double k, Rect domain)
{
    const auto& d = phi.derivatives;
    Evaluator2D eval = [f = d[0], k](double x, double y) { return f(k * x - y); };
    PartialMap partials;
    if (phi.max_order() >= kCatalogPartialOrder) {
        for (int n = 1; n <= kCatalogPartialOrder; ++n) {
            for (const auto& path : DerivativePath::all_of_order(n)) {
                const double factor = ipow(k, path.count(Axis::x)) * ipow(-1.0, path.count(Axis::y));
                partials.emplace(path.str(), [g = d[n], k, factor](double x, double y) {
                    return factor * g(k * x - y);
                });
            }
        }
    }
    return Function2D("plane_wave:" + phi.name + ":k=" + format_number(k), domain, std::move(eval), {},
                      std::move(partials));
}

Function2D make_poly_transport(std::vector<Analytic1D> phis, Rect domain)
{
    if (phis.empty()) {
        throw ValidationError("poly_transport needs at least one profile");
    }
    std::string name = "poly_transport";
    int min_order = kCatalogPartialOrder;
    for (const auto& p : phis) {
        name += ":" + p.name;
        min_order = std::min(min_order, p.max_order());
    }
    auto shared = std::make_shared<const std::vector<Analytic1D>>(std::move(phis));
    Evaluator2D eval = [shared](double x, double y) {
        const double s = x + y;
        const double t = x - y;
        double sum = 0.0;
        double power = 1.0;
        for (const auto& phi : *shared) {
            sum += power * phi(t);
            power *= s;
        }
        return sum;
    };
    PartialMap partials;
    if (min_order >= kCatalogPartialOrder) {
        for (int n = 1; n <= kCatalogPartialOrder; ++n) {
            for (const auto& path : DerivativePath::all_of_order(n)) {
                partials.emplace(path.str(), [shared, c = rotated_operator(path), n](double x, double y) {
                    const double s = x + y;
                    const double t = x - y;
                    double sum = 0.0;
                    for (std::size_t i = 0; i < shared->size(); ++i) {
                        const int m = static_cast<int>(i);
                        for (int b = 0; b <= n; ++b) {
                            const int a = n - b;
                            if (a > m || c[b] == 0.0) {
                                continue;
                            }
                            sum += c[b] * falling(m, a) * ipow(s, m - a) * (*shared)[i].derivatives[b](t);
                        }
                    }
                    return sum;
                });
            }
        }
    }
    return Function2D(std::move(name), domain, std::move(eval), {}, std::move(partials));
}

Function2D make_wave_pair(const Analytic1D& phi, const Analytic1D& psi, Rect domain)
{
    Evaluator2D eval = [f = phi.derivatives[0], g = psi.derivatives[0]](double x, double y) {
        return f(x + y) + g(x - y);
    };
    PartialMap partials;
    if (std::min(phi.max_order(), psi.max_order()) >= kCatalogPartialOrder) {
        for (int n = 1; n <= kCatalogPartialOrder; ++n) {
            for (const auto& path : DerivativePath::all_of_order(n)) {
                const auto c = rotated_operator(path);
                partials.emplace(path.str(), [f = phi.derivatives[n], g = psi.derivatives[n], cs = c[0],
                                              ct = c[n]](double x, double y) {
                    return cs * f(x + y) + ct * g(x - y);
                });
            }
        }
    }
    return Function2D("wave_pair:" + phi.name + ":" + psi.name, domain, std::move(eval), {},
                      std::move(partials));
}

Function2D make_affine(double a, double b, double c, Rect domain)
{
    Evaluator2D eval = [a, b, c](double x, double y) { return a * x + b * y + c; };
    PartialMap partials;
    for (int n = 1; n <= kCatalogPartialOrder; ++n) {
        for (const auto& path : DerivativePath::all_of_order(n)) {
            double value = 0.0;
            if (n == 1) {
                value = path.axes()[0] == Axis::x ? a : b;
            }
            partials.emplace(path.str(), [value](double, double) { return value; });
        }
    }
    return Function2D("affine:a=" + format_number(a) + ":b=" + format_number(b) + ":c=" + format_number(c),
                      domain, std::move(eval), {}, std::move(partials));
}

// ---------------------------------------------------------------------------
// Registry

CatalogRequest CatalogRequest::parse(std::string_view text)
{
    CatalogRequest req;
    std::size_t start = 0;
    bool first = true;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(':', start), text.size());
        const std::string token(text.substr(start, end - start));
        if (token.empty()) {
            throw ValidationError("empty field in catalog identifier '" + std::string(text) + "'");
        }
        if (first) {
            req.name = token;
            first = false;
        } else if (auto eq = token.find('='); eq != std::string::npos) {
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(value, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != value.size() || value.empty() || !std::isfinite(v)) {
                throw ValidationError("catalog parameter '" + token + "' is not key=number");
            }
            req.numbers[key] = v;
        } else {
            req.profiles.push_back(token);
        }
        start = end + 1;
    }
    if (req.name.empty()) {
        throw ValidationError("empty catalog identifier");
    }
    return req;
}

std::string CatalogRequest::str() const
{
    std::string s = name;
    for (const auto& p : profiles) {
        s += ":" + p;
    }
    for (const auto& [k, v] : numbers) {
        s += ":" + k + "=" + format_number(v);
    }
    return s;
}

std::vector<CatalogEntryInfo> catalog_list()
{
    return {
        {"schwartz", "schwartz", "2xy/(x^2+y^2), 0 at the origin"},
        {"sextic", "sextic", "2x^3y^3/(x^6+y^6), 0 at the origin"},
        {"plane_wave", "plane_wave:<profile>[:k=<number>]", "phi(kx - y)"},
        {"poly_transport", "poly_transport:<profile>[:<profile>...]", "sum_i (x+y)^(i-1) phi_i(x-y)"},
        {"wave_pair", "wave_pair:<profile>:<profile>", "phi(x+y) + psi(x-y)"},
        {"affine", "affine[:a=<n>][:b=<n>][:c=<n>]", "a x + b y + c"},
        {"constant", "constant[:c=<n>]", "c"},
    };
}

namespace {

void check_arguments(const CatalogRequest& req, std::size_t min_profiles, std::size_t max_profiles,
                     std::initializer_list<std::string_view> keys)
{
    if (req.profiles.size() < min_profiles || req.profiles.size() > max_profiles) {
        throw ValidationError("catalog entry '" + req.name + "' takes between " + std::to_string(min_profiles) +
                              " and " + std::to_string(max_profiles) + " profile arguments, got " +
                              std::to_string(req.profiles.size()));
    }
    for (const auto& [key, value] : req.numbers) {
        const bool window_key = key == "x0" || key == "x1" || key == "y0" || key == "y1";
        if (!window_key && std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ValidationError("catalog entry '" + req.name + "' has no parameter '" + key + "'");
        }
    }
}

double number_or(const CatalogRequest& req, std::string_view key, double fallback)
{
    auto it = req.numbers.find(key);
    return it == req.numbers.end() ? fallback : it->second;
}

} // namespace

Function2D catalog_get(const CatalogRequest& req)
{
    Rect domain = req.domain.value_or(kDefaultWindow);
    domain.x0 = number_or(req, "x0", domain.x0);
    domain.x1 = number_or(req, "x1", domain.x1);
    domain.y0 = number_or(req, "y0", domain.y0);
    domain.y1 = number_or(req, "y1", domain.y1);

    std::vector<Analytic1D> profiles;
    auto load_profiles = [&] {
        for (const auto& p : req.profiles) {
            profiles.push_back(profile_get(p));
        }
    };

    if (req.name == "schwartz") {
        check_arguments(req, 0, 0, {});
        return make_schwartz(domain);
    }
    if (req.name == "sextic") {
        check_arguments(req, 0, 0, {});
        return make_sextic(domain);
    }
    if (req.name == "plane_wave") {
        check_arguments(req, 1, 1, {"k"});
        load_profiles();
        return make_plane_wave(profiles[0], number_or(req, "k", 1.0), domain);
    }
    if (req.name == "poly_transport") {
        check_arguments(req, 1, 8, {});
        load_profiles();
        return make_poly_transport(std::move(profiles), domain);
    }
    if (req.name == "wave_pair") {
        check_arguments(req, 2, 2, {});
        load_profiles();
        return make_wave_pair(profiles[0], profiles[1], domain);
    }
    if (req.name == "affine") {
        check_arguments(req, 0, 0, {"a", "b", "c"});
        return make_affine(number_or(req, "a", 1.0), number_or(req, "b", 0.0), number_or(req, "c", 0.0), domain);
    }
    if (req.name == "constant") {
        check_arguments(req, 0, 0, {"c"});
        const double c = number_or(req, "c", 0.0);
        return make_affine(0.0, 0.0, c, domain).with_name("constant:c=" + format_number(c));
    }
    std::string known;
    for (const auto& e : catalog_list()) {
        known += (known.empty() ? "" : ", ") + e.name;
    }
    throw LookupError("unknown catalog entry '" + req.name + "'; available: " + known);
}

Function2D catalog_get(std::string_view text) { return catalog_get(CatalogRequest::parse(text)); }

} // namespace pdestruct
