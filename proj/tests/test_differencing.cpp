#include "doctest.h"

#include "oracles.hpp"
#include "pdestruct/decomposition.hpp"
#include "pdestruct/differencing.hpp"
#include "pdestruct/errors.hpp"

#include <cmath>
#include <random>

using namespace pdestruct;

namespace {

Function2D formula(std::string name, Evaluator2D f, Rect r = kDefaultWindow)
{
    return Function2D(std::move(name), r, std::move(f));
}

} // namespace

TEST_SUITE("differencing")
{
    TEST_CASE("derivative paths")
    {
        for (int n = 1; n <= 5; ++n) {
            const auto all = DerivativePath::all_of_order(n);
            CHECK(all.size() == (std::size_t{1} << n));
            std::vector<std::string> names;
            for (const auto& p : all) {
                CHECK(p.order() == n);
                names.push_back(p.str());
            }
            CHECK(names == oracle::paths_of_order(n));
        }
        CHECK(DerivativePath::parse("xy").after(Axis::y).str() == "yxy");
        CHECK_THROWS_AS(DerivativePath::parse(""), ValidationError);
        CHECK_THROWS_AS(DerivativePath::parse("xz"), ValidationError);
    }

    TEST_CASE("diff_quotient")
    {
        const Evaluator1D sq = [](double x) { return x * x; };
        CHECK(diff_quotient(sq, 1.0, 3.0) == 4.0);
        CHECK(diff_quotient(sq, 3.0, 1.0) == 4.0);
        CHECK(diff_quotient([](double) { return 5.0; }, -1.0, 7.0) == 0.0);
        CHECK(diff_quotient([](double x) { return std::abs(x); }, -1.0, 2.0) == doctest::Approx(1.0 / 3.0));
        CHECK_THROWS_AS(diff_quotient(sq, 2.0, 2.0), DegenerateInputError);
    }

    TEST_CASE("diff_quotient convexity identity")
    {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        const std::vector<Evaluator1D> gs{[](double x) { return std::sin(3 * x) + x * x * x; },
                                          [](double x) { return std::abs(x - 0.3); },
                                          [](double x) { return std::exp(x) * std::cos(x); }};
        for (const auto& g : gs) {
            for (int k = 0; k < 200; ++k) {
                double v[3] = {u(rng), u(rng), u(rng)};
                std::sort(v, v + 3);
                const double x = v[0], y = v[1], z = v[2];
                if (y - x < 1e-3 || z - y < 1e-3) {
                    continue;
                }
                const double lhs = diff_quotient(g, x, z);
                const double rhs = ((y - x) * diff_quotient(g, x, y) + (z - y) * diff_quotient(g, y, z)) / (z - x);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
            }
        }
    }

    TEST_CASE("fd_partial examples")
    {
        const auto sq = formula("x^2", [](double x, double) { return x * x; }, {-5, 5, -5, 5});
        for (double h : {1e-1, 1e-3, 0.5}) {
            CHECK(fd_partial(sq, DerivativePath::parse("x"), {3.0, 0.0}, h).value == doctest::Approx(6.0).epsilon(1e-12));
        }
        const auto s = make_schwartz();
        const auto at0 = fd_partial(s, DerivativePath::parse("x"), {0.0, 0.0}, 1e-3);
        CHECK(at0.value == 0.0);
        CHECK_FALSE(at0.exact_used);
        const auto away = fd_partial(s, DerivativePath::parse("xy"), {1.0, 0.5}, 1e-4);
        CHECK(away.exact_used);
        REQUIRE(away.fd_value.has_value());
        CHECK(*away.fd_value == doctest::Approx(away.value).epsilon(1e-6));
    }

    TEST_CASE("mixed partial of the Schwartz function diverges at the origin")
    {
        const auto s = make_schwartz();
        for (const char* path : {"xy", "yx"}) {
            const auto ladder = fd_ladder(s, DerivativePath::parse(path), {0.0, 0.0}, 1e-1);
            REQUIRE(ladder.values.size() == 3);
            CHECK(ladder.diverged);
            for (std::size_t k = 0; k < 3; ++k) {
                // the outer quotient is 2/h^2 up to the inner step
                CHECK(std::abs(ladder.values[k]) == doctest::Approx(2.0 / (ladder.steps[k] * ladder.steps[k])).epsilon(1e-3));
            }
        }
    }

    TEST_CASE("mixed partial of the sextic exists at the origin")
    {
        // f'_x(0,y) = 0 for every y, so f''_xy(0,0) = 0. With inner step h^3 the
        // rungs are 2h^2 exactly up to rounding: they shrink instead of growing.
        const auto ladder = fd_ladder(make_sextic(), DerivativePath::parse("xy"), {0.0, 0.0}, 1e-1);
        CHECK_FALSE(ladder.diverged);
        for (std::size_t k = 0; k < ladder.values.size(); ++k) {
            const double h = ladder.steps[k];
            CHECK(ladder.values[k] == doctest::Approx(2.0 * h * h).epsilon(1e-6));
        }
    }

    TEST_CASE("one-sided stencils at the edge and failure beyond")
    {
        const auto cube = formula("x^3", [](double x, double) { return x * x * x; }, {0, 1, 0, 1});
        const double edge = nested_difference(cube, DerivativePath::parse("x"), {1.0, 0.5}, 1e-4);
        CHECK(edge == doctest::Approx(3.0).epsilon(1e-7));
        const auto tiny = formula("tiny", [](double x, double) { return x; }, {0, 1e-6, 0, 1});
        CHECK_THROWS_AS(nested_difference(tiny, DerivativePath::parse("x"), {0.0, 0.5}, 1e-3), DomainError);
        CHECK_THROWS_AS(nested_difference(cube, DerivativePath::parse("x"), {2.0, 0.5}, 1e-3), DomainError);
    }

    TEST_CASE("non-finite stencil values are reported")
    {
        const auto bad = formula("1/x", [](double x, double) { return 1.0 / x; });
        try {
            nested_difference(bad, DerivativePath::parse("x"), {1e-3, 0.0}, 1e-3);
            FAIL("expected NumericalError");
        } catch (const NumericalError& e) {
            CHECK(std::string(e.what()).find("stencil point") != std::string::npos);
        }
    }

    TEST_CASE("dn_apply examples")
    {
        const auto sum = make_affine(1.0, 1.0, 0.0);
        CHECK(dn_apply(sum, 1, {0.3, -1.2}, 1e-4) == doctest::Approx(2.0));
        const auto sq = formula("(x-y)^2", [](double x, double y) { return (x - y) * (x - y); });
        CHECK(std::abs(dn_apply(sq, 2, {0.7, 0.1}, 1e-3)) < 1e-8);
        const auto pw = catalog_get("plane_wave:sin:k=1");
        CHECK(std::abs(dn_apply(pw, 1, {1.0, 0.0}, 1e-4)) < 1e-12);
    }

    TEST_CASE("dn_apply is linear")
    {
        const auto f = catalog_get("wave_pair:sin:exp");
        const auto g = catalog_get("poly_transport:cube:cos");
        const double a = 1.7, b = -0.6;
        const auto combo = linear_combination(a, f, b, g);
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        for (int n = 1; n <= 3; ++n) {
            for (int k = 0; k < 10; ++k) {
                const Point p{u(rng), u(rng)};
                const double lhs = dn_apply(combo, n, p, 1e-3);
                const double rhs = a * dn_apply(f, n, p, 1e-3) + b * dn_apply(g, n, p, 1e-3);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9).scale(1.0));
            }
        }
    }

    TEST_CASE("D_2 equals D_1 applied twice")
    {
        for (const char* name : {"poly_transport:cube:square", "wave_pair:cube:square", "affine:a=2:b=3"}) {
            const auto f = catalog_get(name);
            const auto d1 = apply_d1(f, 1e-4);
            for (Point p : {Point{0.3, 0.4}, Point{-1.1, 0.9}, Point{1.5, -1.5}}) {
                CHECK(dn_apply(f, 2, p, 1e-4) == doctest::Approx(dn_apply(d1, 1, p, 1e-4)).epsilon(1e-6).scale(1.0));
            }
        }
    }

    TEST_CASE("D_n matches 2^n d^n/ds^n")
    {
        // f = s^3 t + s t^2 in s = x+y, t = x-y: D_1 f = 2(3 s^2 t + t^2), D_2 f = 24 s t, D_3 f = 48 t
        const auto f = formula("st", [](double x, double y) {
            const double s = x + y, t = x - y;
            return s * s * s * t + s * t * t;
        });
        const Point p{0.4, -0.3};
        const double s = 0.1, t = 0.7;
        CHECK(dn_apply(f, 1, p, 1e-4) == doctest::Approx(2 * (3 * s * s * t + t * t)).epsilon(1e-7));
        CHECK(dn_apply(f, 2, p, 1e-3) == doctest::Approx(24 * s * t).epsilon(1e-5));
        CHECK(dn_apply(f, 3, p, 1e-3) == doctest::Approx(48 * t).epsilon(1e-4));
    }

    TEST_CASE("path symmetry on a smooth entry")
    {
        const Function2D plain("sin", kDefaultWindow, [](double x, double y) { return std::sin(x - y); });
        const GridGeometry g{{-1.5, 1.5, -1.5, 1.5}, 21, 21};
        double worst = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            for (int j = 0; j < g.ny; ++j) {
                const Point p = g.node(i, j);
                const double xy = nested_difference(plain, DerivativePath::parse("xy"), p, 1e-3);
                const double yx = nested_difference(plain, DerivativePath::parse("yx"), p, 1e-3);
                worst = std::max(worst, std::abs(xy - yx));
            }
        }
        CHECK(worst <= 1e-4);
    }

    TEST_CASE("directional quotient")
    {
        const auto fx = make_affine(1.0, 0.0, 0.0);
        const auto q = directional_quotient(fx, {0, 0}, {1, 1});
        CHECK(q.quotient == doctest::Approx(1.0 / std::sqrt(2.0)));
        CHECK(q.cos_alpha == doctest::Approx(1.0 / std::sqrt(2.0)));
        CHECK(q.sin_alpha == doctest::Approx(1.0 / std::sqrt(2.0)));
        CHECK(directional_quotient(make_affine(0, 0, 4), {0.2, 0.1}, {-1, 1.5}).quotient == 0.0);
        CHECK_THROWS_AS(directional_quotient(fx, {0.5, 0.5}, {0.5, 0.5}), DegenerateInputError);

        // affine f: quotient equals the gradient projected on the direction, for random pairs
        const auto aff = make_affine(1.0, 1.0, 0.0);
        std::mt19937 rng(1);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int k = 0; k < 100; ++k) {
            const Point p{u(rng), u(rng)}, r{u(rng), u(rng)};
            if (p == r) {
                continue;
            }
            const auto s = directional_quotient(aff, p, r);
            CHECK(s.cos_alpha * s.cos_alpha + s.sin_alpha * s.sin_alpha == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(s.distance == doctest::Approx(std::hypot(r.x - p.x, r.y - p.y)));
            CHECK(s.quotient == doctest::Approx(s.cos_alpha + s.sin_alpha).epsilon(1e-12).scale(1.0));
        }
    }
}
