#include "doctest.h"

#include "oracles.hpp"
#include "pdestruct/baire_lambda.hpp"
#include "pdestruct/errors.hpp"

#include <cmath>

using namespace pdestruct;

TEST_SUITE("baire_lambda")
{
    TEST_CASE("affine sections give lambda one")
    {
        for (double x : {-3.0, 0.0, 0.7}) {
            for (double eps : {1e-6, 0.1, 1.0}) {
                CHECK(lambda_1d([](double t) { return -2.5 * t + 4.0; }, x, eps, 16) == 1.0);
            }
        }
    }

    TEST_CASE("x squared at the origin matches the brute-force oracle")
    {
        const auto sq = [](double t) { return t * t; };
        CHECK(oracle::lambda_brute(sq, 0.0, 0.5, 64) == 0.25);
        CHECK(lambda_1d(sq, 0.0, 0.5, 64) == 0.25);
        for (double eps : {0.03, 0.2, 0.9, 1.7}) {
            for (double x : {0.0, 0.4, -1.3}) {
                CHECK(lambda_1d(sq, x, eps, 16) == oracle::lambda_brute(sq, x, eps, 16));
            }
        }
    }

    TEST_CASE("absolute value at its kink")
    {
        const auto ab = [](double t) { return std::abs(t); };
        CHECK(lambda_1d(ab, 0.0, 1.0, 64) == 0.0);
        CHECK(oracle::lambda_brute(ab, 0.0, 1.0, 16) == 0.0);
        // at distance d the window fits while delta <= 2d (eps = 1)
        CHECK(lambda_1d(ab, 0.1, 1.0, 64) == 0.125);
        CHECK(lambda_1d(ab, 0.1, 1.0, 16) == oracle::lambda_brute(ab, 0.1, 1.0, 16));
    }

    TEST_CASE("monotone in epsilon")
    {
        const std::vector<std::pair<const char*, Evaluator1D>> profiles{
            {"sin", [](double t) { return std::sin(5 * t); }},
            {"abs", [](double t) { return std::abs(t - 0.01); }},
            {"cube", [](double t) { return t * t * t; }},
            {"exp", [](double t) { return std::exp(2 * t); }},
            {"sqrt", [](double t) { return std::sqrt(std::abs(t)); }}};
        for (const auto& [name, g] : profiles) {
            double prev = 0.0;
            for (int k = 0; k < 10; ++k) {
                const double eps = 1e-3 * std::pow(2.5, k);
                const double v = lambda_1d(g, 0.0, eps, 32);
                INFO(name << " eps " << eps);
                CHECK(v >= prev);
                prev = v;
            }
        }
    }

    TEST_CASE("translation invariance")
    {
        const auto g = [](double t) { return std::sin(3 * t) + t * t; };
        for (double c : {0.5, -2.0}) {
            for (double eps : {0.05, 0.4}) {
                const auto shifted = [&](double t) { return g(t - c); };
                CHECK(lambda_1d(shifted, 0.3 + c, eps, 32) == lambda_1d(g, 0.3, eps, 32));
            }
        }
    }

    TEST_CASE("positive wherever the profile is differentiable")
    {
        for (const char* name : {"sin", "cos", "exp", "square", "cube", "identity"}) {
            const auto p = profile_get(name);
            for (double x : {-1.0, 0.0, 0.5}) {
                CHECK(lambda_1d(p.derivatives[0], x, 1e-2, 64) > 0.0);
            }
        }
    }

    TEST_CASE("validation and numerical errors")
    {
        const auto g = [](double t) { return t; };
        CHECK_THROWS_AS(lambda_1d(g, 0.0, 0.0, 16), ValidationError);
        CHECK_THROWS_AS(lambda_1d(g, 0.0, 0.1, 4), ValidationError);
        CHECK_THROWS_AS(lambda_1d([](double t) { return std::log(t - 0.5); }, 0.0, 0.1, 8), NumericalError);
    }

    TEST_CASE("lambda field examples")
    {
        const Function2D xc("x c(y)", kDefaultWindow, [](double x, double y) { return x * std::cos(3 * y); });
        const auto ones = lambda_field(xc, Axis::x, 0.1, {{-1, 1, -1, 1}, 9, 9}, 16);
        for (double v : ones.values) {
            CHECK(v == 1.0);
        }

        const auto kink = lambda_field(make_plane_wave(profile_get("abs"), 1.0), Axis::x, 1.0, {{-1, 1, -1, 1}, 11, 11}, 32);
        for (int i = 0; i < 11; ++i) {
            for (int j = 0; j < 11; ++j) {
                if (i == j) {
                    CHECK(kink.at(i, j) == 0.0);
                } else {
                    CHECK(kink.at(i, j) > 0.0);
                }
            }
        }

        const auto sch = lambda_field(make_schwartz(), Axis::x, 0.1, {{-1, 1, -1, 1}, 21, 21}, 64);
        for (double v : sch.values) {
            CHECK(v > 0.0);
        }
    }

    TEST_CASE("lambda field is the same for any thread count")
    {
        const auto f = make_plane_wave(profile_get("abs"), 1.0);
        const GridGeometry g{{-1, 1, -1, 1}, 15, 13};
        CHECK(lambda_field(f, Axis::y, 0.5, g, 16, 1).values == lambda_field(f, Axis::y, 0.5, g, 16, 8).values);
    }

    TEST_CASE("usc check on plain values")
    {
        const GridGeometry g{{0, 1, 0, 1}, 5, 5};
        std::vector<double> flat(25, 0.3);
        CHECK(usc_violations(g, flat, 0.0).empty());
        std::vector<double> dip(25, 1.0);
        dip[g.index(2, 3)] = 0.0;
        const auto v = usc_violations(g, dip, 0.5);
        REQUIRE(v.size() == 1);
        CHECK(v[0] == GridNode{2, 3});
    }

    TEST_CASE("usc check on a lambda field brackets the ladder")
    {
        LambdaField field{{{0, 1, 0, 1}, 3, 3}, 1.0, Axis::x, 16, std::vector<double>(9, 0.25), std::vector<double>(9, 1.0)};
        // 0.25 failed the candidate 0.5, so 0.5 next door is within the bracket
        field.values[field.grid.index(0, 0)] = 0.5;
        CHECK(usc_violations(field, 0.05).empty());
        CHECK(usc_violations(field.grid, field.values, 0.05).size() == 3);
        // a zero can only rise to the smallest candidate
        field.values[field.grid.index(1, 1)] = 0.0;
        const auto v = usc_violations(field, 0.05);
        REQUIRE(v.size() == 1);
        CHECK(v[0] == GridNode{1, 1});
        const auto upper = lambda_upper_bounds(field);
        CHECK(upper[field.grid.index(1, 1)] == std::ldexp(1.0, -16));
        CHECK(upper[field.grid.index(2, 2)] == 0.5);
    }

    TEST_CASE("lambda of the kink is upper semicontinuous on a fine grid")
    {
        const auto f = make_plane_wave(profile_get("abs"), 1.0);
        const auto field = lambda_field(f, Axis::x, 1.0, {{-0.5, 0.5, -0.5, 0.5}, 101, 101}, 64);
        CHECK(usc_violations(field, 0.05).empty());
        // the diagonal zeros sit next to values up to 2 * spacing * 2 = 0.04
        CHECK(field.at(50, 50) == 0.0);
    }
}
