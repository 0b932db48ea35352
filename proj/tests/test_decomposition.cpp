#include "doctest.h"

#include "oracles.hpp"
#include "pdestruct/decomposition.hpp"
#include "pdestruct/errors.hpp"

#include <cmath>

using namespace pdestruct;

namespace {

const GridGeometry kGrid{kDefaultWindow, 101, 101};

template <class G>
double sup_error(const Profile1D& p, G expected)
{
    double worst = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        worst = std::max(worst, std::abs(p.values()[k] - expected(p.t_values()[k])));
    }
    return worst;
}

// D_n f at (x, y) through jets in s = x + y: each unit adds (1, 1) to (x, y),
// so the top coefficient is the n-fold directional derivative along (1, 1).
template <class F>
double dn_oracle(F f, int n, double x, double y)
{
    oracle::Jet X(n, x), Y(n, y);
    for (int k = 0; k < n; ++k) {
        X.c[std::size_t{1} << k] = 1.0;
        Y.c[std::size_t{1} << k] = 1.0;
    }
    return f(X, Y).top();
}

} // namespace

TEST_SUITE("decomposition")
{
    TEST_CASE("first order residual")
    {
        CHECK(residual_first_order(catalog_get("plane_wave:sin:k=1"), 1.0, kGrid, 1e-4) <= 1e-6);
        const GridGeometry small{{-1, 1, -1, 1}, 21, 21};
        CHECK(residual_first_order(make_affine(1, 0, 0), 1.0, small, 1e-4) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(residual_first_order(make_affine(2, -1, 0), 2.0, small, 1e-4) <= 1e-12);
        CHECK_THROWS_AS(residual_first_order(make_affine(1, 0, 0), 0.0, small, 1e-4), ValidationError);
    }

    TEST_CASE("characteristic samples cover the range on a lattice")
    {
        const auto s = characteristic_samples(1.0, kGrid, 401);
        CHECK(s.size() >= 401);
        CHECK(s.front() == doctest::Approx(-4.0));
        CHECK(s.back() == doctest::Approx(4.0));
        // every node value x - y is a sample
        const double step = s[1] - s[0];
        const double ratio = kGrid.dx() / step;
        CHECK(ratio == doctest::Approx(std::round(ratio)).epsilon(1e-12));
    }

    TEST_CASE("profile extraction")
    {
        ProfileOptions opts;
        opts.min_samples = 401;
        const auto sin_profile = extract_profile(catalog_get("plane_wave:sin:k=1"), 1.0, kGrid, opts);
        CHECK(sin_profile.reconstruction_error <= 1e-9);
        CHECK(sup_error(sin_profile.profile, [](double t) { return std::sin(t); }) <= 1e-12);

        opts.min_samples = 801;
        const auto cube = extract_profile(catalog_get("plane_wave:cube:k=2"), 2.0, kGrid, opts);
        CHECK(cube.reconstruction_error <= 1e-6);
        CHECK(sup_error(cube.profile, [](double t) { return t * t * t; }) <= 1e-9);

        for (double k : {1.0, -0.5, 3.0}) {
            const auto c = extract_profile(catalog_get("constant:c=2.5"), k, kGrid);
            CHECK(c.reconstruction_error == 0.0);
            CHECK(sup_error(c.profile, [](double) { return 2.5; }) == 0.0);
        }
    }

    TEST_CASE("the oracle confirms D_n f = 0 for the decomposition inputs")
    {
        const auto two = [](auto x, auto y) { return (x - y) * (x - y) + (x + y) * (x - y) * (x - y) * (x - y); };
        const auto three = [](auto x, auto y) { return (x + y) * (x + y) * (x - y); };
        for (Point p : {Point{0.3, -1.1}, Point{1.7, 0.4}, Point{-2, 2}}) {
            CHECK(std::abs(dn_oracle(two, 2, p.x, p.y)) <= 1e-12);
            CHECK(std::abs(dn_oracle(three, 3, p.x, p.y)) <= 1e-12);
            CHECK(std::abs(dn_oracle(two, 1, p.x, p.y)) > 0.0);
        }
    }

    TEST_CASE("second order decomposition")
    {
        const auto f = catalog_get("poly_transport:square:cube");
        const auto r = decompose_dn(f, 2, kGrid);
        REQUIRE(r.profiles.size() == 2);
        CHECK(r.metadata.exact_partials);
        CHECK(sup_error(r.profiles[0], [](double t) { return t * t; }) <= 1e-6);
        CHECK(sup_error(r.profiles[1], [](double t) { return t * t * t; }) <= 1e-6);
        CHECK(r.reconstruction_error <= 1e-6);
        CHECK(r.residual <= 1e-9);
    }

    TEST_CASE("third order decomposition")
    {
        const auto f = catalog_get("poly_transport:zero:zero:identity");
        const auto r = decompose_dn(f, 3, kGrid);
        REQUIRE(r.profiles.size() == 3);
        CHECK(sup_error(r.profiles[0], [](double) { return 0.0; }) <= 1e-6);
        CHECK(sup_error(r.profiles[1], [](double) { return 0.0; }) <= 1e-6);
        CHECK(sup_error(r.profiles[2], [](double t) { return t; }) <= 1e-6);
        CHECK(r.reconstruction_error <= 1e-6);
    }

    TEST_CASE("first order decomposition agrees with profile extraction")
    {
        const auto f = catalog_get("plane_wave:cos:k=1");
        const auto r = decompose_dn(f, 1, kGrid);
        REQUIRE(r.profiles.size() == 1);
        const auto e = extract_profile(f, 1.0, kGrid);
        CHECK(r.profiles[0].t_values() == e.profile.t_values());
        for (std::size_t k = 0; k < e.profile.size(); ++k) {
            CHECK(r.profiles[0].values()[k] == doctest::Approx(e.profile.values()[k]).epsilon(1e-12).scale(1.0));
        }
    }

    TEST_CASE("reconstruction round trip")
    {
        const GridGeometry g{{-1, 1, -1, 1}, 41, 41};
        for (const char* name : {"poly_transport:sin:exp", "poly_transport:cos:identity:square", "poly_transport:exp"}) {
            const auto f = catalog_get(name);
            const int n = static_cast<int>(CatalogRequest::parse(name).profiles.size());
            const auto r = decompose_dn(f, n, g);
            const auto back = reconstruct_poly(r.profiles, g.rect);
            double worst = 0.0;
            for (int i = 0; i < g.nx; ++i) {
                for (int j = 0; j < g.ny; ++j) {
                    const Point p = g.node(i, j);
                    worst = std::max(worst, std::abs(back.eval(p) - f.eval(p)));
                }
            }
            INFO(name);
            CHECK(worst <= 1e-6);
            CHECK(worst == doctest::Approx(r.reconstruction_error).epsilon(1e-9).scale(1e-15));
        }
    }

    TEST_CASE("decomposition hypotheses and limits")
    {
        const GridGeometry g{{-1, 1, -1, 1}, 21, 21};
        try {
            decompose_dn(make_schwartz(), 2, g);
            FAIL("expected a hypothesis violation");
        } catch (const HypothesisViolation& e) {
            CHECK(e.check() == "residual_gate");
        }
        CHECK_THROWS_AS(decompose_dn(make_affine(1, 1, 0), 5, g), UnsupportedError);
        CHECK_THROWS_AS(decompose_dn(make_affine(1, 1, 0), 0, g), ValidationError);
        CHECK_THROWS_AS(decompose_dn(make_affine(1, 1, 0, {0, 1, 0, 1}), 1, g), DomainError);
    }

    TEST_CASE("wave split of a cubic plus cosine")
    {
        const auto f = catalog_get("wave_pair:cube:cos");
        const auto w = decompose_wave(f, kGrid);
        CHECK(sup_error(w.psi, [](double t) { return std::cos(t) - 1.0; }) <= 1e-5);
        CHECK(sup_error(w.phi, [](double t) { return t * t * t + 1.0; }) <= 1e-5);
        CHECK(sup_error(w.psi_tilde, [](double t) { return -2.0 * std::sin(t); }) <= 1e-6);
        CHECK(w.reconstruction_error <= 1e-5);
        CHECK(w.psi(0.0) == 0.0);
    }

    TEST_CASE("wave split of a harmonic linear function")
    {
        const auto w = decompose_wave(make_affine(1, 1, 0), kGrid);
        CHECK(sup_error(w.psi, [](double) { return 0.0; }) <= 1e-12);
        CHECK(sup_error(w.psi_tilde, [](double) { return 0.0; }) <= 1e-12);
        CHECK(sup_error(w.phi, [](double t) { return t; }) <= 1e-12);
        CHECK(w.reconstruction_error <= 1e-12);
    }

    TEST_CASE("adding a constant only moves phi")
    {
        const GridGeometry g{{-1, 1, -1, 1}, 41, 41};
        const auto f = catalog_get("wave_pair:sin:square");
        const auto shifted = linear_combination(1.0, f, 1.0, catalog_get("constant:c=3"));
        const auto a = decompose_wave(f, g);
        const auto b = decompose_wave(shifted, g);
        CHECK(sup_error(b.psi, [&](double t) { return a.psi(t); }) <= 1e-12);
        CHECK(sup_error(b.phi, [&](double t) { return a.phi(t) + 3.0; }) <= 1e-9);
    }

    TEST_CASE("wave split refuses the Schwartz function")
    {
        try {
            decompose_wave(make_schwartz(), kGrid);
            FAIL("expected a hypothesis violation");
        } catch (const HypothesisViolation& e) {
            CHECK(e.check() == "mixed_partial_existence");
            CHECK(e.worst_x() == 0.0);
            CHECK(e.worst_y() == 0.0);
        }
    }

    TEST_CASE("transport solutions are wave solutions too")
    {
        // phi(x - y) solves both D_1 f = 0 and the wave equation; the splits must agree
        const auto f = catalog_get("poly_transport:sin");
        const auto w = decompose_wave(f, kGrid);
        const auto r = decompose_dn(f, 1, kGrid);
        // compared at the coarser transport samples, where neither side interpolates
        const Profile1D& phi1 = r.profiles[0];
        CHECK(sup_error(phi1, [&](double t) { return w.psi(t) + phi1(0.0); }) <= 1e-6);
        CHECK(sup_error(w.phi, [&](double) { return phi1(0.0); }) <= 1e-6);
    }
}
