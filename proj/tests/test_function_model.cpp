#include "doctest.h"

#include "oracles.hpp"
#include "pdestruct/differencing.hpp"
#include "pdestruct/errors.hpp"
#include "pdestruct/function_model.hpp"
#include "pdestruct/grid_io.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace pdestruct;

TEST_SUITE("function_model")
{
    TEST_CASE("catalog values at spot points")
    {
        const auto s = catalog_get("schwartz");
        CHECK(s(1.0, 1.0) == doctest::Approx(1.0));
        CHECK(s(0.0, 0.0) == 0.0);
        CHECK(eval2d(s, {0.0, 0.0}) == 0.0);
        const auto sx = catalog_get("sextic");
        for (double h : {1e-3, 0.1, 1.7, -0.4}) {
            CHECK(sx(h, h) == doctest::Approx(1.0).epsilon(1e-14));
        }
        CHECK(eval2d(catalog_get("plane_wave:sin:k=1"), {2.0, 2.0}) == 0.0);
        CHECK(eval2d(catalog_get("wave_pair:cube:cos"), {1.0, 0.0}) == doctest::Approx(1.0 + std::cos(1.0)));
    }

    TEST_CASE("schwartz vanishes on both axes")
    {
        const auto s = make_schwartz();
        for (double t = -2.0; t <= 2.0; t += 0.125) {
            CHECK(s(t, 0.0) == 0.0);
            CHECK(s(0.0, t) == 0.0);
        }
    }

    TEST_CASE("unknown catalog names list what is available")
    {
        try {
            catalog_get("nope");
            FAIL("expected LookupError");
        } catch (const LookupError& e) {
            const std::string msg = e.what();
            for (const char* n : {"schwartz", "sextic", "plane_wave", "poly_transport", "wave_pair"}) {
                CHECK(msg.find(n) != std::string::npos);
            }
        }
        CHECK_THROWS_AS(catalog_get("plane_wave:nosuchprofile"), LookupError);
        CHECK_THROWS_AS(catalog_get("plane_wave:sin:q=3"), ValidationError);
    }

    TEST_CASE("catalog request round trip and window keys")
    {
        const auto req = CatalogRequest::parse("plane_wave:cube:k=2");
        CHECK(req.name == "plane_wave");
        REQUIRE(req.profiles.size() == 1);
        CHECK(req.profiles[0] == "cube");
        CHECK(req.numbers.at("k") == 2.0);
        CHECK(CatalogRequest::parse(req.str()).str() == req.str());
        const auto f = catalog_get("schwartz:x0=-1:x1=1:y0=-1:y1=1");
        CHECK(f.domain() == Rect{-1, 1, -1, 1});
        CHECK_THROWS_AS(f(1.5, 0.0), DomainError);
    }

    TEST_CASE("evaluation outside the domain is a domain error")
    {
        const auto f = make_plane_wave(profile_get("sin"), 1.0);
        CHECK_THROWS_AS(f(2.5, 0.0), DomainError);
        CHECK_THROWS_AS(eval2d(f, {0.0, -3.0}), DomainError);
    }

    TEST_CASE("catalog exact partials agree with the jet oracle")
    {
        // Oracle formulas are restated independently of the catalog.
        struct Case {
            const char* request;
            std::function<double(const std::string&, double, double)> partial;
        };
        const std::vector<Case> cases{
            {"schwartz", [](const std::string& p, double x, double y) { return oracle::partial(oracle::schwartz, p, x, y); }},
            {"sextic", [](const std::string& p, double x, double y) { return oracle::partial(oracle::sextic, p, x, y); }},
            {"plane_wave:sin:k=2",
             [](const std::string& p, double x, double y) {
                 return oracle::partial([](auto a, auto b) { using std::sin; return sin(2.0 * a - b); }, p, x, y);
             }},
            {"poly_transport:square:cube:exp",
             [](const std::string& p, double x, double y) {
                 return oracle::partial(
                     [](auto a, auto b) {
                         using std::exp;
                         auto s = a + b;
                         auto t = a - b;
                         return t * t + s * (t * t * t) + s * s * exp(t);
                     },
                     p, x, y);
             }},
            {"wave_pair:cube:cos",
             [](const std::string& p, double x, double y) {
                 return oracle::partial(
                     [](auto a, auto b) {
                         using std::cos;
                         auto s = a + b;
                         return s * s * s + cos(a - b);
                     },
                     p, x, y);
             }},
            {"affine:a=3:b=-2:c=1",
             [](const std::string& p, double x, double y) {
                 return oracle::partial([](auto a, auto b) { return 3.0 * a - 2.0 * b + 1.0; }, p, x, y);
             }},
        };
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> u(-1.8, 1.8);
        for (const auto& c : cases) {
            const auto f = catalog_get(c.request);
            CHECK(f.exact_order() >= 3);
            for (int trial = 0; trial < 20; ++trial) {
                Point p{u(rng), u(rng)};
                if (std::hypot(p.x, p.y) < 0.5) {
                    continue;
                }
                for (int n = 1; n <= 3; ++n) {
                    for (const auto& path : oracle::paths_of_order(n)) {
                        const double want = c.partial(path, p.x, p.y);
                        const auto got = f.exact_partial(DerivativePath::parse(path), p);
                        REQUIRE(got.has_value());
                        INFO(c.request << " path " << path << " at (" << p.x << ", " << p.y << ")");
                        CHECK(*got == doctest::Approx(want).epsilon(1e-10).scale(1.0));
                    }
                }
            }
        }
    }

    TEST_CASE("catalog exact partials match central differences")
    {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(-1.8, 1.8);
        for (const char* name : {"schwartz", "sextic", "plane_wave:sin:k=1", "plane_wave:exp:k=-0.5",
                                 "poly_transport:sin:cos", "wave_pair:square:sin", "affine:a=2:b=5"}) {
            const auto f = catalog_get(name);
            int tested = 0;
            while (tested < 20) {
                const Point p{u(rng), u(rng)};
                if (std::hypot(p.x, p.y) < 0.5) {
                    continue;
                }
                ++tested;
                for (int n = 1; n <= 2; ++n) {
                    for (const auto& path : DerivativePath::all_of_order(n)) {
                        const double exact = *f.exact_partial(path, p);
                        const double fd = nested_difference(f, path, p, 1e-4);
                        INFO(name << " " << path.str() << " at (" << p.x << ", " << p.y << ")");
                        CHECK(std::abs(exact - fd) <= 1e-5 * (1.0 + std::abs(exact)));
                    }
                }
            }
        }
    }

    TEST_CASE("exact partials are withheld at singular points")
    {
        const auto s = make_schwartz();
        CHECK(s.is_singular({0.0, 0.0}));
        CHECK_FALSE(s.exact_partial(DerivativePath::parse("x"), {0.0, 0.0}).has_value());
        CHECK(s.exact_partial(DerivativePath::parse("x"), {1.0, 0.5}).has_value());
        CHECK(make_plane_wave(profile_get("abs"), 1.0).exact_order() == 0);
    }

    TEST_CASE("sample_grid layout")
    {
        const auto c = catalog_get("constant:c=3");
        const auto s3 = sample_grid(c, {{-1, 1, -1, 1}, 7, 5});
        for (double v : s3.values) {
            CHECK(v == 3.0);
        }
        const auto fx = make_affine(1.0, 0.0, 0.0, {0, 1, 0, 1});
        const auto sx = sample_grid(fx, {{0, 1, 0, 1}, 2, 2});
        CHECK(sx.values == std::vector<double>{0, 0, 1, 1});
        const auto ss = sample_grid(make_schwartz(), {{-1, 1, -1, 1}, 3, 3});
        CHECK(ss.at(1, 1) == 0.0);
        CHECK(ss.at(2, 2) == doctest::Approx(1.0));
        CHECK_THROWS_AS(sample_grid(make_schwartz(), {{-3, 1, -1, 1}, 3, 3}), DomainError);
    }

    TEST_CASE("sampling is identical for any thread count")
    {
        const auto f = catalog_get("wave_pair:exp:sin");
        const GridGeometry g{{-2, 2, -2, 2}, 57, 43};
        CHECK(sample_grid(f, g, 1).values == sample_grid(f, g, 8).values);
    }

    TEST_CASE("from_grid interpolation")
    {
        const GridGeometry g{{0, 1, 0, 2}, 5, 9};
        const auto sum = sample_grid(make_affine(1.0, 1.0, 0.0, {0, 1, 0, 2}), g);
        const auto interp = from_grid(sum);
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> ux(0.0, 1.0), uy(0.0, 2.0);
        for (int k = 0; k < 100; ++k) {
            const double x = ux(rng), y = uy(rng);
            CHECK(interp(x, y) == doctest::Approx(x + y).epsilon(1e-13));
        }
        CHECK(interp.exact_order() == 0);
        CHECK(interp.domain() == g.rect);

        const auto f = catalog_get("wave_pair:exp:sin");
        const GridGeometry g2{{-1, 1, -1, 1}, 21, 17};
        const auto sample = sample_grid(f, g2);
        const auto back = from_grid(sample);
        for (int i = 0; i < g2.nx; ++i) {
            for (int j = 0; j < g2.ny; ++j) {
                const Point p = g2.node(i, j);
                CHECK(back(p.x, p.y) == sample.at(i, j));
            }
        }

        const auto sq = sample_grid(Function2D("sq", {0, 1, 0, 1}, [](double x, double) { return x * x; }),
                                    {{0, 1, 0, 1}, 3, 2});
        CHECK(from_grid(sq)(0.25, 0.7) == doctest::Approx(0.125));
    }

    TEST_CASE("malformed samples are rejected")
    {
        GridSample bad{{{0, 1, 0, 1}, 3, 3}, std::vector<double>(8, 0.0)};
        CHECK_THROWS_AS(from_grid(bad), ValidationError);
        bad.values.assign(9, 0.0);
        bad.values[4] = std::nan("");
        CHECK_THROWS_AS(from_grid(bad), ValidationError);
        CHECK_THROWS_AS(GridGeometry({{0, 1, 0, 1}, 1, 3}).validate(), ValidationError);
        CHECK_THROWS_AS(GridGeometry({{1, 0, 0, 1}, 3, 3}).validate(), ValidationError);
    }

    TEST_CASE("profile tables")
    {
        const std::vector<double> t{-1.0, 0.0, 2.0};
        const Profile1D p(t, {1.0, 0.0, 4.0});
        CHECK(p(-0.5) == doctest::Approx(0.5));
        CHECK(p(1.0) == doctest::Approx(2.0));
        CHECK(p(2.0) == 4.0);
        CHECK_THROWS_AS(p(2.5), DomainError);
        CHECK_THROWS_AS(Profile1D({0.0, 0.0}, {1.0, 2.0}), ValidationError);
        CHECK_THROWS_AS(Profile1D({0.0, 1.0}, {1.0}), ValidationError);
        CHECK(p.scaled(-2.0).values() == std::vector<double>{-2.0, 0.0, -8.0});
    }
}

TEST_SUITE("grid_io")
{
    TEST_CASE("json round trip")
    {
        const auto s = sample_grid(catalog_get("plane_wave:sin"), {{-2, 2, -1, 1}, 11, 7});
        const auto doc = grid_to_json(s);
        for (const char* k : {"x0", "x1", "y0", "y1", "nx", "ny", "values"}) {
            CHECK(doc.contains(k));
        }
        const auto back = grid_from_json(nlohmann::json::parse(doc.dump()));
        CHECK(back.grid == s.grid);
        CHECK(back.values == s.values);
    }

    TEST_CASE("csv round trip in any row order")
    {
        const auto s = sample_grid(catalog_get("wave_pair:cube:cos"), {{0, 1, -1, 1}, 4, 5});
        std::stringstream os;
        write_grid_csv(os, s);
        std::string header;
        std::getline(os, header);
        CHECK(header == "x,y,value");
        std::vector<std::string> rows;
        for (std::string line; std::getline(os, line);) {
            rows.push_back(line);
        }
        std::reverse(rows.begin(), rows.end());
        std::stringstream shuffled;
        shuffled << header << '\n';
        for (const auto& r : rows) {
            shuffled << r << '\n';
        }
        const auto back = read_grid_csv(shuffled);
        CHECK(back.grid.nx == 4);
        CHECK(back.grid.ny == 5);
        for (std::size_t k = 0; k < s.values.size(); ++k) {
            CHECK(back.values[k] == doctest::Approx(s.values[k]).epsilon(1e-15));
        }
    }

    TEST_CASE("csv diagnostics name the source and line")
    {
        std::stringstream bad("x,y,value\n0,0,1\n0,1,oops\n1,0,1\n1,1,1\n");
        try {
            read_grid_csv(bad, "data.csv");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("data.csv:3") != std::string::npos);
        }
        std::stringstream uneven("x,y,value\n0,0,1\n0,1,1\n0,3,1\n1,0,1\n1,1,1\n1,3,1\n");
        CHECK_THROWS_AS(read_grid_csv(uneven), ValidationError);
        std::stringstream dup("x,y,value\n0,0,1\n0,0,1\n1,0,1\n1,1,1\n");
        CHECK_THROWS_AS(read_grid_csv(dup), ValidationError);
        std::stringstream header("a,b,c\n0,0,1\n");
        CHECK_THROWS_AS(read_grid_csv(header), ValidationError);
        CHECK_THROWS_AS(read_grid_file("/nonexistent/grid.csv"), ValidationError);
    }
}
