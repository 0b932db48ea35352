#include "pdestruct/baire_lambda.hpp"
#include "pdestruct/decomposition.hpp"
#include "pdestruct/errors.hpp"
#include "pdestruct/regularity.hpp"
#include "pdestruct/report.hpp"
#include "pdestruct/run.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pdestruct;

namespace {

// Results cross the boundary as JSON text; the Python side parses it.
template <class T>
std::string dumped(const T& value)
{
    return to_json(value).dump();
}

GridGeometry grid_of(const std::vector<double>& rect, int nx, int ny)
{
    if (rect.size() != 4) {
        throw ValidationError("rect must be [x0, x1, y0, y1]");
    }
    GridGeometry g{{rect[0], rect[1], rect[2], rect[3]}, nx, ny};
    g.validate();
    return g;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Structural analysis of first-order transport and wave-type equations";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", base.ptr());
    py::register_exception<LookupError>(m, "LookupError", base.ptr());
    py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
    py::register_exception<HypothesisViolation>(m, "HypothesisViolation", base.ptr());

    m.def("catalog_names", [] {
        std::vector<std::string> names;
        for (const auto& e : catalog_list()) {
            names.push_back(e.name);
        }
        return names;
    });

    m.def("evaluate", [](const std::string& fn, double x, double y) { return catalog_get(fn)(x, y); },
          py::arg("fn"), py::arg("x"), py::arg("y"));

    m.def("residual_first_order",
          [](const std::string& fn, double k, const std::vector<double>& rect, int nx, int ny, double h, int threads) {
              return residual_first_order(catalog_get(fn), k, grid_of(rect, nx, ny), h, threads);
          },
          py::arg("fn"), py::arg("k") = 1.0, py::arg("rect") = std::vector<double>{-2, 2, -2, 2},
          py::arg("nx") = 101, py::arg("ny") = 101, py::arg("h") = 1e-4, py::arg("threads") = 1);

    m.def("extract_profile",
          [](const std::string& fn, double k, const std::vector<double>& rect, int nx, int ny, int min_samples) {
              ProfileOptions opts;
              opts.min_samples = min_samples;
              const auto r = extract_profile(catalog_get(fn), k, grid_of(rect, nx, ny), opts);
              nlohmann::json doc{{"profile", to_json(r.profile)}, {"reconstruction_error", r.reconstruction_error}};
              return doc.dump();
          },
          py::arg("fn"), py::arg("k") = 1.0, py::arg("rect") = std::vector<double>{-2, 2, -2, 2},
          py::arg("nx") = 101, py::arg("ny") = 101, py::arg("min_samples") = 0);

    m.def("decompose_dn",
          [](const std::string& fn, int n, const std::vector<double>& rect, int nx, int ny, double h, double gate) {
              DecompositionOptions opts;
              opts.h = h;
              opts.residual_gate = gate;
              return dumped(decompose_dn(catalog_get(fn), n, grid_of(rect, nx, ny), opts));
          },
          py::arg("fn"), py::arg("n"), py::arg("rect") = std::vector<double>{-2, 2, -2, 2}, py::arg("nx") = 101,
          py::arg("ny") = 101, py::arg("h") = 1e-4, py::arg("gate") = 1e-3);

    m.def("decompose_wave",
          [](const std::string& fn, const std::vector<double>& rect, int nx, int ny, double gate) {
              WaveOptions opts;
              opts.gate = gate;
              return dumped(decompose_wave(catalog_get(fn), grid_of(rect, nx, ny), opts));
          },
          py::arg("fn"), py::arg("rect") = std::vector<double>{-2, 2, -2, 2}, py::arg("nx") = 101,
          py::arg("ny") = 101, py::arg("gate") = 1e-3);

    m.def("oscillation",
          [](const std::string& fn, double x, double y, const std::vector<double>& radii, int samples) {
              return dumped(oscillation(catalog_get(fn), {x, y}, radii, samples));
          },
          py::arg("fn"), py::arg("x"), py::arg("y"), py::arg("radii") = std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4},
          py::arg("samples") = 720);

    // g is any Python callable float -> float
    m.def("lambda_1d", &lambda_1d, py::arg("g"), py::arg("x"), py::arg("epsilon"), py::arg("resolution") = 64,
          py::arg("max_delta") = 1.0);

    m.def("run",
          [](const std::string& config_json) {
              const RunConfig cfg = RunConfig::from_json(nlohmann::json::parse(config_json));
              RunOutcome out;
              {
                  py::gil_scoped_release release;
                  out = run(cfg);
              }
              return py::make_tuple(out.exit_code, out.report.dump());
          },
          py::arg("config_json"));
}
