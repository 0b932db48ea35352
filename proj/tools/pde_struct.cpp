// Command-line front end: parses flags (and an optional JSON config) into a
// RunConfig, runs it, and writes the report plus optional CSV side files.

#include "CLI11.hpp"
#include "pdestruct/errors.hpp"
#include "pdestruct/run.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using pdestruct::RunConfig;

namespace {

// Writes next to the target and renames, so a failed write leaves nothing behind.
void write_atomically(const fs::path& path, const std::string& content)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os || !(os << content) || !os.flush()) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw pdestruct::ValidationError("cannot write '" + path.string() + "'");
        }
    }
    fs::rename(tmp, path);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Structure checks for separately differentiable functions of two variables"};
    // -h is taken by the step flag --h, so help is long-form only
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1, 1);

    // Flags are collected into optionals first so a --config file can supply
    // anything the command line leaves out.
    std::optional<std::string> config_path, fn, grid_file, axis, vector, out, csv_dir;
    std::optional<double> x0, x1, y0, y1, h, eps, tol, gate, threshold, k, baseline;
    std::optional<int> nx, ny, resolution, n, box, samples, d, probes, threads;

    auto add_common = [&](CLI::App* sub, bool source) {
        sub->add_option("--config", config_path, "JSON config file; command-line flags take precedence");
        if (source) {
            sub->add_option("--fn", fn, "catalog request, e.g. plane_wave:sin:k=1");
            sub->add_option("--grid", grid_file, "grid file (.json or .csv)");
            sub->add_option("--x0", x0);
            sub->add_option("--x1", x1);
            sub->add_option("--y0", y0);
            sub->add_option("--y1", y1);
            sub->add_option("--nx", nx);
            sub->add_option("--ny", ny);
            sub->add_option("--baseline", baseline, "profile baseline y = y0");
        }
        sub->add_option("--h", h, "difference step");
        sub->add_option("--tol", tol, "verdict tolerance");
        sub->add_option("--gate", gate, "hypothesis gate");
        sub->add_option("--out", out, "write the JSON report here instead of stdout");
        sub->add_option("--csv-dir", csv_dir, "directory for plot-ready CSV files");
        sub->add_option("--threads", threads, "worker threads (default: PDE_STRUCT_THREADS or 1)");
    };

    auto* catalog = app.add_subcommand("catalog", "list catalog functions, profiles and vector maps");
    catalog->add_option("--out", out);
    catalog->add_option("--config", config_path);

    auto* verify = app.add_subcommand("verify", "transport residual, profile and characteristic constancy");
    add_common(verify, true);
    verify->add_option("--k", k, "characteristic slope");

    auto* decompose = app.add_subcommand("decompose", "f = sum (x+y)^(i-1) phi_i(x-y) for D_n f = 0");
    add_common(decompose, true);
    decompose->add_option("--n", n, "order");

    auto* wave = app.add_subcommand("wave", "f = phi(x+y) + psi(x-y)");
    add_common(wave, true);

    auto* regularity = app.add_subcommand("regularity", "oscillation field and nowhere-dense verdict");
    add_common(regularity, true);
    regularity->add_option("--threshold", threshold, "oscillation threshold");
    regularity->add_option("--box", box, "box size of the nowhere-dense rule");
    regularity->add_option("--samples", samples, "angular samples per radius");

    auto* lambda = app.add_subcommand("lambda-map", "Baire lambda field and its upper semicontinuity");
    add_common(lambda, true);
    lambda->add_option("--eps", eps, "half-width of the window [-eps, eps]");
    lambda->add_option("--resolution", resolution, "samples per half-window");
    lambda->add_option("--axis", axis, "differentiation variable (x or y)")->check(CLI::IsMember({"x", "y"}));

    auto* vec = app.add_subcommand("vector", "translation structure of F : R^d x R^d -> R^m");
    add_common(vec, false);
    vec->add_option("--map", vector, "translation, sum, chain or sin_square");
    vec->add_option("--d", d, "dimension");
    vec->add_option("--probes", probes, "probe points per factor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : pdestruct::kExitUsage;
    }

    RunConfig cfg;
    try {
        cfg.threads = pdestruct::default_thread_count();
        if (config_path) {
            std::ifstream is(*config_path);
            if (!is) {
                throw pdestruct::ValidationError("cannot open config '" + *config_path + "'");
            }
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(is);
            } catch (const nlohmann::json::exception& e) {
                throw pdestruct::ValidationError(*config_path + ": " + e.what());
            }
            cfg = RunConfig::from_json(doc, cfg);
        }
        cfg.command = app.get_subcommands().front()->get_name();
        auto set = [](auto& field, const auto& value) {
            if (value) {
                field = *value;
            }
        };
        if (fn || grid_file) {
            cfg.fn = fn;
            cfg.grid_file = grid_file;
        }
        set(cfg.grid.rect.x0, x0);
        set(cfg.grid.rect.x1, x1);
        set(cfg.grid.rect.y0, y0);
        set(cfg.grid.rect.y1, y1);
        set(cfg.grid.nx, nx);
        set(cfg.grid.ny, ny);
        set(cfg.baseline, baseline);
        set(cfg.h, h);
        if (eps) cfg.eps = eps;
        if (tol) cfg.tol = tol;
        if (gate) cfg.gate = gate;
        if (threshold) cfg.threshold = threshold;
        if (d) cfg.d = d;
        if (out) cfg.out = out;
        if (csv_dir) cfg.csv_dir = csv_dir;
        set(cfg.k, k);
        set(cfg.n, n);
        set(cfg.box, box);
        set(cfg.samples, samples);
        set(cfg.resolution, resolution);
        set(cfg.probes, probes);
        set(cfg.threads, threads);
        set(cfg.vector, vector);
        if (axis) {
            cfg.axis = *axis == "y" ? pdestruct::Axis::y : pdestruct::Axis::x;
        }
    } catch (const pdestruct::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return pdestruct::kExitUsage;
    }

    const pdestruct::RunOutcome result = pdestruct::run(cfg);
    const std::string text = result.report.dump(2) + "\n";
    if (result.report.contains("error")) {
        std::cerr << "error: " << result.report["error"]["message"].get<std::string>() << '\n';
    }

    // Nothing is written to disk unless the analysis ran to completion.
    if (result.complete) {
        try {
            if (cfg.csv_dir) {
                fs::create_directories(*cfg.csv_dir);
                for (const auto& [name, content] : result.csv_files) {
                    write_atomically(fs::path(*cfg.csv_dir) / name, content);
                }
            }
            if (cfg.out) {
                write_atomically(*cfg.out, text);
                return result.exit_code;
            }
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return pdestruct::kExitUsage;
        }
    }
    std::cout << text;
    return result.exit_code;
}
