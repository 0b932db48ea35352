#include "pdestruct/run.hpp"

#include "pdestruct/baire_lambda.hpp"
#include "pdestruct/decomposition.hpp"
#include "pdestruct/errors.hpp"
#include "pdestruct/grid_io.hpp"
#include "pdestruct/regularity.hpp"
#include "pdestruct/report.hpp"
#include "pdestruct/vector_transport.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace pdestruct {

using nlohmann::json;

namespace {

template <class T>
json optional_json(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& v)
{
    if (v.is_null()) {
        return std::nullopt;
    }
    return v.get<T>();
}

Axis parse_axis(const std::string& text)
{
    if (text == "x") {
        return Axis::x;
    }
    if (text == "y") {
        return Axis::y;
    }
    throw ValidationError("axis must be 'x' or 'y', got '" + text + "'");
}

std::string profile_csv(const Profile1D& p)
{
    std::ostringstream os;
    write_profile_csv(os, p);
    return os.str();
}

std::string field_csv(const GridGeometry& grid, const std::vector<double>& values)
{
    std::ostringstream os;
    write_grid_csv(os, GridSample{grid, values});
    return os.str();
}

struct Source {
    Function2D f;
    GridGeometry grid;
    bool from_file = false;
};

Source load_source(const RunConfig& cfg)
{
    if (cfg.grid_file) {
        GridSample sample = read_grid_file(*cfg.grid_file);
        Function2D f = from_grid(sample, *cfg.grid_file);
        return {std::move(f), sample.grid, true};
    }
    CatalogRequest req = CatalogRequest::parse(*cfg.fn);
    const bool windowed = req.domain || req.numbers.count("x0") || req.numbers.count("x1") ||
                          req.numbers.count("y0") || req.numbers.count("y1");
    if (!windowed) {
        // catalog entries are defined everywhere; keep the default window
        // unless the grid reaches past it
        Rect r = kDefaultWindow;
        r.x0 = std::min(r.x0, cfg.grid.rect.x0);
        r.x1 = std::max(r.x1, cfg.grid.rect.x1);
        r.y0 = std::min(r.y0, cfg.grid.rect.y0);
        r.y1 = std::max(r.y1, cfg.grid.rect.y1);
        req.domain = r;
    }
    Function2D f = catalog_get(req);
    if (!f.domain().contains(cfg.grid.rect)) {
        throw ValidationError("grid rectangle is not inside the domain of '" + f.name() + "'");
    }
    return {std::move(f), cfg.grid, false};
}

struct Analysis {
    json metrics = json::object();
    json verdicts = json::object();
    json artifacts = json::object();
    std::vector<std::pair<std::string, std::string>> csv;
    bool pass = true;
};

Analysis run_catalog()
{
    Analysis a;
    json entries = json::array();
    for (const auto& e : catalog_list()) {
        entries.push_back({{"name", e.name}, {"usage", e.usage}, {"formula", e.formula}});
    }
    a.metrics["entries"] = entries.size();
    a.artifacts["functions"] = std::move(entries);
    a.artifacts["profiles"] = profile_names();
    a.artifacts["vector_maps"] = vector_catalog_names();
    return a;
}

Analysis run_verify(const RunConfig& cfg)
{
    const Source src = load_source(cfg);
    const double tol = cfg.tol.value_or(1e-6);
    Analysis a;
    const double residual = residual_first_order(src.f, cfg.k, src.grid, cfg.h, cfg.threads);
    ProfileOptions popts;
    popts.baseline_y = cfg.baseline;
    popts.threads = cfg.threads;
    const ProfileExtraction prof = extract_profile(src.f, cfg.k, src.grid, popts);
    const ConstancyReport cons =
        constancy_along_characteristics(src.f, cfg.k, src.grid, tol, 101, 101, cfg.threads);

    a.metrics["residual"] = residual;
    a.metrics["reconstruction_error"] = prof.reconstruction_error;
    a.metrics["constancy_max_deviation"] = cons.max_deviation;
    a.verdicts["residual"] = residual <= tol;
    a.verdicts["reconstruction"] = prof.reconstruction_error <= tol;
    a.verdicts["constancy"] = cons.pass;
    a.pass = residual <= tol && prof.reconstruction_error <= tol && cons.pass;
    a.artifacts["profile"] = to_json(prof.profile);
    a.artifacts["constancy"] = to_json(cons);
    a.csv.emplace_back("phi.csv", profile_csv(prof.profile));
    return a;
}

Analysis run_decompose(const RunConfig& cfg)
{
    const Source src = load_source(cfg);
    DecompositionOptions opts;
    opts.h = cfg.h;
    opts.residual_gate = cfg.gate.value_or(opts.residual_gate);
    opts.profile.baseline_y = cfg.baseline;
    opts.profile.threads = cfg.threads;
    const DecompositionResult r = decompose_dn(src.f, cfg.n, src.grid, opts);

    Analysis a;
    a.metrics["residual"] = r.residual;
    a.metrics["reconstruction_error"] = r.reconstruction_error;
    if (cfg.tol) {
        a.pass = r.reconstruction_error <= *cfg.tol;
        a.verdicts["reconstruction"] = a.pass;
    }
    a.artifacts["decomposition"] = to_json(r);
    for (std::size_t i = 0; i < r.profiles.size(); ++i) {
        a.csv.emplace_back("phi_" + std::to_string(i + 1) + ".csv", profile_csv(r.profiles[i]));
    }
    return a;
}

Analysis run_wave(const RunConfig& cfg)
{
    const Source src = load_source(cfg);
    WaveOptions opts;
    opts.h = cfg.h;
    opts.gate = cfg.gate.value_or(opts.gate);
    opts.baseline_y = cfg.baseline;
    opts.threads = cfg.threads;
    const WaveSplit w = decompose_wave(src.f, src.grid, opts);

    Analysis a;
    a.metrics["symmetry_defect"] = w.symmetry_defect;
    a.metrics["equality_defect"] = w.equality_defect;
    a.metrics["characteristic_defect"] = w.characteristic_defect;
    a.metrics["reconstruction_error"] = w.reconstruction_error;
    if (cfg.tol) {
        a.pass = w.reconstruction_error <= *cfg.tol;
        a.verdicts["reconstruction"] = a.pass;
    }
    a.artifacts["wave"] = to_json(w);
    a.csv.emplace_back("phi.csv", profile_csv(w.phi));
    a.csv.emplace_back("psi.csv", profile_csv(w.psi));
    a.csv.emplace_back("psi_tilde.csv", profile_csv(w.psi_tilde));
    return a;
}

Analysis run_regularity(const RunConfig& cfg)
{
    const Source src = load_source(cfg);
    DiscontinuityOptions opts;
    opts.samples_per_radius = cfg.samples;
    opts.threshold = cfg.threshold;
    opts.box = cfg.box;
    opts.threads = cfg.threads;
    const RegularityReport r = discontinuity_field(src.f, src.grid, opts);

    Analysis a;
    a.metrics["threshold"] = r.threshold;
    a.metrics["flagged_count"] = r.flagged.size();
    a.metrics["max_oscillation"] = *std::max_element(r.oscillation.begin(), r.oscillation.end());
    a.verdicts["nowhere_dense"] = r.verdict.nowhere_dense;
    a.pass = r.verdict.nowhere_dense;
    a.artifacts["regularity"] = to_json(r);
    a.csv.emplace_back("oscillation.csv", field_csv(r.grid, r.oscillation));
    a.csv.emplace_back("lipschitz.csv", field_csv(r.grid, r.lipschitz));
    return a;
}

Analysis run_lambda_map(const RunConfig& cfg)
{
    const Source src = load_source(cfg);
    const double eps = cfg.eps.value_or(0.5);
    const double tol = cfg.tol.value_or(0.05);
    const LambdaField field = lambda_field(src.f, cfg.axis, eps, src.grid, cfg.resolution, cfg.threads);
    const auto violations = usc_violations(field, tol);

    Analysis a;
    a.metrics["usc_violations"] = violations.size();
    a.metrics["lambda_min"] = *std::min_element(field.values.begin(), field.values.end());
    a.metrics["lambda_max"] = *std::max_element(field.values.begin(), field.values.end());
    a.verdicts["upper_semicontinuous"] = violations.empty();
    a.pass = violations.empty();
    json nodes = json::array();
    for (const auto& n : violations) {
        const Point p = field.grid.node(n.i, n.j);
        nodes.push_back({{"i", n.i}, {"j", n.j}, {"x", p.x}, {"y", p.y}});
    }
    a.artifacts["lambda_field"] = to_json(field);
    a.artifacts["violations"] = std::move(nodes);
    a.csv.emplace_back("lambda.csv", field_csv(field.grid, field.values));
    return a;
}

Analysis run_vector(const RunConfig& cfg)
{
    const bool general = cfg.vector == "translation" || cfg.vector == "sum";
    const int d = cfg.d.value_or(general ? 3 : 2);
    const VectorMap f = vector_catalog_get(cfg.vector, d);
    const double tol = cfg.tol.value_or(1e-12);
    const double gate = cfg.gate.value_or(1e-8);

    // probes in [-1,1]^d keep every difference x - y inside the [-2,2]^d box
    const Box half{Vec(d, -1.0), Vec(d, 1.0)};
    const auto probes = probe_pairs(half, half, cfg.probes);
    const TranslationVerdict tv = verify_translation(f, probes, tol);

    json table = json::array();
    double worst = 0.0;
    const auto basis = standard_basis(d);
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const GateauxReport g = gateaux_residual(f, probes[p].x, probes[p].y, basis, cfg.h);
        worst = std::max(worst, g.max_residual);
        json row = to_json(g);
        row["probe"] = p;
        row["x"] = probes[p].x;
        row["y"] = probes[p].y;
        table.push_back(std::move(row));
    }

    Analysis a;
    a.metrics["translation_max_defect"] = tv.max_defect;
    a.metrics["gateaux_max_residual"] = worst;
    a.verdicts["translation"] = tv.pass;
    a.verdicts["gateaux"] = worst <= gate;
    a.pass = tv.pass && worst <= gate;
    a.artifacts["translation"] = to_json(tv);
    a.artifacts["gateaux"] = std::move(table);
    return a;
}

json error_block(const std::string& kind, const std::string& message)
{
    return {{"kind", kind}, {"message", message}};
}

} // namespace

json RunConfig::to_json() const
{
    return {{"command", command},
            {"fn", optional_json(fn)},
            {"grid_file", optional_json(grid_file)},
            {"x0", grid.rect.x0},
            {"x1", grid.rect.x1},
            {"y0", grid.rect.y0},
            {"y1", grid.rect.y1},
            {"nx", grid.nx},
            {"ny", grid.ny},
            {"h", h},
            {"eps", optional_json(eps)},
            {"tol", optional_json(tol)},
            {"gate", optional_json(gate)},
            {"threshold", optional_json(threshold)},
            {"resolution", resolution},
            {"n", n},
            {"k", k},
            {"axis", std::string(1, static_cast<char>(axis))},
            {"baseline", baseline},
            {"box", box},
            {"samples", samples},
            {"vector", vector},
            {"d", optional_json(d)},
            {"probes", probes},
            {"out", optional_json(out)},
            {"csv_dir", optional_json(csv_dir)},
            {"threads", threads}};
}

RunConfig RunConfig::from_json(const json& doc, RunConfig c)
{
    if (!doc.is_object()) {
        throw ValidationError("config must be a JSON object");
    }
    const json known = c.to_json();
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) {
            throw ValidationError("unknown config key '" + key + "'");
        }
    }
    try {
        auto take = [&](const char* key, auto& field) {
            if (doc.contains(key)) {
                field = doc.at(key).get<std::decay_t<decltype(field)>>();
            }
        };
        auto take_opt = [&](const char* key, auto& field) {
            if (doc.contains(key)) {
                field = optional_from<typename std::decay_t<decltype(field)>::value_type>(doc.at(key));
            }
        };
        take("command", c.command);
        take_opt("fn", c.fn);
        take_opt("grid_file", c.grid_file);
        take("x0", c.grid.rect.x0);
        take("x1", c.grid.rect.x1);
        take("y0", c.grid.rect.y0);
        take("y1", c.grid.rect.y1);
        take("nx", c.grid.nx);
        take("ny", c.grid.ny);
        take("h", c.h);
        take_opt("eps", c.eps);
        take_opt("tol", c.tol);
        take_opt("gate", c.gate);
        take_opt("threshold", c.threshold);
        take("resolution", c.resolution);
        take("n", c.n);
        take("k", c.k);
        if (doc.contains("axis")) {
            c.axis = parse_axis(doc.at("axis").get<std::string>());
        }
        take("baseline", c.baseline);
        take("box", c.box);
        take("samples", c.samples);
        take("vector", c.vector);
        take_opt("d", c.d);
        take("probes", c.probes);
        take_opt("out", c.out);
        take_opt("csv_dir", c.csv_dir);
        take("threads", c.threads);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config value has the wrong type: ") + e.what());
    }
    return c;
}

RunConfig RunConfig::from_json(const json& doc)
{
    return from_json(doc, RunConfig{});
}

void RunConfig::validate() const
{
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
        throw ValidationError("unknown command '" + command + "'");
    }
    const bool needs_source = command != "catalog" && command != "vector";
    if (needs_source && fn.has_value() == grid_file.has_value()) {
        throw ValidationError("command '" + command + "' needs exactly one of --fn or --grid");
    }
    if (!needs_source && (fn || grid_file)) {
        throw ValidationError("command '" + command + "' takes no function source");
    }
    grid.validate();
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0)) {
            throw ValidationError(std::string(what) + " must be positive");
        }
    };
    positive(h, "h");
    for (const auto& [v, what] : {std::pair{eps, "eps"}, std::pair{tol, "tol"}, std::pair{gate, "gate"},
                                  std::pair{threshold, "threshold"}}) {
        if (v) {
            positive(*v, what);
        }
    }
    if (k == 0.0) {
        throw ValidationError("k must be nonzero");
    }
    if (n < 1) {
        throw ValidationError("n must be >= 1");
    }
    if (resolution < 8 || box < 1 || samples < 1 || probes < 1 || threads < 1 || (d && *d < 1)) {
        throw ValidationError("resolution >= 8 and box, samples, probes, threads, d >= 1 are required");
    }
}

int default_thread_count()
{
    if (const char* env = std::getenv("PDE_STRUCT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 1024) {
            return static_cast<int>(v);
        }
    }
    return 1;
}

RunOutcome run(const RunConfig& config)
{
    RunOutcome out;
    out.report = {{"schema", kReportSchema}, {"command", config.command}, {"config", config.to_json()}};
    try {
        config.validate();
        Analysis a;
        if (config.command == "catalog") {
            a = run_catalog();
        } else if (config.command == "verify") {
            a = run_verify(config);
        } else if (config.command == "decompose") {
            a = run_decompose(config);
        } else if (config.command == "wave") {
            a = run_wave(config);
        } else if (config.command == "regularity") {
            a = run_regularity(config);
        } else if (config.command == "lambda-map") {
            a = run_lambda_map(config);
        } else {
            a = run_vector(config);
        }
        a.verdicts["pass"] = a.pass;
        out.report["metrics"] = std::move(a.metrics);
        out.report["verdicts"] = std::move(a.verdicts);
        out.report["artifacts"] = std::move(a.artifacts);
        out.report["status"] = a.pass ? "pass" : "fail";
        out.exit_code = a.pass ? kExitPass : kExitFail;
        out.csv_files = std::move(a.csv);
        out.complete = true;
    } catch (const HypothesisViolation& e) {
        json err = error_block("hypothesis_violation", e.what());
        err["check"] = e.check();
        err["worst"] = {{"x", e.worst_x()}, {"y", e.worst_y()}, {"value", e.worst_value()}};
        out.report["error"] = std::move(err);
        out.report["status"] = "hypothesis_violation";
        out.exit_code = kExitFail;
    } catch (const NumericalError& e) {
        out.report["error"] = error_block("numerical", e.what());
        out.report["status"] = "fail";
        out.exit_code = kExitFail;
    } catch (const UnsupportedError& e) {
        out.report["error"] = error_block("unsupported", e.what());
        out.report["status"] = "error";
        out.exit_code = kExitUsage;
    } catch (const Error& e) {
        out.report["error"] = error_block("validation", e.what());
        out.report["status"] = "error";
        out.exit_code = kExitUsage;
    }
    return out;
}

} // namespace pdestruct
