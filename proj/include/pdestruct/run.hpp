#pragma once

#include "json.hpp"
#include "pdestruct/function_model.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pdestruct {

inline const std::vector<std::string> kCommands{"catalog", "verify", "decompose", "wave", "regularity", "lambda-map",
                                                "vector"};

/// Exit codes of run().
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2 };

struct RunConfig {
    std::string command;
    /// Catalog request such as "plane_wave:sin:k=1".
    std::optional<std::string> fn;
    /// Grid file (.json or .csv) used instead of a catalog entry.
    std::optional<std::string> grid_file;
    GridGeometry grid;
    double h = 1e-4;
    std::optional<double> eps;
    /// Verdict tolerance; the default depends on the command.
    std::optional<double> tol;
    /// Hypothesis gate; the default depends on the command.
    std::optional<double> gate;
    std::optional<double> threshold;
    int resolution = 64;
    int n = 2;
    double k = 1.0;
    Axis axis = Axis::x;
    double baseline = 0.0;
    int box = 5;
    int samples = 720;
    std::string vector = "translation";
    std::optional<int> d;
    int probes = 5;
    std::optional<std::string> out;
    std::optional<std::string> csv_dir;
    int threads = 1;

    /// Every field, including unset optionals as null.
    nlohmann::json to_json() const;
    /// Overlays the keys of `doc` on `base`; unknown keys raise ValidationError.
    static RunConfig from_json(const nlohmann::json& doc, RunConfig base);
    static RunConfig from_json(const nlohmann::json& doc);
    void validate() const;
};

struct RunOutcome {
    int exit_code = kExitPass;
    nlohmann::json report;
    /// Plot-ready CSV side files (file name, content); empty when the
    /// analysis did not complete.
    std::vector<std::pair<std::string, std::string>> csv_files;
    /// Whether the analysis ran to completion (verdict pass or fail).
    bool complete = false;
};

/// PDE_STRUCT_THREADS when set to a positive integer, else 1.
int default_thread_count();

/// Runs one command and never throws for library errors: they are mapped
/// to exit codes and an "error" block in the report.
RunOutcome run(const RunConfig& config);

} // namespace pdestruct
