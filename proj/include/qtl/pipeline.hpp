// pipeline.hpp - run, sweep and validate orchestration behind the CLI
#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qtl/config.hpp"
#include "qtl/frameworks.hpp"
#include "qtl/observables.hpp"

namespace qtl {

/// Everything a run computes, before anything is written.
struct RunProducts {
    ModelConfig model;
    std::size_t truncation = 0;
    std::size_t samples = 0;
    std::vector<EnergyLedger> ledgers; // in A..D order, selected frameworks only
    EntropyRecord entropy;
    std::vector<double> det_f;
    std::vector<unsigned char> singular;
    std::vector<SingularWindow> windows;
    std::array<double, 4> analytic_max_rel_error{}; // (A, B, X, Y) vs the numeric generator
    double max_energy_drift = 0.0;
    double max_trace_error = 0.0;
    double max_leak = 0.0;
    std::vector<std::string> warnings;
};

/// `parallel` enables OpenMP inside evolve and runs the frameworks concurrently.
RunProducts compute_run(const RunConfig& rc, const ModelConfig& model, bool parallel = true);

struct FinalValues {
    Framework framework = Framework::A;
    double delta_u = 0.0;
    double w_cum = 0.0;
    double q_cum = 0.0;
};

struct RunSummary {
    std::filesystem::path dir;
    std::vector<FinalValues> finals;
    std::size_t singular_windows = 0;
    std::vector<std::string> warnings;
};

using SweepCoordinates = std::vector<std::pair<std::string, std::string>>;

/// Writes ledger.csv, entropy.csv (when csv is emitted) and meta.json (when
/// json is). `point` names the sweep coordinates recorded in meta.json.
RunSummary write_run(const RunConfig& rc, const RunProducts& products, const std::filesystem::path& dir,
                     const SweepCoordinates& point = {});

RunSummary execute_run(const RunConfig& rc, const std::filesystem::path& dir, bool parallel = true);

struct SweepPointResult {
    std::size_t index = 0;
    std::vector<std::string> labels; // axis values of this point
    bool ok = false;
    bool config_error = false; // the point's parameters were rejected
    std::string error;
    RunSummary summary;
};

/// Runs the cross product with `workers` threads. Without axes this is
/// execute_run into `root`. Point failures are recorded, never rethrown.
std::vector<SweepPointResult> execute_sweep(const RunConfig& rc, const std::filesystem::path& root,
                                            std::size_t workers, std::ostream* log = nullptr);

/// Name of the subdirectory holding point `index` of the sweep.
std::string sweep_point_dir(std::size_t index);

struct ValidationReport {
    bool valid = false;
    std::vector<std::string> errors;
    std::optional<std::size_t> truncation;
    double memory_bytes = 0.0; // one composite matrix, 16 (2N)^2
    std::size_t grid_size = 1;
    std::size_t samples = 0;
    bool psd = false;
};

/// Never throws on a bad config; the problems land in `errors`.
ValidationReport validate_config(const std::filesystem::path& path);
void print_report(std::ostream& out, const ValidationReport& report);

} // namespace qtl
