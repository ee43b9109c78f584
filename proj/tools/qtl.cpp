// qtl - run, sweep and validate thermodynamic ledgers from a config file
//
// Exit codes: 0 success, 1 configuration error, 2 numerical or runtime failure.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "qtl/pipeline.hpp"

namespace {

struct Overrides {
    std::optional<std::string> out;
    std::optional<double> dt;
    std::optional<double> t_max;
    std::size_t workers = 1;
};

qtl::RunConfig load(const std::string& path, const Overrides& o) {
    // Model checks wait for the overrides; without any, keep the line-numbered diagnostics.
    const bool overridden = o.dt || o.t_max;
    qtl::RunConfig rc = qtl::load_config(path, !overridden);
    if (o.dt) rc.model.dt = *o.dt;
    if (o.t_max) rc.model.t_max = *o.t_max;
    if (overridden) qtl::validate(rc.model);
    return rc;
}

// --out wins, then the config's output key, then $QTL_OUT/<stem>, then runs/<stem>.
std::filesystem::path output_dir(const std::string& config_path, const qtl::RunConfig& rc, const Overrides& o) {
    if (o.out) return *o.out;
    if (!rc.output.empty()) return rc.output;
    const std::string stem = std::filesystem::path(config_path).stem().string();
    if (const char* env = std::getenv("QTL_OUT"); env && *env) return std::filesystem::path(env) / stem;
    return std::filesystem::path("runs") / stem;
}

void print_summary(const qtl::RunSummary& s) {
    std::cout << "wrote " << s.dir.string() << "\n";
    for (const auto& f : s.finals)
        std::cout << "  " << qtl::framework_letter(f.framework) << ": dU = " << f.delta_u << "  W = " << f.w_cum
                  << "  Q = " << f.q_cum << "\n";
    std::cout << "  singular windows: " << s.singular_windows << "\n";
    for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy and entropy ledgers for a qubit coupled to a thermal oscillator"};
    app.require_subcommand(1);
    std::string config;
    Overrides o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config, "Configuration file")->required();
        sub->add_option("--out", o.out, "Output directory (default: $QTL_OUT/<config stem> or runs/<config stem>)");
        sub->add_option("--dt", o.dt, "Override the time step")->check(CLI::PositiveNumber);
        sub->add_option("--tmax", o.t_max, "Override the final time")->check(CLI::NonNegativeNumber);
    };
    auto* run = app.add_subcommand("run", "Evolve one configuration and write its ledgers");
    add_common(run);
    auto* sweep = app.add_subcommand("sweep", "Run every point of the [sweep] grid");
    add_common(sweep);
    sweep->add_option("--workers", o.workers, "Concurrent sweep points")->check(CLI::PositiveNumber);
    auto* check = app.add_subcommand("validate", "Report truncation, memory and grid size without running");
    check->add_option("config", config, "Configuration file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (check->parsed()) {
            const auto report = qtl::validate_config(config);
            qtl::print_report(std::cout, report);
            return report.valid ? 0 : 1;
        }
        const qtl::RunConfig rc = load(config, o);
        const auto dir = output_dir(config, rc, o);
        if (run->parsed()) {
            print_summary(qtl::execute_run(rc, dir));
            return 0;
        }
        const auto results = qtl::execute_sweep(rc, dir, o.workers, &std::cout);
        bool config_failure = false, runtime_failure = false;
        for (const auto& r : results) {
            if (r.ok) continue;
            (r.config_error ? config_failure : runtime_failure) = true;
        }
        if (rc.axes.empty() && results.front().ok) print_summary(results.front().summary);
        if (!rc.axes.empty()) std::cout << "wrote " << (dir / "sweep_summary.csv").string() << "\n";
        return runtime_failure ? 2 : config_failure ? 1 : 0;
    } catch (const qtl::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
