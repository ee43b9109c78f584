// pipeline.cpp - run, sweep and validate orchestration
#include "qtl/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qtl/output.hpp"

namespace qtl {

namespace {

using Json = nlohmann::ordered_json;

constexpr GeneratorOptions kLedgerGenerator{StencilOrder::Sixth, 1e-6};

EnergyLedger framework_ledger(Framework f, const Trajectory& traj, const GeneratorSeries& gen, double alpha_s) {
    const LedgerOptions options{QuadratureRule::Cubic};
    switch (f) {
    case Framework::A: return lembas_ledger(traj, options);
    case Framework::B: return nonlocal_ledger(traj, alpha_s, options);
    case Framework::C: return decomposition_ledger(traj, options);
    case Framework::D: return minimal_dissipation_ledger(traj, gen, options);
    }
    throw Error("unknown framework");
}

std::array<double, 4> analytic_deviation(const ModelConfig& model, const Trajectory& traj, const GeneratorSeries& gen,
                                         DisplacedRateVariant variant) {
    const ComplexMatrix field = thermal_state(model.omega_e, model.beta, traj.hamiltonians().dim_e);
    std::array<double, 4> worst{};
    for (long k = 0; k < static_cast<long>(traj.size()); ++k) {
        if (gen.singular[k]) continue;
        const GeneratorRates num = rates_from_generator(gen.l[k]);
        const GeneratorRates ana = analytic_rates(model, field, traj[k].t, variant);
        const std::array<double, 4> a{ana.a, ana.b, ana.x, ana.y};
        const std::array<double, 4> n{num.a, num.b, num.x, num.y};
        for (std::size_t e = 0; e < 4; ++e) {
            if (!std::isfinite(a[e]) || !std::isfinite(n[e])) continue;
            worst[e] = std::max(worst[e], std::abs(a[e] - n[e]) / std::max(std::abs(a[e]), 1e-6));
        }
    }
    return worst;
}

std::string csv_cell(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

} // namespace

RunProducts compute_run(const RunConfig& rc, const ModelConfig& model, bool parallel) {
    validate(model);
    if (rc.frameworks.empty()) throw ConfigError("at least one framework must be selected");
    EvolveOptions evolve_options;
    evolve_options.parallel = parallel;
    const Trajectory traj = evolve(model, evolve_options);
    const GeneratorSeries gen = generator_from_map(traj.map_series(), traj.dt(), kLedgerGenerator);

    RunProducts p;
    p.model = model;
    p.truncation = traj.hamiltonians().dim_e;
    p.samples = traj.size();
    p.warnings = traj.warnings();

    std::vector<std::future<EnergyLedger>> jobs;
    for (Framework f : rc.frameworks)
        jobs.push_back(std::async(parallel ? std::launch::async : std::launch::deferred,
                                  [&, f] { return framework_ledger(f, traj, gen, model.alpha_s); }));
    for (auto& job : jobs) p.ledgers.push_back(job.get());
    for (const auto& l : p.ledgers)
        for (const auto& w : l.warnings)
            p.warnings.push_back(std::string("framework ") + framework_letter(l.framework) + ": " + w);

    p.entropy = entropy_record(traj, p.ledgers, model.beta);
    p.det_f = gen.det_f.interior();
    p.singular = gen.singular.interior();
    p.windows = gen.windows;
    p.analytic_max_rel_error = analytic_deviation(model, traj, gen, rc.displaced_variant);

    const double e0 = traj[0].energy;
    for (long k = 0; k < static_cast<long>(traj.size()); ++k) {
        p.max_energy_drift = std::max(p.max_energy_drift, std::abs(traj[k].energy - e0));
        p.max_trace_error = std::max(p.max_trace_error, std::abs(traj[k].trace - 1.0));
        p.max_leak = std::max(p.max_leak, traj[k].leak);
    }
    return p;
}

RunSummary write_run(const RunConfig& rc, const RunProducts& p, const std::filesystem::path& dir,
                     const SweepCoordinates& point) {
    std::filesystem::create_directories(dir);
    RunSummary summary;
    summary.dir = dir;
    summary.singular_windows = p.windows.size();
    summary.warnings = p.warnings;
    for (const auto& l : p.ledgers) {
        const std::size_t last = l.size() - 1;
        summary.finals.push_back({l.framework, l.u[last] - l.u[0], l.w_cum[last], l.q_cum[last]});
    }

    Json checksums = Json::object();
    if (rc.emit_csv) {
        std::ostringstream ledger, entropy;
        write_ledger_csv(ledger, p.ledgers, MapColumn{p.det_f, p.singular});
        write_entropy_csv(entropy, p.entropy);
        write_file(dir / "ledger.csv", ledger.str());
        write_file(dir / "entropy.csv", entropy.str());
        checksums["ledger.csv"] = "sha256:" + sha256_file(dir / "ledger.csv");
        checksums["entropy.csv"] = "sha256:" + sha256_file(dir / "entropy.csv");
    }
    if (!rc.emit_json) return summary;

    const ModelConfig& m = p.model;
    Json meta;
    meta["format"] = "qtl-run/1";
    meta["units"] = {{"energy", "omega_S"}, {"time", "1/omega_S"}, {"entropy", "nats"}};
    meta["parameters"] = {{"coupling", std::string(to_string(m.coupling))},
                          {"omega_s", m.omega_s},
                          {"omega_e", m.omega_e},
                          {"g", m.g},
                          {"beta", m.beta},
                          {"k_bt", 1.0 / m.beta},
                          {"p_e", m.p_e},
                          {"p_eg", {m.p_eg.real(), m.p_eg.imag()}},
                          {"alpha_s", m.alpha_s},
                          {"n_levels_requested", m.n_levels},
                          {"tail_epsilon", m.tail_epsilon},
                          {"headroom", m.headroom},
                          {"t_max", m.t_max}};
    if (!point.empty()) {
        Json coords = Json::object();
        for (const auto& [key, value] : point) coords[key] = value;
        meta["sweep_point"] = coords;
    }
    meta["truncation"] = p.truncation;
    meta["dt"] = m.dt;
    meta["samples"] = p.samples;
    Json frameworks = Json::array();
    for (Framework f : rc.frameworks) frameworks.push_back(std::string(1, framework_letter(f)));
    meta["frameworks"] = frameworks;
    meta["displaced_rate_variant"] = std::string(to_string(rc.displaced_variant));
    meta["numerics"] = {{"propagation", "exact diagonalisation of the composite Hamiltonian"},
                        {"generator_derivative", "central 7-point (6th order)"},
                        {"ledger_derivatives",
                         "states: exact equation of motion; D dB/dt: central 7-point (6th order); "
                         "C eigenpairs: central 5-point (4th order)"},
                        {"quadrature", "cumulative cubic (4th order)"},
                        {"halo_samples", EvolveOptions{}.halo},
                        {"delta_sing", kLedgerGenerator.delta_sing},
                        {"eps_deg", kDegeneracyEpsilon}};
    Json windows = Json::array();
    for (const auto& w : p.windows)
        windows.push_back({{"first", w.first}, {"last", w.last}, {"t_begin", w.t_begin}, {"t_end", w.t_end}});
    meta["singular_windows"] = windows;
    meta["diagnostics"] = {{"max_energy_drift", p.max_energy_drift},
                           {"max_trace_error", p.max_trace_error},
                           {"max_top_level_population", p.max_leak},
                           {"analytic_generator_max_rel_error",
                            {{"A", p.analytic_max_rel_error[0]},
                             {"B", p.analytic_max_rel_error[1]},
                             {"X", p.analytic_max_rel_error[2]},
                             {"Y", p.analytic_max_rel_error[3]}}}};
    Json finals = Json::object();
    for (const auto& f : summary.finals)
        finals[std::string(1, framework_letter(f.framework))] = {
            {"delta_U", f.delta_u}, {"W_cum", f.w_cum}, {"Q_cum", f.q_cum}};
    meta["final"] = finals;
    meta["warnings"] = p.warnings;
    meta["checksums"] = checksums;
    write_file(dir / "meta.json", meta.dump(2) + "\n");
    return summary;
}

RunSummary execute_run(const RunConfig& rc, const std::filesystem::path& dir, bool parallel) {
    return write_run(rc, compute_run(rc, rc.model, parallel), dir);
}

std::string sweep_point_dir(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "point_%03zu", index);
    return buf;
}

std::vector<SweepPointResult> execute_sweep(const RunConfig& rc, const std::filesystem::path& root,
                                            std::size_t workers, std::ostream* log) {
    const std::vector<ModelConfig> points = sweep_points(rc);
    std::mutex log_mutex;
    auto say = [&](const std::string& line) {
        if (!log) return;
        std::lock_guard lock(log_mutex);
        *log << line << '\n';
    };
    say("sweep: " + std::to_string(points.size()) + " grid point(s)");

    std::vector<SweepPointResult> results(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        results[i].index = i;
        std::size_t rem = i;
        results[i].labels.resize(rc.axes.size());
        for (std::size_t a = rc.axes.size(); a-- > 0;) {
            results[i].labels[a] = to_string(rc.axes[a].values[rem % rc.axes[a].values.size()]);
            rem /= rc.axes[a].values.size();
        }
    }

    const bool flat = rc.axes.empty();
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(points.size(), 1));
    // One worker keeps OpenMP inside each run; several split the points instead.
    const bool inner_parallel = workers == 1;
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            SweepPointResult& r = results[i];
            const auto dir = flat ? root : root / sweep_point_dir(i);
            SweepCoordinates coords;
            for (std::size_t a = 0; a < rc.axes.size(); ++a) coords.emplace_back(rc.axes[a].key, r.labels[a]);
            try {
                r.summary = write_run(rc, compute_run(rc, points[i], inner_parallel), dir, coords);
                r.ok = true;
                say(dir.string() + ": ok, " + std::to_string(r.summary.singular_windows) + " singular window(s)");
            } catch (const ConfigError& e) {
                r.config_error = true;
                r.error = e.what();
            } catch (const std::exception& e) {
                r.error = e.what();
            }
            if (!r.ok) say(dir.string() + ": FAILED: " + r.error);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();

    if (flat) return results;

    std::ostringstream csv;
    csv << "point,dir";
    for (const auto& axis : rc.axes) csv << ',' << axis.key;
    csv << ",status";
    for (Framework f : rc.frameworks) {
        const char c = framework_letter(f);
        csv << ",dU_" << c << ",W_" << c << ",Q_" << c;
    }
    csv << ",singular_windows,error\n";
    for (const auto& r : results) {
        csv << r.index << ',' << sweep_point_dir(r.index);
        for (const auto& label : r.labels) csv << ',' << csv_cell(label);
        csv << ',' << (r.ok ? "ok" : "failed");
        for (Framework f : rc.frameworks) {
            const auto it = std::find_if(r.summary.finals.begin(), r.summary.finals.end(),
                                         [f](const FinalValues& v) { return v.framework == f; });
            if (r.ok && it != r.summary.finals.end())
                csv << ',' << format_double(it->delta_u) << ',' << format_double(it->w_cum) << ','
                    << format_double(it->q_cum);
            else
                csv << ",,,";
        }
        csv << ',' << (r.ok ? std::to_string(r.summary.singular_windows) : "") << ',' << csv_cell(r.error) << '\n';
    }
    std::filesystem::create_directories(root);
    write_file(root / "sweep_summary.csv", csv.str());
    return results;
}

namespace {

/// One entry per "source:line: message" line of a ConfigError.
std::vector<std::string> split_diagnostics(const std::string& what) {
    std::vector<std::string> out;
    std::istringstream in(what);
    std::string line;
    while (std::getline(in, line)) {
        const auto b = line.find_first_not_of(' ');
        if (b == std::string::npos || line == "configuration errors:") continue;
        out.push_back(line.substr(b));
    }
    return out;
}

} // namespace

ValidationReport validate_config(const std::filesystem::path& path) {
    ValidationReport report;
    RunConfig rc;
    try {
        rc = load_config(path, false);
    } catch (const ConfigError& e) {
        report.errors = split_diagnostics(e.what());
        return report;
    }
    report.grid_size = sweep_size(rc);
    const ModelConfig& m = rc.model;
    report.psd = std::norm(m.p_eg) <= m.p_e * (1.0 - m.p_e) + 1e-15 && m.p_e >= 0 && m.p_e <= 1;
    // The strict parse attaches line numbers to the physical checks.
    try {
        load_config(path, true);
    } catch (const ConfigError& e) {
        report.errors = split_diagnostics(e.what());
    }
    if (report.errors.empty()) {
        const std::size_t n = resolved_truncation(m);
        report.truncation = n;
        report.memory_bytes = 16.0 * std::pow(2.0 * static_cast<double>(n), 2);
        report.samples = sample_count(m);
    }
    const auto points = sweep_points(rc);
    for (std::size_t i = 0; i < points.size() && !rc.axes.empty(); ++i)
        for (const auto& e : validation_errors(points[i]))
            report.errors.push_back("sweep " + sweep_point_dir(i) + ": " + e);
    report.valid = report.errors.empty();
    return report;
}

void print_report(std::ostream& out, const ValidationReport& r) {
    if (r.truncation) {
        out << "truncation N: " << *r.truncation << "\n";
        out << "composite dimension: " << 2 * *r.truncation << "\n";
        out << "memory per composite matrix: " << static_cast<std::size_t>(r.memory_bytes) << " bytes\n";
        out << "samples per run: " << r.samples << "\n";
    }
    out << "grid size: " << r.grid_size << "\n";
    out << "initial qubit PSD: " << (r.psd ? "yes" : "NO") << "\n";
    for (const auto& e : r.errors) out << "error: " << e << "\n";
    out << (r.valid ? "valid" : "invalid") << "\n";
}

} // namespace qtl
