#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qtl/output.hpp"
#include "qtl/pipeline.hpp"
#include "support.hpp"

using namespace qtl;
namespace fs = std::filesystem;

namespace {

/// Fresh directory under the system temp dir, removed on scope exit.
struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() / ("qtl_test_" + name + "_" + std::to_string(std::rand()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_error(std::string_view text) {
    try {
        parse_config(text, "t.toml");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

constexpr const char* kShortRun = R"(coupling = "jc"
n_levels = 8
t_max = 2.0
g = 0.2
)";

} // namespace

TEST_CASE("config parsing") {
    const RunConfig rc = parse_config(R"(# comment
omega_s = 1.0
omega_e = 0.95   # trailing comment
g = 0.05
coupling = "displaced"
p_eg = [0.0, -0.2]
k_bt = 2.0
frameworks = ["D", "A"]
emit = ["csv"]
output = "out/x"
displaced_variant = "as_printed"
)");
    CHECK(rc.model.omega_e == 0.95);
    CHECK(rc.model.g == 0.05);
    CHECK(rc.model.coupling == CouplingKind::Displaced);
    CHECK(rc.model.p_eg == Complex{0.0, -0.2});
    CHECK(rc.model.beta == 0.5);
    CHECK(rc.frameworks == std::vector<Framework>{Framework::A, Framework::D}); // stored in A..D order
    CHECK(rc.emit_csv);
    CHECK_FALSE(rc.emit_json);
    CHECK(rc.output == "out/x");
    CHECK(rc.displaced_variant == DisplacedRateVariant::AsPrinted);
    CHECK(sweep_size(rc) == 1);
}

TEST_CASE("config errors carry line numbers") {
    CHECK(config_error("g = 0.1\nbogus = 1\n").find("t.toml:2: unknown key 'bogus'") != std::string::npos);
    CHECK(config_error("g = abc\n").find("t.toml:1:") != std::string::npos);
    CHECK(config_error("p_eg = [0.1, 0.2\n").find("unterminated list") != std::string::npos);
    CHECK(config_error("g = 1\ng = 2\n").find("t.toml:2: duplicate key 'g'") != std::string::npos);
    CHECK(config_error("frameworks = [\"E\"]\n").find("unknown framework 'E'") != std::string::npos);
    // physical validation points at the offending key
    CHECK(config_error("g = 0.1\n\nbeta = -1\n").find("t.toml:3:") != std::string::npos);
    CHECK(config_error("p_e = 0.5\np_eg = [0.6, 0.0]\n").find("t.toml:2:") != std::string::npos);
    // several problems are reported together
    const std::string both = config_error("x = 1\ny = 2\n");
    CHECK(both.find(":1:") != std::string::npos);
    CHECK(both.find(":2:") != std::string::npos);
    // check_model = false leaves physics to the caller
    CHECK_NOTHROW(parse_config("beta = -1\n", "t.toml", false));
}

TEST_CASE("sweep axes form a cross product, first axis slowest") {
    const RunConfig rc = parse_config("g = 0.1\n[sweep]\nomega_e = [0.5, 0.9]\nalpha_s = [0.0, 0.5, 1.0]\n");
    REQUIRE(rc.axes.size() == 2);
    CHECK(sweep_size(rc) == 6);
    const auto pts = sweep_points(rc);
    REQUIRE(pts.size() == 6);
    CHECK(pts[0].omega_e == 0.5);
    CHECK(pts[2].omega_e == 0.5);
    CHECK(pts[3].omega_e == 0.9);
    CHECK(pts[1].alpha_s == 0.5);
    CHECK(pts[5].alpha_s == 1.0);
    CHECK(pts[5].g == 0.1);
    CHECK(config_error("[sweep]\nframeworks = [\"A\"]\n").find("cannot be swept") != std::string::npos);
    CHECK(config_error("[sweep]\ng = 0.1\n").find("expects a list") != std::string::npos);
    CHECK(config_error("[other]\n").find("t.toml:1:") != std::string::npos);
    CHECK(sweep_point_dir(7) == "point_007");
}

TEST_CASE("number formatting round-trips") {
    for (double x : {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 5e-324}) {
        const std::string s = format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(HUGE_VAL) == "inf");
    CHECK(format_double(-HUGE_VAL) == "-inf");
}

TEST_CASE("run directory layout and schemas") {
    TempDir tmp("run");
    const RunConfig rc = parse_config(kShortRun);
    const RunSummary s = execute_run(rc, tmp.path);
    CHECK(fs::exists(tmp.path / "ledger.csv"));
    CHECK(fs::exists(tmp.path / "entropy.csv"));
    CHECK(fs::exists(tmp.path / "meta.json"));
    REQUIRE(s.finals.size() == 4);

    const CsvTable ledger = read_csv(tmp.path / "ledger.csv");
    std::string header;
    for (const auto& h : ledger.header) header += (header.empty() ? "" : ",") + h;
    CHECK(header == kLedgerHeader);
    const std::size_t samples = sample_count(rc.model);
    REQUIRE(ledger.rows.size() == 4 * samples);
    CHECK(ledger.rows[0][1] == "A");
    CHECK(ledger.rows[3][1] == "D");
    CHECK(ledger.rows[4][0] == ledger.rows[5][0]);
    CHECK(ledger.rows[0][5] == "0");
    // the last D row holds the final cumulative values
    const auto& last = ledger.rows.back();
    CHECK(std::stod(last[5]) == s.finals[3].w_cum);

    const CsvTable entropy = read_csv(tmp.path / "entropy.csv");
    header.clear();
    for (const auto& h : entropy.header) header += (header.empty() ? "" : ",") + h;
    CHECK(header == kEntropyHeader);
    CHECK(entropy.rows.size() == samples);

    const std::string meta = slurp(tmp.path / "meta.json");
    CHECK(meta.find("\"sha256:" + sha256_file(tmp.path / "ledger.csv") + "\"") != std::string::npos);
    CHECK(meta.find("\"displaced_rate_variant\"") != std::string::npos);
}

TEST_CASE("ledger output is byte-reproducible, serial or parallel") {
    TempDir a("repro_a"), b("repro_b");
    const RunConfig rc = parse_config(kShortRun);
    execute_run(rc, a.path, true);
    execute_run(rc, b.path, false);
    CHECK(slurp(a.path / "ledger.csv") == slurp(b.path / "ledger.csv"));
    CHECK(slurp(a.path / "entropy.csv") == slurp(b.path / "entropy.csv"));
}

TEST_CASE("framework selection and emit formats") {
    TempDir tmp("select");
    RunConfig rc = parse_config(std::string(kShortRun) + "frameworks = [\"D\", \"B\"]\nemit = [\"csv\"]\n");
    const RunSummary s = execute_run(rc, tmp.path);
    CHECK_FALSE(fs::exists(tmp.path / "meta.json"));
    REQUIRE(s.finals.size() == 2);
    CHECK(s.finals[0].framework == Framework::B);
    const CsvTable ledger = read_csv(tmp.path / "ledger.csv");
    CHECK(ledger.rows[0][1] == "B");
    CHECK(ledger.rows[1][1] == "D");
    const CsvTable entropy = read_csv(tmp.path / "entropy.csv");
    CHECK(entropy.rows[3][5] == "nan"); // Sigma_A not computed
}

TEST_CASE("sweep without axes writes exactly what run writes") {
    TempDir run("plain_run"), sweep("plain_sweep");
    const RunConfig rc = parse_config(kShortRun);
    execute_run(rc, run.path);
    const auto res = execute_sweep(rc, sweep.path, 2);
    REQUIRE(res.size() == 1);
    CHECK(res[0].ok);
    CHECK_FALSE(fs::exists(sweep.path / "sweep_summary.csv"));
    CHECK(slurp(run.path / "ledger.csv") == slurp(sweep.path / "ledger.csv"));
}

TEST_CASE("alpha sweep leaves framework-B heat unchanged") {
    TempDir tmp("alpha");
    const RunConfig rc = parse_config(std::string(kShortRun) + "frameworks = [\"B\"]\n[sweep]\nalpha_s = [0.0, 0.5, 1.0]\n");
    const auto res = execute_sweep(rc, tmp.path, 2);
    REQUIRE(res.size() == 3);
    std::vector<std::vector<double>> q(3);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(res[i].ok);
        for (const auto& row : read_csv(tmp.path / sweep_point_dir(i) / "ledger.csv").rows) q[i].push_back(std::stod(row[6]));
    }
    for (std::size_t i = 0; i < q[0].size(); ++i) {
        CHECK(std::abs(q[1][i] - q[0][i]) < 1e-14);
        CHECK(std::abs(q[2][i] - q[0][i]) < 1e-14);
    }
    const CsvTable summary = read_csv(tmp.path / "sweep_summary.csv");
    CHECK(summary.header[2] == "alpha_s");
    CHECK(summary.rows.size() == 3);
}

TEST_CASE("a bad sweep point fails alone") {
    TempDir tmp("isolate");
    const RunConfig rc = parse_config(std::string(kShortRun) + "frameworks = [\"A\"]\n[sweep]\np_e = [0.5, 1.5]\n", "t.toml", false);
    const auto res = execute_sweep(rc, tmp.path, 1);
    REQUIRE(res.size() == 2);
    CHECK(res[0].ok);
    CHECK_FALSE(res[1].ok);
    CHECK(res[1].config_error);
    CHECK(fs::exists(tmp.path / "point_000" / "ledger.csv"));
    const CsvTable summary = read_csv(tmp.path / "sweep_summary.csv");
    REQUIRE(summary.rows.size() == 2);
    CHECK(summary.rows[0][3] == "ok");
    CHECK(summary.rows[1][3] != "ok");
}

TEST_CASE("validate reports resources without running") {
    TempDir tmp("validate");
    write_file(tmp.path / "good.toml", "omega_e = 0.9\nbeta = 1.0\n[sweep]\ng = [0.05, 0.1]\n");
    const ValidationReport good = validate_config(tmp.path / "good.toml");
    CHECK(good.valid);
    CHECK(good.psd);
    REQUIRE(good.truncation.has_value());
    CHECK(*good.truncation == 36);
    CHECK(good.memory_bytes == 16.0 * 72.0 * 72.0);
    CHECK(good.grid_size == 2);
    CHECK(good.samples == 3184);
    std::ostringstream out;
    print_report(out, good);
    CHECK(out.str().find("36") != std::string::npos);

    write_file(tmp.path / "bad.toml", "p_e = 0.5\np_eg = [0.6, 0.0]\n");
    const ValidationReport bad = validate_config(tmp.path / "bad.toml");
    CHECK_FALSE(bad.valid);
    CHECK_FALSE(bad.psd);
    REQUIRE_FALSE(bad.errors.empty());
    CHECK(bad.errors.front().find("bad.toml:2:") != std::string::npos);

    CHECK_FALSE(validate_config(tmp.path / "missing.toml").valid);
}
