// config.hpp - run configuration files
//
// A flat key = value format (a TOML subset): numbers, "strings", and
// [lists]; complex values are written as [re, im]. An optional [sweep]
// table lists values for any scalar model key.
//
//   coupling = "jc"
//   omega_e  = 0.9
//   k_bt     = 1.0
//   p_eg     = [0.0, 0.1]
//   frameworks = ["A", "B", "C", "D"]
//
//   [sweep]
//   omega_e = [0.5, 0.9, 0.99]
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qtl/frameworks.hpp"
#include "qtl/model.hpp"

namespace qtl {

/// Parsed right-hand side of a config line.
struct ConfigValue {
    enum class Kind { Number, String, List };
    Kind kind = Kind::Number;
    double number = 0.0;
    std::string text; // String: contents; Number: source spelling
    std::vector<ConfigValue> items;
};

struct SweepAxis {
    std::string key;
    std::vector<ConfigValue> values;
    int line = 0;
};

struct RunConfig {
    ModelConfig model;
    std::vector<Framework> frameworks{Framework::A, Framework::B, Framework::C, Framework::D};
    bool emit_csv = true;
    bool emit_json = true;
    std::string output;   // empty: derived from QTL_OUT or ./runs
    DisplacedRateVariant displaced_variant = kDefaultDisplacedVariant;
    std::vector<SweepAxis> axes;
    std::string source;   // file name used in diagnostics
};

/// Parses config text. Throws ConfigError whose message lists every problem
/// as "source:line: message". With check_model false only syntax and key
/// errors are fatal; the physical checks of the model are left to the caller.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>", bool check_model = true);
RunConfig load_config(const std::filesystem::path& path, bool check_model = true);

/// Applies a model key (as accepted at top level) to cfg. Throws ConfigError.
void apply_model_key(ModelConfig& cfg, std::string_view key, const ConfigValue& value);

/// Number of grid points of the sweep cross product (1 without axes).
std::size_t sweep_size(const RunConfig& rc);
/// Model configs of the cross product, first axis varying slowest.
std::vector<ModelConfig> sweep_points(const RunConfig& rc);

/// Compact textual form of a value, used for sweep labels.
std::string to_string(const ConfigValue& v);

} // namespace qtl
