// config.cpp - parser for the key = value run configuration
#include "qtl/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qtl {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Drops a trailing comment, ignoring '#' inside quotes.
std::string_view strip_comment(std::string_view s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

class ValueParser {
public:
    explicit ValueParser(std::string_view s) : s_(s) {}

    ConfigValue parse() {
        ConfigValue v = value();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing text '" + std::string(s_.substr(pos_)) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    ConfigValue value() {
        skip_ws();
        if (pos_ >= s_.size()) fail("missing value");
        const char c = s_[pos_];
        if (c == '"') return string_value();
        if (c == '[') return list_value();
        return number_value();
    }

    ConfigValue string_value() {
        ++pos_;
        const auto end = s_.find('"', pos_);
        if (end == std::string_view::npos) fail("unterminated string");
        ConfigValue v;
        v.kind = ConfigValue::Kind::String;
        v.text = std::string(s_.substr(pos_, end - pos_));
        pos_ = end + 1;
        return v;
    }

    ConfigValue list_value() {
        ++pos_;
        ConfigValue v;
        v.kind = ConfigValue::Kind::List;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {
            ++pos_;
            return v;
        }
        while (true) {
            v.items.push_back(value());
            skip_ws();
            if (pos_ >= s_.size()) fail("unterminated list");
            if (s_[pos_] == ',') {
                ++pos_;
                skip_ws();
                if (pos_ < s_.size() && s_[pos_] == ']') {
                    ++pos_;
                    return v;
                }
                continue;
            }
            if (s_[pos_] == ']') {
                ++pos_;
                return v;
            }
            fail("expected ',' or ']' in list");
        }
    }

    ConfigValue number_value() {
        std::size_t end = pos_;
        while (end < s_.size() && s_[end] != ',' && s_[end] != ']' && s_[end] != ' ' && s_[end] != '\t') ++end;
        std::string_view tok = s_.substr(pos_, end - pos_);
        std::string_view digits = tok;
        if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
        ConfigValue v;
        const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v.number);
        if (res.ec != std::errc() || res.ptr != digits.data() + digits.size() || digits.empty())
            fail("'" + std::string(tok) + "' is not a number (strings must be quoted)");
        v.text = std::string(tok);
        pos_ = end;
        return v;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

double as_number(const ConfigValue& v, std::string_view key) {
    if (v.kind != ConfigValue::Kind::Number) throw ConfigError(std::string(key) + " expects a number");
    return v.number;
}

std::size_t as_count(const ConfigValue& v, std::string_view key) {
    const double x = as_number(v, key);
    if (x < 0 || x != std::floor(x) || x > 1e9) throw ConfigError(std::string(key) + " expects a non-negative integer");
    return static_cast<std::size_t>(x);
}

const std::string& as_string(const ConfigValue& v, std::string_view key) {
    if (v.kind != ConfigValue::Kind::String) throw ConfigError(std::string(key) + " expects a quoted string");
    return v.text;
}

const std::set<std::string, std::less<>> kModelKeys = {"omega_s", "omega_e", "g",       "beta",      "k_bt",
                                                       "coupling", "p_e",     "p_eg",    "n_levels",  "dt",
                                                       "t_max",   "alpha_s", "tail_epsilon", "headroom"};

void apply_run_key(RunConfig& rc, std::string_view key, const ConfigValue& v) {
    if (kModelKeys.count(key)) {
        apply_model_key(rc.model, key, v);
    } else if (key == "frameworks") {
        if (v.kind != ConfigValue::Kind::List || v.items.empty())
            throw ConfigError("frameworks expects a non-empty list such as [\"A\", \"D\"]");
        rc.frameworks.clear();
        for (const auto& item : v.items) {
            const std::string& s = as_string(item, key);
            if (s.size() != 1 || s[0] < 'A' || s[0] > 'D')
                throw ConfigError("unknown framework '" + s + "' (expected A, B, C or D)");
            const auto f = static_cast<Framework>(s[0] - 'A');
            if (std::find(rc.frameworks.begin(), rc.frameworks.end(), f) != rc.frameworks.end())
                throw ConfigError("framework '" + s + "' listed twice");
            rc.frameworks.push_back(f);
        }
        std::sort(rc.frameworks.begin(), rc.frameworks.end());
    } else if (key == "emit") {
        if (v.kind != ConfigValue::Kind::List || v.items.empty())
            throw ConfigError("emit expects a non-empty list drawn from \"csv\", \"json\"");
        rc.emit_csv = rc.emit_json = false;
        for (const auto& item : v.items) {
            const std::string& s = as_string(item, key);
            if (s == "csv")
                rc.emit_csv = true;
            else if (s == "json")
                rc.emit_json = true;
            else
                throw ConfigError("unknown emit format '" + s + "'");
        }
    } else if (key == "output") {
        rc.output = as_string(v, key);
    } else if (key == "displaced_variant") {
        const auto variant = parse_displaced_variant(as_string(v, key));
        if (!variant)
            throw ConfigError("displaced_variant must be one of as_printed, printed_log_derivative, exact_log_derivative");
        rc.displaced_variant = *variant;
    } else {
        throw ConfigError("unknown key '" + std::string(key) + "'");
    }
}

} // namespace

void apply_model_key(ModelConfig& cfg, std::string_view key, const ConfigValue& v) {
    if (key == "omega_s")
        cfg.omega_s = as_number(v, key);
    else if (key == "omega_e")
        cfg.omega_e = as_number(v, key);
    else if (key == "g")
        cfg.g = as_number(v, key);
    else if (key == "beta")
        cfg.beta = as_number(v, key);
    else if (key == "k_bt") {
        const double kt = as_number(v, key);
        if (!(kt > 0)) throw ConfigError("k_bt must be > 0");
        cfg.beta = 1.0 / kt;
    } else if (key == "coupling") {
        const auto kind = parse_coupling(as_string(v, key));
        if (!kind) throw ConfigError("coupling must be one of \"jc\", \"displaced\", \"dispersive\"");
        cfg.coupling = *kind;
    } else if (key == "p_e")
        cfg.p_e = as_number(v, key);
    else if (key == "p_eg") {
        if (v.kind == ConfigValue::Kind::Number)
            cfg.p_eg = v.number;
        else if (v.kind == ConfigValue::Kind::List && v.items.size() == 2)
            cfg.p_eg = Complex(as_number(v.items[0], key), as_number(v.items[1], key));
        else
            throw ConfigError("p_eg expects [re, im]");
    } else if (key == "n_levels")
        cfg.n_levels = as_count(v, key);
    else if (key == "dt")
        cfg.dt = as_number(v, key);
    else if (key == "t_max")
        cfg.t_max = as_number(v, key);
    else if (key == "alpha_s")
        cfg.alpha_s = as_number(v, key);
    else if (key == "tail_epsilon")
        cfg.tail_epsilon = as_number(v, key);
    else if (key == "headroom")
        cfg.headroom = as_count(v, key);
    else
        throw ConfigError("unknown model key '" + std::string(key) + "'");
}

RunConfig parse_config(std::string_view text, std::string_view source, bool check_model) {
    RunConfig rc;
    rc.source = std::string(source);
    std::vector<std::string> errors;
    std::set<std::string, std::less<>> seen_root, seen_sweep;
    std::map<std::string, int> key_lines;
    bool in_sweep = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        auto report = [&](const std::string& msg) {
            errors.push_back(std::string(source) + ":" + std::to_string(line_no) + ": " + msg);
        };
        const std::string_view line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                report("malformed table header");
                continue;
            }
            const std::string_view name = trim(line.substr(1, line.size() - 2));
            if (name == "sweep") {
                if (in_sweep) report("duplicate [sweep] table");
                in_sweep = true;
            } else {
                report("unknown table [" + std::string(name) + "] (only [sweep] is supported)");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            report("expected 'key = value'");
            continue;
        }
        const std::string_view key = trim(line.substr(0, eq));
        if (key.empty()) {
            report("missing key before '='");
            continue;
        }
        try {
            const ConfigValue value = ValueParser(trim(line.substr(eq + 1))).parse();
            if (in_sweep) {
                if (!kModelKeys.count(key)) throw ConfigError("'" + std::string(key) + "' cannot be swept");
                if (!seen_sweep.insert(std::string(key)).second) throw ConfigError("duplicate sweep axis '" + std::string(key) + "'");
                if (value.kind != ConfigValue::Kind::List) throw ConfigError("sweep axis '" + std::string(key) + "' expects a list");
                for (const auto& item : value.items) {
                    ModelConfig probe = rc.model;
                    apply_model_key(probe, key, item);
                }
                if (!value.items.empty()) rc.axes.push_back({std::string(key), value.items, line_no});
            } else {
                if (!seen_root.insert(std::string(key)).second) throw ConfigError("duplicate key '" + std::string(key) + "'");
                key_lines[std::string(key)] = line_no;
                apply_run_key(rc, key, value);
            }
        } catch (const ConfigError& e) {
            report(e.what());
        }
    }
    if (errors.empty() && check_model) {
        // Point each model problem at the line that set the offending key.
        for (const auto& msg : validation_errors(rc.model)) {
            std::string key = msg.substr(0, msg.find(' '));
            if (msg.starts_with("initial qubit state")) key = "p_eg";
            if (key == "beta" && !key_lines.count(key)) key = "k_bt";
            const auto it = key_lines.find(key);
            errors.push_back(std::string(source) + (it != key_lines.end() ? ":" + std::to_string(it->second) : "") +
                             ": " + msg);
        }
    }
    if (!errors.empty()) {
        std::string msg = "configuration errors:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return rc;
}

RunConfig load_config(const std::filesystem::path& path, bool check_model) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string(), check_model);
}

std::size_t sweep_size(const RunConfig& rc) {
    std::size_t n = 1;
    for (const auto& axis : rc.axes) n *= axis.values.size();
    return n;
}

std::vector<ModelConfig> sweep_points(const RunConfig& rc) {
    const std::size_t total = sweep_size(rc);
    std::vector<ModelConfig> out;
    out.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        ModelConfig cfg = rc.model;
        std::size_t rem = idx;
        for (std::size_t a = rc.axes.size(); a-- > 0;) {
            const auto& axis = rc.axes[a];
            apply_model_key(cfg, axis.key, axis.values[rem % axis.values.size()]);
            rem /= axis.values.size();
        }
        out.push_back(cfg);
    }
    return out;
}

std::string to_string(const ConfigValue& v) {
    switch (v.kind) {
    case ConfigValue::Kind::Number: return v.text;
    case ConfigValue::Kind::String: return v.text;
    case ConfigValue::Kind::List: {
        std::string s = "[";
        for (std::size_t i = 0; i < v.items.size(); ++i) {
            if (i) s += ";";
            s += to_string(v.items[i]);
        }
        return s + "]";
    }
    }
    return {};
}

} // namespace qtl
