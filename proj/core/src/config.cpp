#include "mparity/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "mparity/errors.hpp"
#include "mparity/format.hpp"

namespace mparity::config {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* expected) {
    throw InvalidArgumentError("config: key '" + key + "' expects " + expected +
                               ", got '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) bad_value(key, value, "a real number");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        bad_value(key, value, "a real number");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(value, &pos);
        if (pos != value.size()) bad_value(key, value, "an integer");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        bad_value(key, value, "an integer");
    }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        if (!value.empty() && value[0] == '-') bad_value(key, value, "a non-negative integer");
        const std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) bad_value(key, value, "a non-negative integer");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        bad_value(key, value, "a non-negative integer");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    bad_value(key, value, "true or false");
}

decoherence::Variant parse_variant(const std::string& key, const std::string& value) {
    if (value == "none") return decoherence::Variant::none;
    if (value == "localization") return decoherence::Variant::localization;
    if (value == "grw") return decoherence::Variant::grw;
    bad_value(key, value, "one of none, localization, grw");
}

std::string variant_name(decoherence::Variant v) {
    switch (v) {
        case decoherence::Variant::none: return "none";
        case decoherence::Variant::localization: return "localization";
        case decoherence::Variant::grw: return "grw";
    }
    return "none";
}

struct KeyBinding {
    std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
    /// Textual value for emission, or nullopt when the field is unset.
    std::function<std::optional<std::string>(const ExperimentConfig&)> get;
};

const std::vector<std::pair<std::string, KeyBinding>>& bindings() {
    using C = ExperimentConfig;
    static const std::vector<std::pair<std::string, KeyBinding>> table = {
        {"mirror.n_nucleons",
         {[](C& c, const std::string& k, const std::string& v) { c.n_nucleons = parse_int(k, v); },
          [](const C& c) { return std::optional<std::string>(std::to_string(c.n_nucleons)); }}},
        {"mirror.omega_rad_s",
         {[](C& c, const std::string& k, const std::string& v) { c.omega_rad_s = parse_double(k, v); },
          [](const C& c) -> std::optional<std::string> {
              if (!c.omega_rad_s) return std::nullopt;
              return io::format_double(*c.omega_rad_s);
          }}},
        {"mirror.temperature_K",
         {[](C& c, const std::string& k, const std::string& v) { c.temperature_K = parse_double(k, v); },
          [](const C& c) { return std::optional<std::string>(io::format_double(c.temperature_K)); }}},
        {"mirror.tail_tol",
         {[](C& c, const std::string& k, const std::string& v) { c.tail_tol = parse_double(k, v); },
          [](const C& c) { return std::optional<std::string>(io::format_double(c.tail_tol)); }}},
        {"photon.eta",
         {[](C& c, const std::string& k, const std::string& v) { c.eta = parse_double(k, v); },
          [](const C& c) -> std::optional<std::string> {
              if (!c.eta) return std::nullopt;
              return io::format_double(*c.eta);
          }}},
        {"photon.lambda_m",
         {[](C& c, const std::string& k, const std::string& v) { c.lambda_m = parse_double(k, v); },
          [](const C& c) -> std::optional<std::string> {
              if (!c.lambda_m) return std::nullopt;
              return io::format_double(*c.lambda_m);
          }}},
        {"photon.geometry_factor",
         {[](C& c, const std::string& k, const std::string& v) { c.geometry_factor = parse_double(k, v); },
          [](const C& c) { return std::optional<std::string>(io::format_double(c.geometry_factor)); }}},
        {"decoherence.variant",
         {[](C& c, const std::string& k, const std::string& v) { c.variant = parse_variant(k, v); },
          [](const C& c) { return std::optional<std::string>(variant_name(c.variant)); }}},
        {"decoherence.lambda_loc",
         {[](C& c, const std::string& k, const std::string& v) { c.lambda_loc = parse_double(k, v); },
          [](const C& c) { return std::optional<std::string>(io::format_double(c.lambda_loc)); }}},
        {"decoherence.rate_per_nucleon_hz",
         {[](C& c, const std::string& k, const std::string& v) { c.rate_per_nucleon_hz = parse_double(k, v); },
          [](const C& c) { return std::optional<std::string>(io::format_double(c.rate_per_nucleon_hz)); }}},
        {"decoherence.width_m",
         {[](C& c, const std::string& k, const std::string& v) { c.width_m = parse_double(k, v); },
          [](const C& c) { return std::optional<std::string>(io::format_double(c.width_m)); }}},
        {"decoherence.duration_s",
         {[](C& c, const std::string& k, const std::string& v) { c.duration_s = parse_double(k, v); },
          [](const C& c) { return std::optional<std::string>(io::format_double(c.duration_s)); }}},
        {"decoherence.include_free_evolution",
         {[](C& c, const std::string& k, const std::string& v) { c.include_free_evolution = parse_bool(k, v); },
          [](const C& c) { return std::optional<std::string>(io::format_bool(c.include_free_evolution)); }}},
        {"decoherence.n_steps",
         {[](C& c, const std::string& k, const std::string& v) { c.n_steps = static_cast<int>(parse_int(k, v)); },
          [](const C& c) { return std::optional<std::string>(std::to_string(c.n_steps)); }}},
        {"decoherence.step_tol",
         {[](C& c, const std::string& k, const std::string& v) { c.step_tol = parse_double(k, v); },
          [](const C& c) { return std::optional<std::string>(io::format_double(c.step_tol)); }}},
        {"post_selection.j_max",
         {[](C& c, const std::string& k, const std::string& v) { c.j_max = static_cast<int>(parse_int(k, v)); },
          [](const C& c) { return std::optional<std::string>(std::to_string(c.j_max)); }}},
        {"post_selection.resolution_ratio",
         {[](C& c, const std::string& k, const std::string& v) { c.resolution_ratio = parse_double(k, v); },
          [](const C& c) { return std::optional<std::string>(io::format_double(c.resolution_ratio)); }}},
        {"run.n_events",
         {[](C& c, const std::string& k, const std::string& v) { c.n_events = parse_int(k, v); },
          [](const C& c) { return std::optional<std::string>(std::to_string(c.n_events)); }}},
        {"run.n_trajectories",
         {[](C& c, const std::string& k, const std::string& v) { c.n_trajectories = static_cast<int>(parse_int(k, v)); },
          [](const C& c) { return std::optional<std::string>(std::to_string(c.n_trajectories)); }}},
        {"run.seed",
         {[](C& c, const std::string& k, const std::string& v) { c.seed = parse_uint(k, v); },
          [](const C& c) -> std::optional<std::string> {
              if (!c.seed) return std::nullopt;
              return std::to_string(*c.seed);
          }}},
        {"run.threads",
         {[](C& c, const std::string& k, const std::string& v) { c.threads = static_cast<int>(parse_int(k, v)); },
          [](const C& c) { return std::optional<std::string>(std::to_string(c.threads)); }}},
        {"run.pad",
         {[](C& c, const std::string& k, const std::string& v) { c.pad = static_cast<int>(parse_int(k, v)); },
          [](const C& c) { return std::optional<std::string>(std::to_string(c.pad)); }}},
        {"run.trunc_tol",
         {[](C& c, const std::string& k, const std::string& v) { c.trunc_tol = parse_double(k, v); },
          [](const C& c) { return std::optional<std::string>(io::format_double(c.trunc_tol)); }}},
        {"output.path",
         {[](C& c, const std::string&, const std::string& v) { c.out_path = v; },
          [](const C& c) -> std::optional<std::string> {
              if (c.out_path.empty()) return std::nullopt;
              return c.out_path;
          }}},
        {"output.format",
         {[](C& c, const std::string& k, const std::string& v) {
              if (v != "csv" && v != "json-doc") bad_value(k, v, "csv or json-doc");
              c.format = v;
          },
          [](const C& c) { return std::optional<std::string>(c.format); }}},
    };
    return table;
}

const KeyBinding& find_binding(const std::string& key) {
    for (const auto& [name, binding] : bindings()) {
        if (name == key) return binding;
    }
    throw InvalidArgumentError("config: unknown key '" + key + "'");
}

}  // namespace

const std::vector<std::string>& key_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, binding] : bindings()) out.push_back(name);
        return out;
    }();
    return names;
}

void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    find_binding(key).set(cfg, key, trim(value));
}

ExperimentConfig parse(std::istream& in) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgumentError("config: line " + std::to_string(line_no) +
                                       " is not of the form key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (!seen.insert(key).second) {
            throw InvalidArgumentError("config: duplicate key '" + key + "'");
        }
        set_key(cfg, key, value);
    }
    return cfg;
}

ExperimentConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgumentError("config: cannot open '" + path + "'");
    }
    return parse(in);
}

ExperimentConfig parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

std::string emit(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& [name, binding] : bindings()) {
        const std::optional<std::string> value = binding.get(cfg);
        if (!value) continue;
        out += name;
        out += " = ";
        out += *value;
        out += '\n';
    }
    return out;
}

std::vector<std::string> apply_env_overrides(ExperimentConfig& cfg) {
    std::vector<std::string> applied;
    for (const auto& [name, binding] : bindings()) {
        std::string env_name = "MPARITY_";
        for (const char ch : name) {
            env_name += ch == '.' ? '_' : static_cast<char>(std::toupper(
                                              static_cast<unsigned char>(ch)));
        }
        const char* value = std::getenv(env_name.c_str());
        if (value == nullptr) continue;
        binding.set(cfg, name, trim(value));
        applied.push_back(name);
    }
    return applied;
}

void validate(const ExperimentConfig& cfg, bool sampling_run) {
    if (cfg.n_nucleons < 1) {
        throw InvalidArgumentError("config: mirror.n_nucleons must be >= 1");
    }
    if (!(std::isfinite(cfg.temperature_K) && cfg.temperature_K >= 0.0)) {
        throw InvalidArgumentError("config: mirror.temperature_K must be >= 0");
    }
    if (!(cfg.tail_tol > 0.0 && cfg.tail_tol < 1.0)) {
        throw InvalidArgumentError("config: mirror.tail_tol must lie in (0, 1)");
    }

    const int coupling_inputs = (cfg.omega_rad_s ? 1 : 0) + (cfg.eta ? 1 : 0) +
                                (cfg.lambda_m ? 1 : 0);
    if (coupling_inputs > 2) {
        throw InvalidArgumentError(
            "config: mirror.omega_rad_s, photon.eta and photon.lambda_m are "
            "over-determined; give exactly two");
    }
    if (coupling_inputs < 2) {
        throw InvalidArgumentError(
            "config: give exactly two of mirror.omega_rad_s, photon.eta, "
            "photon.lambda_m");
    }
    if (cfg.omega_rad_s && !(std::isfinite(*cfg.omega_rad_s) && *cfg.omega_rad_s > 0.0)) {
        throw InvalidArgumentError("config: mirror.omega_rad_s must be > 0");
    }
    if (cfg.eta && !(std::isfinite(*cfg.eta) && *cfg.eta > 0.0)) {
        throw InvalidArgumentError("config: photon.eta must be > 0");
    }
    if (cfg.lambda_m && !(std::isfinite(*cfg.lambda_m) && *cfg.lambda_m > 0.0)) {
        throw InvalidArgumentError("config: photon.lambda_m must be > 0");
    }
    if (!(std::isfinite(cfg.geometry_factor) && cfg.geometry_factor > 0.0 &&
          cfg.geometry_factor <= 2.0)) {
        throw InvalidArgumentError("config: photon.geometry_factor must lie in (0, 2]");
    }

    {
        // Reuse the model validation for the decoherence block.
        decoherence::DecoherenceModel model;
        model.variant = cfg.variant;
        model.lambda_loc = cfg.lambda_loc;
        model.rate_per_nucleon_hz = cfg.rate_per_nucleon_hz;
        model.width_m = cfg.width_m > 0.0 ? cfg.width_m : 1.0;
        model.duration_s = cfg.duration_s;
        model.include_free_evolution = cfg.include_free_evolution;
        if (cfg.variant == decoherence::Variant::grw &&
            !(std::isfinite(cfg.width_m) && cfg.width_m > 0.0)) {
            throw InvalidArgumentError(
                "config: decoherence.width_m must be > 0 for the grw variant");
        }
        model.validate();
    }
    if (cfg.n_steps < 0) {
        throw InvalidArgumentError("config: decoherence.n_steps must be >= 0");
    }
    if (!(cfg.step_tol > 0.0)) {
        throw InvalidArgumentError("config: decoherence.step_tol must be > 0");
    }

    if (cfg.j_max < 0) {
        throw InvalidArgumentError("config: post_selection.j_max must be >= 0");
    }
    if (!(std::isfinite(cfg.resolution_ratio) && cfg.resolution_ratio >= 0.0)) {
        throw InvalidArgumentError("config: post_selection.resolution_ratio must be >= 0");
    }

    if (cfg.n_events < 1) {
        throw InvalidArgumentError("config: run.n_events must be >= 1");
    }
    if (cfg.n_trajectories < 1) {
        throw InvalidArgumentError("config: run.n_trajectories must be >= 1");
    }
    if (cfg.threads < 1) {
        throw InvalidArgumentError("config: run.threads must be >= 1");
    }
    if (cfg.pad < 0) {
        throw InvalidArgumentError("config: run.pad must be >= 0");
    }
    if (!(cfg.trunc_tol > 0.0 && cfg.trunc_tol < 1.0)) {
        throw InvalidArgumentError("config: run.trunc_tol must lie in (0, 1)");
    }
    if (cfg.format != "csv" && cfg.format != "json-doc") {
        throw InvalidArgumentError("config: output.format must be csv or json-doc");
    }

    const bool stochastic = sampling_run || cfg.variant == decoherence::Variant::grw;
    if (stochastic && !cfg.seed) {
        throw InvalidArgumentError(
            "config: run.seed is required for stochastic runs (grw variant or click "
            "sampling)");
    }
}

}  // namespace mparity::config
