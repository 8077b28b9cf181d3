#pragma once

#include <map>
#include <string>
#include <vector>

namespace cli {

// Flat key = value configuration with '#' comments. Unknown keys are hard
// errors. CLI flags override file values which override defaults.
struct RunConfig {
    std::string task = "spectrum";

    double gamma_1d_1 = 1.0;
    double gamma_1d_2 = 1.0;
    double gamma_prime = 0.0;
    double j = 1.0;
    double kad = 3.14159265358979323846;
    double d_over_l = 0.1;
    double omega_p = 1e-4;
    double delta = 0.0;

    double delta_min = -6.0;
    double delta_max = 6.0;
    double delta_points = 1201;

    double kad_min = 0.0;
    double kad_max = 6.283185307179586;
    double kad_points = 161;

    double t_max = 10.0;
    double t_points = 2001;
    std::string initial = "left";

    double tau_max = 10.0;
    double tau_points = 1001;

    double eta = 0.0;

    std::string out;
    std::string svg;

    bool operator==(const RunConfig&) const = default;
};

struct ConfigError {
    std::string message;  // includes key name and line number where known
};

// Parses config text; merges into `config`. Throws ConfigError.
void parse_config_text(const std::string& text, const std::string& source_name,
                       RunConfig& config);

// Applies one key/value pair (CLI override). Throws ConfigError.
void apply_key(const std::string& key, const std::string& value, RunConfig& config,
               const std::string& where);

// Validates cross-field invariants (ranges, task name, initial state).
void validate_config(const RunConfig& config);

// Serializes every key as "key = value" lines, 17 significant digits,
// suitable for the CSV header echo; parse_config_text() round-trips it.
std::vector<std::pair<std::string, std::string>> config_items(const RunConfig& config);

}  // namespace cli
