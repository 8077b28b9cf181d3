#include "config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>

namespace cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& key, const std::string& value, const std::string& where) {
    const std::string v = trim(value);
    if (v.empty()) throw ConfigError{where + ": key '" + key + "' has an empty value"};
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || !std::isfinite(x))
        throw ConfigError{where + ": key '" + key + "' has a non-numeric value '" + v + "'"};
    return x;
}

const std::set<std::string> kTasks = {"spectrum", "sweep2d", "dynamics", "g2", "fano", "asym"};
const std::set<std::string> kInitials = {"left", "right", "A", "B"};

}  // namespace

void apply_key(const std::string& key, const std::string& value, RunConfig& c,
               const std::string& where) {
    auto num = [&] { return parse_number(key, value, where); };
    if (key == "task") c.task = trim(value);
    else if (key == "gamma_1d_1") c.gamma_1d_1 = num();
    else if (key == "gamma_1d_2") c.gamma_1d_2 = num();
    else if (key == "gamma_prime") c.gamma_prime = num();
    else if (key == "j") c.j = num();
    else if (key == "kad") c.kad = num();
    else if (key == "d_over_l") c.d_over_l = num();
    else if (key == "omega_p") c.omega_p = num();
    else if (key == "delta") c.delta = num();
    else if (key == "delta_min") c.delta_min = num();
    else if (key == "delta_max") c.delta_max = num();
    else if (key == "delta_points") c.delta_points = num();
    else if (key == "kad_min") c.kad_min = num();
    else if (key == "kad_max") c.kad_max = num();
    else if (key == "kad_points") c.kad_points = num();
    else if (key == "t_max") c.t_max = num();
    else if (key == "t_points") c.t_points = num();
    else if (key == "initial") c.initial = trim(value);
    else if (key == "tau_max") c.tau_max = num();
    else if (key == "tau_points") c.tau_points = num();
    else if (key == "eta") c.eta = num();
    else if (key == "out") c.out = trim(value);
    else if (key == "svg") c.svg = trim(value);
    else throw ConfigError{where + ": unknown key '" + key + "'"};
}

void parse_config_text(const std::string& text, const std::string& source_name, RunConfig& c) {
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        const std::string where = source_name + ":" + std::to_string(line_no);
        if (eq == std::string::npos)
            throw ConfigError{where + ": expected 'key = value', got '" + line + "'"};
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError{where + ": missing key before '='"};
        apply_key(key, value, c, where);
        if (pos > text.size()) break;
    }
}

void validate_config(const RunConfig& c) {
    auto bad = [](const std::string& key, const std::string& why) {
        throw ConfigError{"key '" + key + "' " + why};
    };
    if (!kTasks.count(c.task)) bad("task", "must be one of spectrum|sweep2d|dynamics|g2|fano|asym");
    if (!kInitials.count(c.initial)) bad("initial", "must be one of left|right|A|B");
    if (c.gamma_1d_1 < 0) bad("gamma_1d_1", "must be >= 0");
    if (c.gamma_1d_2 < 0) bad("gamma_1d_2", "must be >= 0");
    if (c.gamma_prime < 0) bad("gamma_prime", "must be >= 0");
    if (c.j < 0) bad("j", "must be >= 0");
    if (c.kad < 0) bad("kad", "must be >= 0");
    if (c.d_over_l < 0) bad("d_over_l", "must be >= 0");
    if (c.omega_p < 0) bad("omega_p", "must be >= 0");
    if (!(c.delta_min < c.delta_max)) bad("delta_min", "must be < delta_max");
    if (!(c.delta_points >= 2) || c.delta_points != std::floor(c.delta_points))
        bad("delta_points", "must be an integer >= 2");
    if (!(c.kad_min <= c.kad_max)) bad("kad_min", "must be <= kad_max");
    if (c.kad_min < 0) bad("kad_min", "must be >= 0");
    if (!(c.kad_points >= 1) || c.kad_points != std::floor(c.kad_points))
        bad("kad_points", "must be an integer >= 1");
    if (!(c.t_max > 0)) bad("t_max", "must be > 0");
    if (!(c.t_points >= 2) || c.t_points != std::floor(c.t_points))
        bad("t_points", "must be an integer >= 2");
    if (!(c.tau_max > 0)) bad("tau_max", "must be > 0");
    if (!(c.tau_points >= 2) || c.tau_points != std::floor(c.tau_points))
        bad("tau_points", "must be an integer >= 2");
    if (std::abs(c.eta) > 0.2) bad("eta", "must satisfy |eta| <= 0.2");
}

std::vector<std::pair<std::string, std::string>> config_items(const RunConfig& c) {
    auto num = [](double x) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    return {
        {"task", c.task},
        {"gamma_1d_1", num(c.gamma_1d_1)},
        {"gamma_1d_2", num(c.gamma_1d_2)},
        {"gamma_prime", num(c.gamma_prime)},
        {"j", num(c.j)},
        {"kad", num(c.kad)},
        {"d_over_l", num(c.d_over_l)},
        {"omega_p", num(c.omega_p)},
        {"delta", num(c.delta)},
        {"delta_min", num(c.delta_min)},
        {"delta_max", num(c.delta_max)},
        {"delta_points", num(c.delta_points)},
        {"kad_min", num(c.kad_min)},
        {"kad_max", num(c.kad_max)},
        {"kad_points", num(c.kad_points)},
        {"t_max", num(c.t_max)},
        {"t_points", num(c.t_points)},
        {"initial", c.initial},
        {"tau_max", num(c.tau_max)},
        {"tau_points", num(c.tau_points)},
        {"eta", num(c.eta)},
    };
}

}  // namespace cli
