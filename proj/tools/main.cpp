// dimer — command-line front end over the shared-library C API.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "dimer.h"

#include "config.hpp"
#include "output.hpp"

namespace {

constexpr const char* kUsage =
    "usage: dimer <spectrum|sweep2d|dynamics|g2|fano|asym>\n"
    "             [--config PATH] [--preset NAME] [--<key> value ...]\n"
    "             [--out PATH] [--svg PATH]\n"
    "\n"
    "Config files are flat 'key = value' lines with '#' comments; CLI flags\n"
    "override file values. Exit codes: 0 success, 2 configuration error,\n"
    "3 numeric failure.\n"
    "\n"
    "Keys: gamma_1d_1 gamma_1d_2 gamma_prime j kad d_over_l omega_p delta\n"
    "      delta_min delta_max delta_points kad_min kad_max kad_points\n"
    "      t_max t_points initial tau_max tau_points eta out svg\n";

int fail_config(const std::string& msg) {
    std::fprintf(stderr, "dimer: error: config: %s\n", msg.c_str());
    return 2;
}

int fail_status(dimer_status st) {
    std::fprintf(stderr, "dimer: error: %s: %s\n", dimer_status_name(st),
                 dimer_last_error_message());
    switch (st) {
        case DIMER_ERR_NULL_ARGUMENT:
        case DIMER_ERR_INVALID_PARAMS:
        case DIMER_ERR_INVALID_GRID:
        case DIMER_ERR_ASYMMETRIC_INPUT:
        case DIMER_ERR_WRONG_CASE:
            return 2;
        default:
            return 3;
    }
}

int fail_io(const std::string& path) {
    std::fprintf(stderr, "dimer: error: io: cannot write '%s'\n", path.c_str());
    return 3;
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

std::string resolve_preset(const std::string& name) {
    std::vector<std::string> candidates;
    candidates.push_back(name);
    if (const char* dir = std::getenv("DIMER_PRESET_DIR"))
        candidates.push_back(std::string(dir) + "/" + name + ".cfg");
#ifdef DIMER_DEFAULT_PRESET_DIR
    candidates.push_back(std::string(DIMER_DEFAULT_PRESET_DIR) + "/" + name + ".cfg");
#endif
    candidates.push_back("presets/" + name + ".cfg");
    for (const auto& c : candidates) {
        std::ifstream probe(c);
        if (probe) return c;
    }
    return {};
}

struct SystemHandle {
    dimer_system* sys = nullptr;
    ~SystemHandle() { dimer_system_destroy(sys); }
};

dimer_status make_system(const cli::RunConfig& c, SystemHandle& handle) {
    dimer_params p;
    p.gamma_1d_1 = c.gamma_1d_1;
    p.gamma_1d_2 = c.gamma_1d_2;
    p.gamma_prime = c.gamma_prime;
    p.j_strength = c.j;
    p.kad = c.kad;
    p.d_over_l = c.d_over_l;
    p.omega_p_amp = c.omega_p;
    p.delta = c.delta;
    return dimer_system_create(&p, &handle.sys);
}

std::string out_path(const cli::RunConfig& c) {
    return c.out.empty() ? c.task + ".csv" : c.out;
}

int emit(const cli::RunConfig& c, const cli::CsvWriter& csv, const std::string& title,
         const std::string& xlabel, const std::string& ylabel,
         const std::vector<cli::SvgSeries>& series) {
    const std::string path = out_path(c);
    if (!cli::write_file(path, csv.str())) return fail_io(path);
    if (!c.svg.empty()) {
        if (!cli::write_file(c.svg, cli::render_svg(title, xlabel, ylabel, series)))
            return fail_io(c.svg);
    }
    return 0;
}

int run_spectrum(const cli::RunConfig& c) {
    SystemHandle h;
    if (auto st = make_system(c, h); st != DIMER_OK) return fail_status(st);
    dimer_spectrum* spec = nullptr;
    const auto n = static_cast<size_t>(c.delta_points);
    if (auto st = dimer_spectrum_compute(h.sys, c.delta_min, c.delta_max, n, &spec);
        st != DIMER_OK)
        return fail_status(st);
    std::unique_ptr<dimer_spectrum, void (*)(dimer_spectrum*)> guard(spec,
                                                                     dimer_spectrum_destroy);

    cli::CsvWriter csv(c, {"delta", "T", "R", "theta", "theta_unwrapped", "loss"});
    cli::SvgSeries st{"T", {}, {}}, sr{"R", {}, {}};
    for (size_t i = 0; i < dimer_spectrum_size(spec); ++i) {
        dimer_scatter_point pt;
        double unwrapped;
        dimer_spectrum_point(spec, i, &pt);
        dimer_spectrum_phase_unwrapped(spec, i, &unwrapped);
        csv.row({pt.delta, pt.transmission, pt.reflection, pt.phase, unwrapped, pt.loss});
        st.x.push_back(pt.delta);
        st.y.push_back(pt.transmission);
        sr.x.push_back(pt.delta);
        sr.y.push_back(pt.reflection);
    }
    return emit(c, csv, "photon transmission and reflection", "detuning", "T, R", {st, sr});
}

int run_sweep2d(const cli::RunConfig& c) {
    const auto nk = static_cast<size_t>(c.kad_points);
    const auto nd = static_cast<size_t>(c.delta_points);
    // Hold the bound-state length fixed across the sweep: d/L tracks kad.
    const double ka_l = c.d_over_l > 0 && c.kad > 0 ? c.kad / c.d_over_l : 0.0;

    cli::CsvWriter csv(c, {"kad", "delta", "T", "theta", "theta_unwrapped"});
    std::vector<cli::SvgSeries> slices;
    for (size_t k = 0; k < nk; ++k) {
        const double kad = nk == 1 ? c.kad_min
                                   : c.kad_min + (c.kad_max - c.kad_min) *
                                                     static_cast<double>(k) /
                                                     static_cast<double>(nk - 1);
        cli::RunConfig ck = c;
        ck.kad = kad;
        ck.d_over_l = ka_l > 0 ? kad / ka_l : c.d_over_l;
        SystemHandle h;
        if (auto st = make_system(ck, h); st != DIMER_OK) return fail_status(st);
        dimer_spectrum* spec = nullptr;
        if (auto st = dimer_spectrum_compute(h.sys, c.delta_min, c.delta_max, nd, &spec);
            st != DIMER_OK)
            return fail_status(st);
        std::unique_ptr<dimer_spectrum, void (*)(dimer_spectrum*)> guard(spec,
                                                                         dimer_spectrum_destroy);
        const bool slice = nk <= 6 || k % ((nk - 1) / 5 ? (nk - 1) / 5 : 1) == 0;
        cli::SvgSeries ss;
        char label[48];
        std::snprintf(label, sizeof label, "kad = %.3g", kad);
        ss.label = label;
        for (size_t i = 0; i < dimer_spectrum_size(spec); ++i) {
            dimer_scatter_point pt;
            double unwrapped;
            dimer_spectrum_point(spec, i, &pt);
            dimer_spectrum_phase_unwrapped(spec, i, &unwrapped);
            csv.row({kad, pt.delta, pt.transmission, pt.phase, unwrapped});
            if (slice) {
                ss.x.push_back(pt.delta);
                ss.y.push_back(pt.transmission);
            }
        }
        if (slice && slices.size() < 7) slices.push_back(std::move(ss));
    }
    return emit(c, csv, "transmission vs spacing and detuning", "detuning", "T", slices);
}

int dump_timeseries(const cli::RunConfig& c, dimer_timeseries* ts, cli::CsvWriter& csv,
                    const std::string& title) {
    std::vector<cli::SvgSeries> series(4);
    series[0].label = "p_left";
    series[1].label = "p_right";
    series[2].label = "p_A";
    series[3].label = "p_B";
    for (size_t i = 0; i < dimer_timeseries_size(ts); ++i) {
        dimer_population_sample s;
        dimer_timeseries_sample(ts, i, &s);
        csv.row({s.time, s.p_left, s.p_right, s.p_a, s.p_b, s.norm});
        series[0].x.push_back(s.time);
        series[0].y.push_back(s.p_left);
        series[1].x.push_back(s.time);
        series[1].y.push_back(s.p_right);
        series[2].x.push_back(s.time);
        series[2].y.push_back(s.p_a);
        series[3].x.push_back(s.time);
        series[3].y.push_back(s.p_b);
    }
    return emit(c, csv, title, "time", "population", series);
}

int run_dynamics(const cli::RunConfig& c) {
    SystemHandle h;
    if (auto st = make_system(c, h); st != DIMER_OK) return fail_status(st);
    const auto n = static_cast<size_t>(c.t_points);
    dimer_timeseries* ts = nullptr;
    cli::CsvWriter csv(c, {"t", "p_left", "p_right", "p_a", "p_b", "norm"});

    if (c.eta != 0.0) {
        if (c.initial != "left")
            return fail_config("key 'initial' must be 'left' when eta != 0 (deviation run)");
        double fitted = 0.0, expected = 0.0;
        if (auto st = dimer_deviation_dynamics(h.sys, c.eta, c.t_max, n, &ts, &fitted, &expected);
            st != DIMER_OK)
            return fail_status(st);
        char line[128];
        std::snprintf(line, sizeof line, "fitted_pb_decay = %.17g", fitted);
        csv.comment(line);
        std::snprintf(line, sizeof line, "expected_pb_decay = %.17g", expected);
        csv.comment(line);
    } else {
        dimer_initial_state init = DIMER_INITIAL_LEFT;
        if (c.initial == "right") init = DIMER_INITIAL_RIGHT;
        else if (c.initial == "A") init = DIMER_INITIAL_DRESSED_A;
        else if (c.initial == "B") init = DIMER_INITIAL_DRESSED_B;
        if (auto st = dimer_evolve(h.sys, init, c.t_max, n, &ts); st != DIMER_OK)
            return fail_status(st);
    }
    std::unique_ptr<dimer_timeseries, void (*)(dimer_timeseries*)> guard(
        ts, dimer_timeseries_destroy);
    return dump_timeseries(c, ts, csv, "excited-state populations");
}

int run_g2(const cli::RunConfig& c) {
    SystemHandle h;
    if (auto st = make_system(c, h); st != DIMER_OK) return fail_status(st);
    dimer_g2_trace* trace = nullptr;
    const auto n = static_cast<size_t>(c.tau_points);
    if (auto st = dimer_g2_reflected(h.sys, c.tau_max, n, &trace); st != DIMER_OK)
        return fail_status(st);
    std::unique_ptr<dimer_g2_trace, void (*)(dimer_g2_trace*)> guard(trace,
                                                                     dimer_g2_trace_destroy);

    cli::CsvWriter csv(c, {"tau", "g2"});
    char line[96];
    std::snprintf(line, sizeof line, "flux_ss = %.17g", dimer_g2_flux(trace));
    csv.comment(line);
    cli::SvgSeries s{"g2", {}, {}};
    for (size_t i = 0; i < dimer_g2_size(trace); ++i) {
        double tau, g2;
        dimer_g2_sample(trace, i, &tau, &g2);
        csv.row({tau, g2});
        s.x.push_back(tau);
        s.y.push_back(g2);
    }
    return emit(c, csv, "reflected-field photon-photon correlation", "tau", "g2", {s});
}

int run_fano(const cli::RunConfig& c) {
    SystemHandle h;
    if (auto st = make_system(c, h); st != DIMER_OK) return fail_status(st);
    dimer_spectrum* spec = nullptr;
    dimer_fano_feature feature;
    const auto n = static_cast<size_t>(c.delta_points);
    if (auto st =
            dimer_fano_scan(h.sys, c.eta, c.delta_min, c.delta_max, n, &spec, &feature);
        st != DIMER_OK)
        return fail_status(st);
    std::unique_ptr<dimer_spectrum, void (*)(dimer_spectrum*)> guard(spec,
                                                                     dimer_spectrum_destroy);

    cli::CsvWriter csv(c, {"delta", "T", "R", "theta", "theta_unwrapped", "loss"});
    cli::SvgSeries sr{"R", {}, {}};
    for (size_t i = 0; i < dimer_spectrum_size(spec); ++i) {
        dimer_scatter_point pt;
        double unwrapped;
        dimer_spectrum_point(spec, i, &pt);
        dimer_spectrum_phase_unwrapped(spec, i, &unwrapped);
        csv.row({pt.delta, pt.transmission, pt.reflection, pt.phase, unwrapped, pt.loss});
        sr.x.push_back(pt.delta);
        sr.y.push_back(pt.reflection);
    }
    char line[96];
    std::snprintf(line, sizeof line, "fano_position = %.17g", feature.position);
    csv.comment(line);
    std::snprintf(line, sizeof line, "fano_predicted = %.17g", feature.predicted);
    csv.comment(line);
    std::snprintf(line, sizeof line, "fano_width = %.17g", feature.width);
    csv.comment(line);
    std::snprintf(line, sizeof line, "fano_asymmetry_sign = %d", feature.asymmetry_sign);
    csv.comment(line);
    std::printf("fano feature: position %.6g (predicted %.6g), width %.4g, %s\n",
                feature.position, feature.predicted, feature.width,
                feature.asymmetry_sign > 0 ? "dip-then-peak" : "peak-then-dip");
    return emit(c, csv, "reflection spectrum with spacing deviation", "detuning", "R", {sr});
}

int run_asym(const cli::RunConfig& c) {
    SystemHandle h;
    if (auto st = make_system(c, h); st != DIMER_OK) return fail_status(st);
    dimer_timeseries* ts = nullptr;
    double coupling = 0.0, mismatch = 0.0;
    const auto n = static_cast<size_t>(c.t_points);
    if (auto st = dimer_asymmetric_bragg_dynamics(h.sys, c.t_max, n, &ts, &coupling, &mismatch);
        st != DIMER_OK)
        return fail_status(st);
    std::unique_ptr<dimer_timeseries, void (*)(dimer_timeseries*)> guard(
        ts, dimer_timeseries_destroy);

    cli::CsvWriter csv(c, {"t", "p_left", "p_right", "p_a", "p_b", "norm"});
    char line[96];
    std::snprintf(line, sizeof line, "coupling_ab = %.17g", coupling);
    csv.comment(line);
    std::snprintf(line, sizeof line, "dressed_route_mismatch = %.17g", mismatch);
    csv.comment(line);
    return dump_timeseries(c, ts, csv, "dressed populations, asymmetric rates");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2 || std::strcmp(argv[1], "--help") == 0 || std::strcmp(argv[1], "-h") == 0 ||
        std::strcmp(argv[1], "help") == 0) {
        std::fputs(kUsage, argc < 2 ? stderr : stdout);
        return argc < 2 ? 2 : 0;
    }

    cli::RunConfig config;
    config.task = argv[1];

    try {
        // Two passes: locate --preset/--config first so CLI keys override them.
        std::string preset_name, config_path;
        for (int i = 2; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg.rfind("--", 0) != 0) return fail_config("expected '--key value', got '" + arg + "'");
            if (i + 1 >= argc) return fail_config("missing value for '" + arg + "'");
            const std::string key = arg.substr(2);
            const std::string value = argv[++i];
            if (key == "preset") preset_name = value;
            else if (key == "config") config_path = value;
        }
        if (!preset_name.empty()) {
            const std::string path = resolve_preset(preset_name);
            if (path.empty()) return fail_config("preset '" + preset_name + "' not found");
            std::string text;
            if (!read_file(path, text)) return fail_config("cannot read preset '" + path + "'");
            cli::parse_config_text(text, path, config);
        }
        if (!config_path.empty()) {
            std::string text;
            if (!read_file(config_path, text))
                return fail_config("cannot read config '" + config_path + "'");
            cli::parse_config_text(text, config_path, config);
        }
        for (int i = 2; i < argc; ++i) {
            const std::string key = std::string(argv[i]).substr(2);
            const std::string value = argv[++i];
            if (key == "preset" || key == "config") continue;
            cli::apply_key(key, value, config, "cli");
        }
        config.task = argv[1];  // subcommand wins over any preset task
        cli::validate_config(config);
    } catch (const cli::ConfigError& e) {
        return fail_config(e.message);
    }

    if (config.task == "spectrum") return run_spectrum(config);
    if (config.task == "sweep2d") return run_sweep2d(config);
    if (config.task == "dynamics") return run_dynamics(config);
    if (config.task == "g2") return run_g2(config);
    if (config.task == "fano") return run_fano(config);
    if (config.task == "asym") return run_asym(config);
    return fail_config("unknown task '" + config.task + "'");
}
