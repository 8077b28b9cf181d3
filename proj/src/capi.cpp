#include "dimer.h"

#include <cstring>
#include <new>
#include <string>

#include "dimer/correlation.hpp"
#include "dimer/dynamics.hpp"
#include "dimer/hamiltonian.hpp"
#include "dimer/imperfections.hpp"
#include "dimer/scattering.hpp"
#include "dimer/types.hpp"

namespace {

thread_local std::string g_last_error;

dimer_status map_code(dimer::ErrorCode code) {
    using dimer::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_params: return DIMER_ERR_INVALID_PARAMS;
        case ErrorCode::invalid_grid: return DIMER_ERR_INVALID_GRID;
        case ErrorCode::asymmetric_input: return DIMER_ERR_ASYMMETRIC_INPUT;
        case ErrorCode::wrong_case: return DIMER_ERR_WRONG_CASE;
        case ErrorCode::singular_resolvent: return DIMER_ERR_SINGULAR_RESOLVENT;
        case ErrorCode::singular_steady_state: return DIMER_ERR_SINGULAR_STEADY_STATE;
        case ErrorCode::zero_flux: return DIMER_ERR_ZERO_FLUX;
        case ErrorCode::feature_not_found: return DIMER_ERR_FEATURE_NOT_FOUND;
        case ErrorCode::empty_spectrum: return DIMER_ERR_EMPTY_SPECTRUM;
        case ErrorCode::nonconverged_steady_state: return DIMER_ERR_NONCONVERGED_STEADY_STATE;
    }
    return DIMER_ERR_INTERNAL;
}

template <typename Fn>
dimer_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return DIMER_OK;
    } catch (const dimer::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return DIMER_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DIMER_ERR_INTERNAL;
    }
}

dimer::SystemParams to_core(const dimer_params& p) {
    dimer::SystemParams out;
    out.gamma_1d_1 = p.gamma_1d_1;
    out.gamma_1d_2 = p.gamma_1d_2;
    out.gamma_prime = p.gamma_prime;
    out.j_strength = p.j_strength;
    out.kad = p.kad;
    out.d_over_l = p.d_over_l;
    out.omega_p_amp = p.omega_p_amp;
    out.delta = p.delta;
    return out;
}

void fill_point(const dimer::ScatterPoint& in, dimer_scatter_point* out) {
    out->delta = in.delta;
    out->t_re = in.t_amp.real();
    out->t_im = in.t_amp.imag();
    out->r_re = in.r_amp.real();
    out->r_im = in.r_amp.imag();
    out->transmission = in.transmission;
    out->reflection = in.reflection;
    out->phase = in.phase;
    out->loss = in.loss;
    out->valid = in.valid ? 1 : 0;
}

void fill_vec(const dimer::Vector2c& v, double out[4]) {
    out[0] = v(0).real();
    out[1] = v(0).imag();
    out[2] = v(1).real();
    out[3] = v(1).imag();
}

void fill_mat(const dimer::Matrix2c& m, double out[8]) {
    int k = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            out[k++] = m(i, j).real();
            out[k++] = m(i, j).imag();
        }
}

}  // namespace

struct dimer_system {
    dimer::SystemParams params;
};

struct dimer_spectrum {
    dimer::SpectrumGrid grid;
};

struct dimer_timeseries {
    dimer::TimeSeries series;
};

struct dimer_g2_trace {
    dimer::CorrelationTrace trace;
};

extern "C" {

const char* dimer_status_name(dimer_status status) {
    switch (status) {
        case DIMER_OK: return "ok";
        case DIMER_ERR_NULL_ARGUMENT: return "null_argument";
        case DIMER_ERR_INVALID_PARAMS: return "invalid_params";
        case DIMER_ERR_INVALID_GRID: return "invalid_grid";
        case DIMER_ERR_ASYMMETRIC_INPUT: return "asymmetric_input";
        case DIMER_ERR_WRONG_CASE: return "wrong_case";
        case DIMER_ERR_SINGULAR_RESOLVENT: return "singular_resolvent";
        case DIMER_ERR_SINGULAR_STEADY_STATE: return "singular_steady_state";
        case DIMER_ERR_ZERO_FLUX: return "zero_flux";
        case DIMER_ERR_FEATURE_NOT_FOUND: return "feature_not_found";
        case DIMER_ERR_EMPTY_SPECTRUM: return "empty_spectrum";
        case DIMER_ERR_NONCONVERGED_STEADY_STATE: return "nonconverged_steady_state";
        case DIMER_ERR_OUT_OF_RANGE: return "out_of_range";
        case DIMER_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* dimer_last_error_message(void) { return g_last_error.c_str(); }

unsigned dimer_abi_version(void) { return 1; }

void dimer_params_defaults(dimer_params* params) {
    if (!params) return;
    params->gamma_1d_1 = 1.0;
    params->gamma_1d_2 = 1.0;
    params->gamma_prime = 0.0;
    params->j_strength = 1.0;
    params->kad = 3.14159265358979323846;
    params->d_over_l = 0.1;
    params->omega_p_amp = 1e-4;
    params->delta = 0.0;
}

dimer_status dimer_system_create(const dimer_params* params, dimer_system** out) {
    if (!params || !out) {
        g_last_error = "null argument";
        return DIMER_ERR_NULL_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        dimer::SystemParams p = to_core(*params);
        dimer::validate(p);
        *out = new dimer_system{p};
    });
}

void dimer_system_destroy(dimer_system* sys) { delete sys; }

dimer_status dimer_system_get_params(const dimer_system* sys, dimer_params* out) {
    if (!sys || !out) return DIMER_ERR_NULL_ARGUMENT;
    out->gamma_1d_1 = sys->params.gamma_1d_1;
    out->gamma_1d_2 = sys->params.gamma_1d_2;
    out->gamma_prime = sys->params.gamma_prime;
    out->j_strength = sys->params.j_strength;
    out->kad = sys->params.kad;
    out->d_over_l = sys->params.d_over_l;
    out->omega_p_amp = sys->params.omega_p_amp;
    out->delta = sys->params.delta;
    return DIMER_OK;
}

dimer_status dimer_eigensystem(const dimer_system* sys, dimer_eigensystem_result* out) {
    if (!sys || !out) return DIMER_ERR_NULL_ARGUMENT;
    return guarded([&] {
        const auto es = dimer::eigensolve(dimer::build_hamiltonian(sys->params));
        out->e1_re = es.e1.real();
        out->e1_im = es.e1.imag();
        out->e2_re = es.e2.real();
        out->e2_im = es.e2.imag();
        fill_vec(es.psi1_r, out->psi1_r);
        fill_vec(es.psi2_r, out->psi2_r);
        fill_vec(es.psi1_l, out->psi1_l);
        fill_vec(es.psi2_l, out->psi2_l);
        out->degenerate = es.degenerate ? 1 : 0;
    });
}

dimer_status dimer_hamiltonian(const dimer_system* sys, dimer_hamiltonian_result* out) {
    if (!sys || !out) return DIMER_ERR_NULL_ARGUMENT;
    return guarded([&] {
        const auto h = dimer::build_hamiltonian(sys->params);
        fill_mat(h.matrix, out->matrix);
        fill_mat(h.coherent_part, out->coherent_part);
        fill_mat(h.decay_matrix, out->decay_matrix);
    });
}

dimer_status dimer_dressed_scheme(const dimer_system* sys, dimer_dressed_scheme_result* out) {
    if (!sys || !out) return DIMER_ERR_NULL_ARGUMENT;
    return guarded([&] {
        const auto s = dimer::dressed_scheme(sys->params);
        out->omega_a_level = s.omega_a_level;
        out->omega_b_level = s.omega_b_level;
        out->gamma_a = s.gamma_a;
        out->gamma_b = s.gamma_b;
        out->delta_ab = s.delta_ab;
    });
}

dimer_status dimer_bound_state_length(double alpha, double delta_edge, double d_cell,
                                      double* length_out) {
    if (!length_out) return DIMER_ERR_NULL_ARGUMENT;
    return guarded([&] {
        *length_out = dimer::bound_state_length({alpha, delta_edge, d_cell});
    });
}

dimer_status dimer_scatter(const dimer_system* sys, double delta, dimer_scatter_point* out) {
    if (!sys || !out) return DIMER_ERR_NULL_ARGUMENT;
    return guarded([&] { fill_point(dimer::scatter_amplitudes(sys->params, delta), out); });
}

dimer_status dimer_scatter_steady_state(const dimer_system* sys, double delta,
                                        dimer_scatter_point* out) {
    if (!sys || !out) return DIMER_ERR_NULL_ARGUMENT;
    return guarded([&] { fill_point(dimer::scatter_via_steady_state(sys->params, delta), out); });
}

dimer_status dimer_spectrum_compute(const dimer_system* sys, double delta_min, double delta_max,
                                    size_t n, dimer_spectrum** out) {
    if (!sys || !out) return DIMER_ERR_NULL_ARGUMENT;
    *out = nullptr;
    return guarded([&] {
        *out = new dimer_spectrum{dimer::spectrum(sys->params, delta_min, delta_max, n)};
    });
}

size_t dimer_spectrum_size(const dimer_spectrum* spec) {
    return spec ? spec->grid.points.size() : 0;
}

dimer_status dimer_spectrum_point(const dimer_spectrum* spec, size_t i, dimer_scatter_point* out) {
    if (!spec || !out) return DIMER_ERR_NULL_ARGUMENT;
    if (i >= spec->grid.points.size()) return DIMER_ERR_OUT_OF_RANGE;
    fill_point(spec->grid.points[i], out);
    return DIMER_OK;
}

dimer_status dimer_spectrum_phase_unwrapped(const dimer_spectrum* spec, size_t i, double* out) {
    if (!spec || !out) return DIMER_ERR_NULL_ARGUMENT;
    if (i >= spec->grid.phase_unwrapped.size()) return DIMER_ERR_OUT_OF_RANGE;
    *out = spec->grid.phase_unwrapped[i];
    return DIMER_OK;
}

void dimer_spectrum_destroy(dimer_spectrum* spec) { delete spec; }

dimer_status dimer_spectrum_peaks(const dimer_spectrum* spec, double prominence, dimer_peak* out,
                                  size_t capacity, size_t* count) {
    if (!spec || !count || (capacity > 0 && !out)) return DIMER_ERR_NULL_ARGUMENT;
    return guarded([&] {
        const auto peaks = dimer::peak_analysis(spec->grid, prominence);
        *count = peaks.size();
        for (size_t i = 0; i < peaks.size() && i < capacity; ++i) {
            out[i].position = peaks[i].position;
            out[i].height = peaks[i].height;
            out[i].fwhm = peaks[i].fwhm;
        }
    });
}

namespace {

void fill_sample(const dimer::TimeSeries& ts, size_t i, dimer_population_sample* out) {
    out->time = ts.times[i];
    out->p_left = ts.p_left[i];
    out->p_right = ts.p_right[i];
    out->p_a = ts.p_a[i];
    out->p_b = ts.p_b[i];
    out->norm = ts.norm[i];
}

}  // namespace

dimer_status dimer_evolve(const dimer_system* sys, dimer_initial_state initial, double t_max,
                          size_t n, dimer_timeseries** out) {
    if (!sys || !out) return DIMER_ERR_NULL_ARGUMENT;
    *out = nullptr;
    return guarded([&] {
        dimer::InitialState st;
        switch (initial) {
            case DIMER_INITIAL_LEFT: st = dimer::InitialState::left; break;
            case DIMER_INITIAL_RIGHT: st = dimer::InitialState::right; break;
            case DIMER_INITIAL_DRESSED_A: st = dimer::InitialState::dressed_a; break;
            case DIMER_INITIAL_DRESSED_B: st = dimer::InitialState::dressed_b; break;
            default:
                throw dimer::Error(dimer::ErrorCode::invalid_params, "unknown initial state");
        }
        *out = new dimer_timeseries{dimer::evolve(sys->params, st, t_max, n)};
    });
}

size_t dimer_timeseries_size(const dimer_timeseries* ts) {
    return ts ? ts->series.times.size() : 0;
}

dimer_status dimer_timeseries_sample(const dimer_timeseries* ts, size_t i,
                                     dimer_population_sample* out) {
    if (!ts || !out) return DIMER_ERR_NULL_ARGUMENT;
    if (i >= ts->series.times.size()) return DIMER_ERR_OUT_OF_RANGE;
    fill_sample(ts->series, i, out);
    return DIMER_OK;
}

void dimer_timeseries_destroy(dimer_timeseries* ts) { delete ts; }

dimer_status dimer_closed_form_populations(const dimer_system* sys, dimer_spacing_case which,
                                           double t, dimer_population_sample* out) {
    if (!sys || !out) return DIMER_ERR_NULL_ARGUMENT;
    return guarded([&] {
        const auto pops = dimer::closed_form_populations(
            sys->params,
            which == DIMER_CASE_BRAGG ? dimer::SpacingCase::bragg : dimer::SpacingCase::anti_bragg,
            t);
        out->time = t;
        out->p_left = pops.p_left;
        out->p_right = pops.p_right;
        out->p_a = pops.p_a;
        out->p_b = pops.p_b;
        out->norm = pops.p_left + pops.p_right;
    });
}

dimer_status dimer_g2_reflected(const dimer_system* sys, double tau_max, size_t n,
                                dimer_g2_trace** out) {
    if (!sys || !out) return DIMER_ERR_NULL_ARGUMENT;
    *out = nullptr;
    return guarded([&] {
        *out = new dimer_g2_trace{dimer::g2_reflected(sys->params, tau_max, n)};
    });
}

dimer_status dimer_g2_master_equation(const dimer_system* sys, double tau_max, size_t n,
                                      dimer_g2_trace** out) {
    if (!sys || !out) return DIMER_ERR_NULL_ARGUMENT;
    *out = nullptr;
    return guarded([&] {
        *out = new dimer_g2_trace{dimer::g2_master_equation_oracle(sys->params, tau_max, n)};
    });
}

size_t dimer_g2_size(const dimer_g2_trace* trace) {
    return trace ? trace->trace.taus.size() : 0;
}

dimer_status dimer_g2_sample(const dimer_g2_trace* trace, size_t i, double* tau, double* g2) {
    if (!trace || !tau || !g2) return DIMER_ERR_NULL_ARGUMENT;
    if (i >= trace->trace.taus.size()) return DIMER_ERR_OUT_OF_RANGE;
    *tau = trace->trace.taus[i];
    *g2 = trace->trace.g2[i];
    return DIMER_OK;
}

double dimer_g2_flux(const dimer_g2_trace* trace) {
    return trace ? trace->trace.flux_ss : 0.0;
}

void dimer_g2_trace_destroy(dimer_g2_trace* trace) { delete trace; }

dimer_status dimer_fano_scan(const dimer_system* sys, double eta, double delta_min,
                             double delta_max, size_t n, dimer_spectrum** spectrum_out,
                             dimer_fano_feature* feature_out) {
    if (!sys || !feature_out) return DIMER_ERR_NULL_ARGUMENT;
    if (spectrum_out) *spectrum_out = nullptr;
    return guarded([&] {
        auto [grid, feature] =
            dimer::fano_scan(sys->params, dimer::DeviationParams{eta}, delta_min, delta_max, n);
        feature_out->position = feature.position;
        feature_out->predicted = feature.predicted;
        feature_out->width = feature.width;
        feature_out->asymmetry_sign = feature.asymmetry_sign;
        if (spectrum_out) *spectrum_out = new dimer_spectrum{std::move(grid)};
    });
}

dimer_status dimer_deviation_dynamics(const dimer_system* sys, double eta, double t_max,
                                      size_t n, dimer_timeseries** out, double* fitted_pb_decay,
                                      double* expected_pb_decay) {
    if (!sys || !out) return DIMER_ERR_NULL_ARGUMENT;
    *out = nullptr;
    return guarded([&] {
        auto result =
            dimer::deviation_dynamics(sys->params, dimer::DeviationParams{eta}, t_max, n);
        if (fitted_pb_decay) *fitted_pb_decay = result.fitted_pb_decay;
        if (expected_pb_decay) *expected_pb_decay = result.expected_pb_decay;
        *out = new dimer_timeseries{std::move(result.series)};
    });
}

dimer_status dimer_asymmetric_basis(double gamma_1d_1, double gamma_1d_2, double a_out[2],
                                    double b_out[2]) {
    if (!a_out || !b_out) return DIMER_ERR_NULL_ARGUMENT;
    return guarded([&] {
        const auto [a, b] =
            dimer::asymmetric_dressed_basis(dimer::AsymmetryParams{gamma_1d_1, gamma_1d_2});
        a_out[0] = a[0];
        a_out[1] = a[1];
        b_out[0] = b[0];
        b_out[1] = b[1];
    });
}

dimer_status dimer_asymmetric_bragg_dynamics(const dimer_system* sys, double t_max, size_t n,
                                             dimer_timeseries** out, double* coupling_ab,
                                             double* dressed_route_mismatch) {
    if (!sys || !out) return DIMER_ERR_NULL_ARGUMENT;
    *out = nullptr;
    return guarded([&] {
        dimer::AsymmetryParams asym{sys->params.gamma_1d_1, sys->params.gamma_1d_2};
        auto result = dimer::asymmetric_bragg_dynamics(asym, sys->params, t_max, n);
        if (coupling_ab) *coupling_ab = result.coupling_ab;
        if (dressed_route_mismatch) *dressed_route_mismatch = result.dressed_route_mismatch;
        *out = new dimer_timeseries{std::move(result.series)};
    });
}

}  // extern "C"
