/* dimer — C API for the band-edge atom-dimer simulator.
 *
 * All functions return a dimer_status; results come back through out
 * parameters. Opaque handles own their memory and are released with the
 * matching _destroy call. A thread-local message with details of the last
 * failure is available from dimer_last_error_message().
 *
 * Units: rates in a fixed reference waveguide decay rate, times in its
 * inverse, detunings relative to the atomic frequency.
 */
#ifndef DIMER_H
#define DIMER_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dimer_status {
    DIMER_OK = 0,
    DIMER_ERR_NULL_ARGUMENT = 1,
    DIMER_ERR_INVALID_PARAMS = 2,
    DIMER_ERR_INVALID_GRID = 3,
    DIMER_ERR_ASYMMETRIC_INPUT = 4,
    DIMER_ERR_WRONG_CASE = 5,
    DIMER_ERR_SINGULAR_RESOLVENT = 6,
    DIMER_ERR_SINGULAR_STEADY_STATE = 7,
    DIMER_ERR_ZERO_FLUX = 8,
    DIMER_ERR_FEATURE_NOT_FOUND = 9,
    DIMER_ERR_EMPTY_SPECTRUM = 10,
    DIMER_ERR_NONCONVERGED_STEADY_STATE = 11,
    DIMER_ERR_OUT_OF_RANGE = 12,
    DIMER_ERR_INTERNAL = 13
} dimer_status;

const char* dimer_status_name(dimer_status status);
const char* dimer_last_error_message(void);
unsigned dimer_abi_version(void);

typedef struct dimer_params {
    double gamma_1d_1;  /* waveguide decay rate, atom 1 */
    double gamma_1d_2;  /* waveguide decay rate, atom 2 */
    double gamma_prime; /* free-space decay rate per atom */
    double j_strength;  /* bound-state interaction strength J */
    double kad;         /* k_a * d */
    double d_over_l;    /* d / L */
    double omega_p_amp; /* probe Rabi amplitude */
    double delta;       /* probe detuning */
} dimer_params;

/* Symmetric pair at the Bragg spacing with J = 1, d/L = 0.1, no free-space
 * loss, weak probe on resonance. */
void dimer_params_defaults(dimer_params* params);

typedef struct dimer_system dimer_system;

dimer_status dimer_system_create(const dimer_params* params, dimer_system** out);
void dimer_system_destroy(dimer_system* sys);
dimer_status dimer_system_get_params(const dimer_system* sys, dimer_params* out);

/* ---- core model ------------------------------------------------------- */

typedef struct dimer_eigensystem_result {
    double e1_re, e1_im;
    double e2_re, e2_im;
    double psi1_r[4]; /* re0, im0, re1, im1 */
    double psi2_r[4];
    double psi1_l[4];
    double psi2_l[4];
    int degenerate;
} dimer_eigensystem_result;

dimer_status dimer_eigensystem(const dimer_system* sys, dimer_eigensystem_result* out);

typedef struct dimer_hamiltonian_result {
    double matrix[8];        /* row major, re/im interleaved */
    double coherent_part[8];
    double decay_matrix[8];
} dimer_hamiltonian_result;

dimer_status dimer_hamiltonian(const dimer_system* sys, dimer_hamiltonian_result* out);

typedef struct dimer_dressed_scheme_result {
    double omega_a_level;
    double omega_b_level;
    double gamma_a;
    double gamma_b;
    double delta_ab;
} dimer_dressed_scheme_result;

dimer_status dimer_dressed_scheme(const dimer_system* sys, dimer_dressed_scheme_result* out);

dimer_status dimer_bound_state_length(double alpha, double delta_edge, double d_cell,
                                      double* length_out);

/* ---- scattering ------------------------------------------------------- */

typedef struct dimer_scatter_point {
    double delta;
    double t_re, t_im;
    double r_re, r_im;
    double transmission;
    double reflection;
    double phase;
    double loss;
    int valid;
} dimer_scatter_point;

dimer_status dimer_scatter(const dimer_system* sys, double delta, dimer_scatter_point* out);
dimer_status dimer_scatter_steady_state(const dimer_system* sys, double delta,
                                        dimer_scatter_point* out);

typedef struct dimer_spectrum dimer_spectrum;

dimer_status dimer_spectrum_compute(const dimer_system* sys, double delta_min, double delta_max,
                                    size_t n, dimer_spectrum** out);
size_t dimer_spectrum_size(const dimer_spectrum* spec);
dimer_status dimer_spectrum_point(const dimer_spectrum* spec, size_t i, dimer_scatter_point* out);
dimer_status dimer_spectrum_phase_unwrapped(const dimer_spectrum* spec, size_t i, double* out);
void dimer_spectrum_destroy(dimer_spectrum* spec);

typedef struct dimer_peak {
    double position;
    double height;
    double fwhm;
} dimer_peak;

/* Writes up to capacity peaks; *count gets the total found. */
dimer_status dimer_spectrum_peaks(const dimer_spectrum* spec, double prominence, dimer_peak* out,
                                  size_t capacity, size_t* count);

/* ---- dynamics ---------------------------------------------------------- */

typedef enum dimer_initial_state {
    DIMER_INITIAL_LEFT = 0,
    DIMER_INITIAL_RIGHT = 1,
    DIMER_INITIAL_DRESSED_A = 2,
    DIMER_INITIAL_DRESSED_B = 3
} dimer_initial_state;

typedef struct dimer_timeseries dimer_timeseries;

typedef struct dimer_population_sample {
    double time;
    double p_left;
    double p_right;
    double p_a;
    double p_b;
    double norm;
} dimer_population_sample;

dimer_status dimer_evolve(const dimer_system* sys, dimer_initial_state initial, double t_max,
                          size_t n, dimer_timeseries** out);
size_t dimer_timeseries_size(const dimer_timeseries* ts);
dimer_status dimer_timeseries_sample(const dimer_timeseries* ts, size_t i,
                                     dimer_population_sample* out);
void dimer_timeseries_destroy(dimer_timeseries* ts);

typedef enum dimer_spacing_case {
    DIMER_CASE_BRAGG = 0,
    DIMER_CASE_ANTI_BRAGG = 1
} dimer_spacing_case;

dimer_status dimer_closed_form_populations(const dimer_system* sys, dimer_spacing_case which,
                                           double t, dimer_population_sample* out);

/* ---- correlation ------------------------------------------------------- */

typedef struct dimer_g2_trace dimer_g2_trace;

dimer_status dimer_g2_reflected(const dimer_system* sys, double tau_max, size_t n,
                                dimer_g2_trace** out);
dimer_status dimer_g2_master_equation(const dimer_system* sys, double tau_max, size_t n,
                                      dimer_g2_trace** out);
size_t dimer_g2_size(const dimer_g2_trace* trace);
dimer_status dimer_g2_sample(const dimer_g2_trace* trace, size_t i, double* tau, double* g2);
double dimer_g2_flux(const dimer_g2_trace* trace);
void dimer_g2_trace_destroy(dimer_g2_trace* trace);

/* ---- imperfections ----------------------------------------------------- */

typedef struct dimer_fano_feature {
    double position;       /* located detuning of the narrow feature */
    double predicted;      /* J - J e^{-d/L} + (G/2) sin(kad) */
    double width;          /* FWHM of the narrow lobe, NaN if unresolved */
    int asymmetry_sign;    /* +1 dip below the peak in detuning, -1 mirrored */
} dimer_fano_feature;

/* kad -> (1 + eta) pi at fixed bound-state length; the spectrum handle is
 * optional (pass NULL to receive only the feature summary). */
dimer_status dimer_fano_scan(const dimer_system* sys, double eta, double delta_min,
                             double delta_max, size_t n, dimer_spectrum** spectrum_out,
                             dimer_fano_feature* feature_out);

dimer_status dimer_deviation_dynamics(const dimer_system* sys, double eta, double t_max,
                                      size_t n, dimer_timeseries** out, double* fitted_pb_decay,
                                      double* expected_pb_decay);

/* |A> = (-sqrt(G1)|eg> + sqrt(G2)|ge>)/sqrt(G1+G2); |B> orthogonal. */
dimer_status dimer_asymmetric_basis(double gamma_1d_1, double gamma_1d_2, double a_out[2],
                                    double b_out[2]);

/* Bragg decay from the left atom with per-atom rates taken from the system
 * parameters; dressed populations use the rate-weighted basis. */
dimer_status dimer_asymmetric_bragg_dynamics(const dimer_system* sys, double t_max, size_t n,
                                             dimer_timeseries** out, double* coupling_ab,
                                             double* dressed_route_mismatch);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DIMER_H */
