#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace dimer {

using complexd = std::complex<double>;

// Error taxonomy shared by the C++ core and the C API.
enum class ErrorCode {
    invalid_params,
    invalid_grid,
    asymmetric_input,
    wrong_case,
    singular_resolvent,
    singular_steady_state,
    zero_flux,
    feature_not_found,
    empty_spectrum,
    nonconverged_steady_state,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// Dimensionless description of the dimer-waveguide system.
/// All rates are in units of a reference waveguide decay rate, times in its
/// inverse. Atom positions are fixed at x1 = 0, x2 = d; geometry enters only
/// through kad = k_a * d and d_over_l = d / L.
struct SystemParams {
    double gamma_1d_1 = 1.0;   // waveguide decay rate, atom 1
    double gamma_1d_2 = 1.0;   // waveguide decay rate, atom 2
    double gamma_prime = 0.0;  // free-space decay rate per atom
    double j_strength = 1.0;   // bound-state interaction strength J
    double kad = 0.0;          // k_a * d
    double d_over_l = 0.0;     // d / L
    double omega_p_amp = 0.0;  // probe Rabi amplitude
    double delta = 0.0;        // probe detuning omega_p - omega_a

    bool symmetric_rates() const { return gamma_1d_1 == gamma_1d_2; }
    double gamma_mean() const { return 0.5 * (gamma_1d_1 + gamma_1d_2); }
    double gamma_scale() const { return gamma_1d_1 > gamma_1d_2 ? gamma_1d_1 : gamma_1d_2; }

    /// Probe drive must stay deep in the linear regime for correlation work.
    bool weak_drive_valid() const { return omega_p_amp <= 0.01 * gamma_scale(); }
};

/// Throws Error(invalid_params) naming the offending field.
void validate(const SystemParams& p);

/// Band-edge description: quadratic band curvature alpha, detuning
/// delta_edge = omega_0 - omega_a into the gap, and unit-cell length d.
struct BandEdgeParams {
    double alpha = 1.0;
    double delta_edge = 1.0;
    double d_cell = 1.0;
};

/// Bound-state localization length L = d * sqrt(alpha / delta).
double bound_state_length(const BandEdgeParams& band);

}  // namespace dimer
