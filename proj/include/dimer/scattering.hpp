#pragma once

#include <vector>

#include "dimer/hamiltonian.hpp"
#include "dimer/types.hpp"

namespace dimer {

/// Transmission/reflection response at a single probe detuning.
struct ScatterPoint {
    double delta = 0.0;
    complexd t_amp{1.0, 0.0};
    complexd r_amp{0.0, 0.0};
    double transmission = 1.0;  // |t|^2
    double reflection = 0.0;    // |r|^2
    double phase = 0.0;         // arg(t) in (-pi, pi]
    double loss = 0.0;          // 1 - T - R
    bool valid = true;          // false at a real pole (singular resolvent)
};

struct SpectrumGrid {
    std::vector<double> deltas;
    std::vector<ScatterPoint> points;
    std::vector<double> phase_unwrapped;
};

/// Spectral route: t = 1 + (i/2) sum_j (u^dag psi_j)(psi_j^T u) / E_j and
/// r = (i/2) sum_j (u^T psi_j)(psi_j^T u) / E_j with u_j = sqrt(G_j) e^{i k x_j}.
/// Falls back to the resolvent (direct 2x2 solve) at a flagged degeneracy.
/// Throws Error(singular_resolvent) only when a pole carries coupling weight.
ScatterPoint scatter_amplitudes(const SystemParams& params, double delta);

enum class Incidence { from_left, from_right };

/// Input-output route: solves the driven steady state H c = Omega_p w with
/// w_j = u_j / sqrt(gamma_mean) and sums the emitted field against the input.
/// Agrees with scatter_amplitudes wherever both are defined.
ScatterPoint scatter_via_steady_state(const SystemParams& params, double delta,
                                      Incidence side = Incidence::from_left);

/// Uniform detuning sweep; phase unwrapped by nearest-branch continuation
/// from the left endpoint. Pole-struck points are returned flagged invalid.
SpectrumGrid spectrum(const SystemParams& params, double delta_min, double delta_max,
                      std::size_t n);

struct Peak {
    double position;  // quadratic-interpolated
    double height;
    double fwhm;      // linear-interpolated half-height crossings; NaN if a side never crosses
};

/// Local maxima of the reflection series with prominence above the threshold.
/// Throws Error(empty_spectrum) when nothing clears it.
std::vector<Peak> peak_analysis(const SpectrumGrid& grid, double prominence = 0.01);

/// Peak finder on a raw sampled series (used for reflection and for g2 beats).
std::vector<Peak> find_peaks(const std::vector<double>& x, const std::vector<double>& y,
                             double prominence);

}  // namespace dimer
