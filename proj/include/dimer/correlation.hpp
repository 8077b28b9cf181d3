#pragma once

#include <vector>

#include "dimer/hamiltonian.hpp"
#include "dimer/types.hpp"

namespace dimer {

/// Perturbative steady state of the weakly driven dimer:
/// c_g = 1, (c_1, c_2) = O(Omega_p), c_ee = O(Omega_p^2).
struct TwoExcitationState {
    complexd c_g{1.0, 0.0};
    complexd c_1{0.0, 0.0};
    complexd c_2{0.0, 0.0};
    complexd c_ee{0.0, 0.0};
};

TwoExcitationState steady_state_hierarchy(const SystemParams& params);

/// Normalized second-order correlation of the reflected output field.
struct CorrelationTrace {
    std::vector<double> taus;
    std::vector<double> g2;
    double flux_ss = 0.0;  // steady-state reflected photon flux (normalization)
};

/// Weak-drive amplitude-hierarchy route. The reflected output operator is
/// b = sum_j sqrt(Gamma_1D,j / 2) e^{+i k_a x_j} sigma_ge^j; the conditional
/// state b|ss> is propagated with the drive kept on and the second emission
/// amplitude is normalized by the coherent flux |<b>|^2. Leading order in
/// Omega_p, so the result is drive-strength independent.
/// Throws Error(zero_flux) where r = 0 makes the normalization vanish.
CorrelationTrace g2_reflected(const SystemParams& params, double tau_max, std::size_t n);

/// Independent oracle: full two-atom master equation (16x16 Liouvillian with
/// collapse channels b_left, b_right, sqrt(Gamma') sigma_j), steady state by
/// null-space solve, g2 by the quantum regression theorem. A grade-by-drive
/// rescaling keeps every density-matrix sector O(1) so the weak-drive limit
/// stays at full double precision.
CorrelationTrace g2_master_equation_oracle(const SystemParams& params, double tau_max,
                                           std::size_t n);

}  // namespace dimer
