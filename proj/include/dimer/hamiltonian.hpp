#pragma once

#include <Eigen/Dense>

#include "dimer/types.hpp"

namespace dimer {

using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

/// Single-excitation block of the effective non-Hermitian Hamiltonian,
/// together with its Hermitian/dissipative split
/// matrix = coherent_part - (i/2) * decay_matrix.
struct EffectiveHamiltonian {
    Matrix2c matrix;
    Matrix2c coherent_part;  // Hermitian
    Matrix2c decay_matrix;   // Hermitian, positive semidefinite
};

/// Builds the single-excitation Hamiltonian in the bare basis {|eg>, |ge>}:
/// diagonal  -Delta - i(Gamma' + Gamma_1D,j)/2 + J,
/// off-diag  -(i/2) sqrt(Gamma_1D,1 Gamma_1D,2) e^{i kad} - J e^{-d/L}.
EffectiveHamiltonian build_hamiltonian(const SystemParams& params);

/// Eigen pairs of the non-Hermitian 2x2, biorthonormalized so that
/// <psi_j^L | psi_k^R> = delta_jk. For complex-symmetric input the left
/// vectors are conjugates of the right ones. In the symmetric-rate case
/// e1/psi1 is the antisymmetric (-1,1)/sqrt(2) mode and e2/psi2 the
/// symmetric (1,1)/sqrt(2) mode, both exact.
struct EigenSystem {
    complexd e1, e2;
    Vector2c psi1_r, psi2_r;
    Vector2c psi1_l, psi2_l;
    bool degenerate = false;  // |e1 - e2| below tolerance (exceptional point)
};

EigenSystem eigensolve(const EffectiveHamiltonian& h);

/// Closed-form propagator exp(-i H t). Uses spectral projectors away from
/// degeneracy and the 2x2 Jordan form at it; only decaying exponentials
/// appear, so large t cannot overflow.
Matrix2c propagator(const Matrix2c& h, double t);

/// Transition frequencies (relative to omega_a) and waveguide decay rates of
/// the dressed states |A> = (-|eg> + |ge>)/sqrt(2), |B> = (|eg> + |ge>)/sqrt(2).
struct DressedLevelScheme {
    double omega_a_level;
    double omega_b_level;
    double gamma_a;
    double gamma_b;
    double delta_ab;
};

/// Symmetric rates only; throws Error(asymmetric_input) otherwise.
DressedLevelScheme dressed_scheme(const SystemParams& params);

namespace detail {

/// Waveguide coupling vector u_j = sqrt(Gamma_1D,j) e^{i k_a x_j} with
/// x1 = 0, x2 = d. Scattering amplitudes and output operators all use it.
Vector2c coupling_vector(const SystemParams& params);

/// Solves H c = rhs through the spectral decomposition, dropping modes that
/// are simultaneously at a pole and decoupled from rhs (dark resonances).
/// Throws Error(singular_steady_state) when a pole carries weight.
Vector2c guarded_spectral_solve(const EffectiveHamiltonian& h, const Vector2c& rhs);

}  // namespace detail

}  // namespace dimer
