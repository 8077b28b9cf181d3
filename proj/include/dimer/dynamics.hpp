#pragma once

#include <vector>

#include "dimer/hamiltonian.hpp"
#include "dimer/types.hpp"

namespace dimer {

/// Sampled single-excitation populations. At every sample
/// p_left + p_right == p_a + p_b == norm (basis-change identity).
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> p_left;
    std::vector<double> p_right;
    std::vector<double> p_a;
    std::vector<double> p_b;
    std::vector<double> norm;
};

enum class InitialState { left, right, dressed_a, dressed_b, custom };

/// Undriven decay from the given initial state, propagated by the exact
/// eigendecomposition of exp(-iHt); the frame is fixed at Delta = 0 (bare
/// populations are frame independent). Dressed projections use the
/// symmetric basis |A> = (-1,1)/sqrt(2), |B> = (1,1)/sqrt(2).
TimeSeries evolve(const SystemParams& params, InitialState initial, double t_max,
                  std::size_t n, const Vector2c& custom = Vector2c::Zero());

enum class SpacingCase { bragg, anti_bragg };

struct Populations {
    double p_left, p_right, p_a, p_b;
};

/// Literal closed forms for the Bragg (kad = pi) and anti-Bragg (kad = pi/2)
/// populations after exciting the left atom, evaluated in combined-exponent
/// form so large t cannot overflow. Throws Error(wrong_case) if kad does not
/// match the requested case, Error(asymmetric_input) for unequal rates.
Populations closed_form_populations(const SystemParams& params, SpacingCase which, double t);

namespace detail {

/// Populations of a 2-amplitude state in the bare and dressed bases; the
/// dressed basis is the rate-weighted pair (reducing to (-1,1)/sqrt(2),
/// (1,1)/sqrt(2) for equal rates).
Populations project_populations(const Vector2c& c, double gamma_1, double gamma_2);

TimeSeries evolve_vector(const Matrix2c& h, const Vector2c& initial, double t_max,
                         std::size_t n, double gamma_1, double gamma_2);

}  // namespace detail

}  // namespace dimer
