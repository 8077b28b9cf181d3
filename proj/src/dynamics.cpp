#include "dimer/dynamics.hpp"

#include <cmath>

namespace dimer {

namespace detail {

Populations project_populations(const Vector2c& c, double gamma_1, double gamma_2) {
    const double sum = gamma_1 + gamma_2;
    const double a0 = std::sqrt(gamma_1 / sum);
    const double a1 = std::sqrt(gamma_2 / sum);
    // |A> = (-a0, a1), |B> = (a1, a0); equal rates give the symmetric pair.
    const complexd ca = -a0 * c(0) + a1 * c(1);
    const complexd cb = a1 * c(0) + a0 * c(1);
    Populations p;
    p.p_left = std::norm(c(0));
    p.p_right = std::norm(c(1));
    p.p_a = std::norm(ca);
    p.p_b = std::norm(cb);
    return p;
}

TimeSeries evolve_vector(const Matrix2c& h, const Vector2c& initial, double t_max,
                         std::size_t n, double gamma_1, double gamma_2) {
    TimeSeries ts;
    ts.times.resize(n);
    ts.p_left.resize(n);
    ts.p_right.resize(n);
    ts.p_a.resize(n);
    ts.p_b.resize(n);
    ts.norm.resize(n);
    const double step = t_max / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = step * static_cast<double>(i);
        const Vector2c c = propagator(h, t) * initial;
        const Populations p = project_populations(c, gamma_1, gamma_2);
        ts.times[i] = t;
        ts.p_left[i] = p.p_left;
        ts.p_right[i] = p.p_right;
        ts.p_a[i] = p.p_a;
        ts.p_b[i] = p.p_b;
        ts.norm[i] = p.p_left + p.p_right;
    }
    return ts;
}

}  // namespace detail

TimeSeries evolve(const SystemParams& params, InitialState initial, double t_max,
                  std::size_t n, const Vector2c& custom) {
    SystemParams p = params;
    p.delta = 0.0;       // undriven frame
    p.omega_p_amp = 0.0;
    validate(p);
    if (!(t_max >= 0) || !std::isfinite(t_max))
        throw Error(ErrorCode::invalid_grid, "evolve needs t_max >= 0");
    if (n < 2) throw Error(ErrorCode::invalid_grid, "evolve needs n >= 2");

    const double r = std::sqrt(0.5);
    Vector2c c0;
    switch (initial) {
        case InitialState::left: c0 << 1.0, 0.0; break;
        case InitialState::right: c0 << 0.0, 1.0; break;
        case InitialState::dressed_a: c0 << -r, r; break;
        case InitialState::dressed_b: c0 << r, r; break;
        case InitialState::custom:
            if (custom.norm() < 1e-300)
                throw Error(ErrorCode::invalid_params, "custom initial state must be nonzero");
            c0 = custom.normalized();
            break;
    }
    const EffectiveHamiltonian h = build_hamiltonian(p);
    // Dressed projections use the fixed symmetric basis here; the
    // rate-weighted basis lives in the imperfections module.
    return detail::evolve_vector(h.matrix, c0, t_max, n, 1.0, 1.0);
}

Populations closed_form_populations(const SystemParams& params, SpacingCase which, double t) {
    validate(params);
    if (!params.symmetric_rates())
        throw Error(ErrorCode::asymmetric_input,
                    "closed_form_populations requires gamma_1d_1 == gamma_1d_2");
    const double pi = 3.14159265358979323846;
    const double want = which == SpacingCase::bragg ? pi : 0.5 * pi;
    if (std::abs(params.kad - want) > 1e-12)
        throw Error(ErrorCode::wrong_case, which == SpacingCase::bragg
                                               ? "kad must equal pi for the Bragg case"
                                               : "kad must equal pi/2 for the anti-Bragg case");

    const double g = params.gamma_1d_1;
    const double gp = params.gamma_prime;
    const double jhop = params.j_strength * std::exp(-params.d_over_l);

    Populations out;
    if (which == SpacingCase::bragg) {
        // Combined-exponent form of
        // (1/4) e^{-(G+G')t} [e^{Gt} + e^{-Gt} +- 2 cos(2 J e^{-d/L} t)].
        const double slow = std::exp(-gp * t);
        const double fast = std::exp(-(2.0 * g + gp) * t);
        const double cross = 2.0 * std::exp(-(g + gp) * t) * std::cos(2.0 * jhop * t);
        out.p_left = 0.25 * (slow + fast + cross);
        out.p_right = 0.25 * (slow + fast - cross);
        out.p_a = 0.5 * fast;
        out.p_b = 0.5 * slow;
    } else {
        const double env = std::exp(-(g + gp) * t);
        const double osc = std::cos((2.0 * jhop - g) * t);
        out.p_left = 0.25 * env * (2.0 + 2.0 * osc);
        out.p_right = 0.25 * env * (2.0 - 2.0 * osc);
        out.p_a = 0.5 * env;
        out.p_b = 0.5 * env;
    }
    return out;
}

}  // namespace dimer
