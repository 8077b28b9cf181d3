#include "dimer/hamiltonian.hpp"

#include <cmath>

namespace dimer {

namespace {

constexpr complexd kI{0.0, 1.0};

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void validate(const SystemParams& p) {
    auto reject = [](const char* field, const std::string& why) {
        throw Error(ErrorCode::invalid_params, std::string(field) + ": " + why);
    };
    if (!finite(p.gamma_1d_1) || p.gamma_1d_1 < 0) reject("gamma_1d_1", "must be a finite rate >= 0");
    if (!finite(p.gamma_1d_2) || p.gamma_1d_2 < 0) reject("gamma_1d_2", "must be a finite rate >= 0");
    if (!finite(p.gamma_prime) || p.gamma_prime < 0) reject("gamma_prime", "must be a finite rate >= 0");
    if (!finite(p.j_strength) || p.j_strength < 0) reject("j_strength", "must be a finite rate >= 0");
    if (!finite(p.kad) || p.kad < 0) reject("kad", "must be finite and >= 0");
    if (!finite(p.d_over_l) || p.d_over_l < 0) reject("d_over_l", "must be finite and >= 0");
    if (!finite(p.omega_p_amp) || p.omega_p_amp < 0) reject("omega_p_amp", "must be a finite rate >= 0");
    if (!finite(p.delta)) reject("delta", "must be finite");
}

double bound_state_length(const BandEdgeParams& band) {
    if (!(band.alpha > 0) || !std::isfinite(band.alpha))
        throw Error(ErrorCode::invalid_params, "alpha: band curvature must be > 0");
    if (!(band.delta_edge > 0) || !std::isfinite(band.delta_edge))
        throw Error(ErrorCode::invalid_params, "delta_edge: atom must lie inside the gap (delta > 0)");
    if (!(band.d_cell > 0) || !std::isfinite(band.d_cell))
        throw Error(ErrorCode::invalid_params, "d_cell: unit-cell length must be > 0");
    return band.d_cell * std::sqrt(band.alpha / band.delta_edge);
}

EffectiveHamiltonian build_hamiltonian(const SystemParams& p) {
    validate(p);

    const double g1 = p.gamma_1d_1;
    const double g2 = p.gamma_1d_2;
    const double ggeo = std::sqrt(g1 * g2);
    const complexd phase = std::exp(kI * p.kad);
    const double jhop = p.j_strength * std::exp(-p.d_over_l);

    EffectiveHamiltonian h;
    const complexd diag_common = -p.delta + p.j_strength;
    h.matrix(0, 0) = diag_common - 0.5 * kI * (p.gamma_prime + g1);
    h.matrix(1, 1) = diag_common - 0.5 * kI * (p.gamma_prime + g2);
    // x1 = 0, x2 = d: the bound-state sign factor (-1)^{theta_12} is -1.
    const complexd off = -0.5 * kI * ggeo * phase - jhop;
    h.matrix(0, 1) = off;
    h.matrix(1, 0) = off;

    h.coherent_part(0, 0) = diag_common;
    h.coherent_part(1, 1) = diag_common;
    const double coh_off = 0.5 * ggeo * std::sin(p.kad) - jhop;
    h.coherent_part(0, 1) = coh_off;
    h.coherent_part(1, 0) = coh_off;

    h.decay_matrix(0, 0) = p.gamma_prime + g1;
    h.decay_matrix(1, 1) = p.gamma_prime + g2;
    const double dec_off = ggeo * std::cos(p.kad);
    h.decay_matrix(0, 1) = dec_off;
    h.decay_matrix(1, 0) = dec_off;
    return h;
}

EigenSystem eigensolve(const EffectiveHamiltonian& h) {
    const Matrix2c& m = h.matrix;
    const complexd a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    const double scale = m.cwiseAbs().maxCoeff();

    EigenSystem es;
    if (a == d && b == c) {
        // Symmetric build: eigenpairs are exact, no square root involved.
        es.e1 = a - b;
        es.e2 = a + b;
        const double r = std::sqrt(0.5);
        es.psi1_r << -r, r;
        es.psi2_r << r, r;
        es.psi1_l = es.psi1_r;
        es.psi2_l = es.psi2_r;
        es.degenerate = std::abs(es.e1 - es.e2) < 1e-10 * std::max(scale, 1e-300);
        return es;
    }

    const complexd mu = 0.5 * (a + d);
    const complexd s = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    es.e1 = mu - s;
    es.e2 = mu + s;
    es.degenerate = std::abs(es.e1 - es.e2) < 1e-10 * std::max(scale, 1e-300);

    auto right_vec = [&](complexd e) -> Vector2c {
        Vector2c v1, v2;
        v1 << b, e - a;
        v2 << e - d, c;
        Vector2c v = v1.norm() >= v2.norm() ? v1 : v2;
        if (v.norm() < 1e-300) v << 1.0, 0.0;  // diagonal matrix
        v.normalize();
        // Fix orientation so repeated solves agree bitwise.
        complexd piv = std::abs(v(0)) >= std::abs(v(1)) ? v(0) : v(1);
        v *= std::conj(piv) / std::abs(piv);
        return v;
    };
    auto left_vec = [&](complexd e) -> Vector2c {
        // Row w with w H = e w, stored as the ket |psi^L> = conj(w).
        Vector2c w1, w2;
        w1 << c, e - a;
        w2 << e - d, b;
        Vector2c w = w1.norm() >= w2.norm() ? w1 : w2;
        if (w.norm() < 1e-300) w << 1.0, 0.0;
        return w.conjugate();
    };

    es.psi1_r = right_vec(es.e1);
    es.psi2_r = right_vec(es.e2);
    es.psi1_l = left_vec(es.e1);
    es.psi2_l = left_vec(es.e2);
    // Biorthonormalize: <psi_j^L | psi_j^R> = 1. At an exceptional point the
    // pairing is self-orthogonal; vectors are still returned, flagged.
    complexd n1 = es.psi1_l.dot(es.psi1_r);
    complexd n2 = es.psi2_l.dot(es.psi2_r);
    if (std::abs(n1) > 1e-14 && std::abs(n2) > 1e-14) {
        es.psi1_l = (es.psi1_l.array() / std::conj(n1)).matrix();
        es.psi2_l = (es.psi2_l.array() / std::conj(n2)).matrix();
    } else {
        es.degenerate = true;
    }
    return es;
}

Matrix2c propagator(const Matrix2c& h, double t) {
    const complexd a = h(0, 0), b = h(0, 1), c = h(1, 0), d = h(1, 1);
    const complexd mu = 0.5 * (a + d);
    const complexd s = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    const complexd e1 = mu - s, e2 = mu + s;
    const double scale = h.cwiseAbs().maxCoeff();

    if (std::abs(e1 - e2) < 1e-12 * std::max(scale, 1e-300)) {
        // Jordan form: exp(-iHt) = e^{-i mu t} (I - i t (H - mu I)).
        const complexd ph = std::exp(-kI * mu * t);
        Matrix2c n = h - mu * Matrix2c::Identity();
        return ph * (Matrix2c::Identity() - kI * t * n);
    }
    // Spectral projectors P1 = (H - e2 I)/(e1 - e2), P2 = I - P1.
    Matrix2c p1 = (h - e2 * Matrix2c::Identity()) / (e1 - e2);
    Matrix2c p2 = Matrix2c::Identity() - p1;
    return std::exp(-kI * e1 * t) * p1 + std::exp(-kI * e2 * t) * p2;
}

DressedLevelScheme dressed_scheme(const SystemParams& p) {
    validate(p);
    if (!p.symmetric_rates())
        throw Error(ErrorCode::asymmetric_input,
                    "dressed_scheme requires gamma_1d_1 == gamma_1d_2");
    const double g = p.gamma_1d_1;
    const double jhop = p.j_strength * std::exp(-p.d_over_l);
    const double shift = jhop - 0.5 * g * std::sin(p.kad);

    DressedLevelScheme s;
    s.gamma_a = g + p.gamma_prime - g * std::cos(p.kad);
    s.gamma_b = g + p.gamma_prime + g * std::cos(p.kad);
    s.omega_a_level = p.j_strength + shift;
    s.omega_b_level = p.j_strength - shift;
    s.delta_ab = s.omega_a_level - s.omega_b_level;
    return s;
}

namespace detail {

Vector2c coupling_vector(const SystemParams& p) {
    Vector2c u;
    u << std::sqrt(p.gamma_1d_1), std::sqrt(p.gamma_1d_2) * std::exp(kI * p.kad);
    return u;
}

Vector2c guarded_spectral_solve(const EffectiveHamiltonian& h, const Vector2c& rhs) {
    const EigenSystem es = eigensolve(h);
    const double scale = std::max(h.matrix.cwiseAbs().maxCoeff(), 1e-300);
    const double rhs_scale = std::max(rhs.norm(), 1e-300);

    if (es.degenerate) {
        // Direct 2x2 solve; the resolvent is regular unless det vanishes.
        const complexd det = h.matrix(0, 0) * h.matrix(1, 1) - h.matrix(0, 1) * h.matrix(1, 0);
        if (std::abs(det) < 1e-26 * scale * scale)
            throw Error(ErrorCode::singular_steady_state,
                        "driven linear system singular at a degenerate real pole");
        Vector2c c;
        c(0) = (h.matrix(1, 1) * rhs(0) - h.matrix(0, 1) * rhs(1)) / det;
        c(1) = (h.matrix(0, 0) * rhs(1) - h.matrix(1, 0) * rhs(0)) / det;
        return c;
    }

    Vector2c out = Vector2c::Zero();
    const complexd evs[2] = {es.e1, es.e2};
    const Vector2c* rvs[2] = {&es.psi1_r, &es.psi2_r};
    const Vector2c* lvs[2] = {&es.psi1_l, &es.psi2_l};
    for (int j = 0; j < 2; ++j) {
        const complexd overlap = lvs[j]->dot(rhs);  // <psi^L | rhs>
        if (std::abs(evs[j]) < 1e-13 * scale) {
            if (std::abs(overlap) < 1e-10 * rhs_scale) continue;  // dark resonance, no weight
            throw Error(ErrorCode::singular_steady_state,
                        "driven linear system has a real pole with nonzero weight");
        }
        out += (*rvs[j]) * (overlap / evs[j]);
    }
    return out;
}

}  // namespace detail

}  // namespace dimer
