#include "dimer/imperfections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dimer {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// kad -> (1 + eta) pi at fixed bound-state length: d/L scales with kad.
SystemParams deviated_params(const SystemParams& params, double eta) {
    if (!std::isfinite(eta) || std::abs(eta) > 0.2)
        throw Error(ErrorCode::invalid_params, "eta: deviation model is valid for |eta| <= 0.2");
    SystemParams p = params;
    p.kad = (1.0 + eta) * kPi;
    if (params.d_over_l > 0.0 && params.kad > 0.0)
        p.d_over_l = params.d_over_l * (p.kad / params.kad);
    validate(p);
    return p;
}

}  // namespace

std::pair<SpectrumGrid, FanoFeature> fano_scan(const SystemParams& params,
                                               const DeviationParams& dev, double delta_min,
                                               double delta_max, std::size_t n) {
    const SystemParams p = deviated_params(params, dev.eta);
    const double g = p.gamma_mean();
    const double gamma_b = g * (1.0 + std::cos(p.kad)) + p.gamma_prime;
    const double jhop = p.j_strength * std::exp(-p.d_over_l);
    const double predicted = p.j_strength - jhop + 0.5 * g * std::sin(p.kad);

    SpectrumGrid grid = spectrum(p, delta_min, delta_max, n);
    FanoFeature feature;
    feature.predicted = predicted;
    feature.width = std::numeric_limits<double>::quiet_NaN();

    if (gamma_b < 1e-12)
        throw Error(ErrorCode::feature_not_found,
                    "subradiant state is fully decoupled (eta = 0), no Fano feature");

    const double lo = predicted - 5.0 * gamma_b;
    const double hi = predicted + 5.0 * gamma_b;
    std::size_t best = 0;
    double best_slope = 0.0, outside_slope = 0.0;
    for (std::size_t i = 1; i + 1 < grid.deltas.size(); ++i) {
        if (!grid.points[i - 1].valid || !grid.points[i + 1].valid) continue;
        const double slope = std::abs(grid.points[i + 1].reflection - grid.points[i - 1].reflection) /
                             (grid.deltas[i + 1] - grid.deltas[i - 1]);
        if (grid.deltas[i] >= lo && grid.deltas[i] <= hi) {
            if (slope > best_slope) {
                best_slope = slope;
                best = i;
            }
        } else {
            outside_slope = std::max(outside_slope, slope);
        }
    }
    if (best_slope <= 2.0 * outside_slope || best == 0)
        throw Error(ErrorCode::feature_not_found,
                    "no narrow reflection feature above the broad background in the search window");
    feature.position = grid.deltas[best];

    // Orientation: where does the local minimum sit relative to the maximum?
    std::size_t imin = best, imax = best;
    for (std::size_t i = 0; i < grid.deltas.size(); ++i) {
        if (grid.deltas[i] < lo || grid.deltas[i] > hi || !grid.points[i].valid) continue;
        if (grid.points[i].reflection < grid.points[imin].reflection) imin = i;
        if (grid.points[i].reflection > grid.points[imax].reflection) imax = i;
    }
    feature.asymmetry_sign = imin <= imax ? +1 : -1;

    // Width of the narrow lobe from the nearest resolved reflection peak.
    std::vector<double> r(grid.points.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = grid.points[i].valid ? grid.points[i].reflection : 0.0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const Peak& pk : find_peaks(grid.deltas, r, 0.01)) {
        const double dist = std::abs(pk.position - feature.position);
        if (dist <= 5.0 * gamma_b && dist < best_dist && std::isfinite(pk.fwhm)) {
            best_dist = dist;
            feature.width = pk.fwhm;
        }
    }
    return {std::move(grid), feature};
}

DeviationDynamics deviation_dynamics(const SystemParams& params, const DeviationParams& dev,
                                     double t_max, std::size_t n) {
    const SystemParams p = deviated_params(params, dev.eta);
    DeviationDynamics out;
    out.series = evolve(p, InitialState::left, t_max, n);
    out.expected_pb_decay = p.gamma_mean() * (1.0 + std::cos(p.kad)) + p.gamma_prime;

    // Log-linear tail fit of p_b, default window t in [5, 10] (the fast
    // Gamma^A transient is long gone there).
    const double lo = std::min(5.0, 0.5 * t_max);
    const double hi = std::min(10.0, t_max);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < out.series.times.size(); ++i) {
        const double t = out.series.times[i];
        const double pb = out.series.p_b[i];
        if (t < lo || t > hi || pb <= 0.0) continue;
        const double y = std::log(pb);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++m;
    }
    if (m < 2) throw Error(ErrorCode::invalid_grid, "too few tail samples for the p_b decay fit");
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    out.fitted_pb_decay = denom != 0.0 ? -(static_cast<double>(m) * sxy - sx * sy) / denom : 0.0;
    return out;
}

std::pair<std::array<double, 2>, std::array<double, 2>> asymmetric_dressed_basis(
    const AsymmetryParams& asym) {
    if (!(asym.gamma_1d_1 > 0) || !(asym.gamma_1d_2 > 0))
        throw Error(ErrorCode::invalid_params, "asymmetric basis needs both rates > 0");
    const double sum = asym.gamma_1d_1 + asym.gamma_1d_2;
    const double a = std::sqrt(asym.gamma_1d_1 / sum);
    const double b = std::sqrt(asym.gamma_1d_2 / sum);
    return {{-a, b}, {b, a}};
}

AsymmetricBraggDynamics asymmetric_bragg_dynamics(const AsymmetryParams& asym,
                                                  const SystemParams& params, double t_max,
                                                  std::size_t n) {
    if (std::abs(params.kad - kPi) > 1e-12)
        throw Error(ErrorCode::wrong_case, "asymmetric Bragg dynamics needs kad = pi");
    SystemParams p = params;
    p.gamma_1d_1 = asym.gamma_1d_1;
    p.gamma_1d_2 = asym.gamma_1d_2;
    p.delta = 0.0;
    p.omega_p_amp = 0.0;
    validate(p);
    if (!(p.gamma_1d_1 > 0) || !(p.gamma_1d_2 > 0))
        throw Error(ErrorCode::invalid_params, "asymmetric Bragg dynamics needs both rates > 0");
    if (!(t_max >= 0) || n < 2)
        throw Error(ErrorCode::invalid_grid, "needs t_max >= 0 and n >= 2");

    const double g1 = p.gamma_1d_1, g2 = p.gamma_1d_2;
    const double sum = g1 + g2, geo = std::sqrt(g1 * g2);
    const double jhop = p.j_strength * std::exp(-p.d_over_l);

    const EffectiveHamiltonian h = build_hamiltonian(p);
    AsymmetricBraggDynamics out;
    out.coupling_ab = jhop * (g1 - g2) / sum;

    // Bare-basis evolution projected on the rate-weighted basis.
    Vector2c c0;
    c0 << 1.0, 0.0;
    TimeSeries bare = detail::evolve_vector(h.matrix, c0, t_max, n, g1, g2);

    // Dressed decomposition built from its closed forms:
    // E_A/B = J -+ Je^{-d/L}(G1-G2)^2/(2 geo sum) +- Je^{-d/L} sum/(2 geo) - i G^{A,B}/2,
    // coupling J e^{-d/L} (G1-G2)/sum; exactly the rotated bare Hamiltonian.
    const double shift_small = jhop * (g1 - g2) * (g1 - g2) / (2.0 * geo * sum);
    const double shift_big = jhop * sum / (2.0 * geo);
    Matrix2c h_dressed;
    h_dressed(0, 0) = complexd(p.j_strength - shift_small + shift_big,
                               -0.5 * (sum + p.gamma_prime));
    h_dressed(1, 1) = complexd(p.j_strength + shift_small - shift_big, -0.5 * p.gamma_prime);
    h_dressed(0, 1) = out.coupling_ab;
    h_dressed(1, 0) = out.coupling_ab;

    const auto [va, vb] = asymmetric_dressed_basis(asym);
    Eigen::Matrix2d rot;  // columns |A>, |B>
    rot << va[0], vb[0], va[1], vb[1];
    const Matrix2c h_rotated = rot.transpose() * h.matrix * rot;
    double mismatch = (h_rotated - h_dressed).cwiseAbs().maxCoeff();

    const Eigen::Vector2d c0_dressed = rot.transpose() * Eigen::Vector2d(1.0, 0.0);
    const double step = t_max / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector2c cd = propagator(h_dressed, step * static_cast<double>(i)) *
                            c0_dressed.cast<complexd>();
        mismatch = std::max(mismatch, std::abs(std::norm(cd(0)) - bare.p_a[i]));
        mismatch = std::max(mismatch, std::abs(std::norm(cd(1)) - bare.p_b[i]));
    }
    out.series = std::move(bare);
    out.dressed_route_mismatch = mismatch;
    return out;
}

}  // namespace dimer
