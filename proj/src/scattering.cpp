#include "dimer/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dimer {

namespace {

constexpr complexd kI{0.0, 1.0};

ScatterPoint finish_point(double delta, complexd t, complexd r) {
    ScatterPoint pt;
    pt.delta = delta;
    pt.t_amp = t;
    pt.r_amp = r;
    pt.transmission = std::norm(t);
    pt.reflection = std::norm(r);
    pt.phase = std::arg(t);
    pt.loss = 1.0 - pt.transmission - pt.reflection;
    return pt;
}

ScatterPoint invalid_point(double delta) {
    ScatterPoint pt;
    pt.delta = delta;
    pt.valid = false;
    pt.t_amp = pt.r_amp = complexd(std::numeric_limits<double>::quiet_NaN(), 0.0);
    pt.transmission = pt.reflection = pt.phase = pt.loss =
        std::numeric_limits<double>::quiet_NaN();
    return pt;
}

}  // namespace

ScatterPoint scatter_amplitudes(const SystemParams& params, double delta) {
    SystemParams p = params;
    p.delta = delta;
    validate(p);
    if (!std::isfinite(delta))
        throw Error(ErrorCode::invalid_params, "delta: must be finite");

    const EffectiveHamiltonian h = build_hamiltonian(p);
    const Vector2c u = detail::coupling_vector(p);
    const EigenSystem es = eigensolve(h);
    const double scale = std::max(h.matrix.cwiseAbs().maxCoeff(), 1e-300);

    complexd tsum = 0.0, rsum = 0.0;
    if (es.degenerate) {
        // Resolvent route: t - 1 = (i/2) u^dag H^{-1} u, r = (i/2) u^T H^{-1} u.
        const complexd det = h.matrix(0, 0) * h.matrix(1, 1) - h.matrix(0, 1) * h.matrix(1, 0);
        if (std::abs(det) < 1e-26 * scale * scale) return invalid_point(delta);
        Vector2c y;
        y(0) = (h.matrix(1, 1) * u(0) - h.matrix(0, 1) * u(1)) / det;
        y(1) = (h.matrix(0, 0) * u(1) - h.matrix(1, 0) * u(0)) / det;
        tsum = u.dot(y);                       // u^dag y
        rsum = u(0) * y(0) + u(1) * y(1);      // u^T y
    } else {
        const complexd evs[2] = {es.e1, es.e2};
        const Vector2c* rv[2] = {&es.psi1_r, &es.psi2_r};
        const Vector2c* lv[2] = {&es.psi1_l, &es.psi2_l};
        for (int j = 0; j < 2; ++j) {
            // <psi^L| u as a row-vector contraction: conj of the stored ket.
            const complexd wu = lv[j]->dot(u);
            const complexd udag_psi = u.dot(*rv[j]);
            const complexd ut_psi = u(0) * (*rv[j])(0) + u(1) * (*rv[j])(1);
            if (std::abs(evs[j]) < 1e-13 * scale) {
                const double weight = std::max(std::abs(udag_psi * wu), std::abs(ut_psi * wu));
                if (weight < 1e-10 * u.squaredNorm()) continue;  // decoupled dark pole
                return invalid_point(delta);
            }
            tsum += udag_psi * wu / evs[j];
            rsum += ut_psi * wu / evs[j];
        }
    }
    return finish_point(delta, 1.0 + 0.5 * kI * tsum, 0.5 * kI * rsum);
}

ScatterPoint scatter_via_steady_state(const SystemParams& params, double delta, Incidence side) {
    SystemParams p = params;
    p.delta = delta;
    validate(p);
    if (!std::isfinite(delta))
        throw Error(ErrorCode::invalid_params, "delta: must be finite");

    const EffectiveHamiltonian h = build_hamiltonian(p);
    const double gmean = std::max(p.gamma_mean(), 1e-300);
    Vector2c w = detail::coupling_vector(p) / std::sqrt(gmean);
    if (side == Incidence::from_right) w = w.conjugate();

    // Driven steady state H c = Omega_p w, solved directly (adjugate).
    // Omega_p cancels in the output sum, so the reduced c-hat = c / Omega_p
    // is used; the normalization matches the single-resonance limit of the
    // spectral formula.
    const complexd det = h.matrix(0, 0) * h.matrix(1, 1) - h.matrix(0, 1) * h.matrix(1, 0);
    const double scale = std::max(h.matrix.cwiseAbs().maxCoeff(), 1e-300);
    if (std::abs(det) < 1e-26 * scale * scale) return invalid_point(delta);
    Vector2c chat;
    chat(0) = (h.matrix(1, 1) * w(0) - h.matrix(0, 1) * w(1)) / det;
    chat(1) = (h.matrix(0, 0) * w(1) - h.matrix(1, 0) * w(0)) / det;

    const complexd tsum = gmean * (w.dot(chat));                        // conj weights
    const complexd rsum = gmean * (w(0) * chat(0) + w(1) * chat(1));    // plain weights
    return finish_point(delta, 1.0 + 0.5 * kI * tsum, 0.5 * kI * rsum);
}

SpectrumGrid spectrum(const SystemParams& params, double delta_min, double delta_max,
                      std::size_t n) {
    if (n < 2) throw Error(ErrorCode::invalid_grid, "spectrum needs n >= 2");
    if (!(delta_min < delta_max))
        throw Error(ErrorCode::invalid_grid, "spectrum needs delta_min < delta_max");

    SpectrumGrid grid;
    grid.deltas.resize(n);
    grid.points.resize(n);
    grid.phase_unwrapped.resize(n);
    const double step = (delta_max - delta_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = delta_min + step * static_cast<double>(i);
        grid.deltas[i] = d;
        grid.points[i] = scatter_amplitudes(params, d);
    }
    // Nearest-branch continuation from the left endpoint.
    double prev = 0.0;
    bool have_prev = false;
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t i = 0; i < n; ++i) {
        const double raw = grid.points[i].phase;
        if (!grid.points[i].valid || !std::isfinite(raw)) {
            grid.phase_unwrapped[i] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        if (!have_prev) {
            grid.phase_unwrapped[i] = raw;
            have_prev = true;
        } else {
            grid.phase_unwrapped[i] = raw + two_pi * std::round((prev - raw) / two_pi);
        }
        prev = grid.phase_unwrapped[i];
    }
    return grid;
}

std::vector<Peak> find_peaks(const std::vector<double>& x, const std::vector<double>& y,
                             double prominence) {
    std::vector<Peak> peaks;
    const std::size_t n = y.size();
    if (n < 3) return peaks;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
        // Plateau: take the left edge only.
        if (y[i] == y[i + 1]) {
            std::size_t j = i + 1;
            while (j + 1 < n && y[j] == y[j + 1]) ++j;
            if (j + 1 < n && y[j] < y[j + 1]) continue;
        }
        // Prominence: lowest saddle toward a higher point (or the edge) on each side.
        double left_min = y[i], right_min = y[i];
        for (std::size_t j = i; j-- > 0;) {
            left_min = std::min(left_min, y[j]);
            if (y[j] > y[i]) break;
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            right_min = std::min(right_min, y[j]);
            if (y[j] > y[i]) break;
        }
        const double prom = y[i] - std::max(left_min, right_min);
        if (prom < prominence) continue;

        Peak pk;
        pk.height = y[i];
        // Quadratic interpolation through (i-1, i, i+1).
        const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
        double shift = 0.0;
        if (std::abs(denom) > 1e-300) shift = 0.5 * (y[i - 1] - y[i + 1]) / denom;
        shift = std::clamp(shift, -0.5, 0.5);
        const double dx = i + 1 < n ? x[i + 1] - x[i] : x[i] - x[i - 1];
        pk.position = x[i] + shift * dx;

        // Half-height crossings, linear interpolation.
        const double half = 0.5 * y[i];
        double left_cross = std::numeric_limits<double>::quiet_NaN();
        double right_cross = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t j = i; j-- > 0;) {
            if (y[j] <= half) {
                const double f = (half - y[j]) / (y[j + 1] - y[j]);
                left_cross = x[j] + f * (x[j + 1] - x[j]);
                break;
            }
            if (y[j] > y[i]) break;
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (y[j] <= half) {
                const double f = (y[j - 1] - half) / (y[j - 1] - y[j]);
                right_cross = x[j - 1] + f * (x[j] - x[j - 1]);
                break;
            }
            if (y[j] > y[i]) break;
        }
        pk.fwhm = right_cross - left_cross;  // NaN propagates if a side is missing
        peaks.push_back(pk);
    }
    return peaks;
}

std::vector<Peak> peak_analysis(const SpectrumGrid& grid, double prominence) {
    std::vector<double> r(grid.points.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = grid.points[i].valid ? grid.points[i].reflection : 0.0;
    auto peaks = find_peaks(grid.deltas, r, prominence);
    if (peaks.empty())
        throw Error(ErrorCode::empty_spectrum, "no reflection peak clears the prominence threshold");
    return peaks;
}

}  // namespace dimer
