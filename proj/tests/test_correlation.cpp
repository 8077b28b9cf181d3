#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dimer/correlation.hpp"
#include "dimer/scattering.hpp"

using namespace dimer;

namespace {

constexpr double kPi = 3.14159265358979323846;

SystemParams bragg_driven(double j, double omega = 1e-4) {
    SystemParams p;
    p.kad = kPi;
    p.d_over_l = 0.1;
    p.j_strength = j;
    p.omega_p_amp = omega;
    p.delta = j * (1.0 + std::exp(-0.1));  // superradiant resonance
    return p;
}

SystemParams anti_bragg_driven(double j, double omega = 1e-4) {
    SystemParams p;
    p.kad = 0.5 * kPi;
    p.d_over_l = 0.05;
    p.j_strength = j;
    p.omega_p_amp = omega;
    p.delta = j;
    return p;
}

// Relative to the trace's natural scale: g2 is normalized to 1 at long delay
// and passes through exact zeros, where a pointwise ratio is ill-posed.
double max_relative_gap(const CorrelationTrace& a, const CorrelationTrace& b) {
    REQUIRE(a.g2.size() == b.g2.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.g2.size(); ++i)
        worst = std::max(worst, std::abs(a.g2[i] - b.g2[i]) / std::max(std::abs(b.g2[i]), 1.0));
    return worst;
}

// Interior extrema positions (maxima and minima together).
std::vector<double> extrema(const std::vector<double>& t, const std::vector<double>& y) {
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        const bool is_max = y[i] > y[i - 1] && y[i] >= y[i + 1];
        const bool is_min = y[i] < y[i - 1] && y[i] <= y[i + 1];
        if (!is_max && !is_min) continue;
        const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
        const double shift = denom != 0.0 ? 0.5 * (y[i - 1] - y[i + 1]) / denom : 0.0;
        out.push_back(t[i] + shift * (t[i + 1] - t[i]));
    }
    return out;
}

}  // namespace

TEST_CASE("hierarchy steady state: zero drive and perturbative scaling") {
    auto p = bragg_driven(3.0, 0.0);
    auto s0 = steady_state_hierarchy(p);
    CHECK(s0.c_1 == complexd(0.0, 0.0));
    CHECK(s0.c_2 == complexd(0.0, 0.0));
    CHECK(s0.c_ee == complexd(0.0, 0.0));

    auto s1 = steady_state_hierarchy(bragg_driven(3.0, 1e-5));
    auto s2 = steady_state_hierarchy(bragg_driven(3.0, 2e-5));
    CHECK(std::abs(s2.c_1 - 2.0 * s1.c_1) < 1e-12 * std::abs(s1.c_1));
    CHECK(std::abs(s2.c_2 - 2.0 * s1.c_2) < 1e-12 * std::abs(s1.c_2));
    CHECK(std::abs(s2.c_ee - 4.0 * s1.c_ee) < 1e-12 * std::abs(s1.c_ee));

    // Two-excitation amplitude stays second order.
    const double single = std::max(std::abs(s1.c_1), std::abs(s1.c_2));
    CHECK(std::abs(s1.c_ee) <= 10.0 * single * single);
}

TEST_CASE("weak-drive precondition is enforced") {
    auto p = bragg_driven(3.0, 0.5);
    CHECK_THROWS_AS(steady_state_hierarchy(p), Error);
    CHECK_THROWS_AS(g2_reflected(p, 10.0, 101), Error);
    CHECK_THROWS_AS(g2_master_equation_oracle(p, 10.0, 101), Error);
}

TEST_CASE("flux matches the reflection amplitude") {
    auto p = anti_bragg_driven(3.0);
    auto trace = g2_reflected(p, 1.0, 11);
    auto pt = scatter_amplitudes(p, p.delta);
    // flux = 2 |r Omega|^2 / gamma_mean for equal unit rates.
    const double expected = 2.0 * std::norm(pt.r_amp) * p.omega_p_amp * p.omega_p_amp;
    CHECK(trace.flux_ss == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("zero reflected flux raises at the decoupling point") {
    SystemParams p;
    p.kad = 0.5 * kPi;
    p.d_over_l = 0.05;
    p.j_strength = 0.5 * std::exp(0.05);
    p.gamma_prime = 0.05;
    p.omega_p_amp = 1e-4;
    p.delta = p.j_strength;
    CHECK_THROWS_WITH_AS(g2_reflected(p, 10.0, 101), doctest::Contains("zero reflected flux"),
                         Error);
}

TEST_CASE("no waveguide coupling: zero flux in both routes") {
    SystemParams p;
    p.gamma_1d_1 = p.gamma_1d_2 = 0.0;
    p.gamma_prime = 0.4;
    p.j_strength = 1.0;
    p.kad = 1.0;
    p.d_over_l = 0.3;
    p.omega_p_amp = 0.0;
    CHECK_THROWS_AS(g2_reflected(p, 5.0, 51), Error);
    CHECK_THROWS_AS(g2_master_equation_oracle(p, 5.0, 51), Error);
}

TEST_CASE("bragg on resonance: deep antibunching with clean recovery") {
    for (double j : {1.5, 3.0}) {
        auto p = bragg_driven(j);
        auto trace = g2_reflected(p, 10.0, 1001);
        // Closed form for the initial value: the doubly-excited level is
        // detuned by 2 J e^{-d/L} and decays at Gamma_1 + Gamma_2.
        const double expected0 = 1.0 / (4.0 * j * j * std::exp(-0.2) + 1.0);
        CHECK(trace.g2[0] == doctest::Approx(expected0).epsilon(1e-10));
        CHECK(trace.g2[0] < 0.15);
        for (double v : trace.g2) {
            CHECK(v >= -1e-10);
            CHECK(v < 1.0 + 1e-3);  // no bunching overshoot at bragg
        }
        CHECK(std::abs(trace.g2.back() - 1.0) < 0.01);
    }
}

TEST_CASE("bragg with J = 0: reflected light stays coherent") {
    auto p = bragg_driven(0.0);
    auto trace = g2_reflected(p, 10.0, 201);
    for (double v : trace.g2) CHECK(std::abs(v - 1.0) < 1e-10);
    auto oracle = g2_master_equation_oracle(p, 10.0, 201);
    for (double v : oracle.g2) CHECK(std::abs(v - 1.0) < 1e-4);
}

TEST_CASE("anti-bragg quantum beats: alternation at omega_A - omega_B") {
    auto p = anti_bragg_driven(3.0);
    auto trace = g2_reflected(p, 10.0, 4001);
    CHECK(trace.g2[0] < 0.5);
    // Independent closed form at tau = 0: with the drive centered between
    // the dressed levels (detuned by +-w0 = +-(J e^{-d/L} - G/2), equal
    // widths G/2) the coincidence amplitude gives (w0^2 + 1/4)^2 / (4 w0^4).
    const double w0 = 3.0 * std::exp(-0.05) - 0.5;
    const double expected0 = std::pow(w0 * w0 + 0.25, 2) / (4.0 * std::pow(w0, 4));
    CHECK(trace.g2[0] == doctest::Approx(expected0).epsilon(1e-10));

    double lo = 2.0, hi = 0.0;
    for (std::size_t i = 1; i < trace.g2.size(); ++i) {
        lo = std::min(lo, trace.g2[i]);
        hi = std::max(hi, trace.g2[i]);
    }
    CHECK(lo < 1.0 - 1e-2);
    CHECK(hi > 1.0 + 1e-2);

    // The beat ladder: successive extrema sit one beat period apart.
    auto ext = extrema(trace.taus, trace.g2);
    std::vector<double> interior;
    for (double x : ext)
        if (x > 0.6) interior.push_back(x);
    REQUIRE(interior.size() >= 5);
    double spacing = 0.0;
    for (std::size_t i = 1; i < interior.size(); ++i)
        spacing += interior[i] - interior[i - 1];
    spacing /= static_cast<double>(interior.size() - 1);
    const double omega_beat = 2.0 * 3.0 * std::exp(-0.05) - 1.0;  // 4.7074
    CHECK(std::abs(2.0 * kPi / spacing - omega_beat) < 0.02 * omega_beat);

    // First maximum lands one beat period after tau = 0; consecutive maxima
    // are spaced two periods in the stationary (driven) correlation.
    auto peaks = find_peaks(trace.taus, trace.g2, 0.01);
    REQUIRE(peaks.size() >= 3);
    CHECK(std::abs(peaks[0].position - 2.0 * kPi / omega_beat) <
          0.03 * 2.0 * kPi / omega_beat);
    const double max_spacing = peaks[1].position - peaks[0].position;
    CHECK(std::abs(max_spacing - 2.0 * 2.0 * kPi / omega_beat) <
          0.03 * 2.0 * 2.0 * kPi / omega_beat);
}

TEST_CASE("beats vanish when the dressed levels merge") {
    // Slightly off the exact decoupling point so the reflected flux is finite.
    SystemParams p;
    p.kad = 0.5 * kPi;
    p.d_over_l = 0.05;
    p.j_strength = 0.52 * std::exp(0.05);
    p.gamma_prime = 0.05;
    p.omega_p_amp = 1e-4;
    p.delta = p.j_strength;
    auto trace = g2_reflected(p, 10.0, 2001);
    auto peaks = find_peaks(trace.taus, trace.g2, 1e-3);
    for (const auto& pk : peaks) CHECK(pk.height < 1.0 + 1e-3);
}

TEST_CASE("route equivalence over both driven geometries") {
    for (double j : {0.0, 1.5, 3.0}) {
        auto pb = bragg_driven(j);
        auto hb = g2_reflected(pb, 10.0, 201);
        auto mb = g2_master_equation_oracle(pb, 10.0, 201);
        CHECK(max_relative_gap(hb, mb) < 1e-3);

        auto pa = anti_bragg_driven(j);
        auto ha = g2_reflected(pa, 10.0, 201);
        auto ma = g2_master_equation_oracle(pa, 10.0, 201);
        CHECK(max_relative_gap(ha, ma) < 1e-3);
    }
}

TEST_CASE("drive-strength independence of the normalized correlation") {
    auto p4 = anti_bragg_driven(3.0, 1e-4);
    auto p5 = anti_bragg_driven(3.0, 1e-5);
    auto h4 = g2_reflected(p4, 10.0, 101);
    auto h5 = g2_reflected(p5, 10.0, 101);
    for (std::size_t i = 0; i < h4.g2.size(); ++i)
        CHECK(std::abs(h4.g2[i] - h5.g2[i]) < 1e-12 * std::max(1.0, h4.g2[i]));

    auto m4 = g2_master_equation_oracle(p4, 10.0, 101);
    auto m5 = g2_master_equation_oracle(p5, 10.0, 101);
    for (std::size_t i = 0; i < m4.g2.size(); ++i)
        CHECK(std::abs(m4.g2[i] - m5.g2[i]) < 1e-3 * std::max(1.0, m4.g2[i]));
}

TEST_CASE("long-delay factorization") {
    for (double j : {1.5, 3.0}) {
        auto trace = g2_reflected(anti_bragg_driven(j), 20.0, 801);
        CHECK(std::abs(trace.g2.back() - 1.0) < 0.01);
    }
}

TEST_CASE("single detached emitter: perfect antibunching in the oracle") {
    SystemParams p;
    p.gamma_1d_2 = 0.0;  // second atom removed from the waveguide
    p.j_strength = 0.0;
    p.kad = kPi;
    p.d_over_l = 0.1;
    p.omega_p_amp = 1e-4;
    p.delta = 0.0;
    auto oracle = g2_master_equation_oracle(p, 6.0, 301);
    CHECK(std::abs(oracle.g2[0]) < 1e-10);
    // Textbook weak-drive recovery (1 - e^{-Gamma tau / 2})^2.
    for (std::size_t i = 0; i < oracle.taus.size(); i += 25) {
        const double expected = std::pow(1.0 - std::exp(-0.5 * oracle.taus[i]), 2);
        CHECK(std::abs(oracle.g2[i] - expected) < 1e-3);
    }
    auto hier = g2_reflected(p, 6.0, 301);
    CHECK(std::abs(hier.g2[0]) < 1e-20);
    CHECK(max_relative_gap(hier, oracle) < 1e-3);
}

TEST_CASE("grid validation") {
    auto p = bragg_driven(3.0);
    CHECK_THROWS_AS(g2_reflected(p, -1.0, 101), Error);
    CHECK_THROWS_AS(g2_reflected(p, 5.0, 1), Error);
    CHECK_THROWS_AS(g2_master_equation_oracle(p, 5.0, 1), Error);
}
