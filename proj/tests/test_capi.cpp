#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <thread>
#include <vector>

#include "dimer.h"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Sys {
    dimer_system* ptr = nullptr;
    explicit Sys(const dimer_params& p) { REQUIRE(dimer_system_create(&p, &ptr) == DIMER_OK); }
    ~Sys() { dimer_system_destroy(ptr); }
};

dimer_params bragg_params(double j) {
    dimer_params p;
    dimer_params_defaults(&p);
    p.j_strength = j;
    return p;
}

}  // namespace

TEST_CASE("status names and abi version") {
    CHECK(std::strcmp(dimer_status_name(DIMER_OK), "ok") == 0);
    CHECK(std::strcmp(dimer_status_name(DIMER_ERR_ZERO_FLUX), "zero_flux") == 0);
    CHECK(dimer_abi_version() >= 1);
}

TEST_CASE("system creation validates parameters") {
    dimer_params p;
    dimer_params_defaults(&p);
    p.gamma_1d_1 = -2.0;
    dimer_system* sys = nullptr;
    CHECK(dimer_system_create(&p, &sys) == DIMER_ERR_INVALID_PARAMS);
    CHECK(sys == nullptr);
    CHECK(std::strstr(dimer_last_error_message(), "gamma_1d_1") != nullptr);
    CHECK(dimer_system_create(nullptr, &sys) == DIMER_ERR_NULL_ARGUMENT);
}

TEST_CASE("params round-trip through the handle") {
    dimer_params p = bragg_params(2.5);
    p.delta = -1.25;
    Sys sys(p);
    dimer_params back;
    REQUIRE(dimer_system_get_params(sys.ptr, &back) == DIMER_OK);
    CHECK(back.j_strength == 2.5);
    CHECK(back.delta == -1.25);
    CHECK(back.kad == p.kad);
}

TEST_CASE("eigensystem and dressed scheme cross-check") {
    dimer_params p = bragg_params(1.0);
    p.gamma_prime = 0.2;
    Sys sys(p);
    dimer_eigensystem_result es;
    REQUIRE(dimer_eigensystem(sys.ptr, &es) == DIMER_OK);
    CHECK(-2.0 * es.e1_im == doctest::Approx(2.2).epsilon(1e-14));
    CHECK(-2.0 * es.e2_im == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(es.degenerate == 0);

    dimer_dressed_scheme_result ds;
    REQUIRE(dimer_dressed_scheme(sys.ptr, &ds) == DIMER_OK);
    CHECK(ds.gamma_a == doctest::Approx(2.2).epsilon(1e-15));
    CHECK(ds.gamma_b == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(ds.delta_ab == doctest::Approx(ds.omega_a_level - ds.omega_b_level).epsilon(1e-15));

    dimer_hamiltonian_result h;
    REQUIRE(dimer_hamiltonian(sys.ptr, &h) == DIMER_OK);
    for (int k = 0; k < 8; ++k) {
        const double recon = h.coherent_part[k] +
                             0.5 * (k % 2 == 0 ? h.decay_matrix[k + 1] : -h.decay_matrix[k - 1]);
        CHECK(h.matrix[k] == doctest::Approx(recon).epsilon(1e-15));
    }

    dimer_params asym = p;
    asym.gamma_1d_2 = 0.5;
    Sys sys2(asym);
    CHECK(dimer_dressed_scheme(sys2.ptr, &ds) == DIMER_ERR_ASYMMETRIC_INPUT);
}

TEST_CASE("bound state length helper") {
    double len = 0.0;
    CHECK(dimer_bound_state_length(100.0, 1.0, 1.0, &len) == DIMER_OK);
    CHECK(len == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(dimer_bound_state_length(1.0, -1.0, 1.0, &len) == DIMER_ERR_INVALID_PARAMS);
}

TEST_CASE("spectrum handle: accessors, peaks, phase") {
    Sys sys(bragg_params(1.0));
    dimer_spectrum* spec = nullptr;
    REQUIRE(dimer_spectrum_compute(sys.ptr, -6.0, 6.0, 2401, &spec) == DIMER_OK);
    CHECK(dimer_spectrum_size(spec) == 2401);

    dimer_scatter_point pt;
    REQUIRE(dimer_spectrum_point(spec, 0, &pt) == DIMER_OK);
    CHECK(pt.delta == -6.0);
    CHECK(pt.valid == 1);
    CHECK(dimer_spectrum_point(spec, 5000, &pt) == DIMER_ERR_OUT_OF_RANGE);

    double unwrapped;
    REQUIRE(dimer_spectrum_phase_unwrapped(spec, 1200, &unwrapped) == DIMER_OK);

    dimer_peak peaks[4];
    size_t count = 0;
    REQUIRE(dimer_spectrum_peaks(spec, 0.01, peaks, 4, &count) == DIMER_OK);
    REQUIRE(count == 1);
    CHECK(peaks[0].position == doctest::Approx(1.0 + std::exp(-0.1)).epsilon(1e-3));
    dimer_spectrum_destroy(spec);
}

TEST_CASE("single-point scattering routes agree") {
    Sys sys(bragg_params(1.0));
    dimer_scatter_point a, b;
    REQUIRE(dimer_scatter(sys.ptr, 0.7, &a) == DIMER_OK);
    REQUIRE(dimer_scatter_steady_state(sys.ptr, 0.7, &b) == DIMER_OK);
    CHECK(std::abs(a.t_re - b.t_re) < 1e-10);
    CHECK(std::abs(a.t_im - b.t_im) < 1e-10);
    CHECK(std::abs(a.transmission + a.reflection - 1.0) < 1e-10);
}

TEST_CASE("timeseries handle and closed forms") {
    Sys sys(bragg_params(3.0));
    dimer_timeseries* ts = nullptr;
    REQUIRE(dimer_evolve(sys.ptr, DIMER_INITIAL_LEFT, 10.0, 501, &ts) == DIMER_OK);
    CHECK(dimer_timeseries_size(ts) == 501);
    dimer_population_sample s0, cf;
    REQUIRE(dimer_timeseries_sample(ts, 0, &s0) == DIMER_OK);
    CHECK(s0.p_left == doctest::Approx(1.0).epsilon(1e-15));
    for (size_t i = 0; i < 501; i += 50) {
        dimer_population_sample s;
        REQUIRE(dimer_timeseries_sample(ts, i, &s) == DIMER_OK);
        REQUIRE(dimer_closed_form_populations(sys.ptr, DIMER_CASE_BRAGG, s.time, &cf) == DIMER_OK);
        CHECK(std::abs(s.p_left - cf.p_left) < 1e-10);
        CHECK(std::abs(s.p_b - cf.p_b) < 1e-10);
    }
    CHECK(dimer_timeseries_sample(ts, 501, &s0) == DIMER_ERR_OUT_OF_RANGE);
    dimer_timeseries_destroy(ts);

    CHECK(dimer_closed_form_populations(sys.ptr, DIMER_CASE_ANTI_BRAGG, 1.0, &cf) ==
          DIMER_ERR_WRONG_CASE);
}

TEST_CASE("g2 handles: trace, flux, zero-flux error") {
    dimer_params p = bragg_params(3.0);
    p.delta = 3.0 * (1.0 + std::exp(-0.1));
    Sys sys(p);
    dimer_g2_trace* tr = nullptr;
    REQUIRE(dimer_g2_reflected(sys.ptr, 10.0, 201, &tr) == DIMER_OK);
    CHECK(dimer_g2_size(tr) == 201);
    double tau, g2;
    REQUIRE(dimer_g2_sample(tr, 0, &tau, &g2) == DIMER_OK);
    CHECK(tau == 0.0);
    CHECK(g2 == doctest::Approx(1.0 / (36.0 * std::exp(-0.2) + 1.0)).epsilon(1e-9));
    CHECK(dimer_g2_flux(tr) > 0.0);
    dimer_g2_trace_destroy(tr);

    dimer_g2_trace* tr2 = nullptr;
    REQUIRE(dimer_g2_master_equation(sys.ptr, 5.0, 51, &tr2) == DIMER_OK);
    REQUIRE(dimer_g2_sample(tr2, 0, &tau, &g2) == DIMER_OK);
    CHECK(g2 == doctest::Approx(1.0 / (36.0 * std::exp(-0.2) + 1.0)).epsilon(1e-4));
    dimer_g2_trace_destroy(tr2);

    dimer_params zf;
    dimer_params_defaults(&zf);
    zf.kad = 0.5 * kPi;
    zf.d_over_l = 0.05;
    zf.j_strength = 0.5 * std::exp(0.05);
    zf.gamma_prime = 0.05;
    zf.delta = zf.j_strength;
    Sys sys_zf(zf);
    dimer_g2_trace* tr3 = nullptr;
    CHECK(dimer_g2_reflected(sys_zf.ptr, 10.0, 101, &tr3) == DIMER_ERR_ZERO_FLUX);
    CHECK(tr3 == nullptr);
    CHECK(std::strstr(dimer_last_error_message(), "zero reflected flux") != nullptr);
}

TEST_CASE("concurrent use: independent results, thread-local errors") {
    dimer_params good = bragg_params(1.0);
    Sys sys(good);
    dimer_scatter_point reference;
    REQUIRE(dimer_scatter(sys.ptr, 0.4, &reference) == DIMER_OK);

    std::vector<std::thread> threads;
    std::vector<int> ok(8, 0);
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            bool fine = true;
            for (int i = 0; i < 200; ++i) {
                if (t % 2 == 0) {
                    dimer_scatter_point pt;
                    fine &= dimer_scatter(sys.ptr, 0.4, &pt) == DIMER_OK;
                    fine &= pt.t_re == reference.t_re && pt.t_im == reference.t_im;
                } else {
                    // Failing calls on other threads must not disturb this one.
                    dimer_params bad = good;
                    bad.kad = -1.0;
                    dimer_system* tmp = nullptr;
                    fine &= dimer_system_create(&bad, &tmp) == DIMER_ERR_INVALID_PARAMS;
                    fine &= std::strstr(dimer_last_error_message(), "kad") != nullptr;
                }
            }
            ok[t] = fine ? 1 : 0;
        });
    }
    for (auto& th : threads) th.join();
    for (int flag : ok) CHECK(flag == 1);
}

TEST_CASE("imperfection entry points") {
    dimer_params p = bragg_params(3.0);
    Sys sys(p);

    dimer_fano_feature feature;
    dimer_spectrum* spec = nullptr;
    REQUIRE(dimer_fano_scan(sys.ptr, 0.05, -2.0, 8.0, 20001, &spec, &feature) == DIMER_OK);
    CHECK(std::abs(feature.position - feature.predicted) < 0.0124);
    CHECK(dimer_spectrum_size(spec) == 20001);
    dimer_spectrum_destroy(spec);
    CHECK(dimer_fano_scan(sys.ptr, 0.0, -2.0, 8.0, 2001, nullptr, &feature) ==
          DIMER_ERR_FEATURE_NOT_FOUND);

    dimer_timeseries* ts = nullptr;
    double fitted = 0.0, expected = 0.0;
    REQUIRE(dimer_deviation_dynamics(sys.ptr, 0.05, 10.0, 1001, &ts, &fitted, &expected) ==
            DIMER_OK);
    CHECK(std::abs(fitted - expected) < 0.05 * expected);
    dimer_timeseries_destroy(ts);

    double a[2], b[2];
    REQUIRE(dimer_asymmetric_basis(1.14, 0.86, a, b) == DIMER_OK);
    CHECK(a[0] == doctest::Approx(-std::sqrt(0.57)).epsilon(1e-15));
    CHECK(b[1] == doctest::Approx(std::sqrt(0.57)).epsilon(1e-15));

    dimer_params asym = p;
    asym.gamma_1d_1 = 1.14;
    asym.gamma_1d_2 = 0.86;
    Sys sys2(asym);
    dimer_timeseries* ts2 = nullptr;
    double coupling = 0.0, mismatch = 0.0;
    REQUIRE(dimer_asymmetric_bragg_dynamics(sys2.ptr, 10.0, 501, &ts2, &coupling, &mismatch) ==
            DIMER_OK);
    CHECK(coupling == doctest::Approx(3.0 * std::exp(-0.1) * 0.14).epsilon(1e-12));
    CHECK(mismatch < 1e-10);
    dimer_timeseries_destroy(ts2);
}
