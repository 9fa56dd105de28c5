#include <cmath>

#include "dispersym/mollifier.hpp"
#include "dispersym/simulate.hpp"
#include "doctest.h"

using namespace dispersym;

TEST_CASE("multiplier oracle closed forms") {
    // all zero: unitary
    CHECK(std::abs(std::abs(multiplier_oracle(5, {}, 3.0, 2.0)) - 1.0) < 1e-15);
    // k=5, b3 = -0.1i, xi=2, t=1: magnitude e^{0.8}
    std::map<int, std::complex<double>> c{{3, {0.0, -0.1}}};
    CHECK(std::abs(std::abs(multiplier_oracle(5, c, 2.0, 1.0)) - std::exp(0.8)) < 1e-12);
    // k=6, real b4: magnitude 1 for any xi
    std::map<int, std::complex<double>> r{{4, {0.3, 0.0}}};
    for (double xi : {1.0, 5.0, 17.0})
        CHECK(std::abs(std::abs(multiplier_oracle(6, r, xi, 1.0)) - 1.0) < 1e-12);
}

TEST_CASE("single Fourier mode with zero coefficients keeps its norm") {
    SimConfig config;
    config.k = 5;
    config.N = 64;
    config.R = 1.0;
    config.dt = 1e-3;
    config.T = 0.1;
    config.record_every = 10;
    cvec u0(config.N);
    for (std::size_t m = 0; m < config.N; ++m)
        u0[m] = std::exp(std::complex<double>(0.0, 3.0 * config.x_at(m)));
    SimResult res = evolve(config, u0);
    for (double nrm : res.l2_norms) CHECK(std::abs(nrm - res.l2_norms.front()) < 1e-12);
}

TEST_CASE("constant-coefficient runs match the multiplier oracle per mode") {
    SimConfig config;
    config.k = 5;
    config.N = 256;
    config.R = 1.0;
    config.dt = 1e-4;
    config.T = 1.0;
    config.record_every = 10000;
    config.dealias = false;  // constant coefficients generate no new modes
    config.coeffs[1] = CoeffExpr::parse("0.3+0.2*i");
    config.coeffs[0] = CoeffExpr::parse("0.1*i");
    cvec u0(config.N, 0.0);
    // a handful of modes with distinct amplitudes
    for (int mode : {-9, -4, 0, 1, 3, 8}) {
        for (std::size_t m = 0; m < config.N; ++m)
            u0[m] += (1.0 + 0.1 * mode) *
                     std::exp(std::complex<double>(0.0, mode * config.x_at(m)));
    }
    SimResult res = evolve(config, u0);
    std::map<int, std::complex<double>> constants{{1, {0.3, 0.2}}, {0, {0.0, 0.1}}};
    cvec hat0 = fft_forward(u0);
    for (std::size_t j = 0; j < config.N; ++j) {
        if (std::abs(hat0[j]) < 1e-9 * double(config.N)) continue;
        double xi = fft_frequency(j, config.N, 2.0 * M_PI * config.R);
        std::complex<double> expect = hat0[j] * multiplier_oracle(5, constants, xi, config.T);
        CHECK(std::abs(res.final_spectrum[j] - expect) <= 1e-8 * std::abs(expect));
    }
}

TEST_CASE("self-adjoint variable coefficients conserve the norm") {
    // A = alpha D^3 + (-(3/2) i alpha') D^2 with alpha = 0.2 sin(x/8)
    SimConfig config;
    config.k = 5;
    config.N = 256;
    config.R = 8.0;
    config.T = 0.05;
    config.integrator = Integrator::strang_cayley;
    config.coeffs[3] = CoeffExpr::parse("0.2*sin(x/8)");
    config.coeffs[2] = CoeffExpr::parse("-(3/80)*i*cos(x/8)");
    config.dt = 2e-4;
    config.record_every = 50;
    cvec u0(config.N);
    for (std::size_t m = 0; m < config.N; ++m) {
        double x = config.x_at(m);
        u0[m] = std::exp(std::complex<double>(0.0, x / 4.0)) * (2.0 + std::cos(x / 8.0));
    }
    SimResult res = evolve(config, u0);
    double drift = 0.0;
    for (double nrm : res.l2_norms)
        drift = std::max(drift, std::abs(nrm / res.l2_norms.front() - 1.0));
    CHECK(drift <= 1e-8);
}

TEST_CASE("splitting integrator is time-reversible") {
    SimConfig config;
    config.k = 5;
    config.N = 128;
    config.R = 8.0;
    config.T = 0.02;
    config.integrator = Integrator::strang_cayley;
    config.coeffs[3] = CoeffExpr::parse("0.2*sin(x/8)");
    config.coeffs[1] = CoeffExpr::parse("0.05*cos(x/8)");
    config.dt = 1e-4;
    config.record_every = 1000;
    cvec u0(config.N);
    for (std::size_t m = 0; m < config.N; ++m)
        u0[m] = std::exp(std::complex<double>(0.0, config.x_at(m) / 2.0));
    SimResult fwd = evolve(config, u0);
    SimConfig back = config;
    back.time_direction = -1;
    SimResult rev = evolve(back, fwd.final_state);
    double err = 0.0, scale = 0.0;
    for (std::size_t m = 0; m < config.N; ++m) {
        err += std::norm(rev.final_state[m] - u0[m]);
        scale += std::norm(u0[m]);
    }
    CHECK(std::sqrt(err / scale) <= 1e-6);
}

TEST_CASE("stability violation and blowup guard") {
    SimConfig config;
    config.k = 5;
    config.N = 256;
    config.dt = 1.0;  // far beyond the bound
    config.T = 2.0;
    config.coeffs[3] = CoeffExpr::parse("0.5");
    cvec u0(config.N, 1.0);
    CHECK_THROWS_AS(evolve(config, u0), StabilityViolation);
}

TEST_CASE("wavepacket envelope equals |f| when psi = 0") {
    SimConfig config;
    config.k = 5;
    config.N = 512;
    config.R = 8.0;
    WavepacketSpec spec;
    spec.xi0 = 16.0;
    spec.x1 = M_PI * config.R;
    spec.m = 1;  // width xi0
    spec.normalize = false;
    cvec v = wavepacket(config, spec);
    for (std::size_t m = 0; m < config.N; ++m) {
        double d = std::remainder(config.x_at(m) - spec.x1, 2.0 * M_PI * config.R);
        double f = chi_plateau(2.0 * d / 16.0);
        CHECK(std::abs(std::abs(v[m]) - f) < 1e-12);
    }
}

TEST_CASE("wavepacket envelope is modulated by e^{Re psi}") {
    SimConfig config;
    config.k = 5;
    config.N = 512;
    config.R = 8.0;
    WavepacketSpec spec;
    spec.xi0 = 8.0;
    spec.x1 = M_PI * config.R;
    spec.m = 1;
    spec.normalize = false;
    cvec psi(config.N);
    for (std::size_t m = 0; m < config.N; ++m)
        psi[m] = std::complex<double>(0.1 * std::sin(config.x_at(m) / 8.0),
                                      0.3 * std::cos(config.x_at(m) / 8.0));
    cvec v = wavepacket(config, spec, &psi);
    for (std::size_t m = 0; m < config.N; ++m) {
        double d = std::remainder(config.x_at(m) - spec.x1, 2.0 * M_PI * config.R);
        double f = chi_plateau(2.0 * d / 8.0);
        CHECK(std::abs(std::abs(v[m]) - f * std::exp(psi[m].real())) < 1e-12);
    }
}

TEST_CASE("wavepacket too wide for the window raises SupportOverflow") {
    SimConfig config;
    config.k = 5;
    config.N = 64;
    config.R = 1.0;
    WavepacketSpec spec;
    spec.xi0 = 16.0;
    spec.m = 1;  // width 16 > 0.9 * 2 pi
    CHECK_THROWS_AS(wavepacket(config, spec), SupportOverflow);
}

TEST_CASE("frequency sweep: zero coefficients give unit growth") {
    SimConfig config;
    config.k = 5;
    config.N = 512;
    config.R = 8.0;
    config.dt = 1e-4;
    config.T = 5e-3;
    config.record_every = 100;
    auto rows = frequency_sweep(config, {4.0, 8.0}, 0);
    for (const auto& r : rows) CHECK(std::abs(r.growth - 1.0) <= 1e-6);
}

TEST_CASE("duality probe: zero coefficients reproduce the leading D^2 f term") {
    SimConfig config;
    config.k = 5;
    config.N = 4096;
    config.R = 16.0;
    WavepacketSpec spec;
    spec.xi0 = 32.0;
    spec.x1 = M_PI * config.R;
    spec.m = 1;
    DualityProbeResult res = duality_probe(config, 1, spec.xi0, spec);
    REQUIRE(!res.no_packet);
    // leading residual is -C(5,3) xi^{3-2m} f'' with profile f = chi(2 .):
    // ratio ~ 10 xi ||f''|| / ||f||
    double nf = 0.0, nf2 = 0.0;
    const int samples = 20000;
    for (int t = 0; t <= samples; ++t) {
        double u = -1.0 + 2.0 * t / samples;
        nf += chi_plateau(2 * u) * chi_plateau(2 * u);
        double d2 = 4.0 * chi_plateau(2 * u, 2);
        nf2 += d2 * d2;
    }
    double predicted = 10.0 * spec.xi0 * std::sqrt(nf2 / nf);
    CHECK(res.residual_ratio / predicted > 0.9);
    CHECK(res.residual_ratio / predicted < 1.1);
    CHECK(res.predicted_power == std::pow(spec.xi0, 2));
}

TEST_CASE("duality probe: spectral and table routes agree") {
    SimConfig config;
    config.k = 4;
    config.N = 2048;
    config.R = 16.0;
    config.coeffs[2] = CoeffExpr::parse("0.2*sin(x/16) + i*0.1*bump(25,4)");
    config.coeffs[1] = CoeffExpr::parse("0.1*cos(x/16)");
    WavepacketSpec spec;
    spec.xi0 = 20.0;
    spec.x1 = M_PI * config.R;
    spec.m = 1;
    cvec table = duality_probe_table_route(config, 1, spec.xi0, spec);
    cvec spectral = duality_probe_spectral_route(config, 1, spec.xi0, spec);
    double err = 0.0, scale = 0.0;
    for (std::size_t m = 0; m < config.N; ++m) {
        err += std::norm(table[m] - spectral[m]);
        scale += std::norm(table[m]);
    }
    REQUIRE(scale > 0.0);
    CHECK(std::sqrt(err / scale) <= 1e-6);
}

TEST_CASE("duality probe ratio stays within a factor of the predicted power") {
    SimConfig config;
    config.k = 5;
    config.N = 4096;
    config.R = 16.0;
    // c carries an imaginary part: the xi^2 row of the conjugated table
    config.coeffs[2] = CoeffExpr::parse("i*bump(25,6)");
    WavepacketSpec spec;
    spec.x1 = 25.0;
    spec.m = 1;
    std::vector<double> ratios;
    for (double xi : {8.0, 16.0, 32.0}) {
        spec.xi0 = xi;
        DualityProbeResult res = duality_probe(config, 1, xi, spec);
        ratios.push_back(res.residual_ratio / res.predicted_power);
    }
    double lo = *std::min_element(ratios.begin(), ratios.end());
    double hi = *std::max_element(ratios.begin(), ratios.end());
    CHECK(hi / lo < 2.0);
}

TEST_CASE("empty profile reports NoPacket") {
    SimConfig config;
    config.k = 5;
    config.N = 256;
    config.R = 4.0;
    WavepacketSpec spec;
    spec.xi0 = 4.0;
    spec.x1 = M_PI * config.R;
    spec.m = 0;
    spec.amplitude = 0.0;
    DualityProbeResult res = duality_probe(config, 0, spec.xi0, spec);
    CHECK(res.no_packet);
}
