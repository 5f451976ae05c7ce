#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <chronoscope/envelope.hpp>
#include <chronoscope/units.hpp>

using namespace chronoscope;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

SampledEnvelope double_gaussian(const TimeGrid& grid, double separation_half) {
    Eigen::VectorXcd samples(grid.n_points);
    for (int j = 0; j < grid.n_points; ++j) {
        const double t = grid.t(j);
        samples(j) = std::exp(-(t - separation_half) * (t - separation_half) / 4.0) +
                     std::exp(-(t + separation_half) * (t + separation_half) / 4.0);
    }
    return {grid, std::move(samples)};
}

}  // namespace

TEST_CASE("time grid accessors and guards") {
    TimeGrid g(8, 0.5, 1.0);
    REQUIRE(g.t(4) == 1.0);  // center sample sits at t_center
    REQUIRE(g.window() == 4.0);
    REQUIRE(rel(g.d_omega(), two_pi / 4.0) < 1e-15);
    REQUIRE(g.omega(4) == 0.0);
    REQUIRE(rel(g.omega_max(), pi / 0.5) < 1e-15);

    REQUIRE_THROWS_AS(TimeGrid(100, 0.1), InvalidGrid);  // not a power of two
    REQUIRE_THROWS_AS(TimeGrid(64, 0.0), InvalidGrid);
    REQUIRE_THROWS_AS(TimeGrid(64, -0.1), InvalidGrid);
    REQUIRE_THROWS_AS(SampledEnvelope(TimeGrid(64, 0.1), Eigen::VectorXcd::Zero(32)), InvalidGrid);
}

TEST_CASE("gaussian spectrum matches the closed form S(w) = 2 sqrt(pi) exp(-w^2)") {
    const TimeGrid g(2048, 0.02);
    const SampledEnvelope env = make_gaussian(g, {.sigma_t = 1.0});
    const SampledSpectrum spec = to_spectrum(env);
    // A(t) = exp(-t^2/4)  =>  S(Omega) = 2 sqrt(pi) exp(-Omega^2) under S = int A e^{+i w t} dt
    for (int k = 0; k < g.n_points; ++k) {
        const double w = spec.omega(k);
        if (std::abs(w) > 4.0) continue;
        const double expected = 2.0 * std::sqrt(pi) * std::exp(-w * w);
        REQUIRE(std::abs(spec.values(k) - std::complex<double>(expected, 0.0)) < 1e-10);
    }
}

TEST_CASE("transform round trip and Parseval") {
    const TimeGrid g(4096, 0.02);
    const SampledEnvelope env = make_gaussian(g, {.sigma_t = 1.0, .t0 = 2.0, .chirp_c2 = 0.8});

    const SampledSpectrum spec = to_spectrum(env);
    REQUIRE(rel(energy(spec), energy(env)) < 1e-12);

    const SampledEnvelope back = from_spectrum(spec);
    double worst = 0.0;
    for (int j = 0; j < g.n_points; ++j)
        worst = std::max(worst, std::abs(back.samples(j) - env.samples(j)));
    REQUIRE(worst < 1e-12);
}

TEST_CASE("moments of a transform-limited gaussian") {
    // long window: the spectral FWHM is read off the sampled spectrum by linear
    // interpolation, so d_omega has to be small for the 1e-4 pins below
    const TimeGrid g(16384, 0.02);
    const SampledEnvelope env = make_gaussian(g, {.sigma_t = 1.0});
    const EnvelopeMoments m = measure_moments(env);

    REQUIRE(rel(m.delta_t, 1.0) < 1e-9);
    REQUIRE(rel(m.delta_omega, 0.5) < 1e-9);  // uncertainty product floor: 1/(2 sigma_t)
    REQUIRE(std::abs(m.t_mean) < 1e-12);
    REQUIRE(rel(m.fwhm_t, fwhm_per_sigma) < 1e-4);
    REQUIRE(rel(m.fwhm_omega, fwhm_per_sigma * 0.5) < 1e-4);
    REQUIRE(rel(m.energy, std::sqrt(two_pi)) < 1e-10);  // int exp(-t^2/2) dt
}

TEST_CASE("moments of a chirped gaussian widen the spectrum only") {
    const TimeGrid g(4096, 0.02);
    const double c2 = 2.0;
    const SampledEnvelope env = make_gaussian(g, {.sigma_t = 1.0, .chirp_c2 = c2});
    const EnvelopeMoments m = measure_moments(env);

    REQUIRE(rel(m.delta_t, 1.0) < 1e-9);
    // Delta_w^2 = 1/(4 sigma^2) + c2^2 sigma^2
    REQUIRE(rel(m.delta_omega, std::sqrt(0.25 + c2 * c2)) < 1e-9);
    REQUIRE(rel(residual_chirp(env), c2) < 1e-9);
}

TEST_CASE("two well-separated gaussians carry Delta t = sqrt(17)") {
    const TimeGrid g(4096, 0.02);
    const SampledEnvelope env = double_gaussian(g, 4.0);
    const EnvelopeMoments m = measure_moments(env);
    // mixture variance sigma^2 + t0^2 = 1 + 16, up to the e^{-8} lobe overlap
    REQUIRE(rel(m.delta_t, std::sqrt(17.0)) < 1e-3);
}

TEST_CASE("pulse construction guards") {
    REQUIRE_THROWS_AS(make_gaussian(TimeGrid(256, 0.02), {.sigma_t = 1.0}), WindowTooSmall);
    REQUIRE_THROWS_AS(make_gaussian(TimeGrid(1024, 0.05), {.sigma_t = 1.0, .t0 = 20.0}),
                      WindowTooSmall);
    REQUIRE_THROWS_AS(make_gaussian(TimeGrid(1024, 0.5), {.sigma_t = 2.0, .chirp_c2 = 50.0}),
                      AliasingRisk);
    REQUIRE_THROWS_AS(make_gaussian(TimeGrid(4096, 0.02), {.sigma_t = -1.0}), InvalidGrid);
}

TEST_CASE("zero envelope has no moments and no phase fit") {
    const TimeGrid g(256, 0.1);
    const SampledEnvelope zero{g, Eigen::VectorXcd::Zero(g.n_points)};
    REQUIRE_THROWS_AS(measure_moments(zero), ZeroEnergy);
    REQUIRE_THROWS_AS(residual_chirp(zero), ZeroEnergy);
}

TEST_CASE("relative L2 distance ignores a global phase") {
    const TimeGrid g(1024, 0.05);
    const SampledEnvelope a = make_gaussian(g, {.sigma_t = 1.0});
    SampledEnvelope b = a;
    b.samples *= std::polar(1.0, 0.7);
    REQUIRE(relative_l2_mod_phase(a, b) < 1e-12);

    SampledEnvelope c = make_gaussian(g, {.sigma_t = 1.0, .chirp_c2 = 1.0});
    REQUIRE(relative_l2_mod_phase(a, c) > 0.1);  // a real shape change is not hidden
}

TEST_CASE("resampling onto a shifted finer grid reproduces the analytic pulse") {
    const TimeGrid src(2048, 0.02);
    const SampledEnvelope env = make_gaussian(src, {.sigma_t = 1.0});
    const TimeGrid dst(1024, 0.017, 0.3);
    const SampledEnvelope out = resample(env, dst);

    double worst = 0.0;
    for (int j = 0; j < dst.n_points; ++j) {
        const double t = dst.t(j);
        worst = std::max(worst, std::abs(out.samples(j) - std::complex<double>(
                                             std::exp(-t * t / 4.0), 0.0)));
    }
    REQUIRE(worst < 1e-5);
}

TEST_CASE("inner product of an envelope with itself is its energy") {
    const TimeGrid g(1024, 0.05);
    const SampledEnvelope a = make_gaussian(g, {.sigma_t = 1.0, .chirp_c2 = 0.4});
    const complexd ip = inner_product(a, a);
    REQUIRE(rel(ip.real(), energy(a)) < 1e-12);
    REQUIRE(std::abs(ip.imag()) < 1e-12);
}
