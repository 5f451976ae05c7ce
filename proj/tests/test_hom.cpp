#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <chronoscope/hom.hpp>
#include <chronoscope/spdc.hpp>

using namespace chronoscope;

namespace {

Eigen::VectorXd linspace(double lo, double hi, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = lo + (hi - lo) * i / (n - 1);
    return v;
}

}  // namespace

TEST_CASE("closed-form SPDC interference probability") {
    // K = 6, M = 1, Omega_p = 19, zero delay: 2K/(K^2+1) = 12/37
    REQUIRE(p_int_spdc_analytic(6.0, 1.0, 19.0, 0.0) == 12.0 / 37.0);

    // matched magnification |M| = K compensates the width mismatch exactly
    REQUIRE(spdc_visibility(6.0, 6.0) == 1.0);
    REQUIRE(spdc_visibility(6.0, -6.0) == 1.0);
    REQUIRE(spdc_visibility(6.0, 1.0) == 12.0 / 37.0);

    // half-maximum point of the delay envelope: 2 Omega_p^2 dt^2 = (K^2+M^2) ln 2
    const double k = 6.0, m = 2.0, omega_p = 19.0;
    const double dt_half = std::sqrt((k * k + m * m) * std::log(2.0) / 2.0) / omega_p;
    REQUIRE(std::abs(p_int_spdc_analytic(k, m, omega_p, dt_half) -
                     0.5 * spdc_visibility(k, m)) < 1e-12);
}

TEST_CASE("magnification duality V(M) = V(K^2/M)") {
    const double k = 6.0;
    for (const double m : {0.5, 2.0, 3.0, -1.5, -9.0})
        REQUIRE(std::abs(spdc_visibility(k, m) - spdc_visibility(k, k * k / m)) < 1e-12);
}

TEST_CASE("numeric overlap on a synthetic gaussian JSA matches the closed form") {
    const double k = 6.0, omega_p = 19.0;
    const JointSpectralAmplitude j = gaussian_jsa(k, omega_p);
    const Eigen::VectorXd delays = linspace(-0.5, 0.5, 21);

    for (const double m : {1.0, 6.0, -6.0}) {
        const HomCurve curve = coincidence_curve(j, m, delays);
        REQUIRE(curve.t_d_ps == 0.0);  // no crystal delays to compensate
        for (int i = 0; i < delays.size(); ++i) {
            const double expected = p_int_spdc_analytic(k, m, omega_p, delays(i));
            if (expected > 1e-6)
                REQUIRE(std::abs(curve.p_int(i) - expected) / expected < 0.01);
            REQUIRE(curve.p_int(i) >= 0.0);
            REQUIRE(curve.p_int(i) <= 1.0);
            REQUIRE(std::abs(curve.normalized_rate(i) - (1.0 - curve.p_int(i))) < 1e-15);
        }
        REQUIRE(std::abs(curve.argmax_delay) < 0.06);  // dip centered at zero delay
    }
}

TEST_CASE("crystal JSA arm delay: formula and optimizer agree on the compensation") {
    SpdcConfig cfg;
    const JointSpectralAmplitude j = jsa(cfg, JsaKind::GaussianApprox);
    const Eigen::VectorXd delays = linspace(-0.2, 0.2, 9);
    const double m = 6.0;

    const HomCurve formula = coincidence_curve(j, m, delays, DelayMode::Formula);
    const HomCurve optimized = coincidence_curve(j, m, delays, DelayMode::Optimize);

    // t_d = ((2M-1) k_p' - k_e') L / 2 up to the tiny pump/o group-velocity residual
    REQUIRE(std::abs(formula.t_d_ps - t_d_formula(j, m)) < 1e-12);
    REQUIRE(std::abs(optimized.t_d_ps - formula.t_d_ps) < 5e-3);
    REQUIRE(optimized.visibility >= formula.visibility - 1e-9);

    // the compensated dip reaches the closed-form ceiling for this JSA's K
    const double expected = spdc_visibility(j.k_design, m);
    REQUIRE(std::abs(optimized.visibility - expected) < 1e-3);
}

TEST_CASE("exact crystal JSA reaches a deep dip at matched magnification") {
    SpdcConfig cfg;
    const JointSpectralAmplitude j = jsa(cfg, JsaKind::Exact);
    const Eigen::VectorXd delays = linspace(-0.1, 0.1, 5);
    const HomCurve curve = coincidence_curve(j, 6.0, delays, DelayMode::Optimize);
    REQUIRE(curve.visibility > 0.95);
    REQUIRE(std::abs(curve.visibility - 0.9766) < 0.01);  // regression pin at 512^2
}

TEST_CASE("emitter visibilities: closed forms") {
    // matched magnification M = tau2/tau1 gives a perfect dip
    REQUIRE(emitter_visibility(1.0, 3.0, 3.0) == 1.0);
    // time reversal cannot: the exponential tails never align
    REQUIRE(std::abs(emitter_visibility(1.0, 3.0, -3.0) - 4.0 * std::exp(-2.0)) < 1e-9);
    // degenerate branch has the same ceiling
    REQUIRE(std::abs(emitter_visibility(2.0, 2.0, -1.0) - 4.0 * std::exp(-2.0)) < 1e-9);

    for (const double ratio : {1.5, 2.0, 3.0, 10.0})
        REQUIRE(emitter_visibility(1.0, ratio, ratio) >
                emitter_visibility(1.0, ratio, -ratio));
}

TEST_CASE("emitter dip location") {
    REQUIRE(emitter_dip_delay(1.0, 3.0, 3.0) == 0.0);  // erecting dip sits at zero delay
    // |M| tau1 = tau2 is degenerate however it is reached, and peaks at 2 tau_2
    REQUIRE(std::abs(emitter_dip_delay(2.0, 2.0, -1.0) - 4.0) < 1e-12);
    REQUIRE(std::abs(emitter_dip_delay(1.0, 3.0, -3.0) - 6.0) < 1e-12);
    // general inverting case: 2 |M| tau1 tau2 ln(|M| tau1 / tau2) / (|M| tau1 - tau2)
    const double pred = emitter_dip_delay(1.0, 3.0, -9.0);
    REQUIRE(std::abs(pred - 9.0 * std::log(3.0)) < 1e-12);
    // and the analytic curve really peaks there
    const EmitterMode e1(1.0), e2(3.0);
    const double p_at = p_int_emitter(e1, e2, -9.0, pred);
    REQUIRE(p_at >= p_int_emitter(e1, e2, -9.0, pred * 0.98));
    REQUIRE(p_at >= p_int_emitter(e1, e2, -9.0, pred * 1.02));
}

TEST_CASE("numeric emitter overlap matches the analytic piecewise forms") {
    const EmitterMode e1(1.0), e2(3.0);
    for (const double m : {3.0, -3.0, 2.0, -0.5}) {
        for (const double delay : {-1.0, 0.0, 0.7, 2.0, 6.0}) {
            const double a = p_int_emitter(e1, e2, m, delay, EmitterOverlapMode::Analytic);
            const double n = p_int_emitter(e1, e2, m, delay, EmitterOverlapMode::Numeric);
            REQUIRE(std::abs(n - a) < 0.01 * std::max(a, 1e-3));
        }
    }

    // degenerate branch: |M| tau1 = tau2 exactly
    const EmitterMode d1(2.0), d2(2.0);
    for (const double delay : {0.5, 2.0, 4.0, 9.0}) {
        const double a = p_int_emitter(d1, d2, -1.0, delay, EmitterOverlapMode::Analytic);
        const double n = p_int_emitter(d1, d2, -1.0, delay, EmitterOverlapMode::Numeric);
        REQUIRE(std::abs(n - a) < 1e-3);
    }
}

TEST_CASE("emitter brightness cancels out of the normalized dip") {
    const EmitterMode bright1(1.0, 1.0), bright2(3.0, 1.0);
    const EmitterMode dim1(1.0, 0.3), dim2(3.0, 0.7);
    for (const double m : {2.0, -2.0})
        for (const double delay : {0.0, 0.5, 2.0, 7.0})
            REQUIRE(std::abs(p_int_emitter(dim1, dim2, m, delay) -
                             p_int_emitter(bright1, bright2, m, delay)) < 1e-12);

    REQUIRE_THROWS_AS(EmitterMode(-1.0), ConfigParseError);
    REQUIRE_THROWS_AS(EmitterMode(1.0, 1.5), ConfigParseError);
    REQUIRE_THROWS_AS(EmitterMode(1.0, 0.0), ConfigParseError);
}

TEST_CASE("emitter curves decay at large delay and stay in [0, 1]") {
    const EmitterMode e1(1.0), e2(3.0);
    const Eigen::VectorXd delays = linspace(-5.0, 40.0, 91);
    for (const double m : {3.0, -3.0}) {
        const HomCurve c = coincidence_curve(e1, e2, m, delays);
        for (int i = 0; i < delays.size(); ++i) {
            REQUIRE(c.p_int(i) >= 0.0);
            REQUIRE(c.p_int(i) <= 1.0);
        }
        REQUIRE(c.p_int(delays.size() - 1) < 1e-3);  // 40 ps >> all lifetimes
        REQUIRE(std::abs(c.dip_delay_ps - emitter_dip_delay(1.0, 3.0, m)) < 1e-12);
    }
}

TEST_CASE("visibility scans") {
    const std::vector<double> ms{-6.0, -3.0, -1.0, 0.5, 3.0, 6.0};
    const auto spdc = visibility_scan_spdc(6.0, 19.0, ms);
    REQUIRE(spdc.size() == ms.size());
    REQUIRE(std::abs(spdc[5].visibility - 1.0) < 1e-15);  // M = 6 = K

    const auto emitters = visibility_scan_emitter(1.0, 3.0, ms);
    REQUIRE(std::abs(emitters[4].visibility - 1.0) < 1e-15);  // M = 3 = tau2/tau1
    REQUIRE(emitters[1].visibility < 1.0);                    // M = -3 cannot reach unity

    REQUIRE_THROWS_AS(visibility_scan_spdc(6.0, 19.0, {}), ConfigParseError);
}
