#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <chronoscope/elements.hpp>
#include <chronoscope/units.hpp>

using namespace chronoscope;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double max_abs_diff(const SampledEnvelope& a, const SampledEnvelope& b) {
    return (a.samples - b.samples).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("dispersion composes additively and inverts exactly") {
    const TimeGrid g(4096, 0.02);
    const SampledEnvelope in = make_gaussian(g, {.sigma_t = 1.0});

    const SampledEnvelope split =
        apply_dispersion(apply_dispersion(in, {.gdd_ps2 = 3.7}), {.gdd_ps2 = 2.3});
    const SampledEnvelope whole = apply_dispersion(in, {.gdd_ps2 = 6.0});
    REQUIRE(max_abs_diff(split, whole) < 1e-12);

    const SampledEnvelope there_and_back =
        apply_dispersion(apply_dispersion(in, {.gdd_ps2 = 5.0}), {.gdd_ps2 = -5.0});
    REQUIRE(max_abs_diff(there_and_back, in) < 1e-12);

    REQUIRE(std::abs(energy(whole) - energy(in)) < 1e-12 * energy(in));
}

TEST_CASE("dispersed gaussian: analytic width and residual chirp") {
    const TimeGrid g(4096, 0.02);
    const SampledEnvelope in = make_gaussian(g, {.sigma_t = 1.0});
    const double d = 10.0;
    const SampledEnvelope out = apply_dispersion(in, {.gdd_ps2 = d});
    const EnvelopeMoments m = measure_moments(out);

    // Delta t^2 = sigma^2 + D^2/(4 sigma^2); c2 = -D/(4 sigma^4 + D^2)
    REQUIRE(std::abs(m.delta_t - std::sqrt(26.0)) < 1e-6);
    REQUIRE(std::abs(residual_chirp(out) - (-d / (4.0 + d * d))) < 1e-9);
}

TEST_CASE("dispersion equals the Fresnel kernel quadrature") {
    const TimeGrid g(4096, 0.02);
    const SampledEnvelope in = make_gaussian(g, {.sigma_t = 1.0});
    const double d = 3.0;
    const SampledEnvelope out = apply_dispersion(in, {.gdd_ps2 = d});

    // A_out(t) = sqrt(i/(2 pi D)) int A_in(t') exp(-i (t-t')^2 / (2 D)) dt'
    const std::complex<double> front =
        std::polar(1.0 / std::sqrt(two_pi * d), pi / 4.0);
    for (const double t : {-2.0, 0.0, 1.5, 4.0}) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < g.n_points; ++j) {
            const double tp = g.t(j);
            const double w = (j == 0 || j == g.n_points - 1) ? 0.5 : 1.0;
            acc += w * in.samples(j) * std::polar(1.0, -(t - tp) * (t - tp) / (2.0 * d));
        }
        acc *= front * g.dt;
        const int jt = static_cast<int>(std::lround((t - g.t(0)) / g.dt));
        REQUIRE(g.t(jt) == Catch::Approx(t).margin(1e-12));
        REQUIRE(std::abs(out.samples(jt) - acc) < 1e-6);
    }
}

TEST_CASE("ideal lens imprints exp(i t^2 / (2 D_f)) and nothing else") {
    const TimeGrid g(1024, 0.05);
    const SampledEnvelope in = make_gaussian(g, {.sigma_t = 1.0});
    const double d_f = 4.0;
    const SampledEnvelope out = apply_time_lens(in, IdealTimeLens(d_f));
    for (int j = 0; j < g.n_points; j += 37) {
        const double t = g.t(j);
        const std::complex<double> expected =
            in.samples(j) * std::polar(1.0, t * t / (2.0 * d_f));
        REQUIRE(std::abs(out.samples(j) - expected) < 1e-14);
    }
    REQUIRE_THROWS_AS(IdealTimeLens(0.0), InvalidLens);
}

TEST_CASE("fresnel lens clips the stated energy fraction outside its aperture") {
    const TimeGrid g(4096, 0.02);
    const SampledEnvelope in = make_gaussian(g, {.sigma_t = 1.0});

    // aperture T_A = |D_f| w_m = 2 ps around the centroid: P(|t| > 1) = 2 Phi(-1)
    const FresnelLensResult narrow = apply_time_lens(in, FresnelTimeLens(4.0, 0.5));
    // outside the record length the modulator imparts nothing: the tail passes
    // through unmodified (lost to the image, not absorbed), so energy is conserved
    REQUIRE(rel(energy(narrow.env), energy(in)) < 1e-12);
    const int far = static_cast<int>(std::lround((3.0 - g.t(0)) / g.dt));  // t = +3 ps
    REQUIRE(narrow.env.samples(far) == in.samples(far));
    // against the continuum tail integral the hard edge lands on a sample, so one
    // sample weight (dt * pdf(1) = 4.8e-3) separates the discrete sum from erfc
    const double outside = 2.0 * 0.5 * std::erfc(1.0 / std::sqrt(2.0));
    REQUIRE(std::abs(narrow.aperture_clip_fraction - outside) < 6e-3);

    const FresnelLensResult wide = apply_time_lens(in, FresnelTimeLens(4.0, 1e4));
    REQUIRE(wide.aperture_clip_fraction == 0.0);
    const SampledEnvelope ideal = apply_time_lens(in, IdealTimeLens(4.0));
    REQUIRE(max_abs_diff(wide.env, ideal) < 1e-12);

    // phase slope at the aperture edge beyond Nyquist must refuse, not alias
    REQUIRE_THROWS_AS(apply_time_lens(in, FresnelTimeLens(0.05, 1e6)), AliasingRisk);
    REQUIRE_THROWS_AS(FresnelTimeLens(4.0, -1.0), InvalidLens);
}

TEST_CASE("single-lens imaging: analytic map agrees with the numeric chain") {
    const TimeGrid g(8192, 0.02);
    const SampledEnvelope in = make_gaussian(g, {.sigma_t = 1.0});
    const double d_f = 2.0;

    for (const double m : {-3.0, -1.0, -1.0 / 3.0}) {
        // imaging condition 1/D_in + 1/D_out = 1/D_f with m = -D_out/D_in
        const double d_in = d_f * (1.0 - 1.0 / m);
        const double d_out = d_f * (1.0 - m);

        const SingleLensImage predicted = single_lens_image_analytic(in, d_in, d_f);
        REQUIRE(std::abs(predicted.magnification - m) < 1e-12);
        REQUIRE(std::abs(predicted.output_gdd_ps2 - d_out) < 1e-12);

        const ElementChain chain{DispersiveMedium{d_in}, IdealTimeLens(d_f),
                                 DispersiveMedium{d_out}};
        const SampledEnvelope numeric = propagate_chain(in, chain).env;
        const SampledEnvelope expected = resample(predicted.env, g);
        REQUIRE(relative_l2_mod_phase(numeric, expected) < 1e-3);
    }

    REQUIRE_THROWS_AS(single_lens_image_analytic(in, 0.0, d_f), ZeroInputGDD);
    REQUIRE_THROWS_AS(single_lens_image_analytic(in, d_f, d_f), FocalDegeneracy);
}

TEST_CASE("chain propagation reports one stage per element") {
    const TimeGrid g(4096, 0.02);
    const SampledEnvelope in = make_gaussian(g, {.sigma_t = 1.0});
    const ElementChain chain{IdealTimeLens(4.0), DispersiveMedium{2.0}, IdealTimeLens(-2.0),
                             DispersiveMedium{-1.0}};
    const ChainResult result = propagate_chain(in, chain);

    REQUIRE(result.stages.size() == 4);
    REQUIRE(result.stages[0].kind == "lens");
    REQUIRE(result.stages[1].kind == "dispersion");
    REQUIRE(result.stages[2].kind == "lens");
    REQUIRE(result.stages[3].kind == "dispersion");
    for (const StageReport& st : result.stages)
        REQUIRE(std::abs(st.energy - energy(in)) < 1e-10 * energy(in));
}

TEST_CASE("chain errors carry the failing stage in the message") {
    const TimeGrid g(4096, 0.02);
    const SampledEnvelope in = make_gaussian(g, {.sigma_t = 1.0});
    const ElementChain chain{DispersiveMedium{1.0}, FresnelTimeLens(0.05, 1e6)};
    try {
        propagate_chain(in, chain);
        FAIL("expected AliasingRisk from stage 1");
    } catch (const Error& e) {
        REQUIRE(e.kind() == "AliasingRisk");
        REQUIRE(std::string(e.what()).find("stage 1") != std::string::npos);
    }
}

TEST_CASE("chain JSON round trip and parse errors") {
    const ElementChain chain{DispersiveMedium{2.5}, IdealTimeLens(4.0), FresnelTimeLens(4.0, 0.5),
                             DispersiveMedium{-1.0}};
    const nlohmann::json j = chain_to_json(chain);
    const ElementChain back = chain_from_json(j);
    REQUIRE(chain_to_json(back) == j);

    REQUIRE_THROWS_AS(chain_from_json(nlohmann::json{{"kind", "dispersion"}}), ConfigParseError);
    REQUIRE_THROWS_AS(chain_from_json(nlohmann::json::array({{{"kind", "prism"}}})),
                      ConfigParseError);
    REQUIRE_THROWS_AS(chain_from_json(nlohmann::json::array({{{"kind", "dispersion"}}})),
                      ConfigParseError);  // missing gdd_ps2
}
