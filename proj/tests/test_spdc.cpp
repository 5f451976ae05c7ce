#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <chronoscope/spdc.hpp>
#include <chronoscope/units.hpp>

using namespace chronoscope;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("KDP Sellmeier indices at the working wavelengths") {
    const UniaxialCrystal c = kdp();
    REQUIRE(c.name == "KDP");
    REQUIRE(c.provenance.find("Zernike") != std::string::npos);

    // regression pins computed from the published coefficient sets
    REQUIRE(rel(refractive_index(c, 'o', 830.0), 1.50059) < 1e-4);
    REQUIRE(rel(refractive_index(c, 'e', 830.0), 1.46283) < 1e-4);
    REQUIRE(rel(refractive_index(c, 'o', 415.0), 1.52218) < 1e-4);
    REQUIRE(rel(refractive_index(c, 'e', 415.0), 1.47827) < 1e-4);

    // ordinary index is monotone decreasing over the normal-dispersion window
    REQUIRE(refractive_index(c, 'o', 415.0) > refractive_index(c, 'o', 830.0));
}

TEST_CASE("extraordinary index interpolates between principal values with angle") {
    const UniaxialCrystal c = kdp();
    const double lambda = 830.0;
    const double n_o = c.index_o(lambda);
    const double n_e90 = c.index_e_principal(lambda);

    REQUIRE(std::abs(c.index_e(0.0, lambda) - n_o) < 1e-12);          // along the axis: o wave
    REQUIRE(std::abs(c.index_e(pi / 2.0, lambda) - n_e90) < 1e-12);   // orthogonal: principal
    const double n_mid = c.index_e(pi / 4.0, lambda);
    REQUIRE(n_mid < n_o);
    REQUIRE(n_mid > n_e90);
}

TEST_CASE("wavelength validity window is enforced") {
    const UniaxialCrystal c = kdp();
    REQUIRE_THROWS_AS(refractive_index(c, 'o', 150.0), OutOfRangeWavelength);
    REQUIRE_THROWS_AS(refractive_index(c, 'o', 1600.0), OutOfRangeWavelength);
    REQUIRE_NOTHROW(refractive_index(c, 'o', 200.0));
    REQUIRE_NOTHROW(refractive_index(c, 'o', 1500.0));
}

TEST_CASE("crystal JSON file matches the built-in definition") {
    const UniaxialCrystal file = load_crystal(std::string(CHRONOSCOPE_SOURCE_DIR) +
                                              "/data/kdp.json");
    REQUIRE(to_json(file) == to_json(kdp()));
    REQUIRE_THROWS_AS(load_crystal("/nonexistent/crystal.json"), ConfigParseError);
}

TEST_CASE("degenerate type-II phase matching in KDP at 415 nm") {
    const PhaseMatch pm = phase_matching_solve(kdp(), 415.0, 5.0);

    REQUIRE(std::abs(pm.theta_p_deg - 67.8) < 0.2);
    REQUIRE(std::abs(pm.theta_p_deg - 67.7643) < 1e-3);  // regression pin
    REQUIRE(pm.lambda_s_nm == 830.0);
    REQUIRE(std::abs(pm.residual_mismatch) < 1e-6);  // rad/mm at the solved angle

    // e-photon walk-off advance tau_e = (k_p' - k_e') L / 2
    REQUIRE(std::abs(pm.tau_e_ps * 1e3 - 360.0) < 5.0);
    REQUIRE(std::abs(pm.tau_e_ps - 0.361064) < 1e-4);  // regression pin
    REQUIRE(std::abs(pm.tau_e_ps - (pm.kp_prime - pm.ke_prime) * 5.0 / 2.0) < 1e-12);

    // asymmetric group-velocity matching: pump and o photon co-propagate
    REQUIRE(std::abs(pm.kp_prime - pm.ko_prime) / pm.kp_prime < 1e-3);

    // slownesses are positive and ordered (e travels fastest)
    REQUIRE(pm.ke_prime > 0.0);
    REQUIRE(pm.ke_prime < pm.ko_prime);
}

TEST_CASE("phase matching refuses out-of-range pumps") {
    REQUIRE_THROWS_AS(phase_matching_solve(kdp(), 150.0, 5.0), Error);
    // 900 nm pump puts the 1800 nm daughters outside the Sellmeier window
    REQUIRE_THROWS_AS(phase_matching_solve(kdp(), 900.0, 5.0), OutOfRangeWavelength);
}

TEST_CASE("gaussian-approx JSA is exactly separable") {
    SpdcConfig cfg;
    const JointSpectralAmplitude j = jsa(cfg, JsaKind::GaussianApprox);

    // J(w, w') f(0,0) = J(w, 0) J(0, w') for a rank-1 amplitude
    const int no = static_cast<int>(j.values.rows()), ne = static_cast<int>(j.values.cols());
    const std::complex<double> center = j.values(no / 2, ne / 2);
    double worst = 0.0;
    for (int i = no / 4; i < 3 * no / 4; i += 7)
        for (int k = ne / 4; k < 3 * ne / 4; k += 7) {
            const std::complex<double> lhs = j.values(i, k) * center;
            const std::complex<double> rhs = j.values(i, ne / 2) * j.values(no / 2, k);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    REQUIRE(worst < 1e-10 * std::abs(center * center));
}

TEST_CASE("gaussian-approx marginals reproduce the design widths") {
    SpdcConfig cfg;
    const JointSpectralAmplitude j = jsa(cfg, JsaKind::GaussianApprox);
    const PhotonMarginals m = photon_marginals(j);

    REQUIRE(rel(m.sigma_o, 19.0) < 0.02);
    REQUIRE(rel(m.sigma_e, 3.1527) < 0.02);
    REQUIRE(rel(m.k, 6.026) < 0.02);
    REQUIRE(rel(m.sigma_o_rms, cfg.pump_sigma) < 1e-3);  // gaussian o marginal: std = Omega_p
    REQUIRE(rel(m.k, j.k_design) < 1e-2);

    // photon durations: Delta t = 1/(2 sigma) for transform-limited gaussians
    REQUIRE(rel(m.delta_t_o * 1e3, 26.0) < 0.02);
    REQUIRE(rel(m.delta_t_e * 1e3, 158.0) < 0.02);
    REQUIRE(rel(m.fwhm_t_o * 1e3, 62.0) < 0.02);
    REQUIRE(rel(m.fwhm_t_e * 1e3, 373.0) < 0.02);
}

TEST_CASE("exact filtered JSA keeps K near the separable design value") {
    SpdcConfig cfg;
    const JointSpectralAmplitude j = jsa(cfg, JsaKind::Exact);
    const PhotonMarginals m = photon_marginals(j);

    REQUIRE(rel(m.k, 6.0) < 0.10);
    REQUIRE(rel(m.k, 5.9056) < 1e-2);  // regression pin at 512^2, spans 5/6, filter order 6

    // the sinc sidelobes push the raw second moment well above the filtered estimate
    REQUIRE(m.k_rms > m.k);
}

TEST_CASE("sidelobe filter sharpens the e marginal, barely moves the o marginal") {
    SpdcConfig with;
    SpdcConfig without;
    without.sidelobe_filter = false;
    const PhotonMarginals m_with = photon_marginals(jsa(with, JsaKind::Exact));
    const PhotonMarginals m_without = photon_marginals(jsa(without, JsaKind::Exact));
    REQUIRE(m_with.sigma_e_rms < m_without.sigma_e_rms);
    // the filter acts along the e axis, but the pump correlation couples the axes,
    // so the o marginal picks up a ~1% secondary shift rather than none at all
    REQUIRE(rel(m_with.sigma_o_rms, m_without.sigma_o_rms) < 2e-2);
}

TEST_CASE("JSA normalization: unit L2 norm on its grid") {
    SpdcConfig cfg;
    for (const JsaKind kind : {JsaKind::GaussianApprox, JsaKind::Exact}) {
        const JointSpectralAmplitude j = jsa(cfg, kind);
        double total = 0.0;
        for (int i = 0; i < j.values.rows(); ++i)
            for (int k = 0; k < j.values.cols(); ++k) {
                const double wi = (i == 0 || i == j.values.rows() - 1) ? 0.5 : 1.0;
                const double wk = (k == 0 || k == j.values.cols() - 1) ? 0.5 : 1.0;
                total += wi * wk * std::norm(j.values(i, k));
            }
        total *= j.d_omega_o() * j.d_omega_e();
        REQUIRE(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("grid spans below the priors are refused") {
    SpdcConfig narrow_o;
    narrow_o.grid.span_sigma_o = 3.0;  // < 4 pump widths
    REQUIRE_THROWS_AS(jsa(narrow_o, JsaKind::Exact), GridTooNarrow);

    SpdcConfig narrow_e;
    narrow_e.grid.span_sigma_e = 5.0;  // < 4 sinc widths = 4 sqrt(2) sigma_e
    REQUIRE_THROWS_AS(jsa(narrow_e, JsaKind::Exact), GridTooNarrow);
}

TEST_CASE("synthetic gaussian JSA has the requested width ratio") {
    const JointSpectralAmplitude j = gaussian_jsa(6.0, 19.0);
    const PhotonMarginals m = photon_marginals(j);
    REQUIRE(rel(m.k, 6.0) < 1e-2);
    REQUIRE(j.tau_e_ps == 0.0);
    REQUIRE(j.ko_l_ps == 0.0);  // synthetic source carries no crystal delays
    REQUIRE_THROWS_AS(gaussian_jsa(-1.0, 19.0), ConfigParseError);
}
