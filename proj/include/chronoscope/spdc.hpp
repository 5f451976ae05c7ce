#ifndef CHRONOSCOPE_SPDC_HPP
#define CHRONOSCOPE_SPDC_HPP

// Collinear type-II SPDC in a uniaxial crystal: Sellmeier dispersion, phase-matching
// angle search, and joint spectral amplitudes (exact sinc form and the separable
// Gaussian approximation).
//
// Frequency bookkeeping: the pair photons are described by detunings (Omega, Omega')
// from the common degenerate carrier omega_p/2; Omega belongs to the ordinary (o)
// photon, Omega' to the extraordinary (e) photon. Wavenumbers k are in rad/mm, group
// slownesses k' in ps/mm, crystal length in mm.
//
// Phase bookkeeping: the post-crystal JSA acquires propagation phases
// exp(i[k_mu(Omega) - k_mu0]L) whose linear parts k_mu' Omega L are steep delays
// (~25 ps) that no practical grid can sample. Stored values therefore carry only the
// *reduced* phases exp(i[k_mu(Omega) - k_mu0 - k_mu' Omega]L); the linear parts are
// kept as the constants kp_l/ko_l/ke_l and reinstated analytically where they matter
// (interference delay bookkeeping in the hom module).

#include <cmath>
#include <complex>
#include <fstream>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "chronoscope/errors.hpp"
#include "chronoscope/units.hpp"

namespace chronoscope {

// ---- Sellmeier dispersion --------------------------------------------------------

// n^2(lambda) = a + b/(lambda^2 - c) + d*lambda^2/(lambda^2 - e), lambda in um
struct SellmeierTerms {
    double a = 0, b = 0, c = 0, d = 0, e = 0;

    double n_squared(double lambda_um) const {
        const double l2 = lambda_um * lambda_um;
        return a + b / (l2 - c) + d * l2 / (l2 - e);
    }
};

struct UniaxialCrystal {
    std::string name;
    SellmeierTerms ordinary;
    SellmeierTerms extraordinary;  // principal value, field along the optic axis
    double lambda_min_nm = 0;
    double lambda_max_nm = 0;
    std::string provenance;  // literature source of the coefficients

    void check_range(double lambda_nm) const {
        if (!(lambda_nm >= lambda_min_nm && lambda_nm <= lambda_max_nm))
            throw OutOfRangeWavelength(name + ": " + std::to_string(lambda_nm) +
                                       " nm outside Sellmeier validity [" +
                                       std::to_string(lambda_min_nm) + ", " +
                                       std::to_string(lambda_max_nm) + "] nm");
    }

    double index_o(double lambda_nm) const {
        check_range(lambda_nm);
        return std::sqrt(ordinary.n_squared(lambda_nm * 1e-3));
    }

    double index_e_principal(double lambda_nm) const {
        check_range(lambda_nm);
        return std::sqrt(extraordinary.n_squared(lambda_nm * 1e-3));
    }

    // extraordinary wave at angle theta to the optic axis:
    // 1/n^2(theta) = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2
    double index_e(double theta_rad, double lambda_nm) const {
        check_range(lambda_nm);
        const double no2 = ordinary.n_squared(lambda_nm * 1e-3);
        const double ne2 = extraordinary.n_squared(lambda_nm * 1e-3);
        const double ct = std::cos(theta_rad), st = std::sin(theta_rad);
        return 1.0 / std::sqrt(ct * ct / no2 + st * st / ne2);
    }
};

// KDP (potassium dihydrogen phosphate) per Zernike, J. Opt. Soc. Am. 54, 1215 (1964).
// data/kdp.json mirrors these numbers; the builtin avoids a file dependency for
// library users. Correctness is pinned by observable tests (phase-matching angle,
// group-velocity walk-off), not by trusting transcription.
inline UniaxialCrystal kdp() {
    UniaxialCrystal c;
    c.name = "KDP";
    c.ordinary = SellmeierTerms{2.259276, 0.01008956, 0.012942625, 13.00522, 400.0};
    c.extraordinary = SellmeierTerms{2.132668, 0.008637494, 0.012281043, 3.2279924, 400.0};
    c.lambda_min_nm = 200.0;
    c.lambda_max_nm = 1500.0;
    c.provenance =
        "F. Zernike, \"Refractive indices of ammonium dihydrogen phosphate and "
        "potassium dihydrogen phosphate between 2000 A and 1.5 um\", "
        "J. Opt. Soc. Am. 54, 1215 (1964)";
    return c;
}

// I/O-boundary convenience: polarization as a character, angle in degrees.
// For 'e', theta_deg = 90 gives the principal n_e and theta_deg = 0 recovers n_o.
inline double refractive_index(const UniaxialCrystal& crystal, char polarization,
                               double lambda_nm, double theta_deg = 90.0) {
    if (polarization == 'o') return crystal.index_o(lambda_nm);
    if (polarization == 'e') return crystal.index_e(deg_to_rad(theta_deg), lambda_nm);
    throw ConfigParseError(std::string("polarization must be 'o' or 'e', got '") +
                           polarization + "'");
}

inline nlohmann::json to_json(const SellmeierTerms& s) {
    return {{"a", s.a}, {"b", s.b}, {"c_um2", s.c}, {"d", s.d}, {"e_um2", s.e}};
}

inline nlohmann::json to_json(const UniaxialCrystal& c) {
    return {{"name", c.name},
            {"form", "n^2 = a + b/(L2 - c_um2) + d*L2/(L2 - e_um2), L2 = lambda_um^2"},
            {"ordinary", to_json(c.ordinary)},
            {"extraordinary", to_json(c.extraordinary)},
            {"lambda_min_nm", c.lambda_min_nm},
            {"lambda_max_nm", c.lambda_max_nm},
            {"provenance", c.provenance}};
}

inline SellmeierTerms sellmeier_from_json(const nlohmann::json& j) {
    try {
        return SellmeierTerms{j.at("a").get<double>(), j.at("b").get<double>(),
                              j.at("c_um2").get<double>(), j.at("d").get<double>(),
                              j.at("e_um2").get<double>()};
    } catch (const nlohmann::json::exception& e) {
        throw ConfigParseError(std::string("bad Sellmeier coefficient set: ") + e.what());
    }
}

inline UniaxialCrystal crystal_from_json(const nlohmann::json& j) {
    try {
        UniaxialCrystal c;
        c.name = j.at("name").get<std::string>();
        c.ordinary = sellmeier_from_json(j.at("ordinary"));
        c.extraordinary = sellmeier_from_json(j.at("extraordinary"));
        c.lambda_min_nm = j.at("lambda_min_nm").get<double>();
        c.lambda_max_nm = j.at("lambda_max_nm").get<double>();
        c.provenance = j.value("provenance", std::string{});
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigParseError(std::string("bad crystal description: ") + e.what());
    }
}

inline UniaxialCrystal load_crystal(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError("cannot open crystal file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigParseError(path + ": " + e.what());
    }
    return crystal_from_json(j);
}

// ---- Phase matching --------------------------------------------------------------

enum class Wave { Pump, Ordinary, Extraordinary };

namespace detail {

// wave vector magnitude [rad/mm] at absolute frequency omega [rad/ps]; the pump and
// the extraordinary photon propagate at angle theta to the optic axis
inline double wavenumber(const UniaxialCrystal& c, Wave w, double theta_rad, double omega) {
    const double lambda_nm = wavelength_nm_of_omega(omega);
    const double n = (w == Wave::Ordinary) ? c.index_o(lambda_nm) : c.index_e(theta_rad, lambda_nm);
    return n * omega / c_nm_per_ps * 1e6;  // rad/nm -> rad/mm
}

}  // namespace detail

struct PhaseMatch {
    double theta_p_deg = 0;       // angle between propagation direction and optic axis
    double theta_p_rad = 0;
    double lambda_p_nm = 0;       // pump wavelength
    double lambda_s_nm = 0;       // degenerate signal wavelength, 2*lambda_p
    double length_mm = 0;         // crystal length L
    double tau_e_ps = 0;          // e-photon advance (k_p' - k_e')L/2
    double kp_prime = 0, ko_prime = 0, ke_prime = 0;     // group slowness [ps/mm]
    double kp_dprime = 0, ko_dprime = 0, ke_dprime = 0;  // GVD [ps^2/mm]
    double residual_mismatch = 0;  // |k_p0 - k_o0 - k_e0| at the solution [rad/mm]
};

// Solves collinear degenerate type-II phase matching k_p0 = k_o0 + k_e0 for the
// propagation angle by bisection; pump extraordinary at lambda_p, photons at
// 2*lambda_p (one ordinary, one extraordinary). Group slopes by central finite
// differences with a halved-step consistency check.
inline PhaseMatch phase_matching_solve(const UniaxialCrystal& crystal, double lambda_p_nm,
                                       double length_mm) {
    const double omega_p = omega_of_wavelength_nm(lambda_p_nm);
    const double omega_s = omega_p / 2.0;

    auto mismatch = [&](double theta) {
        return detail::wavenumber(crystal, Wave::Pump, theta, omega_p) -
               detail::wavenumber(crystal, Wave::Ordinary, theta, omega_s) -
               detail::wavenumber(crystal, Wave::Extraordinary, theta, omega_s);
    };

    double lo = 0.0, hi = pi / 2.0;
    double f_lo = mismatch(lo), f_hi = mismatch(hi);
    if (f_lo * f_hi > 0.0)
        throw NoPhaseMatching(crystal.name + " at " + std::to_string(lambda_p_nm) +
                              " nm: mismatch has no sign change over theta in (0, 90) deg");
    while (hi - lo > 1e-10 * (pi / 2.0)) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = mismatch(mid);
        if (f_lo * f_mid <= 0.0) {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    const double theta_p = 0.5 * (lo + hi);

    // derivative of k(omega0 + W) at W = 0; h in rad/ps, verified against half step
    auto slope = [&](Wave w, double omega0) {
        auto k = [&](double domega) {
            return detail::wavenumber(crystal, w, theta_p, omega0 + domega);
        };
        const double h = 0.01;
        const double d1 = (k(h) - k(-h)) / (2.0 * h);
        const double d2 = (k(h / 2) - k(-h / 2)) / h;
        if (std::abs(d1 - d2) > 1e-6)
            throw NoPhaseMatching("group-slope finite difference failed verification: "
                                  "step-halving changed dk/dOmega by " +
                                  std::to_string(std::abs(d1 - d2)) + " ps/mm");
        return (4.0 * d2 - d1) / 3.0;  // Richardson extrapolation
    };
    auto curvature = [&](Wave w, double omega0) {
        auto k = [&](double domega) {
            return detail::wavenumber(crystal, w, theta_p, omega0 + domega);
        };
        const double h = 1.0;  // larger step: second difference amplifies rounding
        return (k(h) - 2.0 * k(0.0) + k(-h)) / (h * h);
    };

    PhaseMatch pm;
    pm.theta_p_rad = theta_p;
    pm.theta_p_deg = rad_to_deg(theta_p);
    pm.lambda_p_nm = lambda_p_nm;
    pm.lambda_s_nm = 2.0 * lambda_p_nm;
    pm.length_mm = length_mm;
    pm.kp_prime = slope(Wave::Pump, omega_p);
    pm.ko_prime = slope(Wave::Ordinary, omega_s);
    pm.ke_prime = slope(Wave::Extraordinary, omega_s);
    pm.kp_dprime = curvature(Wave::Pump, omega_p);
    pm.ko_dprime = curvature(Wave::Ordinary, omega_s);
    pm.ke_dprime = curvature(Wave::Extraordinary, omega_s);
    pm.tau_e_ps = (pm.kp_prime - pm.ke_prime) * length_mm / 2.0;
    pm.residual_mismatch = std::abs(mismatch(theta_p));
    return pm;
}

inline nlohmann::json to_json(const PhaseMatch& pm) {
    return {{"theta_p_deg", pm.theta_p_deg},
            {"lambda_p_nm", pm.lambda_p_nm},
            {"lambda_s_nm", pm.lambda_s_nm},
            {"length_mm", pm.length_mm},
            {"tau_e_ps", pm.tau_e_ps},
            {"kp_prime_ps_per_mm", pm.kp_prime},
            {"ko_prime_ps_per_mm", pm.ko_prime},
            {"ke_prime_ps_per_mm", pm.ke_prime},
            {"kp_dprime_ps2_per_mm", pm.kp_dprime},
            {"ko_dprime_ps2_per_mm", pm.ko_dprime},
            {"ke_dprime_ps2_per_mm", pm.ke_dprime},
            {"residual_mismatch_rad_per_mm", pm.residual_mismatch}};
}

// ---- Joint spectral amplitude ----------------------------------------------------

// width parameter of the Gaussian exp(-x^2/2 sigma_s^2) matching sinc(x) at half maximum
inline constexpr double sigma_sinc = 1.61;

struct SpdcGridSpec {
    int n_o = 512;             // samples along Omega (o photon)
    int n_e = 512;             // samples along Omega' (e photon)
    double span_sigma_o = 5.0;  // half-span in units of the o marginal width
    double span_sigma_e = 6.0;  // half-span in units of the e marginal width
};

struct SpdcConfig {
    UniaxialCrystal crystal = kdp();
    double lambda_p_nm = 415.0;
    double length_mm = 5.0;
    double pump_sigma = 19.0;  // Omega_p [rad/ps], Gaussian pump sqrt(2 ln2)/tau_p(FWHM)
    SpdcGridSpec grid;
    bool sidelobe_filter = true;   // super-Gaussian cut at the first sinc zeros
    double filter_order = 6.0;
};

enum class JsaKind { Exact, GaussianApprox };

inline const char* to_string(JsaKind k) {
    return k == JsaKind::Exact ? "exact" : "gaussian_approx";
}

struct JointSpectralAmplitude {
    Eigen::VectorXd omega_o;    // Omega axis [rad/ps]
    Eigen::VectorXd omega_e;    // Omega' axis [rad/ps]
    Eigen::MatrixXcd values;    // values(i,j) = J(omega_o[i], omega_e[j]); reduced phases
    JsaKind kind = JsaKind::GaussianApprox;
    double pump_sigma = 0;      // Omega_p [rad/ps]
    double tau_e_ps = 0;        // e-photon walk-off advance
    double k_design = 0;        // closed-form K = sigma_o/sigma_e this JSA was built for
    // group-delay constants k'L [ps] for interference bookkeeping (zero when the
    // JSA is synthetic and carries no crystal delays)
    double kp_l_ps = 0, ko_l_ps = 0, ke_l_ps = 0;

    double d_omega_o() const { return omega_o(1) - omega_o(0); }
    double d_omega_e() const { return omega_e(1) - omega_e(0); }
};

namespace detail {

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// trapezoid weight for index k on an n-point uniform axis, in units of the step
inline double trapezoid_weight(int k, int n) { return (k == 0 || k == n - 1) ? 0.5 : 1.0; }

inline void normalize_jsa(JointSpectralAmplitude& j) {
    const double dwo = j.d_omega_o(), dwe = j.d_omega_e();
    double total = 0.0;
    for (int i = 0; i < j.values.rows(); ++i)
        for (int k = 0; k < j.values.cols(); ++k)
            total += trapezoid_weight(i, static_cast<int>(j.values.rows())) *
                     trapezoid_weight(k, static_cast<int>(j.values.cols())) *
                     std::norm(j.values(i, k));
    total *= dwo * dwe;
    if (!(total > 0.0)) throw ZeroEnergy("JSA has zero norm");
    j.values /= std::sqrt(total);
}

}  // namespace detail

// Builds the JSA for the configured crystal and pump.
//
// exact: J = alpha(Omega+Omega') Phi(Omega,Omega') with the phase-matching function
// Phi = e^{i Delta L/2} sinc(Delta L/2), Delta = k_p(Omega+Omega') - k_o(Omega) -
// k_e(Omega'), all wavenumbers from the full Sellmeier curves; multiplied by the
// reduced output phases (see header comment). The optional sidelobe filter is a
// super-Gaussian in Omega' with half-transmission at the first sinc zeros.
//
// gaussian_approx: the separable form
//   J = alpha_0 e^{-Omega^2/4 Omega_p^2} e^{-tau_e^2 Omega'^2/2 sigma_s^2 + i tau_e Omega'},
// valid under linear crystal dispersion; its output phases are exactly the linear
// delays held in the k'L constants, so no reduced phase appears in the values.
inline JointSpectralAmplitude jsa(const SpdcConfig& cfg, JsaKind kind) {
    const PhaseMatch pm = phase_matching_solve(cfg.crystal, cfg.lambda_p_nm, cfg.length_mm);
    const double tau_e = pm.tau_e_ps;
    const double sigma_o = cfg.pump_sigma;
    const double sigma_e = sigma_sinc / (std::sqrt(2.0) * tau_e);

    const double span_o = cfg.grid.span_sigma_o * sigma_o;
    const double span_e = cfg.grid.span_sigma_e * sigma_e;
    if (span_o < 4.0 * cfg.pump_sigma)
        throw GridTooNarrow("Omega span " + std::to_string(span_o) +
                            " rad/ps < 4 pump widths");
    if (span_e < 4.0 * sigma_sinc / tau_e)
        throw GridTooNarrow("Omega' span " + std::to_string(span_e) +
                            " rad/ps < 4 sinc widths " + std::to_string(4.0 * sigma_sinc / tau_e));

    JointSpectralAmplitude j;
    j.kind = kind;
    j.pump_sigma = cfg.pump_sigma;
    j.tau_e_ps = tau_e;
    j.k_design = sigma_o / sigma_e;
    j.kp_l_ps = pm.kp_prime * cfg.length_mm;
    j.ko_l_ps = pm.ko_prime * cfg.length_mm;
    j.ke_l_ps = pm.ke_prime * cfg.length_mm;
    j.omega_o = Eigen::VectorXd::LinSpaced(cfg.grid.n_o, -span_o, span_o);
    j.omega_e = Eigen::VectorXd::LinSpaced(cfg.grid.n_e, -span_e, span_e);
    j.values.resize(cfg.grid.n_o, cfg.grid.n_e);

    const std::complex<double> im(0.0, 1.0);
    if (kind == JsaKind::GaussianApprox) {
        for (int a = 0; a < cfg.grid.n_o; ++a) {
            const double wo = j.omega_o(a);
            const double pump = std::exp(-wo * wo / (4.0 * sigma_o * sigma_o));
            for (int b = 0; b < cfg.grid.n_e; ++b) {
                const double we = j.omega_e(b);
                j.values(a, b) = pump *
                                 std::exp(-tau_e * tau_e * we * we /
                                          (2.0 * sigma_sinc * sigma_sinc)) *
                                 std::exp(im * (tau_e * we));
            }
        }
    } else {
        const double omega_p0 = omega_of_wavelength_nm(cfg.lambda_p_nm);
        const double omega_s0 = omega_p0 / 2.0;
        const double L = cfg.length_mm;
        const double theta = pm.theta_p_rad;
        const double kp0 = detail::wavenumber(cfg.crystal, Wave::Pump, theta, omega_p0);
        const double ko0 = detail::wavenumber(cfg.crystal, Wave::Ordinary, theta, omega_s0);
        const double ke0 = detail::wavenumber(cfg.crystal, Wave::Extraordinary, theta, omega_s0);

        // per-axis photon wavenumbers and reduced output phases
        Eigen::VectorXd ko_ax(cfg.grid.n_o), red_o(cfg.grid.n_o);
        for (int a = 0; a < cfg.grid.n_o; ++a) {
            const double wo = j.omega_o(a);
            ko_ax(a) = detail::wavenumber(cfg.crystal, Wave::Ordinary, theta, omega_s0 + wo);
            red_o(a) = (ko_ax(a) - ko0 - pm.ko_prime * wo) * L;
        }
        Eigen::VectorXd ke_ax(cfg.grid.n_e), red_e(cfg.grid.n_e), filt(cfg.grid.n_e);
        for (int b = 0; b < cfg.grid.n_e; ++b) {
            const double we = j.omega_e(b);
            ke_ax(b) = detail::wavenumber(cfg.crystal, Wave::Extraordinary, theta, omega_s0 + we);
            red_e(b) = (ke_ax(b) - ke0 - pm.ke_prime * we) * L;
            filt(b) = cfg.sidelobe_filter
                          ? std::exp(-std::log(2.0) *
                                     std::pow(std::abs(we) * tau_e / pi, cfg.filter_order))
                          : 1.0;
        }

        for (int a = 0; a < cfg.grid.n_o; ++a) {
            const double wo = j.omega_o(a);
            for (int b = 0; b < cfg.grid.n_e; ++b) {
                const double we = j.omega_e(b);
                const double s = wo + we;
                const double kp = detail::wavenumber(cfg.crystal, Wave::Pump, theta, omega_p0 + s);
                const double half_mismatch = (kp - ko_ax(a) - ke_ax(b)) * L / 2.0;
                const double alpha = std::exp(-s * s / (4.0 * sigma_o * sigma_o));
                j.values(a, b) = alpha * detail::sinc(half_mismatch) * filt(b) *
                                 std::exp(im * (half_mismatch + red_o(a) + red_e(b)));
            }
        }
    }
    detail::normalize_jsa(j);
    return j;
}

// Synthetic separable Gaussian JSA with marginal widths sigma_o = omega_p and
// sigma_e = omega_p/K and no crystal delay phases; the closed-form interference
// predictions hold exactly for it, which makes it the reference for numeric tests.
inline JointSpectralAmplitude gaussian_jsa(double k_ratio, double omega_p, int n = 512,
                                           double span_sigma = 5.0) {
    if (!(k_ratio > 0.0) || !(omega_p > 0.0))
        throw ConfigParseError("gaussian_jsa needs K > 0 and Omega_p > 0");
    JointSpectralAmplitude j;
    j.kind = JsaKind::GaussianApprox;
    j.pump_sigma = omega_p;
    j.tau_e_ps = 0.0;
    j.k_design = k_ratio;
    const double sigma_e = omega_p / k_ratio;
    j.omega_o = Eigen::VectorXd::LinSpaced(n, -span_sigma * omega_p, span_sigma * omega_p);
    j.omega_e = Eigen::VectorXd::LinSpaced(n, -span_sigma * sigma_e, span_sigma * sigma_e);
    j.values.resize(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            j.values(a, b) = std::exp(-j.omega_o(a) * j.omega_o(a) / (4.0 * omega_p * omega_p) -
                                      j.omega_e(b) * j.omega_e(b) / (4.0 * sigma_e * sigma_e));
    detail::normalize_jsa(j);
    return j;
}

// ---- Marginals and photon durations ----------------------------------------------

struct PhotonMarginals {
    Eigen::VectorXd omega_o, s_o;  // marginal spectral densities, unit integral
    Eigen::VectorXd omega_e, s_e;
    double sigma_o_rms = 0, sigma_e_rms = 0;  // intensity-weighted standard deviations
    double fwhm_o = 0, fwhm_e = 0;            // interpolated FWHM of the marginals
    double sigma_o = 0, sigma_e = 0;          // Gaussian-equivalent widths FWHM/(2 sqrt(2 ln2))
    double k = 0;                             // sigma_o / sigma_e (Gaussian-equivalent)
    double k_rms = 0;                         // sigma_o_rms / sigma_e_rms
    double delta_t_o = 0, delta_t_e = 0;      // photon duration std [ps]
    double fwhm_t_o = 0, fwhm_t_e = 0;        // Gaussian-equivalent temporal FWHM [ps]
};

namespace detail {

// interpolated full width at half maximum of a sampled nonnegative profile
inline double profile_fwhm(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    int peak = 0;
    double ymax = y.maxCoeff(&peak);
    if (!(ymax > 0.0)) throw ZeroEnergy("flat profile has no width");
    const double half = ymax / 2.0;
    double left = x(0), right = x(x.size() - 1);
    for (int i = peak; i > 0; --i)
        if (y(i - 1) < half) {
            left = x(i - 1) + (x(i) - x(i - 1)) * (half - y(i - 1)) / (y(i) - y(i - 1));
            break;
        }
    for (int i = peak; i < y.size() - 1; ++i)
        if (y(i + 1) < half) {
            right = x(i) + (x(i + 1) - x(i)) * (half - y(i)) / (y(i + 1) - y(i));
            break;
        }
    return right - left;
}

inline double profile_rms(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    double w = 0, m1 = 0, m2 = 0;
    for (int i = 0; i < x.size(); ++i) {
        w += y(i);
        m1 += y(i) * x(i);
        m2 += y(i) * x(i) * x(i);
    }
    if (!(w > 0.0)) throw ZeroEnergy("flat profile has no moments");
    m1 /= w;
    m2 /= w;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

// Duration std of one photon of the pair, from spectral derivatives of the JSA along
// that photon's axis: with psi(t) the conditional temporal amplitude at fixed partner
// frequency, Parseval gives  int t^2|psi|^2 dt = (1/2pi) int |dJ/dW|^2 dW  and
// int t|psi|^2 dt = (1/2pi) int Im(J* dJ/dW) dW, summed over the partner axis. This
// sidesteps an FFT whose time resolution the narrow spectral spans cannot support.
inline double duration_std_along(const Eigen::MatrixXcd& values, double step, bool along_cols) {
    const int n_fix = static_cast<int>(along_cols ? values.rows() : values.cols());
    const int n_var = static_cast<int>(along_cols ? values.cols() : values.rows());
    double w = 0, m1 = 0, m2 = 0;
    for (int f = 0; f < n_fix; ++f) {
        for (int v = 0; v < n_var; ++v) {
            const std::complex<double> J = along_cols ? values(f, v) : values(v, f);
            std::complex<double> dJ;
            if (v == 0)
                dJ = ((along_cols ? values(f, 1) : values(1, f)) - J) / step;
            else if (v == n_var - 1)
                dJ = (J - (along_cols ? values(f, v - 1) : values(v - 1, f))) / step;
            else
                dJ = ((along_cols ? values(f, v + 1) : values(v + 1, f)) -
                      (along_cols ? values(f, v - 1) : values(v - 1, f))) /
                     (2.0 * step);
            w += std::norm(J);
            m1 += std::imag(std::conj(J) * dJ);
            m2 += std::norm(dJ);
        }
    }
    if (!(w > 0.0)) throw ZeroEnergy("JSA has zero norm");
    m1 /= w;
    m2 /= w;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

}  // namespace detail

inline PhotonMarginals photon_marginals(const JointSpectralAmplitude& j) {
    const int no = static_cast<int>(j.values.rows());
    const int ne = static_cast<int>(j.values.cols());
    const double dwo = j.d_omega_o(), dwe = j.d_omega_e();

    PhotonMarginals m;
    m.omega_o = j.omega_o;
    m.omega_e = j.omega_e;
    m.s_o.resize(no);
    m.s_e = Eigen::VectorXd::Zero(ne);
    for (int a = 0; a < no; ++a) {
        double row = 0;
        for (int b = 0; b < ne; ++b) {
            const double p = std::norm(j.values(a, b));
            row += detail::trapezoid_weight(b, ne) * p;
            m.s_e(b) += detail::trapezoid_weight(a, no) * p;
        }
        m.s_o(a) = row * dwe;
    }
    m.s_e *= dwo;

    m.sigma_o_rms = detail::profile_rms(m.omega_o, m.s_o);
    m.sigma_e_rms = detail::profile_rms(m.omega_e, m.s_e);
    m.fwhm_o = detail::profile_fwhm(m.omega_o, m.s_o);
    m.fwhm_e = detail::profile_fwhm(m.omega_e, m.s_e);
    m.sigma_o = m.fwhm_o / fwhm_per_sigma;
    m.sigma_e = m.fwhm_e / fwhm_per_sigma;
    m.k = m.sigma_o / m.sigma_e;
    m.k_rms = m.sigma_o_rms / m.sigma_e_rms;

    if (j.kind == JsaKind::GaussianApprox) {
        // reciprocal closed forms of the separable Gaussian model
        m.delta_t_o = 1.0 / (2.0 * m.sigma_o);
        m.delta_t_e = 1.0 / (2.0 * m.sigma_e);
    } else {
        m.delta_t_o = detail::duration_std_along(j.values, dwo, /*along_cols=*/false);
        m.delta_t_e = detail::duration_std_along(j.values, dwe, /*along_cols=*/true);
    }
    m.fwhm_t_o = fwhm_per_sigma * m.delta_t_o;
    m.fwhm_t_e = fwhm_per_sigma * m.delta_t_e;
    return m;
}

}  // namespace chronoscope

#endif
