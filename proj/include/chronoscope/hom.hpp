#ifndef CHRONOSCOPE_HOM_HPP
#define CHRONOSCOPE_HOM_HPP

// Hong-Ou-Mandel interference predictions for two source kinds:
//  (a) an SPDC pair whose ordinary photon passes through a time telescope of
//      magnification M before meeting the extraordinary photon on a beam splitter;
//  (b) two single-emitter photons (decaying-exponential modes) with the first
//      stretched by M.
//
// Everything is expressed through p_int(dtau), the conditional probability that both
// photons leave the same splitter port given a pair was generated; the coincidence
// rate is proportional to 1 - p_int and the visibility is max over delay of p_int.
//
// Delay bookkeeping for the SPDC path: the quadrature evaluates
//   p_int(dtau) = |M|/P_b * integral J(M W, W') J*(M W', W) e^{i(W-W') s} dW dW'
// with the total phase slope s = (dtau - t_d) + (M ko'L - ke'L). The second term
// reinstates the linear propagation phases that the stored JSA keeps as constants
// (see spdc.hpp); with the arm delay set to the design value
//   t_d = [(2M-1) kp' - ke'] L/2
// the slope cancels against the JSA's internal walk-off phase and the dip sits at
// dtau = 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chronoscope/errors.hpp"
#include "chronoscope/spdc.hpp"

namespace chronoscope {

// ---- SPDC pair: analytic (separable-Gaussian) predictions -------------------------

// p_int for the separable Gaussian JSA with marginal-width ratio K:
//   p_int(dtau) = 2K|M|/(K^2+M^2) * exp(-2 Omega_p^2 dtau^2 / (K^2+M^2))
inline double p_int_spdc_analytic(double k_ratio, double magnification, double omega_p,
                                  double delay) {
    if (!(k_ratio > 0.0)) throw ConfigParseError("K must be positive");
    if (magnification == 0.0) throw DegenerateMagnification("magnification must be nonzero");
    if (!(omega_p > 0.0)) throw ConfigParseError("Omega_p must be positive");
    const double k2m2 = k_ratio * k_ratio + magnification * magnification;
    return 2.0 * k_ratio * std::abs(magnification) / k2m2 *
           std::exp(-2.0 * omega_p * omega_p * delay * delay / k2m2);
}

inline double spdc_visibility(double k_ratio, double magnification) {
    if (magnification == 0.0) throw DegenerateMagnification("magnification must be nonzero");
    return 2.0 * k_ratio * std::abs(magnification) /
           (k_ratio * k_ratio + magnification * magnification);
}

// design arm delay maximizing interference, from the crystal group delays
inline double t_d_formula(const JointSpectralAmplitude& j, double magnification) {
    return ((2.0 * magnification - 1.0) * j.kp_l_ps - j.ke_l_ps) / 2.0;
}

// ---- SPDC pair: numeric quadrature -------------------------------------------------

enum class DelayMode { Formula, Optimize };

namespace detail {

// Symmetrized JSA product sampled on a dedicated square quadrature grid, with the
// delay-independent work (interpolation, weights) done once so a delay sweep costs one
// matrix-vector product per point.
struct SpdcOverlap {
    Eigen::MatrixXcd b;    // b(i,j) = w_i w_j J(M x_i, x_j) conj(J(M x_j, x_i))
    Eigen::VectorXd x;     // quadrature nodes
    double prefactor = 0;  // |M| h^2 / P_b

    // integral value at total phase slope s; real by the Hermitian symmetry of b
    double eval(double shift) const {
        const int n = static_cast<int>(x.size());
        Eigen::VectorXcd phase(n);
        for (int i = 0; i < n; ++i) phase(i) = std::polar(1.0, x(i) * shift);
        const std::complex<double> z = phase.transpose() * (b * phase.conjugate());
        if (std::abs(z.imag()) * prefactor > 1e-6)
            throw NonHermitianResult("interference integral has imaginary part " +
                                     std::to_string(z.imag() * prefactor));
        return z.real() * prefactor;
    }
};

inline std::complex<double> bilinear_jsa(const JointSpectralAmplitude& j, double wo, double we) {
    const double uo = (wo - j.omega_o(0)) / j.d_omega_o();
    const double ue = (we - j.omega_e(0)) / j.d_omega_e();
    const int no = static_cast<int>(j.values.rows()), ne = static_cast<int>(j.values.cols());
    if (uo < 0.0 || uo > no - 1 || ue < 0.0 || ue > ne - 1) return {0.0, 0.0};
    const int i0 = std::min(static_cast<int>(uo), no - 2);
    const int k0 = std::min(static_cast<int>(ue), ne - 2);
    const double fo = uo - i0, fe = ue - k0;
    return (1 - fo) * (1 - fe) * j.values(i0, k0) + fo * (1 - fe) * j.values(i0 + 1, k0) +
           (1 - fo) * fe * j.values(i0, k0 + 1) + fo * fe * j.values(i0 + 1, k0 + 1);
}

inline SpdcOverlap make_spdc_overlap(const JointSpectralAmplitude& j, double magnification) {
    if (magnification == 0.0) throw DegenerateMagnification("magnification must be nonzero");
    const double am = std::abs(magnification);
    const double span_o = std::min(-j.omega_o(0), j.omega_o(j.omega_o.size() - 1));
    const double span_e = std::min(-j.omega_e(0), j.omega_e(j.omega_e.size() - 1));
    const double reach = std::min(span_o / am, span_e);
    const int n = static_cast<int>(std::max(j.values.rows(), j.values.cols()));

    SpdcOverlap ov;
    ov.x = Eigen::VectorXd::LinSpaced(n, -reach, reach);
    ov.b.resize(n, n);
    Eigen::MatrixXcd jm(n, n);  // J(M x_i, x_j)
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            jm(i, k) = bilinear_jsa(j, magnification * ov.x(i), ov.x(k));
    double total = 0.0, boundary = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            ov.b(i, k) = trapezoid_weight(i, n) * trapezoid_weight(k, n) * jm(i, k) *
                         std::conj(jm(k, i));
            const double mag = std::abs(ov.b(i, k));
            total += mag;
            if (i == 0 || i == n - 1 || k == 0 || k == n - 1) boundary += mag;
        }
    if (boundary > 1e-4 * total)
        throw GridTooCoarse("interference integrand does not decay inside the quadrature "
                            "window (boundary fraction " +
                            std::to_string(boundary / total) + ")");

    // generation probability P_b = integral |J|^2 on the stored grid (1 after
    // normalization; recomputed so unnormalized inputs still give a probability)
    double pb = 0.0;
    const int no = static_cast<int>(j.values.rows()), ne = static_cast<int>(j.values.cols());
    for (int a = 0; a < no; ++a)
        for (int c = 0; c < ne; ++c)
            pb += trapezoid_weight(a, no) * trapezoid_weight(c, ne) * std::norm(j.values(a, c));
    pb *= j.d_omega_o() * j.d_omega_e();

    const double h = ov.x(1) - ov.x(0);
    ov.prefactor = am * h * h / pb;
    return ov;
}

// ternary-search maximizer for the unimodal interference peak
inline double maximize_shift(const SpdcOverlap& ov, double center, double half_width) {
    double lo = center - half_width, hi = center + half_width;
    while (hi - lo > 1e-6) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (ov.eval(m1) < ov.eval(m2))
            lo = m1;
        else
            hi = m2;
    }
    return 0.5 * (lo + hi);
}

inline double clamp_probability(double p) {
    if (p > 1.0 + 1e-6 || p < -1e-6)
        throw GridTooCoarse("interference probability " + std::to_string(p) +
                            " outside [0, 1]: quadrature error");
    return std::clamp(p, 0.0, 1.0);
}

// total phase slope at delay dtau for the given arm delay t_d
inline double spdc_shift(const JointSpectralAmplitude& j, double magnification, double t_d,
                         double delay) {
    return (delay - t_d) + magnification * j.ko_l_ps - j.ke_l_ps;
}

// half-width of the shift bracket for the optimizer: a few dip widths
inline double shift_bracket(const JointSpectralAmplitude& j, double magnification) {
    const double k = j.k_design > 0 ? j.k_design : 1.0;
    return 5.0 * std::sqrt((k * k + magnification * magnification) / 2.0) / j.pump_sigma;
}

}  // namespace detail

// Numeric p_int for an SPDC pair, by 2D trapezoid quadrature with bilinear
// interpolation of the scaled JSA arguments. The arm delay t_d is taken from the
// design formula (Formula) or found by maximizing the interference (Optimize) —
// for the exact sinc JSA the formula, derived under linear dispersion, is only
// approximately optimal.
inline double p_int_spdc(const JointSpectralAmplitude& j, double magnification, double delay,
                         DelayMode mode = DelayMode::Formula) {
    const auto ov = detail::make_spdc_overlap(j, magnification);
    double s0;  // shift at delay = 0
    if (mode == DelayMode::Formula) {
        s0 = detail::spdc_shift(j, magnification, t_d_formula(j, magnification), 0.0);
    } else {
        const double guess = detail::spdc_shift(j, magnification, t_d_formula(j, magnification), 0.0);
        s0 = detail::maximize_shift(ov, guess, detail::shift_bracket(j, magnification));
    }
    return detail::clamp_probability(ov.eval(s0 + delay));
}

// ---- Single-emitter photons --------------------------------------------------------

// decaying-exponential temporal mode psi(t) = sqrt(mu/tau) e^{-t/2tau} theta(t)
struct EmitterMode {
    double tau_ps = 1.0;  // radiative lifetime
    double mu = 1.0;      // brightness (mode norm); cancels out of p_int

    EmitterMode() = default;
    EmitterMode(double tau, double brightness = 1.0) : tau_ps(tau), mu(brightness) {
        if (!(tau_ps > 0.0)) throw ConfigParseError("emitter lifetime must be positive");
        if (!(mu > 0.0 && mu <= 1.0)) throw ConfigParseError("brightness must be in (0, 1]");
    }
};

enum class EmitterOverlapMode { Analytic, Numeric };

// relative threshold below which |M| tau_1 and tau_2 are treated as equal and the
// removable-singularity limit forms are used
inline constexpr double emitter_degenerate_tol = 1e-9;

// delay of maximal interference: 0 for erecting telescopes; for inverting ones the
// time-reversed exponential overlaps best at a positive delay
inline double emitter_dip_delay(double tau_1, double tau_2, double magnification) {
    if (magnification > 0.0) return 0.0;
    const double mt = std::abs(magnification) * tau_1;
    if (std::abs(mt - tau_2) <= emitter_degenerate_tol * tau_2) return 2.0 * tau_2;
    return 2.0 * mt * tau_2 * std::log(mt / tau_2) / (mt - tau_2);
}

inline double emitter_visibility(double tau_1, double tau_2, double magnification) {
    if (magnification == 0.0) throw DegenerateMagnification("magnification must be nonzero");
    if (magnification > 0.0) {
        const double mt = magnification * tau_1;
        return 4.0 * mt * tau_2 / ((mt + tau_2) * (mt + tau_2));
    }
    const double mt = std::abs(magnification) * tau_1;
    if (std::abs(mt - tau_2) <= emitter_degenerate_tol * tau_2)
        return 4.0 * std::exp(-2.0);
    return 4.0 * std::pow(tau_2 / mt, (mt + tau_2) / (mt - tau_2));
}

namespace detail {

inline double p_int_emitter_analytic(double tau_1, double tau_2, double magnification,
                                     double delay) {
    if (magnification > 0.0) {
        const double mt = magnification * tau_1;
        const double pref = 4.0 * mt * tau_2 / ((mt + tau_2) * (mt + tau_2));
        return pref * (delay >= 0.0 ? std::exp(-delay / tau_2) : std::exp(delay / mt));
    }
    if (delay <= 0.0) return 0.0;  // time-reversed pulse cannot precede the partner
    const double mt = std::abs(magnification) * tau_1;
    if (std::abs(mt - tau_2) <= emitter_degenerate_tol * tau_2) {
        const double r = delay / tau_2;
        return r * r * std::exp(-r);
    }
    const double diff = std::exp(-delay / (2.0 * mt)) - std::exp(-delay / (2.0 * tau_2));
    return 4.0 * mt * tau_2 / ((mt - tau_2) * (mt - tau_2)) * diff * diff;
}

inline double p_int_emitter_numeric(const EmitterMode& s1, const EmitterMode& s2,
                                    double magnification, double delay) {
    const double am = std::abs(magnification);
    const double mt = am * s1.tau_ps;
    // The product psi_1(t/M) psi_2*(t + delay) is smooth on its support, whose
    // boundaries come from the two step functions; aligning the quadrature interval
    // to that support keeps trapezoid accuracy (a cutoff inside a cell would cost
    // O(dt) instead of O(dt^2)).
    double lo, hi;
    if (magnification > 0.0) {
        lo = std::max(0.0, -delay);
        hi = lo + 20.0 * (mt + s2.tau_ps);
    } else {
        if (delay <= 0.0) return 0.0;  // supports t <= 0 and t >= -delay are disjoint
        lo = -delay;
        hi = 0.0;
    }
    const double dt_max = std::min(mt, s2.tau_ps) / 50.0;
    const long n = static_cast<long>(std::ceil((hi - lo) / dt_max)) + 1;
    if (n > (1L << 26))
        throw GridTooCoarse("emitter overlap grid would need " + std::to_string(n) +
                            " samples");
    const double dt = (hi - lo) / (n - 1);
    const double a1 = std::sqrt(s1.mu / s1.tau_ps), a2 = std::sqrt(s2.mu / s2.tau_ps);
    double c = 0.0;
    for (long i = 0; i < n; ++i) {
        const double t = lo + i * dt;
        const double v = a1 * std::exp(-t / (2.0 * magnification * s1.tau_ps)) * a2 *
                         std::exp(-(t + delay) / (2.0 * s2.tau_ps));
        c += (i == 0 || i == n - 1) ? 0.5 * v : v;
    }
    c *= dt / std::sqrt(am);
    return c * c / (s1.mu * s2.mu);
}

}  // namespace detail

inline double p_int_emitter(const EmitterMode& source_1, const EmitterMode& source_2,
                            double magnification, double delay,
                            EmitterOverlapMode mode = EmitterOverlapMode::Analytic) {
    if (magnification == 0.0) throw DegenerateMagnification("magnification must be nonzero");
    return mode == EmitterOverlapMode::Analytic
               ? detail::p_int_emitter_analytic(source_1.tau_ps, source_2.tau_ps,
                                                magnification, delay)
               : detail::p_int_emitter_numeric(source_1, source_2, magnification, delay);
}

// ---- Curves and scans ---------------------------------------------------------------

struct HomCurve {
    Eigen::VectorXd delays;           // relative delay dtau [ps]
    Eigen::VectorXd p_int;            // destructive-interference probability
    Eigen::VectorXd normalized_rate;  // 1 - p_int, the normalized coincidence rate
    double visibility = 0;            // max over the delay grid of p_int
    double argmax_delay = 0;
    double magnification = 0;
    std::string source_kind;          // "spdc_exact" | "spdc_gaussian" | "emitters"
    double t_d_ps = std::numeric_limits<double>::quiet_NaN();   // SPDC arm delay used
    double dip_delay_ps = std::numeric_limits<double>::quiet_NaN();  // predicted argmax
};

namespace detail {

inline void finish_curve(HomCurve& c) {
    c.normalized_rate = Eigen::VectorXd::Ones(c.p_int.size()) - c.p_int;
    int at = 0;
    c.visibility = c.p_int.maxCoeff(&at);
    c.argmax_delay = c.delays(at);
}

}  // namespace detail

inline HomCurve coincidence_curve(const JointSpectralAmplitude& j, double magnification,
                                  const Eigen::VectorXd& delays,
                                  DelayMode mode = DelayMode::Formula) {
    const auto ov = detail::make_spdc_overlap(j, magnification);
    double t_d = t_d_formula(j, magnification);
    double s0 = detail::spdc_shift(j, magnification, t_d, 0.0);
    if (mode == DelayMode::Optimize) {
        s0 = detail::maximize_shift(ov, s0, detail::shift_bracket(j, magnification));
        // back out the arm delay this optimum corresponds to
        t_d = magnification * j.ko_l_ps - j.ke_l_ps - s0;
    }
    HomCurve c;
    c.delays = delays;
    c.p_int.resize(delays.size());
    for (int i = 0; i < delays.size(); ++i)
        c.p_int(i) = detail::clamp_probability(ov.eval(s0 + delays(i)));
    c.magnification = magnification;
    c.source_kind = j.kind == JsaKind::Exact ? "spdc_exact" : "spdc_gaussian";
    c.t_d_ps = t_d;
    c.dip_delay_ps = 0.0;
    detail::finish_curve(c);
    return c;
}

inline HomCurve coincidence_curve(const EmitterMode& source_1, const EmitterMode& source_2,
                                  double magnification, const Eigen::VectorXd& delays,
                                  EmitterOverlapMode mode = EmitterOverlapMode::Analytic) {
    HomCurve c;
    c.delays = delays;
    c.p_int.resize(delays.size());
    for (int i = 0; i < delays.size(); ++i)
        c.p_int(i) = p_int_emitter(source_1, source_2, magnification, delays(i), mode);
    c.magnification = magnification;
    c.source_kind = "emitters";
    c.dip_delay_ps = emitter_dip_delay(source_1.tau_ps, source_2.tau_ps, magnification);
    detail::finish_curve(c);
    return c;
}

struct VisibilityPoint {
    double magnification = 0;
    double visibility = 0;
    double argmax_delay = 0;  // delay at which p_int peaks
};

// Sweeps that step through zero (e.g. -6:6:0.5) are the usual way to compare
// erecting and inverting operation, so the scan drops the single undefined
// point M = 0 instead of aborting; asking for one visibility at M = 0 still throws.
inline std::vector<VisibilityPoint> visibility_scan_spdc(double k_ratio, double omega_p,
                                                         const std::vector<double>& m_values) {
    if (m_values.empty()) throw ConfigParseError("empty magnification scan");
    (void)omega_p;  // the visibility of the Gaussian model is delay-compensated
    std::vector<VisibilityPoint> out;
    out.reserve(m_values.size());
    for (double m : m_values) {
        if (m == 0.0) continue;
        out.push_back({m, spdc_visibility(k_ratio, m), 0.0});
    }
    if (out.empty()) throw ConfigParseError("magnification scan contains only M = 0");
    return out;
}

inline std::vector<VisibilityPoint> visibility_scan_emitter(double tau_1, double tau_2,
                                                            const std::vector<double>& m_values) {
    if (m_values.empty()) throw ConfigParseError("empty magnification scan");
    std::vector<VisibilityPoint> out;
    out.reserve(m_values.size());
    for (double m : m_values) {
        if (m == 0.0) continue;
        out.push_back({m, emitter_visibility(tau_1, tau_2, m), emitter_dip_delay(tau_1, tau_2, m)});
    }
    if (out.empty()) throw ConfigParseError("magnification scan contains only M = 0");
    return out;
}

}  // namespace chronoscope

#endif
