#ifndef CHRONOSCOPE_TELESCOPE_HPP
#define CHRONOSCOPE_TELESCOPE_HPP

// Design algebra for two-lens temporal telescopes.
//
// A telescope is the chain [D_in, lens D_f, D_inter, lens D_f', D_out']. Imposing the
// telescopic condition D_inter = D_f + D_f' together with the chirp-cancellation
// condition D_f' = -M D_f yields, for a requested magnification M:
//     D_f  = D_inter / (1 - M)
//     D_f' = -M D_inter / (1 - M)
//     D_out' = -M^2 D_in - M D_inter
// and the output is the chirp-free scaled replica A_out(t) = A_in(t/M)/sqrt(M).

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chronoscope/elements.hpp"
#include "chronoscope/errors.hpp"
#include "chronoscope/units.hpp"

namespace chronoscope {

struct TelescopeDesign {
    double magnification = 0.0;  // M
    double input_gdd = 0.0;      // D_in   [ps^2]
    double inter_gdd = 0.0;      // D_inter
    double focal_1 = 0.0;        // D_f
    double focal_2 = 0.0;        // D_f'
    double output_gdd = 0.0;     // D_out'
};

inline TelescopeDesign design_from(double magnification, double inter_gdd, double input_gdd = 0.0) {
    if (magnification == 0.0 || magnification == 1.0)
        throw DegenerateMagnification("magnification must differ from 0 and 1, got " +
                                      std::to_string(magnification));
    if (inter_gdd == 0.0)
        throw DegenerateMagnification("inter-lens GDD must be nonzero");
    TelescopeDesign d;
    d.magnification = magnification;
    d.input_gdd = input_gdd;
    d.inter_gdd = inter_gdd;
    d.focal_1 = inter_gdd / (1.0 - magnification);
    d.focal_2 = -magnification * inter_gdd / (1.0 - magnification);
    d.output_gdd = -magnification * magnification * input_gdd - magnification * inter_gdd;
    return d;
}

enum class TelescopeKind {
    InvertingMagnifying,   // M < -1
    InvertingCompressing,  // -1 <= M < 0
    ErectingCompressing,   // 0 < M < 1
    ErectingMagnifying,    // M > 1
};

enum class SpatialCounterpart {
    BeamExpander,      // inverting magnifier
    Keplerian,         // inverting compressor
    Galilean,          // erecting compressor
    InvertedGalilean,  // erecting magnifier
    None,              // D_inter < 0 has no free-space analogue
};

inline const char* to_string(TelescopeKind k) {
    switch (k) {
        case TelescopeKind::InvertingMagnifying: return "inverting_magnifying";
        case TelescopeKind::InvertingCompressing: return "inverting_compressing";
        case TelescopeKind::ErectingCompressing: return "erecting_compressing";
        case TelescopeKind::ErectingMagnifying: return "erecting_magnifying";
    }
    return "?";
}

inline const char* to_string(SpatialCounterpart s) {
    switch (s) {
        case SpatialCounterpart::BeamExpander: return "beam_expander";
        case SpatialCounterpart::Keplerian: return "keplerian";
        case SpatialCounterpart::Galilean: return "galilean";
        case SpatialCounterpart::InvertedGalilean: return "inverted_galilean";
        case SpatialCounterpart::None: return "none";
    }
    return "?";
}

struct TelescopeClass {
    TelescopeKind kind;
    SpatialCounterpart spatial_counterpart;
    bool has_spatial_counterpart;
};

// Negative D_inter cannot be realized by free-space propagation between spatial lenses,
// so those telescopes have no spatial counterpart. M = -1 (the 1:1 relay) is grouped
// with the Keplerian compressors.
inline TelescopeClass classify(const TelescopeDesign& d) {
    const double m = d.magnification;
    TelescopeClass c{};
    if (m < -1.0) {
        c.kind = TelescopeKind::InvertingMagnifying;
        c.spatial_counterpart = SpatialCounterpart::BeamExpander;
    } else if (m < 0.0) {
        c.kind = TelescopeKind::InvertingCompressing;
        c.spatial_counterpart = SpatialCounterpart::Keplerian;
    } else if (m < 1.0) {
        c.kind = TelescopeKind::ErectingCompressing;
        c.spatial_counterpart = SpatialCounterpart::Galilean;
    } else {
        c.kind = TelescopeKind::ErectingMagnifying;
        c.spatial_counterpart = SpatialCounterpart::InvertedGalilean;
    }
    c.has_spatial_counterpart = d.inter_gdd > 0.0;
    if (!c.has_spatial_counterpart) c.spatial_counterpart = SpatialCounterpart::None;
    return c;
}

// The two dispersion budgets that eliminate one external medium each:
//   D_in = 0            -> total |D_inter| (1 + |M|)
//   D_in = -D_inter/M   -> D_out' = 0, total |D_inter| (1 + 1/|M|)
struct MinimalLossConfig {
    double d_in_zero_total;    // sum of |D| over external media for D_in = 0
    double field_lens_d_in;    // the D_in that nulls the output dispersion
    double field_lens_total;
    bool prefer_d_in_zero;     // true when the D_in = 0 budget is no worse
};

inline MinimalLossConfig minimal_loss_config(double magnification, double inter_gdd) {
    if (magnification == 0.0 || magnification == 1.0)
        throw DegenerateMagnification("magnification must differ from 0 and 1");
    const double am = std::abs(magnification);
    MinimalLossConfig cfg{};
    cfg.d_in_zero_total = (1.0 + am) * std::abs(inter_gdd);
    cfg.field_lens_d_in = -inter_gdd / magnification;
    cfg.field_lens_total = (1.0 + 1.0 / am) * std::abs(inter_gdd);
    cfg.prefer_d_in_zero = cfg.d_in_zero_total <= cfg.field_lens_total;  // i.e. |M| <= 1
    return cfg;
}

// ---- Fresnel-lens compressor design ----------------------------------------------
// For compressing a transform-limited Gaussian of intensity FWHM T0 by 0 < M < 1 with
// electro-optic (Fresnel) lenses of modulator bandwidths omega_m1,2. The first lens
// focal GDD balancing aperture loss against bandwidth is
//     D_f = sqrt(2 M) T0^2 / (8 ln 2),
// the second modulator must supply omega_m2 >= Omega_0/M (Omega_0 = 4 ln 2/T0 is the
// input spectral FWHM), and the shortest output the second modulator can form is
// FWHM = 4 ln 2 / omega_m2.

struct FresnelDesignReport {
    double input_fwhm_ps = 0.0;          // T0
    double magnification = 0.0;          // M
    double modulator_bw_2 = 0.0;         // omega_m2 [rad/ps]
    double omega_0 = 0.0;                // input spectral FWHM, 4 ln2 / T0
    double focal_1 = 0.0;                // D_f
    double focal_2 = 0.0;                // D_f' = -M D_f
    double inter_gdd = 0.0;              // D_f (1 - M)
    double output_gdd = 0.0;             // -M D_inter
    double required_bw_1 = 0.0;          // Omega_0 sqrt(2/M), first modulator
    double required_bw_2 = 0.0;          // Omega_0 / M, second modulator
    double min_output_fwhm_ps = 0.0;     // 4 ln2 / omega_m2
    double fourier_processor_m_omega = 0.0;  // spectral magnification D_f omega_m2^2/(4 ln2)
};

// Relative slack on the feasibility bound: the canonical 70 GHz design sits 0.06%
// past the strict inequality, which is rounding, not infeasibility.
inline constexpr double fresnel_feasibility_slack = 1e-2;

inline FresnelDesignReport fresnel_design(double input_fwhm_ps, double magnification,
                                          double modulator_bw_2) {
    if (!(input_fwhm_ps > 0.0)) throw InfeasibleBandwidth("input FWHM must be positive");
    if (!(magnification > 0.0 && magnification < 1.0))
        throw DegenerateMagnification("fresnel_design compresses: need 0 < M < 1, got " +
                                      std::to_string(magnification));
    if (!(modulator_bw_2 > 0.0)) throw InfeasibleBandwidth("modulator bandwidth must be positive");

    const double omega_0 = four_ln2 / input_fwhm_ps;
    const double min_feasible_m = four_ln2 / (input_fwhm_ps * modulator_bw_2);
    if (modulator_bw_2 < (omega_0 / magnification) * (1.0 - fresnel_feasibility_slack))
        throw InfeasibleBandwidth(
            "second modulator bandwidth " + std::to_string(modulator_bw_2) +
            " rad/ps cannot form a pulse compressed by M = " + std::to_string(magnification) +
            "; minimum feasible M = " + std::to_string(min_feasible_m));

    FresnelDesignReport r;
    r.input_fwhm_ps = input_fwhm_ps;
    r.magnification = magnification;
    r.modulator_bw_2 = modulator_bw_2;
    r.omega_0 = omega_0;
    r.focal_1 = std::sqrt(2.0 * magnification) * input_fwhm_ps * input_fwhm_ps / (8.0 * std::log(2.0));
    r.focal_2 = -magnification * r.focal_1;
    r.inter_gdd = r.focal_1 * (1.0 - magnification);
    r.output_gdd = -magnification * r.inter_gdd;
    r.required_bw_1 = omega_0 * std::sqrt(2.0 / magnification);
    r.required_bw_2 = omega_0 / magnification;
    r.min_output_fwhm_ps = four_ln2 / modulator_bw_2;
    r.fourier_processor_m_omega = r.focal_1 * modulator_bw_2 * modulator_bw_2 / four_ln2;
    return r;
}

inline TelescopeDesign design_of(const FresnelDesignReport& r) {
    TelescopeDesign d;
    d.magnification = r.magnification;
    d.input_gdd = 0.0;
    d.inter_gdd = r.inter_gdd;
    d.focal_1 = r.focal_1;
    d.focal_2 = r.focal_2;
    d.output_gdd = r.output_gdd;
    return d;
}

// Second moments of an initially transform-limited Gaussian (intensity std delta_t0)
// after each telescope stage, for designs with D_in = 0:
//   stage 1 (lens D_f):   dOmega_1 = dOmega_0 sqrt(1 + 1/(4 D_f^2 dOmega_0^4))
//   stage 2 (D_inter):    dt_2 = M dt_0 sqrt(1 + D_f^2 (1-M)^2/(4 dt_0^4 M^2))
//   stage 3 (lens D_f'):  dOmega_3 = dOmega_0 / M
//   stage 4 (D_out'):     dt_4 = M dt_0, chirp-free
struct GaussianMomentChain {
    double delta_omega_0;
    double delta_omega_after_lens1;
    double delta_t_after_inter;
    double delta_omega_after_lens2;
    double delta_t_out;
};

inline GaussianMomentChain analytic_gaussian_moments(double delta_t0, const TelescopeDesign& d) {
    if (d.input_gdd != 0.0)
        throw ZeroInputGDD("moment chain closed forms require D_in = 0");
    const double m = std::abs(d.magnification);
    const double dom0 = 0.5 / delta_t0;
    GaussianMomentChain g;
    g.delta_omega_0 = dom0;
    g.delta_omega_after_lens1 =
        dom0 * std::sqrt(1.0 + 1.0 / (4.0 * d.focal_1 * d.focal_1 * dom0 * dom0 * dom0 * dom0));
    const double ratio = d.focal_1 * (1.0 - d.magnification) / (std::pow(delta_t0, 2) * 2.0 * d.magnification);
    g.delta_t_after_inter = m * delta_t0 * std::sqrt(1.0 + ratio * ratio);
    g.delta_omega_after_lens2 = dom0 / m;
    g.delta_t_out = m * delta_t0;
    return g;
}

// element chain realizing the design (zero-GDD media omitted)
inline ElementChain build_chain(const TelescopeDesign& d) {
    ElementChain chain;
    if (d.input_gdd != 0.0) chain.push_back(DispersiveMedium{d.input_gdd});
    chain.push_back(IdealTimeLens(d.focal_1));
    chain.push_back(DispersiveMedium{d.inter_gdd});
    chain.push_back(IdealTimeLens(d.focal_2));
    if (d.output_gdd != 0.0) chain.push_back(DispersiveMedium{d.output_gdd});
    return chain;
}

// same chain with Fresnel lenses of the given modulator bandwidths
inline ElementChain build_chain(const TelescopeDesign& d, double omega_m1, double omega_m2) {
    ElementChain chain;
    if (d.input_gdd != 0.0) chain.push_back(DispersiveMedium{d.input_gdd});
    chain.push_back(FresnelTimeLens(d.focal_1, omega_m1));
    chain.push_back(DispersiveMedium{d.inter_gdd});
    chain.push_back(FresnelTimeLens(d.focal_2, omega_m2));
    if (d.output_gdd != 0.0) chain.push_back(DispersiveMedium{d.output_gdd});
    return chain;
}

inline nlohmann::json to_json(const TelescopeDesign& d) {
    return {{"magnification", d.magnification}, {"input_gdd_ps2", d.input_gdd},
            {"inter_gdd_ps2", d.inter_gdd},     {"focal_1_ps2", d.focal_1},
            {"focal_2_ps2", d.focal_2},         {"output_gdd_ps2", d.output_gdd}};
}

inline nlohmann::json to_json(const TelescopeClass& c) {
    return {{"kind", to_string(c.kind)},
            {"spatial_counterpart", to_string(c.spatial_counterpart)},
            {"has_spatial_counterpart", c.has_spatial_counterpart}};
}

inline nlohmann::json to_json(const MinimalLossConfig& c) {
    return {{"d_in_zero_total_ps2", c.d_in_zero_total},
            {"field_lens_d_in_ps2", c.field_lens_d_in},
            {"field_lens_total_ps2", c.field_lens_total},
            {"preferred", c.prefer_d_in_zero ? "d_in_zero" : "field_lens"}};
}

inline nlohmann::json to_json(const FresnelDesignReport& r) {
    return {{"input_fwhm_ps", r.input_fwhm_ps},
            {"magnification", r.magnification},
            {"modulator_bw_2_rad_per_ps", r.modulator_bw_2},
            {"modulator_bw_2_ghz", rad_per_ps_to_ghz(r.modulator_bw_2)},
            {"omega_0_rad_per_ps", r.omega_0},
            {"focal_1_ps2", r.focal_1},
            {"focal_2_ps2", r.focal_2},
            {"inter_gdd_ps2", r.inter_gdd},
            {"output_gdd_ps2", r.output_gdd},
            {"required_bw_1_rad_per_ps", r.required_bw_1},
            {"required_bw_1_ghz", rad_per_ps_to_ghz(r.required_bw_1)},
            {"required_bw_2_rad_per_ps", r.required_bw_2},
            {"min_output_fwhm_ps", r.min_output_fwhm_ps},
            {"fourier_processor_m_omega", r.fourier_processor_m_omega}};
}

}  // namespace chronoscope

#endif
