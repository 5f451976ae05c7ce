#ifndef CHRONOSCOPE_ELEMENTS_HPP
#define CHRONOSCOPE_ELEMENTS_HPP

// Dispersive media and time lenses acting on sampled envelopes, plus chain propagation
// with per-stage diagnostics and the closed-form single-lens imaging map.

#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "chronoscope/envelope.hpp"
#include "chronoscope/errors.hpp"

namespace chronoscope {

struct DispersiveMedium {
    double gdd_ps2 = 0.0;  // D = phi''; spectral factor exp(+i D Omega^2/2)
};

struct IdealTimeLens {
    double focal_gdd_ps2;  // D_f; temporal phase exp(+i t^2/(2 D_f))

    explicit IdealTimeLens(double d_f) : focal_gdd_ps2(d_f) {
        if (!(std::abs(d_f) > 0.0)) throw InvalidLens("time lens focal GDD must be nonzero");
    }
};

// Quadratic phase imposed only inside a finite temporal aperture T_A = |D_f| * omega_m,
// where omega_m is the phase modulator bandwidth; samples outside pass unchanged.
// The aperture is centered on the intensity centroid of the incoming pulse.
struct FresnelTimeLens {
    double focal_gdd_ps2;
    double bandwidth_rad_per_ps;  // omega_m

    FresnelTimeLens(double d_f, double omega_m)
        : focal_gdd_ps2(d_f), bandwidth_rad_per_ps(omega_m) {
        if (!(std::abs(d_f) > 0.0)) throw InvalidLens("time lens focal GDD must be nonzero");
        if (!(omega_m > 0.0)) throw InvalidLens("modulator bandwidth must be positive");
    }

    double aperture_ps() const { return std::abs(focal_gdd_ps2) * bandwidth_rad_per_ps; }
};

using ChainElement = std::variant<DispersiveMedium, IdealTimeLens, FresnelTimeLens>;
using ElementChain = std::vector<ChainElement>;

inline SampledEnvelope apply_dispersion(const SampledEnvelope& env, const DispersiveMedium& medium) {
    const double d = medium.gdd_ps2;
    if (d == 0.0) return env;

    // The dispersed width can reach delta_t + |D| delta_omega (Cauchy-Schwarz bound on the
    // phase-space shear); demand it fits in an eighth of the window so nothing wraps.
    EnvelopeMoments m = measure_moments(env);
    const double predicted = m.delta_t + std::abs(d) * m.delta_omega;
    if (predicted > env.grid.window() / 8.0)
        throw WindowTooSmall("dispersed width estimate " + std::to_string(predicted) +
                             " ps exceeds window/8 = " + std::to_string(env.grid.window() / 8.0) + " ps");

    SampledSpectrum spec = to_spectrum(env);
    for (int k = 0; k < env.grid.n_points; ++k) {
        const double om = spec.omega(k);
        spec.values[k] *= std::polar(1.0, 0.5 * d * om * om);
    }
    return from_spectrum(spec);
}

inline SampledEnvelope apply_time_lens(const SampledEnvelope& env, const IdealTimeLens& lens) {
    // instantaneous added frequency reaches T_window/(2|D_f|) at the window edge
    const double max_added = env.grid.window() / (2.0 * std::abs(lens.focal_gdd_ps2));
    if (max_added > env.grid.omega_max())
        throw AliasingRisk("lens phase slope " + std::to_string(max_added) +
                           " rad/ps at the window edge exceeds Nyquist " +
                           std::to_string(env.grid.omega_max()) + " rad/ps");
    SampledEnvelope out = env;
    const double inv2f = 0.5 / lens.focal_gdd_ps2;
    for (int j = 0; j < env.grid.n_points; ++j) {
        const double t = env.grid.t(j);
        out.samples[j] *= std::polar(1.0, inv2f * t * t);
    }
    return out;
}

struct FresnelLensResult {
    SampledEnvelope env;
    double aperture_clip_fraction = 0.0;  // energy fraction left outside the aperture
};

inline FresnelLensResult apply_time_lens(const SampledEnvelope& env, const FresnelTimeLens& lens) {
    const double aperture = lens.aperture_ps();
    const double max_added = std::min(env.grid.window(), aperture) / (2.0 * std::abs(lens.focal_gdd_ps2));
    if (max_added > env.grid.omega_max())
        throw AliasingRisk("Fresnel lens phase slope " + std::to_string(max_added) +
                           " rad/ps exceeds Nyquist " + std::to_string(env.grid.omega_max()) + " rad/ps");

    EnvelopeMoments m = measure_moments(env);  // throws ZeroEnergy on empty input
    const double lo = m.t_mean - 0.5 * aperture;
    const double hi = m.t_mean + 0.5 * aperture;

    FresnelLensResult res{env, 0.0};
    const double inv2f = 0.5 / lens.focal_gdd_ps2;
    double clipped = 0.0, total = 0.0;
    for (int j = 0; j < env.grid.n_points; ++j) {
        const double t = env.grid.t(j);
        const double w = std::norm(env.samples[j]);
        total += w;
        if (t >= lo && t <= hi) {
            res.env.samples[j] *= std::polar(1.0, inv2f * t * t);
        } else {
            clipped += w;  // passes through unmodified — lost to the image
        }
    }
    res.aperture_clip_fraction = (total > 0.0) ? clipped / total : 0.0;
    return res;
}

struct StageReport {
    int index = 0;
    std::string kind;       // "dispersion" | "lens" | "fresnel_lens"
    double delta_t = 0.0;   // ps
    double delta_omega = 0.0;
    double energy = 0.0;
    double chirp_c2 = std::numeric_limits<double>::quiet_NaN();  // NaN when the fit is undefined
    double aperture_clip_fraction = 0.0;  // fresnel lenses only
};

struct ChainResult {
    SampledEnvelope env;
    std::vector<StageReport> stages;
};

inline ChainResult propagate_chain(const SampledEnvelope& input, const ElementChain& chain) {
    ChainResult result{input, {}};
    int index = 0;
    for (const ChainElement& el : chain) {
        StageReport report;
        report.index = index;
        try {
            if (std::holds_alternative<DispersiveMedium>(el)) {
                report.kind = "dispersion";
                result.env = apply_dispersion(result.env, std::get<DispersiveMedium>(el));
            } else if (std::holds_alternative<IdealTimeLens>(el)) {
                report.kind = "lens";
                result.env = apply_time_lens(result.env, std::get<IdealTimeLens>(el));
            } else {
                report.kind = "fresnel_lens";
                FresnelLensResult r = apply_time_lens(result.env, std::get<FresnelTimeLens>(el));
                result.env = std::move(r.env);
                report.aperture_clip_fraction = r.aperture_clip_fraction;
            }
        } catch (const Error& e) {
            throw Error(e.kind(), "stage " + std::to_string(index) + " (" +
                                      (report.kind.empty() ? "unknown" : report.kind) + "): " + e.what());
        }
        EnvelopeMoments m = measure_moments(result.env);
        report.delta_t = m.delta_t;
        report.delta_omega = m.delta_omega;
        report.energy = m.energy;
        try {
            report.chirp_c2 = residual_chirp(result.env);
        } catch (const Error&) {
            // phase fit undefined for this intermediate state; leave NaN
        }
        result.stages.push_back(report);
        ++index;
    }
    return result;
}

// Closed-form single-lens image: for input GDD D_in, lens D_f and the conjugate output
// GDD D_out fixed by 1/D_in + 1/D_out = 1/D_f,
//   A_out(t) = (-1/sqrt|m|) exp(i t^2/(2 m D_f)) A_in(t/m),   m = -D_out/D_in.
// The returned envelope lives on a grid scaled by |m| (and reflected for m < 0), so the
// source points t/m land on input nodes.
struct SingleLensImage {
    SampledEnvelope env;
    double magnification = 0.0;  // m
    double output_gdd_ps2 = 0.0; // D_out
};

inline SingleLensImage single_lens_image_analytic(const SampledEnvelope& input, double d_in, double d_f) {
    if (!(std::abs(d_f) > 0.0)) throw InvalidLens("focal GDD must be nonzero");
    if (d_in == 0.0)
        throw ZeroInputGDD("single-lens imaging needs nonzero input GDD (object at the lens)");
    if (std::abs(d_in - d_f) <= 1e-12 * std::abs(d_f))
        throw FocalDegeneracy("D_in equals D_f: image at infinity");

    const double d_out = 1.0 / (1.0 / d_f - 1.0 / d_in);
    const double m = -d_out / d_in;
    const double am = std::abs(m);

    TimeGrid out_grid(input.grid.n_points, input.grid.dt * am, m * input.grid.t_center);
    SingleLensImage image{SampledEnvelope{out_grid, Eigen::VectorXcd(out_grid.n_points)}, m, d_out};
    const double chirp = 0.5 / (m * d_f);
    const double scale = -1.0 / std::sqrt(am);
    for (int j = 0; j < out_grid.n_points; ++j) {
        const double t = out_grid.t(j);
        image.env.samples[j] = scale * std::polar(1.0, chirp * t * t) * detail::catmull_rom_at(input, t / m);
    }
    return image;
}

// ---- chain (de)serialization ----------------------------------------------------
// [{"kind":"dispersion","gdd_ps2":...},
//  {"kind":"lens","focal_gdd_ps2":...},
//  {"kind":"fresnel_lens","focal_gdd_ps2":...,"bandwidth_rad_per_ps":...}]

inline nlohmann::json chain_to_json(const ElementChain& chain) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ChainElement& el : chain) {
        if (std::holds_alternative<DispersiveMedium>(el)) {
            arr.push_back({{"kind", "dispersion"}, {"gdd_ps2", std::get<DispersiveMedium>(el).gdd_ps2}});
        } else if (std::holds_alternative<IdealTimeLens>(el)) {
            arr.push_back({{"kind", "lens"}, {"focal_gdd_ps2", std::get<IdealTimeLens>(el).focal_gdd_ps2}});
        } else {
            const auto& f = std::get<FresnelTimeLens>(el);
            arr.push_back({{"kind", "fresnel_lens"},
                           {"focal_gdd_ps2", f.focal_gdd_ps2},
                           {"bandwidth_rad_per_ps", f.bandwidth_rad_per_ps}});
        }
    }
    return arr;
}

inline ElementChain chain_from_json(const nlohmann::json& arr) {
    if (!arr.is_array()) throw ConfigParseError("element chain must be a JSON array");
    ElementChain chain;
    for (const auto& item : arr) {
        const std::string kind = item.value("kind", "");
        try {
            if (kind == "dispersion") {
                chain.push_back(DispersiveMedium{item.at("gdd_ps2").get<double>()});
            } else if (kind == "lens") {
                chain.push_back(IdealTimeLens(item.at("focal_gdd_ps2").get<double>()));
            } else if (kind == "fresnel_lens") {
                chain.push_back(FresnelTimeLens(item.at("focal_gdd_ps2").get<double>(),
                                                item.at("bandwidth_rad_per_ps").get<double>()));
            } else {
                throw ConfigParseError("unknown chain element kind '" + kind + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigParseError("bad chain element: " + std::string(e.what()));
        }
    }
    return chain;
}

}  // namespace chronoscope

#endif
