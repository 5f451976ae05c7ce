#ifndef CHRONOSCOPE_CLI_HPP
#define CHRONOSCOPE_CLI_HPP

// JSON-driven command runner behind the `chronoscope` executable.
//
// Every run is described by one JSON object: a `command` (design, classify,
// propagate, jsa, hom), its numeric inputs, and an output directory. The
// executable builds that object from a config file plus flag overrides (flags
// win) and calls run_from_json; tests call run_from_json directly. Each run
// writes report.json (deterministic), the command's CSV artifacts
// (deterministic), and manifest.json (inputs, derived parameters, output list,
// and the only timestamp anywhere in the artifact set).

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chronoscope/csv.hpp"
#include "chronoscope/elements.hpp"
#include "chronoscope/envelope.hpp"
#include "chronoscope/errors.hpp"
#include "chronoscope/hom.hpp"
#include "chronoscope/spdc.hpp"
#include "chronoscope/telescope.hpp"
#include "chronoscope/units.hpp"

namespace chronoscope {

inline constexpr const char* cli_version = "0.1.0";

// "lo:hi:step" -> inclusive uniform samples; also accepts a JSON array of numbers.
inline std::vector<double> parse_range(const nlohmann::json& spec, const std::string& what) {
    if (spec.is_array()) {
        std::vector<double> out;
        for (const auto& v : spec) {
            if (!v.is_number()) throw ConfigParseError(what + ": array entries must be numbers");
            out.push_back(v.get<double>());
        }
        if (out.empty()) throw ConfigParseError(what + ": empty list");
        return out;
    }
    if (!spec.is_string()) throw ConfigParseError(what + ": expected \"lo:hi:step\" or an array");
    const std::string s = spec.get<std::string>();
    double lo = 0, hi = 0, step = 0;
    char colon1 = 0, colon2 = 0, trailing = 0;
    std::istringstream in(s);
    if (!(in >> lo >> colon1 >> hi >> colon2 >> step) || colon1 != ':' || colon2 != ':' ||
        (in >> trailing))
        throw ConfigParseError(what + ": cannot parse range '" + s + "' (want lo:hi:step)");
    if (!(step > 0.0)) throw ConfigParseError(what + ": step must be positive in '" + s + "'");
    if (hi < lo) throw ConfigParseError(what + ": hi < lo in '" + s + "'");
    const double count = (hi - lo) / step;
    if (count > 2e6) throw ConfigParseError(what + ": range '" + s + "' has over 2e6 points");
    const int n = static_cast<int>(std::floor(count + 1e-9)) + 1;
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + i * step;
    return out;
}

// Pulse spec: "gauss:sigma_t=1,t0=0,chirp=0,amp=1" or
// {"kind":"gaussian","sigma_t_ps":...,"t0_ps":...,"chirp_c2":...,"amplitude":...}.
inline GaussianPulseSpec parse_pulse_spec(const nlohmann::json& spec) {
    GaussianPulseSpec p;
    if (spec.is_object()) {
        if (spec.value("kind", "gaussian") != std::string("gaussian"))
            throw ConfigParseError("pulse: only kind 'gaussian' is supported, got '" +
                                   spec.value("kind", "") + "'");
        p.sigma_t = spec.value("sigma_t_ps", p.sigma_t);
        p.t0 = spec.value("t0_ps", p.t0);
        p.chirp_c2 = spec.value("chirp_c2", p.chirp_c2);
        p.amplitude = spec.value("amplitude", p.amplitude);
        return p;
    }
    if (!spec.is_string()) throw ConfigParseError("pulse: expected a string or an object");
    const std::string s = spec.get<std::string>();
    const auto head = s.find(':');
    const std::string kind = s.substr(0, head);
    if (kind != "gauss" && kind != "gaussian")
        throw ConfigParseError("pulse: only 'gauss:...' specs are supported, got '" + s + "'");
    if (head == std::string::npos) return p;
    std::istringstream in(s.substr(head + 1));
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigParseError("pulse: malformed parameter '" + item + "' (want key=value)");
        const std::string key = item.substr(0, eq);
        double value = 0;
        try {
            std::size_t used = 0;
            value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw ConfigParseError("pulse: cannot parse value in '" + item + "'");
        }
        if (key == "sigma_t")
            p.sigma_t = value;
        else if (key == "t0")
            p.t0 = value;
        else if (key == "chirp")
            p.chirp_c2 = value;
        else if (key == "amp")
            p.amplitude = value;
        else
            throw ConfigParseError("pulse: unknown parameter '" + key +
                                   "' (known: sigma_t, t0, chirp, amp)");
    }
    return p;
}

namespace detail {

inline double require_number(const nlohmann::json& cfg, const std::string& key,
                             const std::string& command) {
    if (!cfg.contains(key))
        throw ConfigParseError(command + ": missing required key '" + key + "'");
    if (!cfg.at(key).is_number())
        throw ConfigParseError(command + ": key '" + key + "' must be a number");
    return cfg.at(key).get<double>();
}

inline std::string require_string(const nlohmann::json& cfg, const std::string& key,
                                  const std::string& command) {
    if (!cfg.contains(key))
        throw ConfigParseError(command + ": missing required key '" + key + "'");
    if (!cfg.at(key).is_string())
        throw ConfigParseError(command + ": key '" + key + "' must be a string");
    return cfg.at(key).get<std::string>();
}

// grid-size default: explicit config wins, then CHRONOSCOPE_GRID_N, then fallback
inline int grid_points(const nlohmann::json& cfg, const std::string& command, int fallback) {
    if (cfg.contains("n")) {
        if (!cfg.at("n").is_number_integer() || cfg.at("n").get<long long>() < 2)
            throw ConfigParseError(command + ": 'n' must be an integer >= 2");
        return cfg.at("n").get<int>();
    }
    if (const char* env = std::getenv("CHRONOSCOPE_GRID_N")) {
        try {
            std::size_t used = 0;
            const int n = std::stoi(env, &used);
            if (used != std::string(env).size() || n < 2) throw std::invalid_argument("bad");
            return n;
        } catch (const std::exception&) {
            throw ConfigParseError(command + ": CHRONOSCOPE_GRID_N='" + std::string(env) +
                                   "' is not an integer >= 2");
        }
    }
    return fallback;
}

inline nlohmann::json both_units(double omega_rad_per_ps) {
    return {{"rad_per_ps", omega_rad_per_ps}, {"ghz", rad_per_ps_to_ghz(omega_rad_per_ps)}};
}

inline void write_text_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) throw ConfigParseError("cannot open output file: " + path.string());
    out << body;
    if (!out) throw ConfigParseError("write failed: " + path.string());
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline std::string now_iso8601_utc() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---- command handlers -------------------------------------------------------

inline nlohmann::json run_design(const nlohmann::json& cfg, const std::filesystem::path& out,
                                 std::vector<std::string>& outputs, nlohmann::json& derived) {
    const double t0 = require_number(cfg, "t0_ps", "design");
    const double m = require_number(cfg, "m", "design");
    double omega_m2 = 0;
    if (cfg.contains("omega_m2_rad_per_ps"))
        omega_m2 = require_number(cfg, "omega_m2_rad_per_ps", "design");
    else
        omega_m2 = ghz_to_rad_per_ps(require_number(cfg, "bw2_ghz", "design"));

    const FresnelDesignReport r = fresnel_design(t0, m, omega_m2);
    const TelescopeDesign d = design_of(r);
    const TelescopeClass c = classify(d);
    const MinimalLossConfig ml = minimal_loss_config(d.magnification, d.inter_gdd);
    const ElementChain chain = build_chain(d, r.required_bw_1, r.modulator_bw_2);

    derived = {{"modulator_bw_2", both_units(r.modulator_bw_2)},
               {"required_bw_1", both_units(r.required_bw_1)},
               {"required_bw_2", both_units(r.required_bw_2)},
               {"input_spectral_fwhm", both_units(r.omega_0)}};

    std::ostringstream chain_text;
    chain_text << chain_to_json(chain).dump(2) << "\n";
    write_text_file(out / "chain.json", chain_text.str());
    outputs.push_back("chain.json");

    return {{"fresnel", to_json(r)},
            {"design", to_json(d)},
            {"classification", to_json(c)},
            {"minimal_loss", to_json(ml)},
            {"chain", chain_to_json(chain)},
            {"bandwidths", derived}};
}

inline nlohmann::json run_classify(const nlohmann::json& cfg, const std::filesystem::path& out,
                                   std::vector<std::string>& outputs, nlohmann::json& derived) {
    const double m = require_number(cfg, "m", "classify");
    const double inter = require_number(cfg, "inter_gdd_ps2", "classify");
    const double d_in = cfg.contains("input_gdd_ps2")
                            ? require_number(cfg, "input_gdd_ps2", "classify")
                            : 0.0;

    const TelescopeDesign d = design_from(m, inter, d_in);
    const TelescopeClass c = classify(d);
    const MinimalLossConfig ml = minimal_loss_config(m, inter);
    const ElementChain chain = build_chain(d);

    derived = {{"focal_1_ps2", d.focal_1},
               {"focal_2_ps2", d.focal_2},
               {"output_gdd_ps2", d.output_gdd}};

    write_json_file(out / "chain.json", chain_to_json(chain));
    outputs.push_back("chain.json");

    return {{"design", to_json(d)},
            {"classification", to_json(c)},
            {"minimal_loss", to_json(ml)},
            {"chain", chain_to_json(chain)}};
}

inline nlohmann::json run_propagate(const nlohmann::json& cfg, const std::filesystem::path& out,
                                    std::vector<std::string>& outputs, nlohmann::json& derived) {
    ElementChain chain;
    if (cfg.contains("chain_json")) {
        chain = chain_from_json(cfg.at("chain_json"));
    } else {
        const std::string path = require_string(cfg, "chain", "propagate");
        std::ifstream in(path);
        if (!in) throw ConfigParseError("propagate: cannot open chain file: " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigParseError("propagate: bad JSON in " + path + ": " + e.what());
        }
        chain = chain_from_json(j);
    }

    const GaussianPulseSpec pulse =
        parse_pulse_spec(cfg.contains("pulse") ? cfg.at("pulse") : nlohmann::json("gauss:sigma_t=1"));
    const int n = grid_points(cfg, "propagate", 8192);
    const double dt = cfg.value("dt_ps", 0.01);
    const double t_center = cfg.value("t_center_ps", 0.0);
    const double chirp_tol = cfg.value("chirp_tol", 1e-3);

    const TimeGrid grid(n, dt, t_center);
    const SampledEnvelope input = make_gaussian(grid, pulse);
    const ChainResult result = propagate_chain(input, chain);

    const EnvelopeMoments mi = measure_moments(input);
    const EnvelopeMoments mo = measure_moments(result.env);
    const double c2 = residual_chirp(result.env);
    const double chirp_metric = std::abs(c2) * mo.delta_t * mo.delta_t;  // dimensionless
    const std::string verdict = chirp_metric <= chirp_tol ? "chirp_free" : "residual_chirp";

    {
        std::ostringstream body;
        write_envelope_csv(body, input);
        write_text_file(out / "input.csv", body.str());
    }
    {
        std::ostringstream body;
        write_envelope_csv(body, result.env);
        write_text_file(out / "output.csv", body.str());
    }
    {
        std::ostringstream body;
        write_stages_csv(body, result.stages);
        write_text_file(out / "stages.csv", body.str());
    }
    outputs.insert(outputs.end(), {"input.csv", "output.csv", "stages.csv"});

    auto moments_json = [](const EnvelopeMoments& m) {
        return nlohmann::json{{"t_mean_ps", m.t_mean},     {"delta_t_ps", m.delta_t},
                              {"fwhm_t_ps", m.fwhm_t},     {"delta_omega_rad_per_ps", m.delta_omega},
                              {"fwhm_omega_rad_per_ps", m.fwhm_omega}, {"energy", m.energy}};
    };
    derived = {{"grid", {{"n", n}, {"dt_ps", dt}, {"t_center_ps", t_center}}},
               {"residual_chirp_c2", c2},
               {"chirp_metric", chirp_metric},
               {"chirp_verdict", verdict}};

    return {{"input_moments", moments_json(mi)},
            {"output_moments", moments_json(mo)},
            {"energy_ratio", mo.energy / mi.energy},
            {"residual_chirp_c2", c2},
            {"chirp_metric", chirp_metric},
            {"chirp_tol", chirp_tol},
            {"chirp_verdict", verdict},
            {"stages", static_cast<int>(result.stages.size())}};
}

// shared by `jsa` and the numeric-JSA paths of `hom`
inline SpdcConfig spdc_config_from(const nlohmann::json& cfg, const std::string& command) {
    SpdcConfig s;
    if (cfg.contains("crystal")) s.crystal = load_crystal(require_string(cfg, "crystal", command));
    s.lambda_p_nm = cfg.value("lambda_p_nm", s.lambda_p_nm);
    s.length_mm = cfg.value("length_mm", s.length_mm);
    if (cfg.contains("pump_sigma_rad_per_ps"))
        s.pump_sigma = require_number(cfg, "pump_sigma_rad_per_ps", command);
    else if (cfg.contains("pump_fwhm_fs"))
        s.pump_sigma = std::sqrt(2.0 * std::log(2.0)) /
                       (require_number(cfg, "pump_fwhm_fs", command) * 1e-3);
    const int n = grid_points(cfg, command, s.grid.n_o);
    s.grid.n_o = n;
    s.grid.n_e = n;
    s.grid.span_sigma_o = cfg.value("span_sigma_o", s.grid.span_sigma_o);
    s.grid.span_sigma_e = cfg.value("span_sigma_e", s.grid.span_sigma_e);
    s.sidelobe_filter = cfg.value("filter", s.sidelobe_filter);
    s.filter_order = cfg.value("filter_order", s.filter_order);
    return s;
}

inline JsaKind parse_jsa_kind(const nlohmann::json& cfg, const std::string& key,
                              const std::string& command) {
    const std::string kind = cfg.value(key, "exact");
    if (kind == "exact") return JsaKind::Exact;
    if (kind == "gaussian_approx" || kind == "gaussian") return JsaKind::GaussianApprox;
    throw ConfigParseError(command + ": unknown JSA kind '" + kind +
                           "' (want exact or gaussian_approx)");
}

inline nlohmann::json marginals_json(const PhotonMarginals& m) {
    return {{"sigma_o_rms_rad_per_ps", m.sigma_o_rms},
            {"sigma_e_rms_rad_per_ps", m.sigma_e_rms},
            {"fwhm_o_rad_per_ps", m.fwhm_o},
            {"fwhm_e_rad_per_ps", m.fwhm_e},
            {"sigma_o_rad_per_ps", m.sigma_o},
            {"sigma_e_rad_per_ps", m.sigma_e},
            {"k", m.k},
            {"k_rms", m.k_rms},
            {"delta_t_o_fs", m.delta_t_o * 1e3},
            {"delta_t_e_fs", m.delta_t_e * 1e3},
            {"fwhm_t_o_fs", m.fwhm_t_o * 1e3},
            {"fwhm_t_e_fs", m.fwhm_t_e * 1e3}};
}

inline nlohmann::json run_jsa(const nlohmann::json& cfg, const std::filesystem::path& out,
                              std::vector<std::string>& outputs, nlohmann::json& derived) {
    const SpdcConfig s = spdc_config_from(cfg, "jsa");
    const JsaKind kind = parse_jsa_kind(cfg, "kind", "jsa");

    const PhaseMatch pm = phase_matching_solve(s.crystal, s.lambda_p_nm, s.length_mm);
    const JointSpectralAmplitude j = jsa(s, kind);
    const PhotonMarginals marg = photon_marginals(j);

    {
        std::ostringstream body;
        write_jsa_csv(body, j);
        write_text_file(out / "jsa.csv", body.str());
    }
    {
        std::ostringstream body;
        write_marginal_csv(body, marg.omega_o, marg.s_o);
        write_text_file(out / "marginal_o.csv", body.str());
    }
    {
        std::ostringstream body;
        write_marginal_csv(body, marg.omega_e, marg.s_e);
        write_text_file(out / "marginal_e.csv", body.str());
    }
    outputs.insert(outputs.end(), {"jsa.csv", "marginal_o.csv", "marginal_e.csv"});

    derived = {{"theta_p_deg", pm.theta_p_deg},
               {"tau_e_ps", pm.tau_e_ps},
               {"k_design", j.k_design},
               {"pump_sigma", both_units(s.pump_sigma)},
               {"grid", {{"n_o", s.grid.n_o}, {"n_e", s.grid.n_e},
                         {"span_sigma_o", s.grid.span_sigma_o},
                         {"span_sigma_e", s.grid.span_sigma_e}}}};

    return {{"kind", to_string(kind)},
            {"crystal", s.crystal.name},
            {"phase_match", to_json(pm)},
            {"k_design", j.k_design},
            {"marginals", marginals_json(marg)}};
}

inline nlohmann::json curve_json(const HomCurve& c) {
    nlohmann::json j{{"source", c.source_kind},
                     {"magnification", c.magnification},
                     {"visibility", c.visibility},
                     {"argmax_delay_ps", c.argmax_delay},
                     {"points", static_cast<int>(c.delays.size())}};
    if (std::isfinite(c.t_d_ps)) j["t_d_ps"] = c.t_d_ps;
    if (std::isfinite(c.dip_delay_ps)) j["dip_delay_ps"] = c.dip_delay_ps;
    return j;
}

inline nlohmann::json run_hom(const nlohmann::json& cfg, const std::filesystem::path& out,
                              std::vector<std::string>& outputs, nlohmann::json& derived) {
    const std::string source = require_string(cfg, "source", "hom");
    if (source != "spdc" && source != "spdc_numeric" && source != "emitters")
        throw ConfigParseError("hom: unknown source '" + source +
                               "' (want spdc, spdc_numeric, or emitters)");

    const bool wants_curve = cfg.contains("m");
    const bool wants_scan = cfg.contains("scan_m");
    if (!wants_curve && !wants_scan)
        throw ConfigParseError("hom: provide m (+ delays) for a dip curve, scan_m for a "
                               "visibility scan, or both");
    if (wants_curve && !cfg.contains("delays"))
        throw ConfigParseError("hom: a dip curve needs a 'delays' range (lo:hi:step)");

    nlohmann::json report;
    derived = nlohmann::json::object();

    HomCurve curve;
    if (wants_curve) {
        const double m = require_number(cfg, "m", "hom");
        const std::vector<double> dl = parse_range(cfg.at("delays"), "hom: delays");
        Eigen::VectorXd delays = Eigen::Map<const Eigen::VectorXd>(dl.data(), dl.size());

        if (source == "spdc") {
            const double k = require_number(cfg, "k_ratio", "hom");
            const double omega_p = cfg.value("pump_sigma_rad_per_ps", 19.0);
            curve.delays = delays;
            curve.p_int.resize(delays.size());
            for (int i = 0; i < delays.size(); ++i)
                curve.p_int(i) = p_int_spdc_analytic(k, m, omega_p, delays(i));
            curve.magnification = m;
            curve.source_kind = "spdc_analytic";
            curve.dip_delay_ps = 0.0;
            chronoscope::detail::finish_curve(curve);
            derived["visibility_closed_form"] = spdc_visibility(k, m);
        } else if (source == "spdc_numeric") {
            const SpdcConfig s = spdc_config_from(cfg, "hom");
            const JsaKind kind = parse_jsa_kind(cfg, "jsa_kind", "hom");
            const JointSpectralAmplitude j = jsa(s, kind);
            const std::string td = cfg.value("t_d_mode", "formula");
            if (td != "formula" && td != "optimize")
                throw ConfigParseError("hom: t_d_mode must be formula or optimize, got '" + td + "'");
            const DelayMode mode = td == "formula" ? DelayMode::Formula : DelayMode::Optimize;
            curve = coincidence_curve(j, m, delays, mode);
            derived["t_d_mode"] = td;
            derived["k_design"] = j.k_design;
        } else {
            const EmitterMode e1(require_number(cfg, "tau1_ps", "hom"), cfg.value("mu1", 1.0));
            const EmitterMode e2(require_number(cfg, "tau2_ps", "hom"), cfg.value("mu2", 1.0));
            const std::string mo = cfg.value("mode", "analytic");
            if (mo != "analytic" && mo != "numeric")
                throw ConfigParseError("hom: mode must be analytic or numeric, got '" + mo + "'");
            const EmitterOverlapMode mode =
                mo == "analytic" ? EmitterOverlapMode::Analytic : EmitterOverlapMode::Numeric;
            curve = coincidence_curve(e1, e2, m, delays, mode);
            derived["visibility_closed_form"] = emitter_visibility(e1.tau_ps, e2.tau_ps, m);
        }

        std::ostringstream body;
        write_hom_curve_csv(body, curve);
        write_text_file(out / "hom_curve.csv", body.str());
        outputs.push_back("hom_curve.csv");
        report["curve"] = curve_json(curve);
    }

    if (wants_scan) {
        const std::vector<double> ms = parse_range(cfg.at("scan_m"), "hom: scan_m");
        std::vector<VisibilityPoint> scan;
        if (source == "spdc") {
            const double k = require_number(cfg, "k_ratio", "hom");
            const double omega_p = cfg.value("pump_sigma_rad_per_ps", 19.0);
            scan = visibility_scan_spdc(k, omega_p, ms);
        } else if (source == "emitters") {
            scan = visibility_scan_emitter(require_number(cfg, "tau1_ps", "hom"),
                                           require_number(cfg, "tau2_ps", "hom"), ms);
        } else {
            throw ConfigParseError("hom: visibility scans use the closed-form sources "
                                   "(spdc or emitters); run spdc_numeric curves per M instead");
        }

        std::ostringstream body;
        write_visibility_scan_csv(body, scan);
        write_text_file(out / "visibility_scan.csv", body.str());
        outputs.push_back("visibility_scan.csv");

        const auto best = std::max_element(scan.begin(), scan.end(),
                                           [](const VisibilityPoint& a, const VisibilityPoint& b) {
                                               return a.visibility < b.visibility;
                                           });
        report["scan"] = {{"points", static_cast<int>(scan.size())},
                          {"max_visibility", best->visibility},
                          {"argmax_m", best->magnification}};
    }

    report["source"] = source;
    return report;
}

}  // namespace detail

// Dispatch one command described by a merged config object. Writes the artifact
// files under config["out"] (default ".") and returns the report that also lands
// in report.json. Throws chronoscope::Error subclasses on any failure.
inline nlohmann::json run_from_json(const nlohmann::json& config) {
    if (!config.is_object()) throw ConfigParseError("config must be a JSON object");
    const std::string command = detail::require_string(config, "command", "run");

    const std::filesystem::path out = config.value("out", ".");
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw ConfigParseError("cannot create output directory " + out.string() + ": " +
                                   ec.message());

    std::vector<std::string> outputs;
    nlohmann::json derived;
    nlohmann::json report;
    if (command == "design")
        report = detail::run_design(config, out, outputs, derived);
    else if (command == "classify")
        report = detail::run_classify(config, out, outputs, derived);
    else if (command == "propagate")
        report = detail::run_propagate(config, out, outputs, derived);
    else if (command == "jsa")
        report = detail::run_jsa(config, out, outputs, derived);
    else if (command == "hom")
        report = detail::run_hom(config, out, outputs, derived);
    else
        throw ConfigParseError("unknown command '" + command +
                               "' (want design, classify, propagate, jsa, or hom)");

    report["command"] = command;
    report["version"] = cli_version;
    detail::write_json_file(out / "report.json", report);
    outputs.insert(outputs.begin(), "report.json");

    const nlohmann::json manifest = {{"command", command},
                                     {"version", cli_version},
                                     {"generated_at", detail::now_iso8601_utc()},
                                     {"inputs", config},
                                     {"derived", derived},
                                     {"outputs", outputs}};
    detail::write_json_file(out / "manifest.json", manifest);

    return report;
}

// One-paragraph human summary of a report, for the terminal.
inline void print_run_summary(const nlohmann::json& report, std::ostream& os) {
    const std::string command = report.value("command", "?");
    if (command == "design") {
        const auto& f = report.at("fresnel");
        os << "design: M = " << f.at("magnification").get<double>()
           << ", D_f = " << f.at("focal_1_ps2").get<double>() << " ps^2"
           << ", D_f' = " << f.at("focal_2_ps2").get<double>() << " ps^2"
           << ", min output FWHM = " << f.at("min_output_fwhm_ps").get<double>() << " ps"
           << ", M_omega = " << f.at("fourier_processor_m_omega").get<double>() << "\n";
        os << "        class: " << report.at("classification").at("kind").get<std::string>()
           << "\n";
    } else if (command == "classify") {
        os << "classify: " << report.at("classification").at("kind").get<std::string>()
           << " (spatial counterpart: "
           << report.at("classification").at("spatial_counterpart").get<std::string>() << ")\n";
    } else if (command == "propagate") {
        os << "propagate: " << report.at("stages").get<int>() << " stages, verdict "
           << report.at("chirp_verdict").get<std::string>()
           << " (c2 = " << report.at("residual_chirp_c2").get<double>() << " rad/ps^2)\n";
    } else if (command == "jsa") {
        const auto& pm = report.at("phase_match");
        const auto& m = report.at("marginals");
        os << "jsa: theta_p = " << pm.at("theta_p_deg").get<double>() << " deg"
           << ", tau_e = " << pm.at("tau_e_ps").get<double>() * 1e3 << " fs"
           << ", K = " << m.at("k").get<double>() << "\n";
    } else if (command == "hom") {
        if (report.contains("curve")) {
            const auto& c = report.at("curve");
            os << "hom curve: M = " << c.at("magnification").get<double>()
               << ", V = " << c.at("visibility").get<double>()
               << " at delay " << c.at("argmax_delay_ps").get<double>() << " ps\n";
        }
        if (report.contains("scan")) {
            const auto& s = report.at("scan");
            os << "hom scan: max V = " << s.at("max_visibility").get<double>()
               << " at M = " << s.at("argmax_m").get<double>() << "\n";
        }
    }
}

// Machine-parsable error object (one line on stderr, then a nonzero exit).
inline nlohmann::json error_json(const std::string& kind, const std::string& message) {
    return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace chronoscope

#endif  // CHRONOSCOPE_CLI_HPP
