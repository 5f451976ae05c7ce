// Command-line front end. All real work happens in run_from_json; this file only
// turns subcommands + flags into the config object (config file first, flags
// override) and renders errors as one machine-parsable JSON object on stderr.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <chronoscope/cli.hpp>

namespace {

struct Staged {
    nlohmann::json flags = nlohmann::json::object();
    std::string config_path;
};

void add_common(CLI::App* sc, Staged& st) {
    sc->add_option("--config", st.config_path, "JSON config file; flags override its keys");
    sc->add_option_function<std::string>(
        "--out", [&st](const std::string& v) { st.flags["out"] = v; },
        "output directory (default: current directory)");
}

void num_opt(CLI::App* sc, Staged& st, const std::string& flag, const std::string& key,
             const std::string& help) {
    sc->add_option_function<double>(
        flag, [&st, key](double v) { st.flags[key] = v; }, help);
}

void int_opt(CLI::App* sc, Staged& st, const std::string& flag, const std::string& key,
             const std::string& help) {
    sc->add_option_function<int>(
        flag, [&st, key](int v) { st.flags[key] = v; }, help);
}

void str_opt(CLI::App* sc, Staged& st, const std::string& flag, const std::string& key,
             const std::string& help) {
    sc->add_option_function<std::string>(
        flag, [&st, key](const std::string& v) { st.flags[key] = v; }, help);
}

void spdc_opts(CLI::App* sc, Staged& st) {
    num_opt(sc, st, "--lambda-p-nm", "lambda_p_nm", "pump wavelength [nm] (default 415)");
    num_opt(sc, st, "--length-mm", "length_mm", "crystal length [mm] (default 5)");
    num_opt(sc, st, "--pump-sigma", "pump_sigma_rad_per_ps",
            "pump spectral std Omega_p [rad/ps] (default 19)");
    num_opt(sc, st, "--pump-fwhm-fs", "pump_fwhm_fs",
            "pump intensity FWHM [fs]; alternative to --pump-sigma");
    int_opt(sc, st, "--n", "n", "grid points per axis (default 512; env CHRONOSCOPE_GRID_N)");
    num_opt(sc, st, "--span-sigma-o", "span_sigma_o", "half-span of the Omega axis [sigma_o]");
    num_opt(sc, st, "--span-sigma-e", "span_sigma_e", "half-span of the Omega' axis [sigma_e]");
    num_opt(sc, st, "--filter-order", "filter_order", "sidelobe filter super-Gaussian order");
    str_opt(sc, st, "--crystal", "crystal", "crystal JSON file (default: built-in KDP)");
    sc->add_flag_function(
        "--filter", [&st = st](std::int64_t) { st.flags["filter"] = true; },
        "keep the sinc-sidelobe filter on (default)");
    sc->add_flag_function(
        "--no-filter", [&st = st](std::int64_t) { st.flags["filter"] = false; },
        "disable the sinc-sidelobe filter");
}

nlohmann::json merged_config(const Staged& st, const std::string& command) {
    nlohmann::json cfg = nlohmann::json::object();
    if (!st.config_path.empty()) {
        std::ifstream in(st.config_path);
        if (!in) throw chronoscope::ConfigParseError("cannot open config file: " + st.config_path);
        try {
            in >> cfg;
        } catch (const nlohmann::json::exception& e) {
            throw chronoscope::ConfigParseError("bad JSON in " + st.config_path + ": " + e.what());
        }
        if (!cfg.is_object())
            throw chronoscope::ConfigParseError("config file must hold a JSON object: " +
                                                st.config_path);
    }
    for (const auto& [key, value] : st.flags.items()) cfg[key] = value;  // flags win
    cfg["command"] = command;
    return cfg;
}

int fail(const std::string& kind, const std::string& what) {
    // Error::what() is "Kind: message"; drop the duplicated prefix.
    std::string message = what;
    const std::string prefix = kind + ": ";
    if (message.rfind(prefix, 0) == 0) message = message.substr(prefix.size());
    std::cerr << chronoscope::error_json(kind, message).dump() << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chronoscope: design and simulation of two-lens temporal imaging systems"};
    app.set_version_flag("--version", chronoscope::cli_version);
    app.require_subcommand(1);

    Staged design, classify, propagate, jsa, hom;

    CLI::App* sc_design = app.add_subcommand(
        "design", "size a two-lens telescope from pulse width, magnification, and modulator");
    add_common(sc_design, design);
    num_opt(sc_design, design, "--T0-ps", "t0_ps", "input pulse FWHM T0 [ps]");
    num_opt(sc_design, design, "--M", "m", "magnification (0 < M < 1 compresses)");
    num_opt(sc_design, design, "--bw2-ghz", "bw2_ghz", "second modulator bandwidth [GHz]");
    num_opt(sc_design, design, "--omega-m2", "omega_m2_rad_per_ps",
            "second modulator bandwidth [rad/ps]; alternative to --bw2-ghz");

    CLI::App* sc_classify =
        app.add_subcommand("classify", "solve the design equations for given M and D_inter");
    add_common(sc_classify, classify);
    num_opt(sc_classify, classify, "--M", "m", "magnification");
    num_opt(sc_classify, classify, "--D-inter-ps2", "inter_gdd_ps2", "inter-lens GDD [ps^2]");
    num_opt(sc_classify, classify, "--D-in-ps2", "input_gdd_ps2", "input GDD [ps^2] (default 0)");

    CLI::App* sc_propagate =
        app.add_subcommand("propagate", "run a pulse through an element chain");
    add_common(sc_propagate, propagate);
    str_opt(sc_propagate, propagate, "--chain", "chain", "chain JSON file");
    str_opt(sc_propagate, propagate, "--pulse", "pulse",
            "pulse spec, e.g. gauss:sigma_t=1,t0=0,chirp=0,amp=1");
    int_opt(sc_propagate, propagate, "--n", "n",
            "time-grid points, power of two (default 8192; env CHRONOSCOPE_GRID_N)");
    num_opt(sc_propagate, propagate, "--dt-ps", "dt_ps", "time step [ps] (default 0.01)");
    num_opt(sc_propagate, propagate, "--t-center-ps", "t_center_ps", "grid center [ps]");
    num_opt(sc_propagate, propagate, "--chirp-tol", "chirp_tol",
            "dimensionless |c2| dt^2 threshold for the chirp-free verdict (default 1e-3)");

    CLI::App* sc_jsa = app.add_subcommand(
        "jsa", "phase-match the crystal and export the joint spectral amplitude");
    add_common(sc_jsa, jsa);
    str_opt(sc_jsa, jsa, "--kind", "kind", "exact | gaussian_approx (default exact)");
    spdc_opts(sc_jsa, jsa);

    CLI::App* sc_hom = app.add_subcommand(
        "hom", "two-photon interference: dip curves and visibility scans");
    add_common(sc_hom, hom);
    str_opt(sc_hom, hom, "--source", "source", "spdc | spdc_numeric | emitters");
    num_opt(sc_hom, hom, "--K", "k_ratio", "marginal width ratio K (spdc source)");
    num_opt(sc_hom, hom, "--omega-p", "pump_sigma_rad_per_ps",
            "pump spectral std [rad/ps] (spdc source, default 19)");
    str_opt(sc_hom, hom, "--jsa-kind", "jsa_kind",
            "exact | gaussian_approx (spdc_numeric, default exact)");
    str_opt(sc_hom, hom, "--t-d-mode", "t_d_mode",
            "formula | optimize arm-delay choice (spdc_numeric, default formula)");
    num_opt(sc_hom, hom, "--tau1", "tau1_ps", "first emitter lifetime [ps]");
    num_opt(sc_hom, hom, "--tau2", "tau2_ps", "second emitter lifetime [ps]");
    num_opt(sc_hom, hom, "--mu1", "mu1", "first emitter brightness (default 1)");
    num_opt(sc_hom, hom, "--mu2", "mu2", "second emitter brightness (default 1)");
    str_opt(sc_hom, hom, "--mode", "mode", "analytic | numeric emitter overlap (default analytic)");
    num_opt(sc_hom, hom, "--M", "m", "magnification for a dip curve");
    str_opt(sc_hom, hom, "--delays", "delays", "delay range lo:hi:step [ps] (use --delays=...)");
    str_opt(sc_hom, hom, "--scan-M", "scan_m",
            "magnification range lo:hi:step for a visibility scan (use --scan-M=...)");
    spdc_opts(sc_hom, hom);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        fail("ConfigParseError", e.what());
        return e.get_exit_code();
    }

    const std::pair<CLI::App*, Staged*> table[] = {{sc_design, &design},
                                                   {sc_classify, &classify},
                                                   {sc_propagate, &propagate},
                                                   {sc_jsa, &jsa},
                                                   {sc_hom, &hom}};
    try {
        for (const auto& [sc, st] : table) {
            if (!sc->parsed()) continue;
            const nlohmann::json cfg = merged_config(*st, sc->get_name());
            const nlohmann::json report = chronoscope::run_from_json(cfg);
            chronoscope::print_run_summary(report, std::cout);
            std::cout << "artifacts: " << cfg.value("out", std::string(".")) << "/{report.json, manifest.json, ...}\n";
        }
    } catch (const chronoscope::Error& e) {
        return fail(e.kind(), e.what());
    } catch (const std::exception& e) {
        return fail("Unhandled", e.what());
    }
    return 0;
}
