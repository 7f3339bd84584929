// axilev command-line front end.
//
// Subcommands reproduce each stage of the pipeline: cavity transmission
// spectra, the frequency-noise detection floor, sphere-plate force
// gradients, and coupling exclusion curves, plus a constants dump and the
// self-check gate.  Exit codes: 0 success, 1 computation error, 2 usage or
// configuration error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "axilev/axilev.hpp"

namespace {

namespace fs = std::filesystem;
using axilev::io::ordered_json;

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    std::string constants_mode;  // "", "paper", "codata"
    std::string regime;          // "", "proton", "neutron", "equal", "all"
};

axilev::config::RunConfig load_config(const GlobalArgs& g) {
    axilev::config::RunConfig cfg;
    if (!g.config_path.empty()) cfg = axilev::config::parse_config(g.config_path);
    if (!g.constants_mode.empty()) {
        if (g.constants_mode == "paper")
            cfg.constants_mode = axilev::units::ConstantsMode::PaperLiteral;
        else if (g.constants_mode == "codata")
            cfg.constants_mode = axilev::units::ConstantsMode::Codata;
        else
            throw std::invalid_argument("--constants-mode must be paper or codata");
    }
    if (!g.regime.empty()) {
        if (g.regime != "proton" && g.regime != "neutron" && g.regime != "equal" &&
            g.regime != "all")
            throw std::invalid_argument("--regime must be proton|neutron|equal|all");
        cfg.regime = g.regime;
    }
    if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
    axilev::config::validate(cfg);
    return cfg;
}

std::string offset_tag(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

int cmd_spectrum(const GlobalArgs& g, const std::vector<double>* offsets_override) {
    auto cfg = load_config(g);
    if (offsets_override) {
        cfg.offsets_hz = *offsets_override;
        axilev::config::validate(cfg);
    }
    const fs::path out(cfg.output_dir);
    ordered_json peaks = ordered_json::array();
    for (double off : cfg.offsets_hz) {
        const auto p = axilev::config::optomech_params(cfg, off);
        const auto spec = axilev::optomech::scan_spectrum(p, cfg.window_lo_hz, cfg.window_hi_hz,
                                                          cfg.n_coarse, cfg.n_refine);
        axilev::io::atomic_write(out / ("spectrum_" + offset_tag(off) + ".csv"),
                                 axilev::io::spectrum_csv(spec));
        const auto peak =
            axilev::optomech::locate_peak(p, cfg.window_lo_hz, cfg.window_hi_hz);
        ordered_json pj = axilev::io::peak_json(peak);
        pj["mechanical_offset_hz"] = off;
        peaks.push_back(pj);
    }
    axilev::io::write_json(out / "peaks.json", ordered_json{{"peaks", peaks}});
    std::cout << "wrote " << cfg.offsets_hz.size() << " spectra and peaks.json to "
              << out.string() << "\n";
    return 0;
}

int cmd_noise_floor(const GlobalArgs& g) {
    const auto cfg = load_config(g);
    const auto k = axilev::config::constants(cfg);
    const auto n = axilev::config::noise_params(cfg);
    const auto j =
        axilev::io::noise_report_json(cfg.noise_mode, n, cfg.m_s_kg, cfg.omega0_hz, k);
    axilev::io::write_json(fs::path(cfg.output_dir) / "noise_floor.json", j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_force_gradient(const GlobalArgs& g, double m_a, double gp2, double gn2) {
    auto cfg = load_config(g);
    if (m_a > 0.0) cfg.couplings_m_a_ev = m_a;
    if (gp2 >= 0.0) cfg.couplings_gp2_over_4pi = gp2;
    if (gn2 >= 0.0) cfg.couplings_gn2_over_4pi = gn2;
    axilev::config::validate(cfg);

    const auto k = axilev::config::constants(cfg);
    const auto mats = axilev::config::materials(cfg, k);
    const auto geo = axilev::config::geometry(cfg, k);
    const axilev::axion::Couplings c{cfg.couplings_m_a_ev, cfg.couplings_gp2_over_4pi,
                                     cfg.couplings_gn2_over_4pi};
    const auto integral = axilev::axion::geometry_integral(geo, c.m_a);
    const double grad_nat = axilev::axion::differential_force_gradient(mats, geo, c, k);
    const double grad_si = axilev::units::force_gradient_natural_to_si(grad_nat, k);
    const double floor = axilev::metrology::noise_floor(
        cfg.noise_mode, axilev::config::noise_params(cfg), k);
    const auto shift =
        axilev::metrology::shift_report(grad_si, floor, cfg.m_s_kg, cfg.omega0_hz, k);
    const auto j = axilev::io::force_gradient_json(c, integral, grad_nat, grad_si, shift);
    axilev::io::write_json(fs::path(cfg.output_dir) / "force_gradient.json", j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_constrain(const GlobalArgs& g, const std::vector<std::string>& reference_files) {
    const auto cfg = load_config(g);
    const auto k = axilev::config::constants(cfg);
    const auto mats = axilev::config::materials(cfg, k);
    const auto geo = axilev::config::geometry(cfg, k);
    const auto thr = axilev::config::threshold(cfg, k);

    std::vector<axilev::constraint::ConstraintCurve> curves;
    for (auto regime : axilev::config::regimes(cfg))
        curves.push_back(axilev::constraint::constraint_curve(
            regime, cfg.mass_lo_ev, cfg.mass_hi_ev, cfg.points_per_decade, thr.natural, mats,
            geo, k));

    const fs::path out(cfg.output_dir);
    axilev::io::atomic_write(out / "constraint_curves.csv", axilev::io::curve_csv(curves));
    axilev::io::write_json(out / "provenance.json",
                           axilev::io::provenance_json(cfg, k, mats, geo, thr));

    if (!reference_files.empty()) {
        std::vector<axilev::io::ReferenceSeries> refs;
        for (const auto& f : reference_files)
            for (auto& s : axilev::io::read_reference_csv(f)) refs.push_back(std::move(s));
        axilev::io::atomic_write(out / "overlay.csv", axilev::io::overlay_csv(curves, refs));
    }
    std::cout << "wrote constraint_curves.csv (" << curves.size() << " series) to "
              << out.string() << "\n";
    return 0;
}

int cmd_constants(const GlobalArgs& g) {
    const auto cfg = load_config(g);
    const auto j = axilev::io::constants_json(axilev::config::constants(cfg));
    axilev::io::write_json(fs::path(cfg.output_dir) / "constants.json", j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_check() {
    std::string self;
    std::error_code ec;
    const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
    if (!ec) self = exe.string();
    return axilev::verify::report(std::cout, axilev::verify::run_acceptance(self));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "axilev: levitated-sensor axion-coupling pipeline\n"
        "Cavity transmission spectra, detection noise floor, two-axion-exchange\n"
        "force gradients, and exclusion curves on the nucleon coupling g^2/4pi."};
    app.require_subcommand(0, 1);
    app.fallthrough();  // global options may follow the subcommand name

    GlobalArgs g;
    bool check_flag = false;
    app.add_option("--config", g.config_path, "configuration file (key = value lines)");
    app.add_option("--out", g.out_dir, "output directory (default from config: out)");
    app.add_option("--constants-mode", g.constants_mode,
                   "constants set: paper or codata")
        ->check(CLI::IsMember({"paper", "codata"}));
    app.add_option("--regime", g.regime, "coupling regime: proton|neutron|equal|all")
        ->check(CLI::IsMember({"proton", "neutron", "equal", "all"}));
    app.add_flag("--check", check_flag, "run the full self-check gate and exit");

    auto* sp = app.add_subcommand("spectrum", "probe transmission spectra, one CSV per offset");
    std::vector<double> offsets_override;
    sp->add_option("--offsets", offsets_override,
                   "mechanical-frequency offsets in Hz (overrides config)");

    app.add_subcommand("noise-floor", "minimum detectable resonance shift and threshold chain");

    auto* fg = app.add_subcommand("force-gradient",
                                  "differential force gradient for given couplings");
    double fg_m_a = -1.0, fg_gp2 = -1.0, fg_gn2 = -1.0;
    fg->add_option("--m-a", fg_m_a, "axion mass in eV");
    fg->add_option("--gp2", fg_gp2, "proton coupling g^2/4pi");
    fg->add_option("--gn2", fg_gn2, "neutron coupling g^2/4pi");

    auto* cn = app.add_subcommand("constrain", "exclusion curves over the axion-mass grid");
    std::vector<std::string> reference_files;
    cn->add_option("--reference", reference_files,
                   "reference curve CSV (m_a,unit,g2_over_4pi,label); repeatable");

    app.add_subcommand("constants", "dump the physical constants in both unit systems");
    app.add_subcommand("check", "run the full self-check gate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (check_flag || app.got_subcommand("check")) return cmd_check();
        if (app.got_subcommand("spectrum"))
            return cmd_spectrum(g, sp->count("--offsets") ? &offsets_override : nullptr);
        if (app.got_subcommand("noise-floor")) return cmd_noise_floor(g);
        if (app.got_subcommand("force-gradient")) return cmd_force_gradient(g, fg_m_a, fg_gp2, fg_gn2);
        if (app.got_subcommand("constrain")) return cmd_constrain(g, reference_files);
        if (app.got_subcommand("constants")) return cmd_constants(g);
        std::cerr << app.help() << "\n";
        std::cerr << "error: a subcommand is required\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        // parameter domain violations only arise from user-supplied values
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
