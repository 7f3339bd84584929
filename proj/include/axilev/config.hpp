#pragma once
// Run configuration: defaults that reproduce the published pipeline, a flat
// key = value file format with dotted sections, and a materials-table
// loader.  Unknown keys are rejected with their line number; values are
// validated when the configuration is turned into module parameter structs.

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "axilev/axion.hpp"
#include "axilev/constraint.hpp"
#include "axilev/metrology.hpp"
#include "axilev/optomech.hpp"
#include "axilev/units.hpp"

namespace axilev::config {

struct RunConfig {
    units::ConstantsMode constants_mode = units::ConstantsMode::PaperLiteral;

    // cavity-optomechanics block
    double omega0_hz = 1e5;
    double omega_m_hz = 1e5;
    double kappa_hz = 1e6;
    double q_factor = 3e12;
    double gamma_m_hz = -1.0;  // negative: derive as omega0 / Q
    double delta_hz = 0.0;
    double g_hz = 200.0;
    double e_pump = 1e3;
    double e_probe = 100.0;
    // sphere mass entering the threshold chain; 10 nm silica sphere
    double m_s_kg = 4.0 / 3.0 * 3.14159265358979323846 * 1e-24 * 2500.0;

    // sphere-plate geometry
    double geometry_R_nm = 10.0;
    double geometry_D_um = 100.0;
    double geometry_t_nm = 200.0;
    double geometry_a_nm = 300.0;

    // frequency-noise block
    double noise_m_eff_kg = 1.05e-20;
    double noise_temperature_k = 1e-3;
    double noise_q_factor = 3e12;
    double noise_delta_f_hz = 3e-8;
    double noise_x2_mean_nm2 = 100.0;
    metrology::FloorMode noise_mode = metrology::FloorMode::Linewidth;

    // constraint block
    std::string regime = "equal";  // proton | neutron | equal | all
    double mass_lo_ev = 1e-10;
    double mass_hi_ev = 20.0;
    int points_per_decade = 40;

    // spectrum block
    double window_lo_hz = -100.0;
    double window_hi_hz = 100.0;
    int n_coarse = 401;
    int n_refine = 64;
    std::vector<double> offsets_hz = {-10.0, 0.0, 10.0};

    // force-gradient probe couplings
    double couplings_m_a_ev = 0.1;
    double couplings_gp2_over_4pi = 1e-10;
    double couplings_gn2_over_4pi = 1e-10;

    std::string materials_file;  // optional override table
    std::string output_dir = "out";
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_double(const std::string& raw, int line, const std::string& key) {
    const std::string v = trim(raw);
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(x)) throw std::invalid_argument("not finite");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("line " + std::to_string(line) + ": value '" + v +
                                    "' for key '" + key + "' is not a finite number");
    }
}

inline int parse_int(const std::string& raw, int line, const std::string& key) {
    const double x = parse_double(raw, line, key);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw std::invalid_argument("line " + std::to_string(line) + ": value for key '" + key +
                                    "' must be an integer");
    return i;
}

inline std::vector<double> parse_double_list(const std::string& raw, int line,
                                             const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(parse_double(item, line, key));
    }
    return out;
}

// Shared tokenizer for the flat format: yields (line_no, key, value) for
// every non-comment, non-blank line.
inline std::vector<std::tuple<int, std::string, std::string>> read_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::vector<std::tuple<int, std::string, std::string>> out;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(n) + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("line " + std::to_string(n) + ": empty key");
        out.emplace_back(n, key, value);
    }
    return out;
}

}  // namespace detail

// Parse a flat key = value configuration on top of the defaults.  The file
// must exist; an empty file leaves every default in place.
inline RunConfig parse_config(const std::string& path, RunConfig base = RunConfig{}) {
    for (const auto& [line, key, value] : detail::read_kv_file(path)) {
        if (key == "constants.mode") {
            if (value == "paper")
                base.constants_mode = units::ConstantsMode::PaperLiteral;
            else if (value == "codata")
                base.constants_mode = units::ConstantsMode::Codata;
            else
                throw std::invalid_argument("line " + std::to_string(line) +
                                            ": constants.mode must be paper or codata");
        } else if (key == "optomech.omega0_hz") {
            base.omega0_hz = detail::parse_double(value, line, key);
        } else if (key == "optomech.omega_m_hz") {
            base.omega_m_hz = detail::parse_double(value, line, key);
        } else if (key == "optomech.kappa_hz") {
            base.kappa_hz = detail::parse_double(value, line, key);
        } else if (key == "optomech.q_factor") {
            base.q_factor = detail::parse_double(value, line, key);
        } else if (key == "optomech.gamma_m_hz") {
            base.gamma_m_hz = detail::parse_double(value, line, key);
        } else if (key == "optomech.delta_hz") {
            base.delta_hz = detail::parse_double(value, line, key);
        } else if (key == "optomech.g_hz") {
            base.g_hz = detail::parse_double(value, line, key);
        } else if (key == "optomech.e_pump") {
            base.e_pump = detail::parse_double(value, line, key);
        } else if (key == "optomech.e_probe") {
            base.e_probe = detail::parse_double(value, line, key);
        } else if (key == "optomech.m_s_kg") {
            base.m_s_kg = detail::parse_double(value, line, key);
        } else if (key == "geometry.R_nm") {
            base.geometry_R_nm = detail::parse_double(value, line, key);
        } else if (key == "geometry.D_um") {
            base.geometry_D_um = detail::parse_double(value, line, key);
        } else if (key == "geometry.t_nm") {
            base.geometry_t_nm = detail::parse_double(value, line, key);
        } else if (key == "geometry.a_nm") {
            base.geometry_a_nm = detail::parse_double(value, line, key);
        } else if (key == "noise.m_eff_kg") {
            base.noise_m_eff_kg = detail::parse_double(value, line, key);
        } else if (key == "noise.temperature_k") {
            base.noise_temperature_k = detail::parse_double(value, line, key);
        } else if (key == "noise.q_factor") {
            base.noise_q_factor = detail::parse_double(value, line, key);
        } else if (key == "noise.delta_f_hz") {
            base.noise_delta_f_hz = detail::parse_double(value, line, key);
        } else if (key == "noise.x2_mean_nm2") {
            base.noise_x2_mean_nm2 = detail::parse_double(value, line, key);
        } else if (key == "noise.mode") {
            if (value == "linewidth")
                base.noise_mode = metrology::FloorMode::Linewidth;
            else if (value == "thermal")
                base.noise_mode = metrology::FloorMode::Thermal;
            else
                throw std::invalid_argument("line " + std::to_string(line) +
                                            ": noise.mode must be linewidth or thermal");
        } else if (key == "regime") {
            if (value != "proton" && value != "neutron" && value != "equal" && value != "all")
                throw std::invalid_argument("line " + std::to_string(line) +
                                            ": regime must be proton|neutron|equal|all");
            base.regime = value;
        } else if (key == "mass_grid.lo_ev") {
            base.mass_lo_ev = detail::parse_double(value, line, key);
        } else if (key == "mass_grid.hi_ev") {
            base.mass_hi_ev = detail::parse_double(value, line, key);
        } else if (key == "mass_grid.points_per_decade") {
            base.points_per_decade = detail::parse_int(value, line, key);
        } else if (key == "spectrum.window_lo_hz") {
            base.window_lo_hz = detail::parse_double(value, line, key);
        } else if (key == "spectrum.window_hi_hz") {
            base.window_hi_hz = detail::parse_double(value, line, key);
        } else if (key == "spectrum.n_coarse") {
            base.n_coarse = detail::parse_int(value, line, key);
        } else if (key == "spectrum.n_refine") {
            base.n_refine = detail::parse_int(value, line, key);
        } else if (key == "spectrum.offsets_hz") {
            base.offsets_hz = detail::parse_double_list(value, line, key);
        } else if (key == "couplings.m_a_ev") {
            base.couplings_m_a_ev = detail::parse_double(value, line, key);
        } else if (key == "couplings.gp2_over_4pi") {
            base.couplings_gp2_over_4pi = detail::parse_double(value, line, key);
        } else if (key == "couplings.gn2_over_4pi") {
            base.couplings_gn2_over_4pi = detail::parse_double(value, line, key);
        } else if (key == "materials.file") {
            base.materials_file = value;
        } else if (key == "output.dir") {
            base.output_dir = value;
        } else {
            throw std::invalid_argument("line " + std::to_string(line) + ": unknown key '" + key +
                                        "'");
        }
    }
    return base;
}

// Materials table: lines of  <Label>.<field> = value  with fields
// rho_si_kg_m3 | rho_natural_MeV4, Z_over_mu, N_over_mu.  Labels Al, Au and
// SiO2 replace the built-in records.
inline axion::MaterialSet load_materials(const std::string& path, const units::PhysConstants& k) {
    struct Partial {
        double rho_si = -1.0, rho_nat = -1.0, z = -1.0, n = -1.0;
    };
    std::map<std::string, Partial> table;
    for (const auto& [line, key, value] : detail::read_kv_file(path)) {
        const std::size_t dot = key.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 >= key.size())
            throw std::invalid_argument("line " + std::to_string(line) +
                                        ": expected '<label>.<field> = value'");
        const std::string label = key.substr(0, dot);
        const std::string field = key.substr(dot + 1);
        Partial& p = table[label];
        if (field == "rho_si_kg_m3")
            p.rho_si = detail::parse_double(value, line, key);
        else if (field == "rho_natural_MeV4")
            p.rho_nat = detail::parse_double(value, line, key);
        else if (field == "Z_over_mu")
            p.z = detail::parse_double(value, line, key);
        else if (field == "N_over_mu")
            p.n = detail::parse_double(value, line, key);
        else
            throw std::invalid_argument("line " + std::to_string(line) + ": unknown material field '" +
                                        field + "'");
    }

    axion::MaterialSet mats = axion::default_materials(k);
    for (const auto& [label, p] : table) {
        axion::Material* slot = nullptr;
        if (label == "Al") slot = &mats.al;
        else if (label == "Au") slot = &mats.au;
        else if (label == "SiO2") slot = &mats.sphere;
        else
            throw std::invalid_argument("materials file: unknown label '" + label +
                                        "' (expected Al, Au, SiO2)");
        if (p.rho_si > 0.0 && p.rho_nat > 0.0)
            throw std::invalid_argument("materials file: give " + label +
                                        " either rho_si_kg_m3 or rho_natural_MeV4, not both");
        if (p.rho_si > 0.0) slot->rho_natural = units::density_si_to_natural(p.rho_si, k);
        if (p.rho_nat > 0.0) slot->rho_natural = p.rho_nat;
        if (p.z > 0.0) slot->Z_over_mu = p.z;
        if (p.n > 0.0) slot->N_over_mu = p.n;
        axion::validate(*slot);
    }
    return mats;
}

// ---- conversion of the validated config into module parameter structs ----

inline units::PhysConstants constants(const RunConfig& c) { return units::make_constants(c.constants_mode); }

inline optomech::OptomechParams optomech_params(const RunConfig& c, double omega_m_offset_hz = 0.0) {
    optomech::OptomechParams p{};
    p.omega0 = c.omega0_hz;
    p.omega_m = c.omega_m_hz + omega_m_offset_hz;
    p.kappa = c.kappa_hz;
    p.Q = c.q_factor;
    p.gamma_m = c.gamma_m_hz > 0.0 ? c.gamma_m_hz : c.omega0_hz / c.q_factor;
    p.Delta = c.delta_hz;
    p.g = c.g_hz;
    p.E_pump = c.e_pump;
    p.E_probe = c.e_probe;
    p.m_s = c.m_s_kg;
    optomech::validate(p);
    return p;
}

inline axion::Geometry geometry(const RunConfig& c, const units::PhysConstants& k) {
    return axion::make_geometry_si(c.geometry_R_nm * 1e-9, c.geometry_D_um * 1e-6,
                                   c.geometry_t_nm * 1e-9, c.geometry_a_nm * 1e-9, k);
}

inline metrology::NoiseParams noise_params(const RunConfig& c) {
    return metrology::make_noise_params(c.noise_m_eff_kg, c.omega0_hz, c.noise_q_factor,
                                        c.noise_delta_f_hz, c.noise_temperature_k,
                                        c.noise_x2_mean_nm2 * 1e-18);
}

inline axion::MaterialSet materials(const RunConfig& c, const units::PhysConstants& k) {
    if (c.materials_file.empty()) return axion::default_materials(k);
    return load_materials(c.materials_file, k);
}

inline std::vector<constraint::Regime> regimes(const RunConfig& c) {
    if (c.regime == "all")
        return {constraint::Regime::ProtonDominant, constraint::Regime::NeutronDominant,
                constraint::Regime::Equal};
    return {constraint::regime_from_name(c.regime)};
}

// Detection threshold for the configured noise policy, built through the
// full chain: floor -> gradient threshold -> natural units.
inline metrology::GradientThreshold threshold(const RunConfig& c, const units::PhysConstants& k) {
    const auto noise = noise_params(c);
    const double floor = metrology::noise_floor(c.noise_mode, noise, k);
    return metrology::gradient_threshold(floor, c.m_s_kg, c.omega0_hz, k);
}

inline void validate(const RunConfig& c) {
    optomech_params(c);
    const auto k = constants(c);
    geometry(c, k);
    noise_params(c);
    if (c.regime != "proton" && c.regime != "neutron" && c.regime != "equal" && c.regime != "all")
        throw std::invalid_argument("regime must be proton|neutron|equal|all");
    if (!(c.mass_lo_ev >= axion::mass_floor_ev))
        throw std::invalid_argument("mass_grid.lo_ev must be at least 1e-12");
    if (!(c.mass_hi_ev > c.mass_lo_ev) || !(c.mass_hi_ev <= 100.0))
        throw std::invalid_argument("mass_grid.hi_ev must lie in (lo, 100]");
    if (c.points_per_decade < 5)
        throw std::invalid_argument("mass_grid.points_per_decade must be at least 5");
    if (!(c.window_lo_hz < c.window_hi_hz))
        throw std::invalid_argument("spectrum window must satisfy lo < hi");
    if (c.n_coarse < 100) throw std::invalid_argument("spectrum.n_coarse must be at least 100");
    if (c.n_refine < 16) throw std::invalid_argument("spectrum.n_refine must be at least 16");
    if (c.offsets_hz.empty()) throw std::invalid_argument("spectrum.offsets_hz must not be empty");
    if (!(c.couplings_m_a_ev > 0.0))
        throw std::invalid_argument("couplings.m_a_ev must be positive");
    if (c.couplings_gp2_over_4pi < 0.0 || c.couplings_gn2_over_4pi < 0.0)
        throw std::invalid_argument("couplings must be nonnegative");
}

}  // namespace axilev::config
