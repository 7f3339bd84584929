#pragma once
// Serialization: CSV and JSON emitters for every subcommand, atomic file
// writes, and the reference-curve reader used for overlay tables.  All
// floating-point output is printed with 17 significant digits so repeated
// runs are byte-identical and values round-trip exactly.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "axilev/axion.hpp"
#include "axilev/config.hpp"
#include "axilev/constraint.hpp"
#include "axilev/metrology.hpp"
#include "axilev/optomech.hpp"
#include "axilev/units.hpp"

namespace axilev::io {

inline constexpr const char* tool_version = "1.0.0";

using ordered_json = nlohmann::ordered_json;

// 17 significant digits: enough to reconstruct the exact double.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Write-then-rename so readers never observe a half-written file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

// ---- spectrum ----

inline std::string spectrum_csv(const optomech::Spectrum& s) {
    std::string out = "offset_hz,transmission\n";
    for (std::size_t i = 0; i < s.offsets.size(); ++i)
        out += fmt17(s.offsets[i]) + "," + fmt17(s.transmission[i]) + "\n";
    return out;
}

inline ordered_json peak_json(const optomech::PeakReport& p) {
    return ordered_json{{"center_hz", p.center}, {"fwhm_hz", p.fwhm}, {"height", p.height}};
}

// ---- noise floor ----

inline ordered_json noise_report_json(metrology::FloorMode mode, const metrology::NoiseParams& n,
                                      double m_s_kg, double omega0_hz,
                                      const units::PhysConstants& k) {
    const double floor = metrology::noise_floor(mode, n, k);
    const auto thr = metrology::gradient_threshold(floor, m_s_kg, omega0_hz, k);
    ordered_json j;
    j["delta_omega_min_hz"] = floor;
    j["threshold_si_n_per_m"] = thr.si;
    j["threshold_natural_ev3"] = thr.natural;
    j["mode"] = mode == metrology::FloorMode::Linewidth ? "linewidth" : "thermal";
    // both candidate floors, for audit against each other
    j["floors"] = ordered_json{
        {"linewidth_hz", metrology::noise_floor(metrology::FloorMode::Linewidth, n, k)},
        {"thermal_hz", metrology::noise_floor(metrology::FloorMode::Thermal, n, k)}};
    return j;
}

// ---- force gradient ----

inline ordered_json force_gradient_json(const axion::Couplings& c, const axion::IntegralResult& integral,
                                        double gradient_natural, double gradient_si,
                                        const metrology::ShiftReport& shift) {
    ordered_json j;
    j["m_a_ev"] = c.m_a;
    j["gp2_over_4pi"] = c.gp2_over_4pi;
    j["gn2_over_4pi"] = c.gn2_over_4pi;
    j["geometry_integral_ev_inv"] = integral.value;
    j["integral_error_estimate"] = integral.error_estimate;
    j["mass_clamped"] = integral.mass_clamped;
    j["gradient_natural_ev3"] = gradient_natural;
    j["gradient_si_n_per_m"] = gradient_si;
    j["fractional_shift"] = shift.fractional;
    j["resonance_shift_hz"] = shift.delta_omega;
    j["detectable"] = shift.detectable;
    return j;
}

// ---- constraint curves ----

inline std::string curve_csv(const std::vector<constraint::ConstraintCurve>& curves) {
    std::string out = "m_a_ev,g2_over_4pi,regime\n";
    for (const auto& c : curves) {
        const std::string name = constraint::regime_name(c.regime);
        for (std::size_t i = 0; i < c.masses.size(); ++i)
            out += fmt17(c.masses[i]) + "," + fmt17(c.bounds[i]) + "," + name + "\n";
    }
    return out;
}

// Full parameter snapshot accompanying a curve CSV.  Deliberately contains
// no timestamps or host identifiers: reruns must be byte-identical.
inline ordered_json provenance_json(const config::RunConfig& c, const units::PhysConstants& k,
                                    const axion::MaterialSet& mats, const axion::Geometry& geo,
                                    const metrology::GradientThreshold& thr) {
    ordered_json j;
    j["tool_version"] = tool_version;
    j["constants_mode"] = units::mode_name(k.mode);
    j["threshold"] = ordered_json{{"si_n_per_m", thr.si}, {"natural_ev3", thr.natural}};
    j["noise"] = ordered_json{{"m_eff_kg", c.noise_m_eff_kg},
                              {"temperature_k", c.noise_temperature_k},
                              {"q_factor", c.noise_q_factor},
                              {"delta_f_hz", c.noise_delta_f_hz},
                              {"x2_mean_nm2", c.noise_x2_mean_nm2},
                              {"mode", c.noise_mode == metrology::FloorMode::Linewidth
                                           ? "linewidth"
                                           : "thermal"}};
    j["sensor"] = ordered_json{{"m_s_kg", c.m_s_kg}, {"omega0_hz", c.omega0_hz}};
    j["geometry"] = ordered_json{{"R_nm", c.geometry_R_nm},
                                 {"D_um", c.geometry_D_um},
                                 {"t_nm", c.geometry_t_nm},
                                 {"a_nm", c.geometry_a_nm},
                                 {"R_natural_ev_inv", geo.R},
                                 {"D_natural_ev_inv", geo.D},
                                 {"d_natural_ev_inv", geo.d}};
    auto mat = [](const axion::Material& m) {
        return ordered_json{{"rho_natural_mev4", m.rho_natural},
                            {"Z_over_mu", m.Z_over_mu},
                            {"N_over_mu", m.N_over_mu}};
    };
    j["materials"] = ordered_json{{"Al", mat(mats.al)}, {"Au", mat(mats.au)}, {"SiO2", mat(mats.sphere)}};
    j["mass_grid"] = ordered_json{{"lo_ev", c.mass_lo_ev},
                                  {"hi_ev", c.mass_hi_ev},
                                  {"points_per_decade", c.points_per_decade}};
    j["regime"] = c.regime;
    return j;
}

// ---- constants dump ----

inline ordered_json constants_json(const units::PhysConstants& k) {
    ordered_json j;
    j["mode"] = units::mode_name(k.mode);
    j["si"] = ordered_json{{"hbar_j_s", k.hbar},
                           {"c_m_per_s", k.c},
                           {"k_b_j_per_k", k.k_B},
                           {"ev_in_j", k.eV_in_J}};
    j["natural"] = ordered_json{{"hbar_c_ev_m", k.hbar_c},
                                {"m_neutron_ev", k.m_n},
                                {"m_proton_ev", k.m_p},
                                {"m_nucleon_mean_ev", k.m},
                                {"m_hydrogen_ev", k.m_H}};
    j["conversion"] = ordered_json{{"force_gradient_natural_ev3_per_n_per_m", k.fg_natural_per_si},
                                   {"density_natural_mev4_per_kg_m3", k.density_natural_per_si}};
    return j;
}

// ---- overlay tables ----

struct ReferenceSeries {
    std::string label;
    std::vector<double> masses_ev;
    std::vector<double> bounds;
};

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(config::detail::trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

inline double mass_unit_in_ev(const std::string& unit, int line) {
    if (unit == "eV") return 1.0;
    if (unit == "meV") return 1e-3;
    if (unit == "ueV" || unit == "µeV" || unit == "μeV") return 1e-6;
    throw std::invalid_argument("reference csv line " + std::to_string(line) +
                                ": unknown mass unit '" + unit + "' (expected eV, meV, ueV)");
}

}  // namespace detail

// Reference exclusion curves from prior work, schema:
//   m_a,unit,g2_over_4pi,label
// with mass units normalized to eV on load.  Reference points are carried
// through verbatim — no interpolation.
inline std::vector<ReferenceSeries> read_reference_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open reference file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("reference file '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = detail::split_csv_row(line);
    if (header != std::vector<std::string>{"m_a", "unit", "g2_over_4pi", "label"})
        throw std::invalid_argument("reference file '" + path +
                                    "': header must be 'm_a,unit,g2_over_4pi,label'");
    std::vector<ReferenceSeries> series;
    std::map<std::string, std::size_t> index;
    int n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (config::detail::trim(line).empty()) continue;
        const auto row = detail::split_csv_row(line);
        if (row.size() != 4)
            throw std::invalid_argument("reference csv line " + std::to_string(n) +
                                        ": expected 4 columns, got " + std::to_string(row.size()));
        const double scale = detail::mass_unit_in_ev(row[1], n);
        const double mass = config::detail::parse_double(row[0], n, "m_a") * scale;
        const double bound = config::detail::parse_double(row[2], n, "g2_over_4pi");
        if (row[3].empty())
            throw std::invalid_argument("reference csv line " + std::to_string(n) + ": empty label");
        auto [it, fresh] = index.try_emplace(row[3], series.size());
        if (fresh) series.push_back(ReferenceSeries{row[3], {}, {}});
        series[it->second].masses_ev.push_back(mass);
        series[it->second].bounds.push_back(bound);
    }
    return series;
}

// Long-format merge of our curves with externally supplied reference
// series, ready for plotting.
inline std::string overlay_csv(const std::vector<constraint::ConstraintCurve>& ours,
                               const std::vector<ReferenceSeries>& refs) {
    std::string out = "m_a_ev,g2_over_4pi,series\n";
    for (const auto& c : ours) {
        const std::string name = std::string("this_work_") + constraint::regime_name(c.regime);
        for (std::size_t i = 0; i < c.masses.size(); ++i)
            out += fmt17(c.masses[i]) + "," + fmt17(c.bounds[i]) + "," + name + "\n";
    }
    for (const auto& r : refs)
        for (std::size_t i = 0; i < r.masses_ev.size(); ++i)
            out += fmt17(r.masses_ev[i]) + "," + fmt17(r.bounds[i]) + "," + r.label + "\n";
    return out;
}

inline void write_json(const std::filesystem::path& path, const ordered_json& j) {
    atomic_write(path, j.dump(2) + "\n");
}

}  // namespace axilev::io
