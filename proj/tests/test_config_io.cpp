#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "axilev/config.hpp"
#include "axilev/io.hpp"

using namespace axilev;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace {

fs::path tmp_file(const std::string& name, const std::string& content) {
    const fs::path dir = fs::temp_directory_path() / "axilev-unit-tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::trunc);
    out << content;
    return p;
}

}  // namespace

TEST_CASE("empty config file keeps every default") {
    const auto p = tmp_file("empty.cfg", "");
    const auto cfg = config::parse_config(p.string());
    CHECK(cfg.constants_mode == units::ConstantsMode::PaperLiteral);
    CHECK(cfg.kappa_hz == 1e6);
    CHECK(cfg.regime == "equal");
    CHECK(cfg.points_per_decade == 40);
    CHECK(cfg.offsets_hz == std::vector<double>{-10.0, 0.0, 10.0});
    CHECK_NOTHROW(config::validate(cfg));
}

TEST_CASE("partial override changes only the named key") {
    const auto p = tmp_file("partial.cfg",
                            "# comment line\n"
                            "\n"
                            "optomech.kappa_hz = 2e6   # trailing comment\n");
    const auto cfg = config::parse_config(p.string());
    const config::RunConfig defaults{};
    CHECK(cfg.kappa_hz == 2e6);
    CHECK(cfg.omega0_hz == defaults.omega0_hz);
    CHECK(cfg.g_hz == defaults.g_hz);
    CHECK(cfg.mass_lo_ev == defaults.mass_lo_ev);
}

TEST_CASE("config rejects unknown keys with their line number") {
    const auto p = tmp_file("unknown.cfg", "\n\noptomech.kappa = 2e6\n");
    try {
        config::parse_config(p.string());
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        CHECK_THAT(e.what(), ContainsSubstring("line 3"));
        CHECK_THAT(e.what(), ContainsSubstring("optomech.kappa"));
    }
}

TEST_CASE("config rejects malformed values, naming the key") {
    const auto p = tmp_file("badval.cfg", "optomech.q_factor = thirty\n");
    try {
        config::parse_config(p.string());
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        CHECK_THAT(e.what(), ContainsSubstring("optomech.q_factor"));
        CHECK_THAT(e.what(), ContainsSubstring("line 1"));
    }
    const auto p2 = tmp_file("badint.cfg", "mass_grid.points_per_decade = 40.5\n");
    CHECK_THROWS_AS(config::parse_config(p2.string()), std::invalid_argument);
    const auto p3 = tmp_file("noeq.cfg", "just some words\n");
    CHECK_THROWS_AS(config::parse_config(p3.string()), std::invalid_argument);
    CHECK_THROWS_AS(config::parse_config("/nonexistent/path.cfg"), std::invalid_argument);
}

TEST_CASE("config parses enumerations and lists") {
    const auto p = tmp_file("enums.cfg",
                            "constants.mode = codata\n"
                            "noise.mode = thermal\n"
                            "regime = all\n"
                            "spectrum.offsets_hz = -25, 0, 25, 50\n");
    const auto cfg = config::parse_config(p.string());
    CHECK(cfg.constants_mode == units::ConstantsMode::Codata);
    CHECK(cfg.noise_mode == metrology::FloorMode::Thermal);
    CHECK(cfg.regime == "all");
    CHECK(cfg.offsets_hz == std::vector<double>{-25.0, 0.0, 25.0, 50.0});

    CHECK_THROWS_AS(
        config::parse_config(tmp_file("badmode.cfg", "constants.mode = si\n").string()),
        std::invalid_argument);
    CHECK_THROWS_AS(config::parse_config(tmp_file("badreg.cfg", "regime = muon\n").string()),
                    std::invalid_argument);
}

TEST_CASE("config validation rejects unphysical settings") {
    const config::RunConfig defaults{};
    auto cfg = defaults;
    cfg.q_factor = -1.0;
    CHECK_THROWS_AS(config::validate(cfg), std::domain_error);
    cfg = defaults;
    cfg.points_per_decade = 0;
    CHECK_THROWS_AS(config::validate(cfg), std::invalid_argument);
    cfg = defaults;
    cfg.offsets_hz.clear();
    CHECK_THROWS_AS(config::validate(cfg), std::invalid_argument);
    cfg = defaults;
    cfg.mass_hi_ev = 500.0;  // beyond the supported range
    CHECK_THROWS_AS(config::validate(cfg), std::invalid_argument);
}

TEST_CASE("materials file overrides the built-in records") {
    const auto k = units::make_constants(units::ConstantsMode::PaperLiteral);
    const auto p = tmp_file("mats.cfg",
                            "Au.rho_natural_MeV4 = 8.4e-5\n"
                            "SiO2.rho_si_kg_m3 = 2648\n");
    const auto mats = config::load_materials(p.string(), k);
    CHECK(mats.au.rho_natural == 8.4e-5);
    CHECK_THAT(mats.sphere.rho_natural, WithinRel(1.1413e-5, 1e-3));
    // untouched entries keep their defaults
    CHECK(mats.al.rho_natural == 1.2e-5);
    CHECK(mats.au.Z_over_mu == axion::default_materials(k).au.Z_over_mu);

    CHECK_THROWS_AS(config::load_materials(
                        tmp_file("mats_both.cfg",
                                 "Au.rho_natural_MeV4 = 8.4e-5\nAu.rho_si_kg_m3 = 19300\n")
                            .string(),
                        k),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        config::load_materials(tmp_file("mats_label.cfg", "Cu.Z_over_mu = 0.45\n").string(), k),
        std::invalid_argument);
    CHECK_THROWS_AS(
        config::load_materials(tmp_file("mats_field.cfg", "Au.color = gold\n").string(), k),
        std::invalid_argument);
}

TEST_CASE("17-digit formatting round-trips doubles exactly") {
    for (double x : {3.141592653589793, 1e-300, 3.3333333333333335e-8, -2.5, 4.09911357424e-49}) {
        const std::string s = io::fmt17(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
}

TEST_CASE("atomic write leaves only the final file") {
    const fs::path dir = fs::temp_directory_path() / "axilev-unit-tests" / "atomic" / "nested";
    fs::remove_all(dir.parent_path());
    const fs::path p = dir / "out.txt";
    io::atomic_write(p, "payload");
    std::ifstream in(p);
    std::string got;
    std::getline(in, got);
    CHECK(got == "payload");
    CHECK_FALSE(fs::exists(p.string() + ".tmp"));
}

TEST_CASE("spectrum and curve CSVs carry the documented headers") {
    optomech::Spectrum s;
    s.offsets = {-1.0, 0.0};
    s.transmission = {1.0, 14.25};
    const std::string csv = io::spectrum_csv(s);
    CHECK_THAT(csv, ContainsSubstring("offset_hz,transmission\n"));
    CHECK_THAT(csv, ContainsSubstring("14.25"));

    constraint::ConstraintCurve c;
    c.masses = {1e-10, 1e-9};
    c.bounds = {1.3e-10, 1.3e-10};
    c.regime = constraint::Regime::Equal;
    constraint::ConstraintCurve c2 = c;
    c2.regime = constraint::Regime::ProtonDominant;
    const std::string curve = io::curve_csv({c, c2});
    CHECK(curve.rfind("m_a_ev,g2_over_4pi,regime\n", 0) == 0);
    CHECK_THAT(curve, ContainsSubstring(",equal\n"));
    CHECK_THAT(curve, ContainsSubstring(",proton\n"));
}

TEST_CASE("reference curves load with unit normalization") {
    const auto p = tmp_file("refs.csv",
                            "m_a,unit,g2_over_4pi,label\n"
                            "1.0,eV,1e-6,prior_a\n"
                            "2.0,meV,2e-7,prior_a\n"
                            "3.0,ueV,3e-8,prior_b\n");
    const auto refs = io::read_reference_csv(p.string());
    REQUIRE(refs.size() == 2);
    CHECK(refs[0].label == "prior_a");
    CHECK(refs[0].masses_ev == std::vector<double>{1.0, 2e-3});
    CHECK(refs[1].masses_ev == std::vector<double>{3e-6});
    CHECK(refs[1].bounds == std::vector<double>{3e-8});
}

TEST_CASE("reference curves reject schema violations") {
    CHECK_THROWS_AS(io::read_reference_csv(
                        tmp_file("refs_hdr.csv", "mass,unit,bound,label\n1,eV,1,x\n").string()),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        io::read_reference_csv(
            tmp_file("refs_cols.csv", "m_a,unit,g2_over_4pi,label\n1,eV,1\n").string()),
        std::invalid_argument);
    CHECK_THROWS_AS(
        io::read_reference_csv(
            tmp_file("refs_unit.csv", "m_a,unit,g2_over_4pi,label\n1,GeV,1,x\n").string()),
        std::invalid_argument);
    CHECK_THROWS_AS(io::read_reference_csv(
                        tmp_file("refs_label.csv", "m_a,unit,g2_over_4pi,label\n1,eV,1,\n").string()),
                    std::invalid_argument);
    CHECK_THROWS_AS(io::read_reference_csv(tmp_file("refs_empty.csv", "").string()),
                    std::invalid_argument);
}

TEST_CASE("overlay table merges our curves with reference series") {
    constraint::ConstraintCurve c;
    c.masses = {1e-10};
    c.bounds = {1.3e-10};
    c.regime = constraint::Regime::Equal;

    SECTION("no references: only our series") {
        const std::string t = io::overlay_csv({c}, {});
        CHECK_THAT(t, ContainsSubstring("this_work_equal"));
        CHECK(t.find("prior") == std::string::npos);
    }
    SECTION("with a reference: two labeled series, no interpolation") {
        io::ReferenceSeries r{"prior_a", {2e-3}, {1e-7}};
        const std::string t = io::overlay_csv({c}, {r});
        CHECK_THAT(t, ContainsSubstring("this_work_equal"));
        CHECK_THAT(t, ContainsSubstring("prior_a"));
        CHECK_THAT(t, ContainsSubstring("0.002,"));  // reference point carried verbatim
    }
}

TEST_CASE("JSON reports expose the documented keys") {
    const auto k = units::make_constants(units::ConstantsMode::PaperLiteral);
    const config::RunConfig cfg{};

    const auto noise = io::noise_report_json(metrology::FloorMode::Linewidth,
                                             config::noise_params(cfg), cfg.m_s_kg,
                                             cfg.omega0_hz, k);
    CHECK(noise["mode"] == "linewidth");
    CHECK(noise["delta_omega_min_hz"].get<double>() == 3e-8);
    CHECK_THAT(noise["threshold_si_n_per_m"].get<double>(), WithinRel(6.2832e-23, 1e-4));
    CHECK_THAT(noise["threshold_natural_ev3"].get<double>(), WithinRel(1.5276e-17, 1e-3));
    CHECK_THAT(noise["floors"]["thermal_hz"].get<double>(), WithinRel(3.6253e-8, 1e-4));
    CHECK(noise["floors"]["linewidth_hz"].get<double>() == 3e-8);

    const auto consts = io::constants_json(k);
    CHECK(consts["mode"] == "paper");
    CHECK(consts["si"]["hbar_j_s"].get<double>() == 1.054571817e-34);
    CHECK(consts["natural"]["m_nucleon_mean_ev"].get<double>() == 938.9150e6);
    CHECK(consts["conversion"]["force_gradient_natural_ev3_per_n_per_m"].get<double>() ==
          2.4313e5);

    const auto mats = axion::default_materials(k);
    const auto geo = axion::default_geometry(k);
    const auto thr = config::threshold(cfg, k);
    const auto prov = io::provenance_json(cfg, k, mats, geo, thr);
    CHECK(prov["tool_version"] == io::tool_version);
    CHECK(prov["constants_mode"] == "paper");
    CHECK(prov["mass_grid"]["points_per_decade"].get<int>() == 40);
    CHECK(prov["materials"]["Au"]["rho_natural_mev4"].get<double>() == 8.3e-5);
    // deterministic reruns forbid wall-clock fields
    CHECK_FALSE(prov.contains("timestamp"));
    CHECK_FALSE(prov.contains("generated_at"));

    const optomech::PeakReport pk{10.0, 3.3e-8, 14.08};
    const auto pj = io::peak_json(pk);
    CHECK(pj["center_hz"].get<double>() == 10.0);
    CHECK(pj["fwhm_hz"].get<double>() == 3.3e-8);
    CHECK(pj["height"].get<double>() == 14.08);
}
