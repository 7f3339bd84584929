#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "axilev/axion.hpp"
#include "axilev/units.hpp"
#include "axilev/verify.hpp"

using namespace axilev;
using namespace axilev::axion;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const units::PhysConstants kc = units::make_constants(units::ConstantsMode::Codata);
const units::PhysConstants kp = units::make_constants(units::ConstantsMode::PaperLiteral);
}  // namespace

TEST_CASE("default geometry converts to the expected natural-unit values") {
    const auto g = default_geometry(kc);
    CHECK_THAT(g.R, WithinRel(0.050677307, 1e-7));        // 10 nm sphere radius
    CHECK_THAT(g.D, WithinRel(506.77307, 1e-7));          // 100 um plate thickness
    CHECK_THAT(g.d, WithinRel(2.5338653596307457, 1e-12));  // 500 nm center distance
    CHECK(g.d == g.a + g.t);
}

TEST_CASE("geometry construction enforces the sphere-plate layout") {
    CHECK_THROWS_AS(make_geometry(0.0, 500.0, 1.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(make_geometry(0.05, -1.0, 1.0, 1.5), std::domain_error);
    // the sphere center must clear its own radius
    CHECK_THROWS_AS(make_geometry(2.0, 500.0, 1.0, 1.5), std::domain_error);
}

TEST_CASE("plate-thickness kernel phi") {
    SECTION("zero separation gives exactly zero") {
        CHECK(phi_kernel(0.0, 5.0) == 0.0);
        CHECK(phi_kernel(0.0, 1e-6) == 0.0);
    }
    SECTION("series branch agrees with the exact closed form near the switch") {
        const double z = 7.3;
        // below the branch point the closed form still carries ~1e-12 of
        // cancellation noise; the series must sit inside that band
        for (double s : {0.5e-4, 0.999e-4}) {
            const double r = s / (2.0 * z);
            const double closed = r - 0.5 / z + std::exp(-2.0 * r * z) * (r + 0.5 / z);
            CHECK_THAT(phi_kernel(r, z), WithinRel(closed, 1e-10));
        }
    }
    SECTION("thick-plate saturation: exponential term vanishes") {
        const double r = 2.0, z = 12.5;  // 2 r z = 50
        CHECK_THAT(phi_kernel(r, z), WithinRel(r - 0.5 / z, 1e-15));
    }
    SECTION("small-separation expansion is first order in r") {
        const double z = 3.0;
        const double r = 1e-9;
        // phi -> s/2z = r for s -> 0, minus O(s^2)
        CHECK_THAT(phi_kernel(r, z), WithinRel(r, 1e-8));
    }
    SECTION("rejects non-physical arguments") {
        CHECK_THROWS_AS(phi_kernel(1.0, 0.0), std::domain_error);
        CHECK_THROWS_AS(phi_kernel(-1.0, 1.0), std::domain_error);
    }
}

TEST_CASE("two-axion-exchange potential") {
    SECTION("matches the defining expression with an independent Bessel evaluation") {
        const Couplings c{1.0, 2e-10, 3e-10};
        const double r = 1e-3;
        const double got = two_axion_potential(r, c, NucleonPair::ProtonNeutron, kp);
        const double pair = c.gp2_over_4pi * c.gn2_over_4pi;
        const double expect = -(pair / (2.0 * std::numbers::pi * kp.m * kp.m)) *
                              (c.m_a / (r * r)) * verify::bessel_k1_integral(2.0 * c.m_a * r);
        CHECK_THAT(got, WithinRel(expect, 1e-11));
        CHECK(got < 0.0);  // attractive
    }
    SECTION("pair selection scales with the chosen couplings") {
        const Couplings c{0.5, 2e-10, 3e-10};
        const double r = 1e-2;
        const double vpp = two_axion_potential(r, c, NucleonPair::ProtonProton, kp);
        const double vpn = two_axion_potential(r, c, NucleonPair::ProtonNeutron, kp);
        const double vnn = two_axion_potential(r, c, NucleonPair::NeutronNeutron, kp);
        CHECK_THAT(vpn / vpp, WithinRel(c.gn2_over_4pi / c.gp2_over_4pi, 1e-14));
        CHECK_THAT(vnn / vpp, WithinRel(std::pow(c.gn2_over_4pi / c.gp2_over_4pi, 2), 1e-14));
    }
    SECTION("zero coupling gives exactly zero") {
        const Couplings c{1e-3, 0.0, 0.0};
        CHECK(two_axion_potential(1.0, c, NucleonPair::ProtonProton, kp) == 0.0);
    }
    SECTION("separations inside the nucleon-scale validity range are rejected") {
        const Couplings c{1.0, 1e-10, 1e-10};
        CHECK_THROWS_AS(two_axion_potential(1e-8, c, NucleonPair::ProtonProton, kp),
                        std::domain_error);
    }
}

// Reference values for the geometry integral, computed with
// arbitrary-precision quadrature on the same sphere-plate layout.
TEST_CASE("geometry integral reproduces high-precision references") {
    const auto g = default_geometry(kc);
    struct Ref { double m_a, I; };
    const Ref refs[] = {
        {1e-11, 0.26825961639},
        {1e-10, 0.268259609128},
        {1e-9, 0.268259536515},
        {1e-8, 0.268258810394},
        {1e-6, 0.268179053529},
        {1e-4, 0.260769957071},
        {1e-3, 0.215708809879},
        {1e-2, 0.109736915013},
        {0.1, 0.0205926744273},
        {1.0, 2.25166282601e-5},
        {10.0, 1.2007676882701562e-26},
        {20.0, 4.1003911247875809e-49},
    };
    for (const auto& r : refs) {
        INFO("m_a = " << r.m_a << " eV");
        const auto res = geometry_integral(g, r.m_a);
        CHECK_THAT(res.value, WithinRel(r.I, 2e-8));
        CHECK(res.error_estimate < 1e-6 * std::abs(res.value));
        CHECK_FALSE(res.mass_clamped);
        // independent fixed-rule route on the hyperbolic substitution
        CHECK_THAT(geometry_integral_cosh_rule(g, r.m_a), WithinRel(r.I, 1e-9));
    }
}

TEST_CASE("geometry integral honors the requested tolerance scale") {
    const auto g = default_geometry(kc);
    const double loose = geometry_integral(g, 1e-3, 1e-6).value;
    const double tight = geometry_integral(g, 1e-3, 1e-12).value;
    CHECK_THAT(loose, WithinRel(tight, 1e-6));
    CHECK_THAT(tight, WithinRel(0.215708809879, 1e-10));
}

TEST_CASE("masses below the infrared floor are clamped and flagged") {
    const auto g = default_geometry(kc);
    const auto low = geometry_integral(g, 1e-13);
    CHECK(low.mass_clamped);
    CHECK(low.m_a_used == mass_floor_ev);
    const auto at_floor = geometry_integral(g, mass_floor_ev);
    CHECK_FALSE(at_floor.mass_clamped);
    CHECK(low.value == at_floor.value);
    CHECK_THROWS_AS(geometry_integral(g, 0.0), std::domain_error);
    CHECK_THROWS_AS(geometry_integral(g, -1.0), std::domain_error);
}

TEST_CASE("integral is flat on the low-mass plateau") {
    const auto g = default_geometry(kc);
    const double a = geometry_integral(g, 1e-11, 1e-11).value;
    const double b = geometry_integral(g, 1e-10, 1e-11).value;
    CHECK_THAT(a, WithinRel(b, 1e-7));
    CHECK(a > b);  // but still strictly decreasing in mass
}

TEST_CASE("published material records and density round trip") {
    const auto mats = default_materials(kp);
    CHECK(mats.al.rho_natural == 1.2e-5);
    CHECK(mats.au.rho_natural == 8.3e-5);
    CHECK(mats.sphere.rho_natural == 1.1e-5);
    // physical-constants mode derives from SI densities instead
    const auto si_mats = default_materials(kc);
    CHECK_THAT(si_mats.au.rho_natural, WithinRel(8.3e-5, 0.05));
    CHECK_THAT(si_mats.al.rho_natural, WithinRel(1.2e-5, 0.05));
    CHECK(si_mats.al.Z_over_mu == mats.al.Z_over_mu);
}

TEST_CASE("coupling coefficients and the differential gradient") {
    const auto mats = default_materials(kp);
    const auto g = default_geometry(kp);
    const Couplings c{0.1, 1e-10, 1e-10};

    SECTION("differential gradient matches the assembled product at a frozen integral") {
        const double I = 0.0205926744273;  // I(0.1 eV), high-precision reference
        const auto cc = [&](const Material& m) {
            return m.rho_natural * 1e24 *
                   (c.gp2_over_4pi * m.Z_over_mu + c.gn2_over_4pi * m.N_over_mu);
        };
        const double expect = std::numbers::pi / (kp.m * kp.m * kp.m_H * kp.m_H) *
                              (cc(mats.al) - cc(mats.au)) * cc(mats.sphere) * I;
        CHECK_THAT(differential_force_gradient(mats, g, c, kp), WithinRel(expect, 2e-8));
    }
    SECTION("gold outweighs aluminium, so the equal-coupling signal is negative") {
        CHECK(differential_force_gradient(mats, g, c, kp) < 0.0);
    }
    SECTION("swapping the plate sections only flips the sign") {
        MaterialSet swapped = mats;
        std::swap(swapped.al, swapped.au);
        const double a = differential_force_gradient(mats, g, c, kp);
        const double b = differential_force_gradient(swapped, g, c, kp);
        CHECK_THAT(std::abs(a), WithinRel(std::abs(b), 1e-15));
        CHECK(a == -b);
    }
    SECTION("single-section gradient is attractive toward either section") {
        CHECK(force_gradient(mats.al, mats.sphere, g, c, kp) > 0.0);
        CHECK(force_gradient(mats.au, mats.sphere, g, c, kp) > 0.0);
    }
    SECTION("material validation rejects nonpositive entries") {
        Material bad = mats.al;
        bad.rho_natural = 0.0;
        CHECK_THROWS_AS(validate(bad), std::domain_error);
    }
}
