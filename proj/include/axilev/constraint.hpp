#pragma once
// Exclusion bounds on the axion-nucleon coupling versus axion mass.
//
// A detection threshold on the differential force gradient translates into
// an upper bound on g^2/4pi once a coupling regime fixes which nucleon
// couplings participate.  Bounds are evaluated on a log-spaced mass grid;
// they are monotone nondecreasing in the axion mass because the geometry
// integral decays with mass.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "axilev/axion.hpp"
#include "axilev/units.hpp"

namespace axilev::constraint {

enum class Regime { ProtonDominant, NeutronDominant, Equal };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::ProtonDominant: return "proton";
        case Regime::NeutronDominant: return "neutron";
        default: return "equal";
    }
}

inline Regime regime_from_name(const std::string& s) {
    if (s == "proton") return Regime::ProtonDominant;
    if (s == "neutron") return Regime::NeutronDominant;
    if (s == "equal") return Regime::Equal;
    throw std::invalid_argument("unknown regime '" + s + "' (expected proton|neutron|equal)");
}

// Nucleon weight of a material in a given regime: Z/mu, N/mu, or their sum.
inline double nucleon_weight(const axion::Material& m, Regime r) {
    switch (r) {
        case Regime::ProtonDominant: return m.Z_over_mu;
        case Regime::NeutronDominant: return m.N_over_mu;
        default: return m.Z_over_mu + m.N_over_mu;
    }
}

// Upper bound on g^2/4pi at one axion mass:
//   g^2/4pi < m m_H sqrt( threshold / | pi (rho_Al w_Al - rho_Au w_Au) rho_s w_s I(m_a) | )
// with all densities in eV^4 and the threshold in eV^3.
inline double bound_at_mass(Regime regime, double m_a, double threshold_natural,
                            const axion::MaterialSet& mats, const axion::Geometry& geo,
                            const units::PhysConstants& k, double rel_tol = 1e-11) {
    if (!(m_a >= axion::mass_floor_ev && m_a <= 100.0))
        throw std::domain_error("axion mass outside supported range [1e-12, 100] eV");
    if (!(threshold_natural > 0.0)) throw std::domain_error("threshold must be positive");
    axion::validate(mats.al);
    axion::validate(mats.au);
    axion::validate(mats.sphere);

    const double w_al = nucleon_weight(mats.al, regime);
    const double w_au = nucleon_weight(mats.au, regime);
    const double w_s = nucleon_weight(mats.sphere, regime);
    const double plate = mats.al.rho_natural * 1e24 * w_al - mats.au.rho_natural * 1e24 * w_au;
    const double sphere = mats.sphere.rho_natural * 1e24 * w_s;
    const double I = axion::geometry_integral(geo, m_a, rel_tol).value;
    const double den = std::abs(std::numbers::pi * plate * sphere * I);
    if (!(den > 0.0))
        throw std::runtime_error("bound_at_mass: degenerate material contrast or vanished integral");
    return k.m * k.m_H * std::sqrt(threshold_natural / den);
}

struct ConstraintCurve {
    std::vector<double> masses;  // eV, strictly increasing
    std::vector<double> bounds;  // g^2/4pi upper bounds
    Regime regime;
    double threshold_natural;    // eV^3
};

// Log-spaced mass grid with a fixed number of points per decade; the last
// point is pinned to the upper edge.
inline std::vector<double> mass_grid(double lo, double hi, int points_per_decade) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("mass grid needs 0 < lo < hi");
    if (points_per_decade < 5)
        throw std::invalid_argument("mass grid needs at least 5 points per decade");
    std::vector<double> g;
    const double l0 = std::log10(lo), l1 = std::log10(hi);
    const int n = static_cast<int>(std::floor((l1 - l0) * points_per_decade));
    for (int i = 0; i <= n; ++i) {
        const double x = std::pow(10.0, l0 + static_cast<double>(i) / points_per_decade);
        if (x < hi * (1.0 - 1e-12)) g.push_back(x);
    }
    g.push_back(hi);
    return g;
}

inline ConstraintCurve constraint_curve(Regime regime, double lo, double hi, int points_per_decade,
                                        double threshold_natural, const axion::MaterialSet& mats,
                                        const axion::Geometry& geo, const units::PhysConstants& k,
                                        double rel_tol = 1e-11) {
    ConstraintCurve c;
    c.masses = mass_grid(lo, hi, points_per_decade);
    c.bounds.reserve(c.masses.size());
    c.regime = regime;
    c.threshold_natural = threshold_natural;
    for (double m_a : c.masses) {
        double b;
        try {
            b = bound_at_mass(regime, m_a, threshold_natural, mats, geo, k, rel_tol);
        } catch (const std::exception& e) {
            throw std::runtime_error("constraint curve failed at m_a = " + std::to_string(m_a) +
                                     " eV: " + e.what());
        }
        if (!(b > 0.0) || !std::isfinite(b))
            throw std::runtime_error("constraint curve: nonpositive bound at m_a = " +
                                     std::to_string(m_a) + " eV");
        c.bounds.push_back(b);
    }
    for (std::size_t i = 1; i < c.bounds.size(); ++i) {
        if (c.bounds[i] < c.bounds[i - 1] * (1.0 - 1e-9))
            throw std::runtime_error("constraint curve lost monotonicity at m_a = " +
                                     std::to_string(c.masses[i]) + " eV");
    }
    return c;
}

// One named series of (mass, bound) points, used to merge our curves with
// externally supplied reference curves for overlay plotting.
struct OverlaySeries {
    std::string label;
    std::vector<double> masses_ev;
    std::vector<double> bounds;
};

inline OverlaySeries to_series(const ConstraintCurve& c, const std::string& label_prefix) {
    return {label_prefix + "_" + regime_name(c.regime), c.masses, c.bounds};
}

}  // namespace axilev::constraint
