#pragma once
// Frequency-shift detection metrology: how a force gradient moves the
// trap resonance, the thermal noise floor of the frequency measurement,
// and the detection threshold expressed as a force gradient.

#include <cmath>
#include <stdexcept>

#include "axilev/units.hpp"

namespace axilev::metrology {

struct NoiseParams {
    double M_eff;    // kg, effective mass of the trapped sphere
    double omega0;   // Hz, trap resonance
    double Q;        // mechanical quality factor
    double Delta_f;  // Hz, measurement bandwidth
    double T;        // K, center-of-mass temperature
    double x2_mean;  // m^2, mean-square displacement of the mode
    double E_C;      // J, trap mode energy M_eff omega0^2 <x^2>
};

inline NoiseParams make_noise_params(double M_eff, double omega0, double Q, double Delta_f,
                                     double T, double x2_mean) {
    if (!(M_eff > 0.0)) throw std::domain_error("effective mass must be positive");
    if (!(omega0 > 0.0)) throw std::domain_error("omega0 must be positive");
    if (!(Q > 0.0)) throw std::domain_error("Q must be positive");
    if (!(Delta_f > 0.0)) throw std::domain_error("bandwidth must be positive");
    if (!(T >= 0.0)) throw std::domain_error("temperature must be nonnegative");
    if (!(x2_mean > 0.0)) throw std::domain_error("mean-square displacement must be positive");
    return {M_eff, omega0, Q, Delta_f, T, x2_mean, M_eff * omega0 * omega0 * x2_mean};
}

inline NoiseParams default_noise_params() {
    // 1 mK center-of-mass temperature, 100 nm^2 displacement, 3e-8 Hz bandwidth
    return make_noise_params(1.05e-20, 1e5, 3e12, 3e-8, 1e-3, 100.0 * 1e-18);
}

// Fractional resonance shift from a force gradient along the trap axis:
//   (omega' - omega0)/omega0 = -dF/dz / (2 m_s omega0^2)
inline double fractional_shift(double force_gradient_si, double m_s, double omega0) {
    if (!(m_s > 0.0)) throw std::domain_error("mass must be positive");
    if (!(omega0 > 0.0)) throw std::domain_error("omega0 must be positive");
    if (!std::isfinite(force_gradient_si)) throw std::domain_error("gradient must be finite");
    return -force_gradient_si / (2.0 * m_s * omega0 * omega0);
}

// Magnitude of the absolute resonance shift, Hz.
inline double resonance_shift(double force_gradient_si, double m_s, double omega0) {
    return std::abs(fractional_shift(force_gradient_si, m_s, omega0)) * omega0;
}

// Thermal noise floor of the frequency measurement:
//   delta_omega = sqrt( (k_B T / E_C) (omega0 Delta_f / Q) )
inline double thermal_noise_floor(const NoiseParams& n, const units::PhysConstants& k) {
    if (!(n.E_C > 0.0)) throw std::domain_error("trap mode energy must be positive");
    return std::sqrt((k.k_B * n.T / n.E_C) * (n.omega0 * n.Delta_f / n.Q));
}

enum class FloorMode { Linewidth, Thermal };

// Smallest resolvable frequency shift under the chosen policy: either the
// mechanical linewidth itself (= the measurement bandwidth) or the thermal
// floor.  The two agree within ~20% for the default configuration.
inline double noise_floor(FloorMode mode, const NoiseParams& n, const units::PhysConstants& k) {
    return mode == FloorMode::Linewidth ? n.Delta_f : thermal_noise_floor(n, k);
}

struct GradientThreshold {
    double si;       // kg/s^2
    double natural;  // eV^3
};

// Force-gradient detection threshold equivalent to a minimum resolvable
// frequency shift:  dF/dz|_min = 2 m_s omega0 delta_omega_min.
inline GradientThreshold gradient_threshold(double delta_omega_min, double m_s, double omega0,
                                            const units::PhysConstants& k) {
    if (!(delta_omega_min >= 0.0)) throw std::domain_error("minimum shift must be nonnegative");
    if (!(m_s > 0.0)) throw std::domain_error("mass must be positive");
    if (!(omega0 > 0.0)) throw std::domain_error("omega0 must be positive");
    const double si = 2.0 * m_s * omega0 * delta_omega_min;
    return {si, units::force_gradient_si_to_natural(si, k)};
}

struct ShiftReport {
    double fractional;         // signed delta_omega / omega0
    double delta_omega;        // Hz, shift produced by the supplied gradient
    double delta_omega_min;    // Hz, resolvable floor used for the verdict
    double threshold_si;       // kg/s^2
    double threshold_natural;  // eV^3
    bool detectable;
};

inline ShiftReport shift_report(double force_gradient_si, double delta_omega_min, double m_s,
                                double omega0, const units::PhysConstants& k) {
    const double frac = fractional_shift(force_gradient_si, m_s, omega0);
    const double dw = resonance_shift(force_gradient_si, m_s, omega0);
    const auto thr = gradient_threshold(delta_omega_min, m_s, omega0, k);
    return {frac, dw, delta_omega_min, thr.si, thr.natural, dw >= delta_omega_min};
}

}  // namespace axilev::metrology
