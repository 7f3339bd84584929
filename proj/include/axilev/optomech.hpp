#pragma once
// Pump-probe transmission of the cavity coupled to the levitated sphere.
//
// The pump drives a steady intracavity intensity sigma (solutions of a
// cubic; the physical branch is the smallest positive root).  The probe
// sideband response then follows from the linearized equations, and the
// normalized transmission is t = 1 - 2 kappa a+ / E_probe.
//
// The mechanical line is ~gamma_m wide at offsets ~omega_m, ten orders of
// magnitude apart, so resonance-sensitive pieces are evaluated in offset
// coordinates:  omega_m^2 - delta^2 is carried as the exact product
// (omega_m - delta)(omega_m + delta).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace axilev::optomech {

struct OptomechParams {
    double omega0;   // Hz, unperturbed mechanical resonance
    double omega_m;  // Hz, actual (possibly shifted) mechanical resonance
    double kappa;    // Hz, cavity decay rate
    double Q;        // mechanical quality factor
    double gamma_m;  // Hz, mechanical damping, omega0 / Q unless overridden
    double Delta;    // Hz, cavity-pump detuning
    double g;        // Hz, optomechanical coupling
    double E_pump;   // pump drive amplitude
    double E_probe;  // probe drive amplitude
    double m_s;      // kg, sphere mass
};

inline OptomechParams default_params() {
    OptomechParams p{};
    p.omega0 = 1e5;
    p.omega_m = 1e5;
    p.kappa = 1e6;
    p.Q = 3e12;
    p.gamma_m = p.omega0 / p.Q;
    p.Delta = 0.0;
    p.g = 200.0;
    p.E_pump = 1e3;
    p.E_probe = 100.0;
    p.m_s = 4.0 / 3.0 * std::numbers::pi * 1e-24 * 2500.0;  // 10 nm silica sphere
    return p;
}

inline void validate(const OptomechParams& p) {
    if (!(p.omega0 > 0.0)) throw std::domain_error("omega0 must be positive");
    if (!(p.omega_m > 0.0)) throw std::domain_error("omega_m must be positive");
    if (!(p.kappa > 0.0)) throw std::domain_error("kappa must be positive");
    if (!(p.gamma_m > 0.0)) throw std::domain_error("gamma_m must be positive");
    if (!(p.Q > 0.0)) throw std::domain_error("Q must be positive");
    if (!(p.g >= 0.0)) throw std::domain_error("g must be nonnegative");
    if (!(p.E_pump >= 0.0)) throw std::domain_error("pump amplitude must be nonnegative");
    if (!(p.E_probe >= 0.0)) throw std::domain_error("probe amplitude must be nonnegative");
    if (!std::isfinite(p.Delta)) throw std::domain_error("Delta must be finite");
    if (!(p.m_s > 0.0)) throw std::domain_error("sphere mass must be positive");
}

struct SteadyState {
    double sigma;     // intracavity intensity |a_s|^2
    double residual;  // |equation residual| / E_pump^2
    bool multi_root;  // true when the cubic has several positive solutions
};

namespace detail {

// real roots of x^3 + a x^2 + b x + c
inline std::vector<double> cubic_roots(double a, double b, double c) {
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double shift = -a / 3.0;
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    std::vector<double> roots;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        const double u = std::cbrt(-0.5 * q + s);
        const double v = std::cbrt(-0.5 * q - s);
        roots.push_back(shift + u + v);
    } else {
        const double r = std::sqrt(-p * p * p / 27.0);
        const double phi = std::acos(std::clamp(-0.5 * q / r, -1.0, 1.0));
        const double mag = 2.0 * std::sqrt(-p / 3.0);
        for (int k = 0; k < 3; ++k)
            roots.push_back(shift + mag * std::cos((phi + 2.0 * std::numbers::pi * k) / 3.0));
    }
    return roots;
}

}  // namespace detail

// Steady-state intensity: solve [kappa^2 + (Delta - beta sigma)^2] sigma = E_pump^2
// with beta = 2 g^2 / omega_m.  Returns the smallest positive root and flags
// the multistable case.
inline SteadyState solve_steady_state(const OptomechParams& p) {
    validate(p);
    const double E2 = p.E_pump * p.E_pump;
    if (E2 == 0.0) return {0.0, 0.0, false};
    const double k2d2 = p.kappa * p.kappa + p.Delta * p.Delta;
    const double beta = 2.0 * p.g * p.g / p.omega_m;
    if (beta == 0.0) return {E2 / k2d2, 0.0, false};

    auto f = [&](double s) {
        const double w = p.Delta - beta * s;
        return (p.kappa * p.kappa + w * w) * s - E2;
    };
    auto df = [&](double s) {
        const double w = p.Delta - beta * s;
        return p.kappa * p.kappa + w * w - 2.0 * beta * s * w;
    };

    // normalized cubic sigma^3 + a sigma^2 + b sigma + c = 0
    const double a = -2.0 * p.Delta / beta;
    const double b = k2d2 / (beta * beta);
    const double c = -E2 / (beta * beta);
    std::vector<double> candidates = detail::cubic_roots(a, b, c);

    // The closed-form roots cancel catastrophically when the smallest root
    // sits many orders below the cubic's natural scale (|beta sigma| << |Delta|),
    // so always add a bisection candidate for the smallest root.  f(0) < 0 and
    // f(E2/kappa^2) >= 0 bracket the first crossing; when the cubic is not
    // monotone the bracket is narrowed to the first rising segment using the
    // stationary points of f.
    {
        double lo = 0.0, hi = E2 / (p.kappa * p.kappa);
        const double crit = p.Delta * p.Delta - 3.0 * p.kappa * p.kappa;
        if (p.Delta > 0.0 && crit > 0.0) {
            const double w = std::sqrt(crit);
            const double s_minus = (2.0 * p.Delta - w) / (3.0 * beta);  // local max of f
            const double s_plus = (2.0 * p.Delta + w) / (3.0 * beta);   // local min of f
            if (s_minus > 0.0 && s_minus < hi && f(s_minus) >= 0.0)
                hi = s_minus;  // first root precedes the local maximum
            else if (s_plus > 0.0 && s_plus < hi && f(s_plus) < 0.0)
                lo = s_plus;  // no crossing before the local minimum
        }
        for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) < 0.0 ? lo : hi) = mid;
        }
        candidates.push_back(0.5 * (lo + hi));
    }

    std::vector<double> positive;
    for (double r : candidates) {
        if (!(r > 0.0) || !std::isfinite(r)) continue;
        // Newton polish against the unnormalized equation
        double s = r;
        for (int it = 0; it < 60; ++it) {
            const double fs = f(s);
            const double dfs = df(s);
            if (dfs == 0.0) break;
            const double step = fs / dfs;
            const double next = s - step;
            if (!(next > 0.0) || !std::isfinite(next)) break;
            s = next;
            if (std::abs(step) <= 1e-16 * s) break;
        }
        if (s > 0.0 && std::abs(f(s)) <= 1e-12 * E2) positive.push_back(s);
    }
    std::sort(positive.begin(), positive.end());
    positive.erase(std::unique(positive.begin(), positive.end(),
                               [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::abs(y); }),
                   positive.end());
    if (positive.empty())
        throw std::runtime_error("steady-state solver: no positive root within residual bound");
    return {positive.front(), std::abs(f(positive.front())) / E2, positive.size() > 1};
}

inline double steady_state_intensity(const OptomechParams& p) { return solve_steady_state(p).sigma; }

struct SidebandSolution {
    double sigma;
    std::complex<double> K1;  // omega_m^2 - i delta gamma_m - delta^2
    std::complex<double> K2;  // -kappa + i delta + i Delta - 2i g^2 sigma / omega_m
    std::complex<double> K3;  //  kappa - i delta + i Delta - 2i g^2 sigma / omega_m
    double K4;                //  2 g^2 sigma omega_m
    std::complex<double> a_plus;
};

// Probe sideband amplitude at probe-pump detuning delta = omega0 + offset.
// The offset form keeps the mechanical-line coordinate exact; use this for
// anything that resolves the line.
inline SidebandSolution probe_sideband_at_offset(const OptomechParams& p, double offset,
                                                 double sigma) {
    const double delta = p.omega0 + offset;
    const double dm = p.omega_m - p.omega0;
    const std::complex<double> K1{(dm - offset) * (p.omega_m + delta), -delta * p.gamma_m};
    const double kerr = 2.0 * p.g * p.g * sigma / p.omega_m;
    const std::complex<double> K2{-p.kappa, delta + p.Delta - kerr};
    const std::complex<double> K3{p.kappa, -delta + p.Delta - kerr};
    const double K4 = 2.0 * p.g * p.g * sigma * p.omega_m;
    const std::complex<double> i{0.0, 1.0};
    const std::complex<double> n1 = K1 * K2 - i * K4;
    const std::complex<double> n2 = K1 * K3 - i * K4;
    const std::complex<double> den = n2 * n1 + K4 * K4;
    const std::complex<double> a_plus = p.E_probe * K1 * n1 / den;
    if (!std::isfinite(a_plus.real()) || !std::isfinite(a_plus.imag()))
        throw std::runtime_error("probe sideband: response denominator vanished (pole)");
    return {sigma, K1, K2, K3, K4, a_plus};
}

inline SidebandSolution probe_sideband(const OptomechParams& p, double delta, double sigma) {
    return probe_sideband_at_offset(p, delta - p.omega0, sigma);
}

// Normalized probe transmission amplitude and intensity |t|^2.
struct TransmissionPoint {
    std::complex<double> t;
    double intensity;
};

inline TransmissionPoint transmission_at_offset_with_sigma(const OptomechParams& p, double offset,
                                                           double sigma) {
    if (!(p.E_probe > 0.0))
        throw std::domain_error("transmission needs a nonzero probe amplitude");
    const auto sb = probe_sideband_at_offset(p, offset, sigma);
    const std::complex<double> t = 1.0 - 2.0 * p.kappa * sb.a_plus / p.E_probe;
    return {t, std::norm(t)};
}

inline TransmissionPoint transmission_at_offset(const OptomechParams& p, double offset) {
    validate(p);
    return transmission_at_offset_with_sigma(p, offset, solve_steady_state(p).sigma);
}

inline TransmissionPoint transmission(const OptomechParams& p, double delta) {
    return transmission_at_offset(p, delta - p.omega0);
}

struct Spectrum {
    std::vector<double> offsets;       // Hz, probe detuning minus omega0
    std::vector<double> transmission;  // |t|^2
    OptomechParams params;
    bool peak_in_window;
};

// Transmission spectrum over a window of probe offsets.  A uniform coarse
// grid is merged with a dyadic refinement cluster around the mechanical
// line so the feature (width gamma_m, ten orders below the window span) is
// actually sampled; halving the refinement step preserves existing nodes.
inline Spectrum scan_spectrum(const OptomechParams& p, double lo = -100.0, double hi = 100.0,
                              int n_coarse = 401, int n_refine = 64) {
    validate(p);
    if (!(lo < hi)) throw std::invalid_argument("scan window must satisfy lo < hi");
    if (n_coarse < 100) throw std::invalid_argument("scan needs at least 100 coarse points");
    if (n_refine < 16) throw std::invalid_argument("scan needs at least 16 refinement points");

    const double sigma = solve_steady_state(p).sigma;
    const double dm = p.omega_m - p.omega0;
    const bool peaked = (dm > lo) && (dm < hi);

    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n_coarse) + 2 * n_refine + 1);
    for (int k = 0; k < n_coarse; ++k)
        xs.push_back(lo + (hi - lo) * (static_cast<double>(k) / (n_coarse - 1)));
    if (peaked) {
        const double half_span = 3.0 * p.gamma_m;
        for (int j = -n_refine; j <= n_refine; ++j) {
            const double x = dm + half_span * (static_cast<double>(j) / n_refine);
            if (x > lo && x < hi) xs.push_back(x);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    Spectrum s;
    s.offsets = std::move(xs);
    s.transmission.reserve(s.offsets.size());
    for (double x : s.offsets)
        s.transmission.push_back(transmission_at_offset_with_sigma(p, x, sigma).intensity);
    s.params = p;
    s.peak_in_window = peaked;
    return s;
}

struct PeakReport {
    double center;  // Hz, offset of the resonance feature from omega0
    double fwhm;    // Hz, full width at half maximum of ||t|^2 - 1|
    double height;  // |t|^2 at the center
};

// Locate the mechanical resonance feature: golden-section maximization of
// ||t|^2 - 1| seeded at omega_m - omega0, then bisection on the half-maximum
// crossings.  Both are resolved to 1e-3 gamma_m.
inline PeakReport locate_peak(const OptomechParams& p, double lo = -100.0, double hi = 100.0) {
    validate(p);
    if (!(lo < hi)) throw std::invalid_argument("search window must satisfy lo < hi");
    const double sigma = solve_steady_state(p).sigma;
    const double dm = p.omega_m - p.omega0;
    if (!(dm > lo && dm < hi))
        throw std::runtime_error("locate_peak: no resonance feature inside the window");

    auto dev = [&](double x) {
        return std::abs(transmission_at_offset_with_sigma(p, x, sigma).intensity - 1.0);
    };

    // golden-section maximization on a bracket a few linewidths wide
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::max(lo, dm - 5.0 * p.gamma_m);
    double b = std::min(hi, dm + 5.0 * p.gamma_m);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = dev(x1), f2 = dev(x2);
    while (b - a > 2e-4 * p.gamma_m) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = dev(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = dev(x1);
        }
    }
    const double center = 0.5 * (a + b);
    const double fc = dev(center);
    if (!(fc > 0.0))
        throw std::runtime_error("locate_peak: no feature found (flat response)");
    const double half = 0.5 * fc;

    // bracket the half-maximum crossing on each side, then bisect
    auto crossing = [&](int dir) {
        double step = p.gamma_m;
        double inner = center;
        double outer = center + dir * step;
        for (int it = 0; it < 60 && dev(outer) > half; ++it) {
            inner = outer;
            step *= 2.0;
            outer = center + dir * step;
            if (outer < lo || outer > hi)
                throw std::runtime_error("locate_peak: half-maximum crossing left the window");
        }
        if (dev(outer) > half)
            throw std::runtime_error("locate_peak: half-maximum crossing not bracketed");
        double x_in = inner, x_out = outer;
        while (std::abs(x_out - x_in) > 5e-4 * p.gamma_m) {
            const double mid = 0.5 * (x_in + x_out);
            (dev(mid) > half ? x_in : x_out) = mid;
        }
        return 0.5 * (x_in + x_out);
    };
    const double right = crossing(+1);
    const double left = crossing(-1);
    const double transmission_center = transmission_at_offset_with_sigma(p, center, sigma).intensity;
    return {center, right - left, transmission_center};
}

}  // namespace axilev::optomech
