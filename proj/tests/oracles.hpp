// Test-only oracles, independent of the code paths they check
#pragma once

#include <pendulum_vib/pendulum_vib.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

namespace pendulum_vib::oracle {

/// Central difference of f at x.
template <typename F> double central_diff(const F &f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// |a - b| relative to max(|a|, |b|, floor).
inline double rel_err(double a, double b, double floor = 1.0) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// V̄ written out independently of potential.hpp.
inline double v_direct(double phi, double a_minus_c, double b) {
    const double s = std::sin(phi);
    const double barrier = b == 0.0 ? 0.0 : b / (2.0 * s * s);
    return barrier + 0.5 * a_minus_c * s * s - std::cos(phi);
}

/// dV̄/dφ by central differences of the direct formula.
inline double dv_fd(double phi, double a_minus_c, double b, double h = 1e-6) {
    return central_diff([&](double x) { return v_direct(x, a_minus_c, b); }, phi, h);
}

/// Number of strict sign changes of dV̄, estimated by central differences of
/// the directly written V̄, on a uniform grid of `points` over [lo, hi].
inline std::size_t brute_force_root_count(double a_minus_c, double b,
                                          std::size_t points = 100000,
                                          double lo = 1e-6,
                                          double hi = std::numbers::pi - 1e-6) {
    auto slope = [&](double x) {
        const double h = std::min(1e-6, 1e-3 * std::min(x, std::numbers::pi - x));
        return dv_fd(x, a_minus_c, b, h);
    };
    std::size_t count = 0;
    double prev = slope(lo);
    for (std::size_t i = 1; i < points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        const double cur = slope(x);
        if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
            ++count;
        }
        if (cur != 0.0) {
            prev = cur;
        }
    }
    return count;
}

/// Time average of the full Hamiltonian over one fast period with the slow
/// state frozen, by composite Simpson quadrature.
inline double time_averaged_full_hamiltonian(const FullState &s, const Excitation &e,
                                             const PhysicalParams &p, double t0 = 0.0,
                                             std::size_t intervals = 4096) {
    const double period = e.fast_period();
    const double h = period / static_cast<double>(intervals);
    double sum = 0.0;
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double t = t0 + h * static_cast<double>(i);
        const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * full_hamiltonian(s, t, e, p);
    }
    return sum * h / 3.0 / period;
}

// =============================================================================
// Random generators
// =============================================================================

inline HarmonicSeries random_series(std::mt19937_64 &rng, std::size_t max_order = 4) {
    std::uniform_int_distribution<std::size_t> order(0, max_order);
    std::uniform_real_distribution<double> coeff(-1.5, 1.5);
    HarmonicSeries hs;
    const std::size_t kc = order(rng);
    const std::size_t ks = order(rng);
    for (std::size_t k = 0; k < kc; ++k) {
        hs.cos_coeffs.push_back(coeff(rng));
    }
    for (std::size_t k = 0; k < ks; ++k) {
        hs.sin_coeffs.push_back(coeff(rng));
    }
    return hs;
}

inline Excitation random_excitation(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> eps(0.01, 0.3);
    std::uniform_real_distribution<double> om(0.3, 3.0);
    return Excitation(random_series(rng), random_series(rng), random_series(rng), eps(rng),
                      om(rng));
}

inline FullState random_state(std::mt19937_64 &rng, double pole_margin = 0.1) {
    std::uniform_real_distribution<double> phi(pole_margin, std::numbers::pi - pole_margin);
    std::uniform_real_distribution<double> alpha(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> mom(-2.0, 2.0);
    return {phi(rng), alpha(rng), mom(rng), mom(rng)};
}

} // namespace pendulum_vib::oracle
