// Periodic pivot excitations: displacement, velocity, averaged velocity moments
#pragma once

#include <pendulum_vib/errors.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace pendulum_vib {

// =============================================================================
// HarmonicSeries
// =============================================================================

/// Zero-mean 2π-periodic function of the fast phase s,
///
///   f(s) = Σ_{k=1..K} a_k cos(k s) + b_k sin(k s).
///
/// Coefficient k lives at index k-1. The two coefficient lists may have
/// different lengths; missing entries are zero. An empty series is the zero
/// function.
struct HarmonicSeries {
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;

    std::size_t order() const noexcept {
        return std::max(cos_coeffs.size(), sin_coeffs.size());
    }

    double cos_coeff(std::size_t k) const noexcept {
        return (k >= 1 && k <= cos_coeffs.size()) ? cos_coeffs[k - 1] : 0.0;
    }

    double sin_coeff(std::size_t k) const noexcept {
        return (k >= 1 && k <= sin_coeffs.size()) ? sin_coeffs[k - 1] : 0.0;
    }

    bool is_zero() const noexcept {
        auto zero = [](double v) { return v == 0.0; };
        return std::all_of(cos_coeffs.begin(), cos_coeffs.end(), zero) &&
               std::all_of(sin_coeffs.begin(), sin_coeffs.end(), zero);
    }

    double value(double s) const noexcept {
        double sum = 0.0;
        for (std::size_t k = 1; k <= order(); ++k) {
            const double ks = static_cast<double>(k) * s;
            sum += cos_coeff(k) * std::cos(ks) + sin_coeff(k) * std::sin(ks);
        }
        return sum;
    }

    /// df/ds
    double derivative(double s) const noexcept {
        double sum = 0.0;
        for (std::size_t k = 1; k <= order(); ++k) {
            const double kd = static_cast<double>(k);
            const double ks = kd * s;
            sum += kd * (-cos_coeff(k) * std::sin(ks) + sin_coeff(k) * std::cos(ks));
        }
        return sum;
    }
};

// =============================================================================
// Excitation
// =============================================================================

enum class Axis : std::size_t { Tau = 0, Eta = 1, Xi = 2 };

/// Three-axis periodic motion of the suspension point. Displacement along an
/// axis is epsilon·f(omega·t/epsilon), so velocities are omega·f'(s) and do
/// not depend on epsilon. tau and eta are horizontal, xi is vertical.
class Excitation {
  public:
    Excitation(HarmonicSeries tau, HarmonicSeries eta, HarmonicSeries xi,
               double epsilon, double omega)
        : axes_{std::move(tau), std::move(eta), std::move(xi)},
          epsilon_(epsilon), omega_(omega) {
        if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
            throw ParameterError("excitation epsilon must be positive and finite");
        }
        if (!(omega > 0.0) || !std::isfinite(omega)) {
            throw ParameterError("excitation omega must be positive and finite");
        }
    }

    /// Zero excitation with the given scales.
    static Excitation none(double epsilon = 0.1, double omega = 1.0) {
        return Excitation({}, {}, {}, epsilon, omega);
    }

    const HarmonicSeries &tau() const noexcept { return axes_[0]; }
    const HarmonicSeries &eta() const noexcept { return axes_[1]; }
    const HarmonicSeries &xi() const noexcept { return axes_[2]; }
    const HarmonicSeries &axis(Axis a) const noexcept {
        return axes_[static_cast<std::size_t>(a)];
    }
    double epsilon() const noexcept { return epsilon_; }
    double omega() const noexcept { return omega_; }

    /// Fast phase s = ω t / ε.
    double phase(double t) const noexcept { return omega_ * t / epsilon_; }

    /// Length of one fast period in t.
    double fast_period() const noexcept {
        return 2.0 * std::numbers::pi * epsilon_ / omega_;
    }

    /// Copy with a different amplitude scale.
    Excitation with_epsilon(double epsilon) const {
        return Excitation(axes_[0], axes_[1], axes_[2], epsilon, omega_);
    }

    /// Copy with a different frequency scale.
    Excitation with_omega(double omega) const {
        return Excitation(axes_[0], axes_[1], axes_[2], epsilon_, omega);
    }

  private:
    std::array<HarmonicSeries, 3> axes_;
    double epsilon_;
    double omega_;
};

/// (τ, η, ξ) triple.
using AxisTriple = std::array<double, 3>;

/// Pivot displacement (τ(t), η(t), ξ(t)).
inline AxisTriple eval_displacement(const Excitation &e, double t) noexcept {
    const double s = e.phase(t);
    return {e.epsilon() * e.tau().value(s), e.epsilon() * e.eta().value(s),
            e.epsilon() * e.xi().value(s)};
}

/// Pivot velocity (τ̇, η̇, ξ̇); ε cancels.
inline AxisTriple eval_velocity(const Excitation &e, double t) noexcept {
    const double s = e.phase(t);
    return {e.omega() * e.tau().derivative(s), e.omega() * e.eta().derivative(s),
            e.omega() * e.xi().derivative(s)};
}

// =============================================================================
// Velocity moments
// =============================================================================

/// Time averages of pivot-velocity products, axis order (τ, η, ξ).
struct MomentMatrix {
    std::array<std::array<double, 3>, 3> m{};

    double operator()(std::size_t i, std::size_t j) const noexcept { return m[i][j]; }
    double operator()(Axis i, Axis j) const noexcept {
        return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }

    double tau_tau() const noexcept { return m[0][0]; }
    double eta_eta() const noexcept { return m[1][1]; }
    double xi_xi() const noexcept { return m[2][2]; }
    double tau_eta() const noexcept { return m[0][1]; }
    double tau_xi() const noexcept { return m[0][2]; }
    double eta_xi() const noexcept { return m[1][2]; }
    double trace() const noexcept { return m[0][0] + m[1][1] + m[2][2]; }

    static MomentMatrix from_upper(double tt, double ee, double xx, double te,
                                   double tx, double ex) noexcept {
        MomentMatrix mm;
        mm.m = {{{tt, te, tx}, {te, ee, ex}, {tx, ex, xx}}};
        return mm;
    }
};

/// Closed-form moments: ω²·½·Σ_k k²(a_k^f a_k^g + b_k^f b_k^g).
inline MomentMatrix velocity_moments(const Excitation &e) noexcept {
    MomentMatrix mm;
    const double w2 = e.omega() * e.omega();
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i; j < 3; ++j) {
            const auto &f = e.axis(static_cast<Axis>(i));
            const auto &g = e.axis(static_cast<Axis>(j));
            const std::size_t order = std::min(f.order(), g.order());
            double sum = 0.0;
            for (std::size_t k = 1; k <= order; ++k) {
                const double k2 = static_cast<double>(k * k);
                sum += k2 * (f.cos_coeff(k) * g.cos_coeff(k) +
                             f.sin_coeff(k) * g.sin_coeff(k));
            }
            mm.m[i][j] = 0.5 * w2 * sum;
            mm.m[j][i] = mm.m[i][j];
        }
    }
    return mm;
}

/// Composite Simpson rule on [a, b] with an even number of intervals.
template <typename F>
double simpson(F &&f, double a, double b, std::size_t intervals) {
    if (intervals < 2 || intervals % 2 != 0) {
        throw ParameterError("simpson: interval count must be even and >= 2");
    }
    const double h = (b - a) / static_cast<double>(intervals);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < intervals; ++i) {
        const double x = a + h * static_cast<double>(i);
        sum += (i % 2 == 1 ? 4.0 : 2.0) * f(x);
    }
    return sum * h / 3.0;
}

inline constexpr std::size_t kQuadratureIntervals = 4096;

/// Moments by Simpson quadrature of ω² f'(s) g'(s) over one period.
inline MomentMatrix velocity_moments_quadrature(
    const Excitation &e, std::size_t intervals = kQuadratureIntervals) {
    MomentMatrix mm;
    const double w2 = e.omega() * e.omega();
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i; j < 3; ++j) {
            const auto &f = e.axis(static_cast<Axis>(i));
            const auto &g = e.axis(static_cast<Axis>(j));
            const double integral = simpson(
                [&](double s) { return f.derivative(s) * g.derivative(s); }, 0.0,
                two_pi, intervals);
            mm.m[i][j] = w2 * integral / two_pi;
            mm.m[j][i] = mm.m[i][j];
        }
    }
    return mm;
}

// =============================================================================
// Symmetry conditions
// =============================================================================

inline constexpr double kDefaultSymmetryTol = 1e-9;

/// Residuals of the conditions under which the averaged Hamiltonian does not
/// depend on the azimuth α.
struct SymmetryReport {
    double diag_residual = 0.0; ///< |mean τ̇² − mean η̇²|
    double tau_eta = 0.0;       ///< |mean τ̇η̇|
    double tau_xi = 0.0;        ///< |mean τ̇ξ̇|
    double eta_xi = 0.0;        ///< |mean η̇ξ̇|
    double tol = kDefaultSymmetryTol;
    bool passed = true;
};

inline SymmetryReport check_symmetry(const MomentMatrix &mm,
                                     double tol = kDefaultSymmetryTol) {
    if (!(tol >= 0.0)) {
        throw ParameterError("symmetry tolerance must be non-negative");
    }
    SymmetryReport r;
    r.diag_residual = std::abs(mm.tau_tau() - mm.eta_eta());
    r.tau_eta = std::abs(mm.tau_eta());
    r.tau_xi = std::abs(mm.tau_xi());
    r.eta_xi = std::abs(mm.eta_xi());
    r.tol = tol;
    r.passed = r.diag_residual <= tol && r.tau_eta <= tol && r.tau_xi <= tol &&
               r.eta_xi <= tol;
    return r;
}

} // namespace pendulum_vib
