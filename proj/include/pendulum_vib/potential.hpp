// Effective potential of the reduced averaged system, its equilibria, the
// critical curve Γ of degenerate equilibria, and parameter-plane domains
#pragma once

#include <pendulum_vib/errors.hpp>
#include <pendulum_vib/params.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pendulum_vib {

// =============================================================================
// V̄ and its derivatives
// =============================================================================

namespace detail {

inline void require_regular(double sin_phi, double b, const char *where) {
    if (sin_phi == 0.0 && b != 0.0) {
        throw SingularConfigurationError(std::string(where) +
                                         ": sin(phi) = 0 with B > 0");
    }
}

} // namespace detail

/// V̄(φ) = B/(2 sin²φ) + ½(A − C) sin²φ − cos φ
inline double v_bar(double phi, const AveragedParams &ap) {
    const double s = std::sin(phi);
    detail::require_regular(s, ap.B, "v_bar");
    const double s2 = s * s;
    const double barrier = ap.B == 0.0 ? 0.0 : ap.B / (2.0 * s2);
    return barrier + 0.5 * ap.a_minus_c() * s2 - std::cos(phi);
}

/// dV̄/dφ = −B cos φ/sin³φ + (A − C) sin φ cos φ + sin φ
inline double dv(double phi, const AveragedParams &ap) {
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    detail::require_regular(s, ap.B, "dv");
    const double barrier = ap.B == 0.0 ? 0.0 : -ap.B * c / (s * s * s);
    return barrier + ap.a_minus_c() * s * c + s;
}

/// d²V̄/dφ² = 3B cos²φ/sin⁴φ + B/sin²φ + (A − C)(cos²φ − sin²φ) + cos φ
inline double d2v(double phi, const AveragedParams &ap) {
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    detail::require_regular(s, ap.B, "d2v");
    double barrier = 0.0;
    if (ap.B != 0.0) {
        const double s2 = s * s;
        barrier = 3.0 * ap.B * c * c / (s2 * s2) + ap.B / s2;
    }
    return barrier + ap.a_minus_c() * (c * c - s * s) + c;
}

// =============================================================================
// Equilibria
// =============================================================================

enum class EquilibriumKind { Stable, Unstable, Degenerate };

inline std::string_view to_string(EquilibriumKind k) noexcept {
    switch (k) {
    case EquilibriumKind::Stable:
        return "stable";
    case EquilibriumKind::Unstable:
        return "unstable";
    case EquilibriumKind::Degenerate:
        return "degenerate";
    }
    return "unknown";
}

struct Equilibrium {
    double phi = 0.0;
    EquilibriumKind kind = EquilibriumKind::Stable;
    double v_value = 0.0;
    double second_derivative = 0.0;
};

struct EquilibriumOptions {
    std::size_t grid_intervals = 4096;
    double pole_inset = 1e-6;
    double bisection_width = 1e-12;
    double dedup_tol = 1e-9;
    /// Relative degeneracy threshold on |d²V̄|, scaled by max(1, |A−C|, B).
    double degeneracy_rel_tol = 1e-8;
    /// Relative threshold under which |dV̄| at a critical point of dV̄ counts as
    /// a (multiple) root, scaled like the degeneracy threshold.
    double touch_rel_tol = 1e-11;
};

/// Scale used by the degeneracy tolerances.
inline double parameter_scale(const AveragedParams &ap) noexcept {
    return std::max({1.0, std::abs(ap.a_minus_c()), ap.B});
}

/// Bisection for a sign change of f on [a, b]; fa and fb must have strictly
/// opposite signs. Returns the endpoint with smaller |f| once the bracket is
/// narrower than `width`.
template <typename F>
double bisect(const F &f, double a, double b, double fa, double fb, double width) {
    for (int it = 0; it < 200 && (b - a) > width; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) {
            break;
        }
        const double fm = f(mid);
        if (fm == 0.0) {
            return mid;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    return std::abs(fa) <= std::abs(fb) ? a : b;
}

inline Equilibrium make_equilibrium(double phi, const AveragedParams &ap,
                                    const EquilibriumOptions &opt = {}) {
    Equilibrium eq;
    eq.phi = phi;
    eq.v_value = v_bar(phi, ap);
    eq.second_derivative = d2v(phi, ap);
    const double tol = opt.degeneracy_rel_tol * parameter_scale(ap);
    if (std::abs(eq.second_derivative) <= tol) {
        eq.kind = EquilibriumKind::Degenerate;
    } else if (eq.second_derivative > 0.0) {
        eq.kind = EquilibriumKind::Stable;
    } else {
        eq.kind = EquilibriumKind::Unstable;
    }
    return eq;
}

namespace detail {

inline std::vector<double> dedup_sorted(std::vector<double> roots, double tol) {
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots) {
        if (out.empty() || r - out.back() > tol) {
            out.push_back(r);
        }
    }
    return out;
}

inline std::vector<double> interior_roots(const AveragedParams &ap,
                                          const EquilibriumOptions &opt) {
    const double lo = opt.pole_inset;
    const double hi = std::numbers::pi - opt.pole_inset;
    const std::size_t n = opt.grid_intervals;
    auto f = [&](double x) { return dv(x, ap); };
    auto f2 = [&](double x) { return d2v(x, ap); };

    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    }

    // Critical points of dV̄ refine the scan so that dV̄ is monotone between
    // consecutive breakpoints; a double root then shows up as a breakpoint
    // where |dV̄| vanishes instead of as two sign changes closer than the grid.
    std::vector<double> breakpoints = grid;
    std::vector<double> touch;
    double g_prev = f2(grid[0]);
    for (std::size_t i = 1; i <= n; ++i) {
        const double g_cur = f2(grid[i]);
        if ((g_prev < 0.0 && g_cur > 0.0) || (g_prev > 0.0 && g_cur < 0.0)) {
            const double c = bisect(f2, grid[i - 1], grid[i], g_prev, g_cur,
                                    opt.bisection_width);
            breakpoints.push_back(c);
            touch.push_back(c);
        }
        g_prev = g_cur;
    }
    std::sort(breakpoints.begin(), breakpoints.end());

    const double zero_tol = opt.touch_rel_tol * parameter_scale(ap);
    std::vector<double> values(breakpoints.size());
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        double v = f(breakpoints[i]);
        const bool is_touch =
            std::find(touch.begin(), touch.end(), breakpoints[i]) != touch.end();
        if (v == 0.0 || (is_touch && std::abs(v) <= zero_tol)) {
            v = 0.0;
        }
        values[i] = v;
    }

    std::vector<double> roots;
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (values[i] == 0.0) {
            roots.push_back(breakpoints[i]);
        }
        if (i > 0) {
            const double a = values[i - 1];
            const double b = values[i];
            if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
                roots.push_back(bisect(f, breakpoints[i - 1], breakpoints[i], a, b,
                                       opt.bisection_width));
            }
        }
    }
    return dedup_sorted(std::move(roots), opt.dedup_tol);
}

inline std::vector<double> planar_roots(const AveragedParams &ap,
                                        const EquilibriumOptions &opt) {
    // B = 0: dV̄ = sin φ ((A − C) cos φ + 1), so the poles are always
    // equilibria and an interior one exists when |A − C| ≥ 1.
    std::vector<double> roots{0.0, std::numbers::pi};
    const double k = ap.a_minus_c();
    if (std::abs(k) >= 1.0) {
        roots.push_back(std::acos(-1.0 / k));
    }
    return dedup_sorted(std::move(roots), opt.dedup_tol);
}

} // namespace detail

/// All equilibria of V̄ on [0, π], sorted by φ.
///
/// For B > 0 the roots of dV̄ are bracketed on a uniform grid over
/// [inset, π − inset] and bisected. For B = 0 the poles φ = 0 and φ = π are
/// equilibria and the interior root solves (A − C) cos φ + 1 = 0.
inline std::vector<Equilibrium> find_equilibria(const AveragedParams &ap,
                                                const EquilibriumOptions &opt = {}) {
    ap.validate();
    const std::vector<double> roots = ap.B > 0.0 ? detail::interior_roots(ap, opt)
                                                 : detail::planar_roots(ap, opt);
    std::vector<Equilibrium> out;
    out.reserve(roots.size());
    for (double r : roots) {
        out.push_back(make_equilibrium(r, ap, opt));
    }
    return out;
}

// =============================================================================
// Critical curve Γ
// =============================================================================

struct GammaPoint {
    double phi = 0.0;
    double a_minus_c = 0.0;
    double b = 0.0;
};

/// Point of Γ with parameter φ ∈ (π/2, π]:
///   A − C = −(3cos²φ + 1)/(4cos³φ),  B = −¼ sin⁶φ/cos³φ.
inline GammaPoint gamma_point(double phi) {
    if (!(phi > 0.5 * std::numbers::pi) || !(phi <= std::numbers::pi)) {
        throw ParameterError("gamma_curve: phi must lie in (pi/2, pi]");
    }
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double c3 = c * c * c;
    const double s3 = s * s * s;
    GammaPoint gp;
    gp.phi = phi;
    gp.a_minus_c = -(3.0 * c * c + 1.0) / (4.0 * c3);
    gp.b = -0.25 * s3 * s3 / c3;
    return gp;
}

inline std::vector<GammaPoint> gamma_curve(std::span<const double> phi_values) {
    std::vector<GammaPoint> out;
    out.reserve(phi_values.size());
    for (double phi : phi_values) {
        out.push_back(gamma_point(phi));
    }
    return out;
}

/// `count` parameter values evenly spaced on (π/2 + offset, π], last one = π.
inline std::vector<double> gamma_parameter_grid(std::size_t count,
                                                double offset = 1e-3) {
    if (count == 0) {
        throw ParameterError("gamma_parameter_grid: count must be positive");
    }
    const double lo = 0.5 * std::numbers::pi + offset;
    const double hi = std::numbers::pi;
    std::vector<double> phis(count);
    if (count == 1) {
        phis[0] = hi;
        return phis;
    }
    for (std::size_t i = 0; i < count; ++i) {
        phis[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    phis.back() = hi;
    return phis;
}

// =============================================================================
// Domains of the parameter plane
// =============================================================================

enum class DomainLabel { I, II, Boundary };

inline std::string_view to_string(DomainLabel d) noexcept {
    switch (d) {
    case DomainLabel::I:
        return "I";
    case DomainLabel::II:
        return "II";
    case DomainLabel::Boundary:
        return "boundary";
    }
    return "unknown";
}

/// Domain by equilibrium count: I (one), II (three), boundary (a degenerate
/// equilibrium is present). Requires B > 0.
inline DomainLabel classify_domain(const AveragedParams &ap,
                                   const EquilibriumOptions &opt = {}) {
    if (!(ap.B > 0.0)) {
        throw ParameterError("classify_domain: B must be positive");
    }
    const auto eqs = find_equilibria(ap, opt);
    const bool degenerate =
        std::any_of(eqs.begin(), eqs.end(), [](const Equilibrium &e) {
            return e.kind == EquilibriumKind::Degenerate;
        });
    if (degenerate) {
        return DomainLabel::Boundary;
    }
    if (eqs.size() == 1) {
        return DomainLabel::I;
    }
    if (eqs.size() == 3) {
        return DomainLabel::II;
    }
    throw InconsistentCountError("classify_domain: found " +
                                 std::to_string(eqs.size()) +
                                 " nondegenerate equilibria for B > 0");
}

} // namespace pendulum_vib
