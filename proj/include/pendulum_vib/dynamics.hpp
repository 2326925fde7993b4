// Full time-dependent Hamiltonian of the spherical pendulum with a moving
// pivot, the averaged Hamiltonian, reduced flows, and the full-vs-averaged
// comparison harness
#pragma once

#include <pendulum_vib/errors.hpp>
#include <pendulum_vib/excitation.hpp>
#include <pendulum_vib/integrator.hpp>
#include <pendulum_vib/params.hpp>
#include <pendulum_vib/potential.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

namespace pendulum_vib {

// =============================================================================
// State
// =============================================================================

/// Canonical state: polar angle φ from the downward vertical, azimuth α, and
/// their conjugate momenta.
struct FullState {
    double phi = 0.0;
    double alpha = 0.0;
    double p_phi = 0.0;
    double p_alpha = 0.0;

    StateVec<4> to_array() const noexcept { return {phi, alpha, p_phi, p_alpha}; }
    static FullState from_array(const StateVec<4> &y) noexcept {
        return {y[0], y[1], y[2], y[3]};
    }
};

/// Time derivative of a FullState.
using FullStateDerivative = FullState;

namespace detail {

/// Pivot-velocity projections at a configuration:
///   u_φ = cos φ cos α τ̇ + cos φ sin α η̇ + sin φ ξ̇
///   w   = −sin α τ̇ + cos α η̇           (u_α = sin φ · w)
/// and the partial derivatives needed by Hamilton's equations.
struct PivotProjection {
    double u_phi;
    double du_phi_dphi;
    double du_phi_dalpha;
    double w;
    double dw_dalpha;
};

inline PivotProjection project_pivot(double phi, double alpha,
                                     const AxisTriple &vel) noexcept {
    const double sp = std::sin(phi);
    const double cp = std::cos(phi);
    const double sa = std::sin(alpha);
    const double ca = std::cos(alpha);
    const double tau = vel[0];
    const double eta = vel[1];
    const double xi = vel[2];
    PivotProjection pp;
    pp.w = -sa * tau + ca * eta;
    pp.dw_dalpha = -ca * tau - sa * eta;
    pp.u_phi = cp * ca * tau + cp * sa * eta + sp * xi;
    pp.du_phi_dphi = -sp * ca * tau - sp * sa * eta + cp * xi;
    pp.du_phi_dalpha = cp * pp.w;
    return pp;
}

/// p_α / sin φ, with the removable 0/0 at the poles set to zero.
inline double p_alpha_over_sin(double p_alpha, double sin_phi, const char *where) {
    if (sin_phi == 0.0) {
        if (p_alpha != 0.0) {
            throw SingularConfigurationError(std::string(where) +
                                             ": sin(phi) = 0 with p_alpha != 0");
        }
        return 0.0;
    }
    return p_alpha / sin_phi;
}

} // namespace detail

// =============================================================================
// Full Hamiltonian
// =============================================================================

/// H = (p_φ − ml u_φ)²/(2ml²) + (p_α − ml u_α)²/(2ml² sin²φ) − mgl cos φ
///
/// Re-derived from the bob coordinates with the pivot displacement
/// (τ, η, ξ)(t). Additive functions of t alone (pivot kinetic energy and
/// mgξ) are dropped; they do not enter Hamilton's equations.
inline double full_hamiltonian(const FullState &s, double t, const Excitation &e,
                               const PhysicalParams &p = {}) {
    const double sp = std::sin(s.phi);
    const double pa_s = detail::p_alpha_over_sin(s.p_alpha, sp, "full_hamiltonian");
    const auto pp = detail::project_pivot(s.phi, s.alpha, eval_velocity(e, t));
    const double ml = p.m * p.l;
    const double ml2 = ml * p.l;
    const double P = s.p_phi - ml * pp.u_phi;
    // (p_α − ml sin φ w)/sin φ
    const double R = pa_s - ml * pp.w;
    return (P * P + R * R) / (2.0 * ml2) - ml * p.g * std::cos(s.phi);
}

/// Hamilton's equations (∂H/∂p_φ, ∂H/∂p_α, −∂H/∂φ, −∂H/∂α) of the full
/// Hamiltonian, with analytic partial derivatives.
inline FullStateDerivative full_rhs(const FullState &s, double t, const Excitation &e,
                                    const PhysicalParams &p = {}) {
    const double sp = std::sin(s.phi);
    const double cp = std::cos(s.phi);
    const double pa_s = detail::p_alpha_over_sin(s.p_alpha, sp, "full_rhs");
    const auto pp = detail::project_pivot(s.phi, s.alpha, eval_velocity(e, t));
    const double ml = p.m * p.l;
    const double ml2 = ml * p.l;
    const double P = s.p_phi - ml * pp.u_phi;
    const double R = pa_s - ml * pp.w;

    FullStateDerivative d;
    d.phi = P / ml2;
    if (sp == 0.0) {
        if (R != 0.0) {
            throw SingularConfigurationError("full_rhs: azimuthal rate undefined on the axis");
        }
        d.alpha = 0.0;
    } else {
        d.alpha = R / (ml2 * sp);
    }
    // ∂R/∂φ = −p_α cos φ / sin²φ; zero on the axis when p_α = 0.
    const double dR_dphi = s.p_alpha == 0.0 ? 0.0 : -s.p_alpha * cp / (sp * sp);
    const double dH_dphi =
        -P * pp.du_phi_dphi / p.l + R * dR_dphi / ml2 + ml * p.g * sp;
    const double dH_dalpha = (-P * pp.du_phi_dalpha - R * pp.dw_dalpha) / p.l;
    d.p_phi = -dH_dphi;
    d.p_alpha = -dH_dalpha;
    return d;
}

// =============================================================================
// Averaged Hamiltonian
// =============================================================================

/// Fast-time average of the full Hamiltonian with the slow state frozen,
/// written in terms of the velocity moments:
///
///   H̄ = (p_φ² + p_α²/sin²φ)/(2ml²)
///      + ½m (cos²φ cos²α + sin²α)·mean τ̇²
///      + ½m (cos²φ sin²α + cos²α)·mean η̇²
///      + ½m sin²φ·mean ξ̇²
///      + m (cos²φ − 1) cos α sin α·mean τ̇η̇
///      + m cos φ sin φ cos α·mean τ̇ξ̇
///      + m cos φ sin φ sin α·mean η̇ξ̇
///      − mgl cos φ
inline double averaged_hamiltonian(const FullState &s, const MomentMatrix &mm,
                                   const PhysicalParams &p = {}) {
    const double sp = std::sin(s.phi);
    const double cp = std::cos(s.phi);
    const double sa = std::sin(s.alpha);
    const double ca = std::cos(s.alpha);
    const double pa_s = detail::p_alpha_over_sin(s.p_alpha, sp, "averaged_hamiltonian");
    const double c2 = cp * cp;
    const double kinetic =
        (s.p_phi * s.p_phi + pa_s * pa_s) / (2.0 * p.m * p.l * p.l);
    const double vib =
        0.5 * p.m * (c2 * ca * ca + sa * sa) * mm.tau_tau() +
        0.5 * p.m * (c2 * sa * sa + ca * ca) * mm.eta_eta() +
        0.5 * p.m * sp * sp * mm.xi_xi() +
        p.m * (c2 * ca * sa - ca * sa) * mm.tau_eta() +
        p.m * cp * ca * sp * mm.tau_xi() + p.m * cp * sa * sp * mm.eta_xi();
    return kinetic + vib - p.m * p.g * p.l * cp;
}

/// Averaged Hamiltonian of the reduced system, H̄ = p_φ²/2 + V̄(φ), in
/// dimensionless units.
inline double reduced_hamiltonian(double phi, double p_phi, const AveragedParams &ap) {
    return 0.5 * p_phi * p_phi + v_bar(phi, ap);
}

/// (φ̇, ṗ_φ) = (p_φ, −dV̄/dφ) in units m = l = g = 1.
inline std::pair<double, double> reduced_rhs(double phi, double p_phi,
                                             const AveragedParams &ap) {
    return {p_phi, -dv(phi, ap)};
}

/// Reduced flow lifted to the full state. α advances at p_α/sin²φ and p_α is
/// held fixed: its derivative is exactly zero. B is taken from ap, not from
/// the state, so the caller keeps them consistent.
inline FullStateDerivative averaged_rhs(const FullState &s, const AveragedParams &ap) {
    const auto [dphi, dp_phi] = reduced_rhs(s.phi, s.p_phi, ap);
    const double sp = std::sin(s.phi);
    FullStateDerivative d;
    d.phi = dphi;
    d.p_phi = dp_phi;
    d.alpha = s.p_alpha == 0.0 ? 0.0 : s.p_alpha / (sp * sp);
    d.p_alpha = 0.0;
    return d;
}

// =============================================================================
// Trajectories
// =============================================================================

using FullTrajectory = Trajectory<4>;

inline FullTrajectory integrate_full(const Excitation &e, const FullState &initial,
                                     double t_end, double step,
                                     const PhysicalParams &p = {}) {
    auto rhs = [&](double t, const StateVec<4> &y) {
        return full_rhs(FullState::from_array(y), t, e, p).to_array();
    };
    return integrate<4>(rhs, initial.to_array(), 0.0, t_end, step);
}

inline FullTrajectory integrate_averaged(const AveragedParams &ap,
                                         const FullState &initial, double t_end,
                                         double step) {
    auto rhs = [&](double, const StateVec<4> &y) {
        return averaged_rhs(FullState::from_array(y), ap).to_array();
    };
    return integrate<4>(rhs, initial.to_array(), 0.0, t_end, step);
}

// =============================================================================
// Full vs averaged comparison
// =============================================================================

struct ComparisonOptions {
    std::size_t steps_per_fast_period = 64;
    double averaged_step = 1e-3;
    double symmetry_tol = kDefaultSymmetryTol;
};

struct ComparisonReport {
    double epsilon = 0.0;
    double max_err_phi = 0.0;
    double max_err_p_phi = 0.0;
    double p_alpha_drift = 0.0;
    std::size_t full_steps = 0;
    std::size_t averaged_steps = 0;
};

namespace detail {

/// Cubic Hermite interpolation of (φ, p_φ) on a trajectory of the reduced
/// flow, using the flow itself for the slopes.
class ReducedInterpolant {
  public:
    ReducedInterpolant(const FullTrajectory &traj, const AveragedParams &ap)
        : traj_(traj), ap_(ap) {}

    std::pair<double, double> operator()(double t) {
        while (cursor_ + 2 < traj_.size() && traj_[cursor_ + 1].t < t) {
            ++cursor_;
        }
        const auto &a = traj_[cursor_];
        const auto &b = traj_[cursor_ + 1];
        const double h = b.t - a.t;
        const double x = std::clamp((t - a.t) / h, 0.0, 1.0);
        const auto [da_phi, da_p] = reduced_rhs(a.y[0], a.y[2], ap_);
        const auto [db_phi, db_p] = reduced_rhs(b.y[0], b.y[2], ap_);
        const double h00 = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
        const double h10 = x * (1.0 - x) * (1.0 - x);
        const double h01 = x * x * (3.0 - 2.0 * x);
        const double h11 = x * x * (x - 1.0);
        const double phi = h00 * a.y[0] + h10 * h * da_phi + h01 * b.y[0] + h11 * h * db_phi;
        const double p = h00 * a.y[2] + h10 * h * da_p + h01 * b.y[2] + h11 * h * db_p;
        return {phi, p};
    }

  private:
    const FullTrajectory &traj_;
    AveragedParams ap_;
    std::size_t cursor_ = 0;
};

} // namespace detail

/// Integrate the full system (RK4, 64 steps per fast period 2πε/ω, capped at
/// the averaged step) and the
/// reduced averaged system (RK4, step 1e-3) from the same slow state over
/// [0, t_end], in units m = l = g = 1. Reports the maximum deviation of φ and
/// p_φ over the full-system time grid and the maximum excursion of p_α in the
/// full system.
inline ComparisonReport compare_full_averaged(const Excitation &e,
                                              const FullState &initial, double t_end,
                                              const ComparisonOptions &opt = {}) {
    const MomentMatrix mm = velocity_moments(e);
    const SymmetryReport sym = check_symmetry(mm, opt.symmetry_tol);
    if (!sym.passed) {
        throw SymmetryError("compare_full_averaged: excitation violates the symmetry conditions");
    }
    if (std::sin(initial.phi) == 0.0) {
        throw SingularConfigurationError("compare_full_averaged: initial state on the vertical axis");
    }
    if (opt.steps_per_fast_period == 0) {
        throw ParameterError("compare_full_averaged: steps_per_fast_period must be positive");
    }

    const AveragedParams ap = nondimensionalize(mm, initial.p_alpha);
    // Never coarser than the reference step: with weak or absent excitation
    // the fast period stops being the limiting time scale.
    const double full_step = std::min(
        e.fast_period() / static_cast<double>(opt.steps_per_fast_period),
        opt.averaged_step);
    const FullTrajectory full = integrate_full(e, initial, t_end, full_step);
    const FullTrajectory avg = integrate_averaged(ap, initial, t_end, opt.averaged_step);

    ComparisonReport r;
    r.epsilon = e.epsilon();
    r.full_steps = full.size() - 1;
    r.averaged_steps = avg.size() - 1;
    detail::ReducedInterpolant interp(avg, ap);
    for (const auto &sample : full) {
        const auto [phi_avg, p_avg] = interp(sample.t);
        r.max_err_phi = std::max(r.max_err_phi, std::abs(sample.y[0] - phi_avg));
        r.max_err_p_phi = std::max(r.max_err_p_phi, std::abs(sample.y[2] - p_avg));
        r.p_alpha_drift =
            std::max(r.p_alpha_drift, std::abs(sample.y[3] - initial.p_alpha));
    }
    return r;
}

} // namespace pendulum_vib
