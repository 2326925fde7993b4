// Fixed-step classical Runge-Kutta integration over std::array states
#pragma once

#include <pendulum_vib/errors.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace pendulum_vib {

template <std::size_t N> using StateVec = std::array<double, N>;

template <std::size_t N> struct TrajectorySample {
    double t;
    StateVec<N> y;
};

template <std::size_t N> using Trajectory = std::vector<TrajectorySample<N>>;

namespace detail {

template <std::size_t N>
StateVec<N> axpy(const StateVec<N> &y, double a, const StateVec<N> &k) noexcept {
    StateVec<N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + a * k[i];
    }
    return out;
}

template <std::size_t N> bool all_finite(const StateVec<N> &y) noexcept {
    for (double v : y) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/// One classical RK4 step of size h from (t, y).
template <std::size_t N, typename Rhs>
StateVec<N> rk4_step(const Rhs &rhs, double t, const StateVec<N> &y, double h) {
    const StateVec<N> k1 = rhs(t, y);
    const StateVec<N> k2 = rhs(t + 0.5 * h, detail::axpy(y, 0.5 * h, k1));
    const StateVec<N> k3 = rhs(t + 0.5 * h, detail::axpy(y, 0.5 * h, k2));
    const StateVec<N> k4 = rhs(t + h, detail::axpy(y, h, k3));
    StateVec<N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    }
    return out;
}

/// Integrate y' = rhs(t, y) from t0 to t1 with fixed step `step`, appending
/// every accepted state (including the initial one) to `out`. The last step
/// is shortened so the trajectory ends exactly at t1.
///
/// Step times are t0 + k·step computed from the step index, so identical
/// inputs give bit-identical trajectories.
template <std::size_t N, typename Rhs>
void integrate(const Rhs &rhs, const StateVec<N> &y0, double t0, double t1,
               double step, Trajectory<N> &out) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ParameterError("integrate: step must be positive and finite");
    }
    if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
        throw ParameterError("integrate: time span must be finite and nonempty");
    }
    if (!detail::all_finite(y0)) {
        throw IntegrationError("integrate: non-finite initial state", t0);
    }

    const double span = t1 - t0;
    // Full steps, ignoring a trailing remainder below a rounding-level sliver.
    auto full_steps = static_cast<std::size_t>(std::floor(span / step));
    if (static_cast<double>(full_steps) * step > span) {
        --full_steps;
    }
    const double remainder = span - static_cast<double>(full_steps) * step;
    const bool partial = remainder > 1e-12 * step;

    out.reserve(out.size() + full_steps + 2);
    out.push_back({t0, y0});

    StateVec<N> y = y0;
    double t = t0;
    for (std::size_t k = 0; k < full_steps; ++k) {
        y = rk4_step<N>(rhs, t, y, step);
        const double t_next = (k + 1 == full_steps && !partial)
                                  ? t1
                                  : t0 + static_cast<double>(k + 1) * step;
        if (!detail::all_finite(y)) {
            throw IntegrationError("integrate: state became non-finite", t);
        }
        t = t_next;
        out.push_back({t, y});
    }
    if (partial) {
        y = rk4_step<N>(rhs, t, y, t1 - t);
        if (!detail::all_finite(y)) {
            throw IntegrationError("integrate: state became non-finite", t);
        }
        out.push_back({t1, y});
    }
}

template <std::size_t N, typename Rhs>
Trajectory<N> integrate(const Rhs &rhs, const StateVec<N> &y0, double t0,
                        double t1, double step) {
    Trajectory<N> out;
    integrate<N>(rhs, y0, t0, t1, step, out);
    return out;
}

} // namespace pendulum_vib
