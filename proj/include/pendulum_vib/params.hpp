// Physical and dimensionless averaged parameters
#pragma once

#include <pendulum_vib/errors.hpp>
#include <pendulum_vib/excitation.hpp>

#include <cmath>

namespace pendulum_vib {

/// Bob mass, rod length and gravity. All strictly positive.
struct PhysicalParams {
    double m = 1.0;
    double l = 1.0;
    double g = 1.0;

    void validate() const {
        if (!(m > 0.0) || !(l > 0.0) || !(g > 0.0) || !std::isfinite(m) ||
            !std::isfinite(l) || !std::isfinite(g)) {
            throw ParameterError("physical parameters m, l, g must be positive");
        }
    }
};

/// Dimensionless parameters of the reduced averaged system (m = l = g = 1):
///   A = mean ξ̇², B = p_α², C = mean η̇².
/// The reduced dynamics depends on A and C only through A − C.
struct AveragedParams {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;

    double a_minus_c() const noexcept { return A - C; }

    static AveragedParams from_difference(double a_minus_c, double b) {
        AveragedParams ap;
        if (a_minus_c >= 0.0) {
            ap.A = a_minus_c;
        } else {
            ap.C = -a_minus_c;
        }
        ap.B = b;
        ap.validate();
        return ap;
    }

    void validate() const {
        if (!(A >= 0.0) || !(B >= 0.0) || !(C >= 0.0) || !std::isfinite(A) ||
            !std::isfinite(B) || !std::isfinite(C)) {
            throw ParameterError("averaged parameters A, B, C must be finite and non-negative");
        }
    }
};

/// Nondimensionalize moments and azimuthal momentum with time unit √(l/g):
///   A = mean ξ̇²/(g l), C = mean η̇²/(g l), B = p_α²/(m² l³ g).
inline AveragedParams nondimensionalize(const MomentMatrix &mm, double p_alpha,
                                        const PhysicalParams &phys = {}) {
    phys.validate();
    AveragedParams ap;
    ap.A = mm.xi_xi() / (phys.g * phys.l);
    ap.C = mm.eta_eta() / (phys.g * phys.l);
    ap.B = p_alpha * p_alpha / (phys.m * phys.m * phys.l * phys.l * phys.l * phys.g);
    ap.validate();
    return ap;
}

} // namespace pendulum_vib
