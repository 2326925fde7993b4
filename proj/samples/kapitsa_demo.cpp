// Inverted-position stabilization of a pendulum with a vertically vibrating
// pivot: effective-potential equilibria before and after the threshold, and
// a short check of the averaged flow against the full dynamics.
#include <pendulum_vib/pendulum_vib.hpp>

#include <cstdio>

using namespace pendulum_vib;

int main() {
    for (double omega : {1.0, 2.0}) {
        HarmonicSeries xi;
        xi.sin_coeffs = {1.0};
        const Excitation e({}, {}, xi, 0.05, omega);
        const auto ap = nondimensionalize(velocity_moments(e), 0.0);
        std::printf("omega = %.1f  ->  A = %.3f\n", omega, ap.A);
        for (const auto &eq : find_equilibria(ap)) {
            std::printf("  phi = %.6f  %-10s  V = %+.6f\n", eq.phi,
                        std::string(to_string(eq.kind)).c_str(), eq.v_value);
        }
    }

    HarmonicSeries xi;
    xi.sin_coeffs = {1.0};
    const FullState start{2.0, 0.0, 0.0, 0.3};
    for (double eps : {0.1, 0.05, 0.025}) {
        const auto r = compare_full_averaged(Excitation({}, {}, xi, eps, 1.0), start, 10.0);
        std::printf("eps = %.3f  max|dphi| = %.3e  max|dp_phi| = %.3e\n", eps, r.max_err_phi,
                    r.max_err_p_phi);
    }
    return 0;
}
