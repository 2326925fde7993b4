// Phase portraits of the reduced averaged system in the (φ, p_φ) plane
#pragma once

#include <pendulum_vib/contour.hpp>
#include <pendulum_vib/errors.hpp>
#include <pendulum_vib/params.hpp>
#include <pendulum_vib/potential.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pendulum_vib {

// =============================================================================
// Grid
// =============================================================================

/// Inset from the poles used when the centrifugal barrier is present.
inline constexpr double kPoleInset = 0.02;
inline constexpr std::size_t kDefaultLevelCount = 8;

/// H̄(φ, p_φ) = p_φ²/2 + V̄(φ) sampled on an nx × ny grid.
/// values[i * ny + j] holds H̄(phi[i], p[j]).
struct PortraitGrid {
    AveragedParams params;
    double phi_lo = 0.0;
    double phi_hi = 0.0;
    double p_max = 0.0;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> phi;
    std::vector<double> p;
    std::vector<double> values;
    /// Sorted contour levels; includes the separatrix level when present.
    std::vector<double> levels;
    std::optional<double> separatrix_level;
    std::optional<double> saddle_phi;
    std::vector<Equilibrium> equilibria;

    double value(std::size_t i, std::size_t j) const noexcept { return values[i * ny + j]; }
    ScalarField field() const noexcept { return {values, nx, ny}; }
};

/// Default φ window: [inset, π − inset] when B > 0, [0, π] when B = 0.
inline std::pair<double, double> default_phi_range(const AveragedParams &ap) noexcept {
    if (ap.B > 0.0) {
        return {kPoleInset, std::numbers::pi - kPoleInset};
    }
    return {0.0, std::numbers::pi};
}

namespace detail {

inline std::pair<double, double> v_range(const AveragedParams &ap, double lo, double hi,
                                         std::size_t n) {
    double vmin = v_bar(lo, ap);
    double vmax = vmin;
    for (std::size_t i = 1; i < n; ++i) {
        const double phi =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        const double v = v_bar(phi, ap);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    return {vmin, vmax};
}

} // namespace detail

/// p_max = √(2(V̄_max − V̄_min)) over the default window, so every level
/// between the extremes of V̄ reaches the grid.
inline double default_p_max(const AveragedParams &ap, std::size_t nx = 512) {
    const auto [lo, hi] = default_phi_range(ap);
    const auto [vmin, vmax] = detail::v_range(ap, lo, hi, std::max<std::size_t>(nx, 2));
    const double span = vmax - vmin;
    return span > 0.0 ? std::sqrt(2.0 * span) : 1.0;
}

inline PortraitGrid build_grid(const AveragedParams &ap, std::size_t nx, std::size_t ny,
                               double p_max,
                               std::optional<std::pair<double, double>> phi_range = {}) {
    if (nx < 2 || ny < 2) {
        throw ParameterError("build_grid: nx and ny must be at least 2");
    }
    if (!(p_max > 0.0) || !std::isfinite(p_max)) {
        throw ParameterError("build_grid: p_max must be positive");
    }
    ap.validate();
    const auto [lo, hi] = phi_range.value_or(default_phi_range(ap));
    if (!(lo < hi) || lo < 0.0 || hi > std::numbers::pi) {
        throw ParameterError("build_grid: phi range must satisfy 0 <= lo < hi <= pi");
    }

    PortraitGrid g;
    g.params = ap;
    g.phi_lo = lo;
    g.phi_hi = hi;
    g.p_max = p_max;
    g.nx = nx;
    g.ny = ny;
    g.phi.resize(nx);
    g.p.resize(ny);
    for (std::size_t i = 0; i < nx; ++i) {
        g.phi[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(nx - 1);
    }
    g.phi.back() = hi;
    // Integer numerator keeps p[ny-1-j] == -p[j] exactly.
    const auto den = static_cast<double>(ny - 1);
    for (std::size_t j = 0; j < ny; ++j) {
        const double num = 2.0 * static_cast<double>(j) - den;
        g.p[j] = p_max * num / den;
    }

    std::vector<double> v(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        v[i] = v_bar(g.phi[i], ap);
    }
    g.values.resize(nx * ny);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            g.values[i * ny + j] = 0.5 * g.p[j] * g.p[j] + v[i];
        }
    }

    g.equilibria = find_equilibria(ap);
    for (const auto &eq : g.equilibria) {
        if (eq.kind == EquilibriumKind::Unstable && eq.phi >= lo && eq.phi <= hi) {
            g.separatrix_level = eq.v_value;
            g.saddle_phi = eq.phi;
            break;
        }
    }

    const auto [vmin_it, vmax_it] = std::minmax_element(v.begin(), v.end());
    const double vmin = *vmin_it;
    const double vmax = *vmax_it;
    const auto parts = static_cast<double>(kDefaultLevelCount + 1);
    if (vmax > vmin) {
        for (std::size_t k = 1; k <= kDefaultLevelCount; ++k) {
            g.levels.push_back(vmin + (vmax - vmin) * static_cast<double>(k) / parts);
        }
    }
    if (g.separatrix_level) {
        g.levels.push_back(*g.separatrix_level);
    }
    std::sort(g.levels.begin(), g.levels.end());
    return g;
}

// =============================================================================
// Contours
// =============================================================================

struct PhasePoint {
    double phi = 0.0;
    double p_phi = 0.0;
};

struct PhasePolyline {
    std::vector<PhasePoint> points;
    bool closed = false;
};

struct LevelContours {
    double level = 0.0;
    bool separatrix = false;
    std::vector<PhasePolyline> polylines;
};

inline PhasePoint to_phase(const PortraitGrid &g, const GridPoint &gp) noexcept {
    const double dphi = (g.phi_hi - g.phi_lo) / static_cast<double>(g.nx - 1);
    const double dp = 2.0 * g.p_max / static_cast<double>(g.ny - 1);
    return {g.phi_lo + gp.x * dphi, -g.p_max + gp.y * dp};
}

inline LevelContours extract_level(const PortraitGrid &g, double level) {
    LevelContours lc;
    lc.level = level;
    lc.separatrix = g.separatrix_level && *g.separatrix_level == level;
    for (const auto &line : marching_squares(g.field(), level)) {
        PhasePolyline pl;
        pl.closed = line.closed;
        pl.points.reserve(line.points.size());
        for (const auto &pt : line.points) {
            pl.points.push_back(to_phase(g, pt));
        }
        lc.polylines.push_back(std::move(pl));
    }
    return lc;
}

/// Level sets of H̄ for every level of the grid, in level order.
inline std::vector<LevelContours> extract_contours(const PortraitGrid &g) {
    std::vector<LevelContours> out;
    out.reserve(g.levels.size());
    for (double level : g.levels) {
        out.push_back(extract_level(g, level));
    }
    return out;
}

// =============================================================================
// SVG
// =============================================================================

namespace detail {

inline std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") {
        s = "0.00";
    }
    return s;
}

inline std::string fmt_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct SvgFrame {
    double x0 = 70.0, x1 = 770.0, y0 = 550.0, y1 = 40.0;
    double phi_lo, phi_hi, p_max;

    double x(double phi) const noexcept {
        return x0 + (phi - phi_lo) / (phi_hi - phi_lo) * (x1 - x0);
    }
    double y(double p) const noexcept { return y0 + (p + p_max) / (2.0 * p_max) * (y1 - y0); }
};

} // namespace detail

/// Deterministic SVG rendering of a portrait: φ on the horizontal axis, p_φ
/// on the vertical axis, one path per polyline, stable equilibria as filled
/// circles and unstable or degenerate ones as crosses. The separatrix is
/// drawn with class "separatrix".
inline std::string render_svg(const PortraitGrid &g, const std::vector<LevelContours> &contours) {
    using detail::fmt_num;
    const detail::SvgFrame fr{.phi_lo = g.phi_lo, .phi_hi = g.phi_hi, .p_max = g.p_max};
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
    s += "<style>.axis{stroke:#000;stroke-width:1;fill:none}"
         ".contour{stroke:#1f4e9c;stroke-width:1;fill:none}"
         ".separatrix{stroke:#c0392b;stroke-width:2;fill:none}"
         ".center{fill:#000}.saddle{stroke:#000;stroke-width:2}"
         ".degenerate{stroke:#7d3c98;stroke-width:2}"
         "text{font-family:sans-serif;font-size:14px}</style>\n";
    s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#fff\"/>\n";

    // axes box and p_φ = 0 line
    s += "<rect class=\"axis\" x=\"" + fmt_num(fr.x0) + "\" y=\"" + fmt_num(fr.y1) +
         "\" width=\"" + fmt_num(fr.x1 - fr.x0) + "\" height=\"" + fmt_num(fr.y0 - fr.y1) +
         "\"/>\n";
    s += "<line class=\"axis\" x1=\"" + fmt_num(fr.x0) + "\" y1=\"" + fmt_num(fr.y(0.0)) +
         "\" x2=\"" + fmt_num(fr.x1) + "\" y2=\"" + fmt_num(fr.y(0.0)) +
         "\" stroke-dasharray=\"4 4\"/>\n";
    s += "<text x=\"" + fmt_num(fr.x0) + "\" y=\"575\">" + detail::fmt_label(g.phi_lo) +
         "</text>\n";
    s += "<text x=\"" + fmt_num(fr.x1 - 30.0) + "\" y=\"575\">" +
         detail::fmt_label(g.phi_hi) + "</text>\n";
    s += "<text x=\"410\" y=\"590\">phi</text>\n";
    s += "<text x=\"10\" y=\"" + fmt_num(fr.y1 + 5.0) + "\">" + detail::fmt_label(g.p_max) +
         "</text>\n";
    s += "<text x=\"10\" y=\"" + fmt_num(fr.y0 + 5.0) + "\">" + detail::fmt_label(-g.p_max) +
         "</text>\n";
    s += "<text x=\"10\" y=\"300\">p_phi</text>\n";

    for (const auto &lc : contours) {
        const char *cls = lc.separatrix ? "separatrix" : "contour";
        for (const auto &pl : lc.polylines) {
            if (pl.points.size() < 2) {
                continue;
            }
            s += "<path class=\"";
            s += cls;
            s += "\" d=\"";
            for (std::size_t k = 0; k < pl.points.size(); ++k) {
                s += (k == 0 ? "M" : " L");
                s += fmt_num(fr.x(pl.points[k].phi));
                s += ' ';
                s += fmt_num(fr.y(pl.points[k].p_phi));
            }
            if (pl.closed) {
                s += " Z";
            }
            s += "\"/>\n";
        }
    }

    for (const auto &eq : g.equilibria) {
        if (eq.phi < g.phi_lo || eq.phi > g.phi_hi) {
            continue;
        }
        const double cx = fr.x(eq.phi);
        const double cy = fr.y(0.0);
        if (eq.kind == EquilibriumKind::Stable) {
            s += "<circle class=\"center\" cx=\"" + fmt_num(cx) + "\" cy=\"" + fmt_num(cy) +
                 "\" r=\"5\"/>\n";
        } else {
            const char *cls = eq.kind == EquilibriumKind::Unstable ? "saddle" : "degenerate";
            s += "<path class=\"";
            s += cls;
            s += "\" d=\"M" + fmt_num(cx - 6.0) + " " + fmt_num(cy - 6.0) + " L" +
                 fmt_num(cx + 6.0) + " " + fmt_num(cy + 6.0) + " M" + fmt_num(cx - 6.0) +
                 " " + fmt_num(cy + 6.0) + " L" + fmt_num(cx + 6.0) + " " +
                 fmt_num(cy - 6.0) + "\"/>\n";
        }
    }
    s += "</svg>\n";
    return s;
}

} // namespace pendulum_vib
