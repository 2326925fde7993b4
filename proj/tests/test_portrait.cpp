// Tests for phase-portrait grids, contours and SVG rendering
#include "oracles.hpp"

#include <pendulum_vib/portrait.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>

namespace pendulum_vib {
namespace {

constexpr double kPi = std::numbers::pi;

std::size_t count_occurrences(const std::string &s, const std::string &needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

TEST(PortraitTest, GridIsSeparableAndMirrorSymmetric) {
    for (const auto &ap : {AveragedParams::from_difference(2.0, 0.0),
                           AveragedParams::from_difference(0.0, 0.1),
                           AveragedParams::from_difference(3.5, 0.01)}) {
        const auto g = build_grid(ap, 128, 97, default_p_max(ap));
        for (std::size_t i = 0; i < g.nx; ++i) {
            for (std::size_t j = 0; j < g.ny; ++j) {
                const double expect =
                    0.5 * g.p[j] * g.p[j] + oracle::v_direct(g.phi[i], ap.a_minus_c(), ap.B);
                ASSERT_LT(std::abs(g.value(i, j) - expect), 1e-12);
                ASSERT_LT(std::abs(g.value(i, j) - g.value(i, g.ny - 1 - j)), 1e-12);
            }
        }
    }
}

TEST(PortraitTest, GridAxes) {
    const auto ap = AveragedParams::from_difference(2.0, 0.0);
    const auto g = build_grid(ap, 5, 5, 2.0);
    EXPECT_EQ(g.phi.front(), 0.0);
    EXPECT_EQ(g.phi.back(), kPi);
    EXPECT_EQ(g.p.front(), -2.0);
    EXPECT_EQ(g.p.back(), 2.0);
    EXPECT_EQ(g.p[2], 0.0);
}

TEST(PortraitTest, MinimalGridHasFourCells) {
    const auto ap = AveragedParams::from_difference(0.0, 0.1);
    const auto g = build_grid(ap, 2, 2, 1.0);
    EXPECT_EQ(g.values.size(), 4u);
    EXPECT_NO_THROW(extract_contours(g));
}

TEST(PortraitTest, RejectsBadArguments) {
    const auto ap = AveragedParams::from_difference(0.0, 0.1);
    EXPECT_THROW(build_grid(ap, 1, 10, 1.0), ParameterError);
    EXPECT_THROW(build_grid(ap, 10, 10, 0.0), ParameterError);
    EXPECT_THROW(build_grid(ap, 10, 10, 1.0, std::pair{1.0, 0.5}), ParameterError);
}

TEST(PortraitTest, KapitsaSeparatrixThroughSaddle) {
    const auto ap = AveragedParams::from_difference(2.0, 0.0);
    const std::size_t nx = 512;
    const auto g = build_grid(ap, nx, 512, default_p_max(ap));
    ASSERT_TRUE(g.separatrix_level.has_value());
    EXPECT_NEAR(*g.separatrix_level, 1.25, 1e-12);
    EXPECT_NEAR(*g.saddle_phi, 2.0 * kPi / 3, 1e-12);

    const auto lc = extract_level(g, *g.separatrix_level);
    EXPECT_TRUE(lc.separatrix);
    ASSERT_FALSE(lc.polylines.empty());
    const double dphi = (g.phi_hi - g.phi_lo) / static_cast<double>(nx - 1);
    const double dp = 2.0 * g.p_max / static_cast<double>(g.ny - 1);
    double best = 1e300;
    for (const auto &pl : lc.polylines) {
        for (const auto &pt : pl.points) {
            const double v = 0.5 * pt.p_phi * pt.p_phi + v_bar(pt.phi, ap);
            // Linear interpolation error is bounded by the local cell variation.
            EXPECT_LT(std::abs(v - 1.25), 2.0 / static_cast<double>(nx));
            best = std::min(best, std::hypot((pt.phi - *g.saddle_phi) / dphi, pt.p_phi / dp));
        }
    }
    EXPECT_LE(best, 1.0);
}

TEST(PortraitTest, DomainOneHasNoSeparatrix) {
    const auto ap = AveragedParams::from_difference(0.0, 0.1);
    const auto g = build_grid(ap, 256, 256, default_p_max(ap));
    EXPECT_FALSE(g.separatrix_level.has_value());
    EXPECT_EQ(g.levels.size(), kDefaultLevelCount);
    for (const auto &lc : extract_contours(g)) {
        EXPECT_FALSE(lc.separatrix);
    }
}

TEST(PortraitTest, LowLevelsCloseAroundCenter) {
    const auto ap = AveragedParams::from_difference(0.0, 0.1);
    const auto g = build_grid(ap, 256, 256, default_p_max(ap));
    const auto eqs = find_equilibria(ap);
    ASSERT_EQ(eqs.size(), 1u);
    const auto lc = extract_level(g, g.levels.front());
    ASSERT_EQ(lc.polylines.size(), 1u);
    const auto &pl = lc.polylines.front();
    EXPECT_TRUE(pl.closed);
    double lo = 1e300, hi = -1e300;
    for (const auto &pt : pl.points) {
        lo = std::min(lo, pt.phi);
        hi = std::max(hi, pt.phi);
    }
    EXPECT_LT(lo, eqs[0].phi);
    EXPECT_GT(hi, eqs[0].phi);
}

TEST(PortraitTest, SvgDomainOne) {
    const auto ap = AveragedParams::from_difference(0.0, 0.1);
    const auto g = build_grid(ap, 128, 128, default_p_max(ap));
    const auto svg = render_svg(g, extract_contours(g));
    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
    EXPECT_NE(svg.find("viewBox=\"0 0 800 600\""), std::string::npos);
    EXPECT_EQ(count_occurrences(svg, "<circle class=\"center\""), 1u);
    EXPECT_EQ(count_occurrences(svg, "class=\"saddle\""), 0u);
    EXPECT_EQ(count_occurrences(svg, "<path class=\"separatrix\""), 0u);
    EXPECT_GT(count_occurrences(svg, "<path class=\"contour\""), 0u);
}

TEST(PortraitTest, SvgDomainTwo) {
    const auto ap = AveragedParams::from_difference(3.5, 0.01);
    const auto g = build_grid(ap, 256, 256, default_p_max(ap));
    const auto svg = render_svg(g, extract_contours(g));
    EXPECT_EQ(count_occurrences(svg, "<circle class=\"center\""), 2u);
    EXPECT_EQ(count_occurrences(svg, "<path class=\"saddle\""), 1u);
    EXPECT_GT(count_occurrences(svg, "<path class=\"separatrix\""), 0u);
}

TEST(PortraitTest, SvgIsDeterministic) {
    const auto ap = AveragedParams::from_difference(2.0, 0.0);
    const auto a = build_grid(ap, 200, 150, default_p_max(ap));
    const auto b = build_grid(ap, 200, 150, default_p_max(ap));
    EXPECT_EQ(render_svg(a, extract_contours(a)), render_svg(b, extract_contours(b)));
}

} // namespace
} // namespace pendulum_vib
