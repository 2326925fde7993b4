// Tests for marching-squares contour extraction
#include <pendulum_vib/contour.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace pendulum_vib {
namespace {

std::vector<double> sample(std::size_t nx, std::size_t ny, auto f) {
    std::vector<double> v(nx * ny);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) v[i * ny + j] = f(static_cast<double>(i), static_cast<double>(j));
    return v;
}

TEST(ContourTest, ConstantFieldHasNoContours) {
    const std::vector<double> v(64 * 64, 3.0);
    const ScalarField f{v, 64, 64};
    EXPECT_TRUE(marching_squares(f, 1.0).empty());
    EXPECT_TRUE(marching_squares(f, 5.0).empty());
}

TEST(ContourTest, BowlGivesSingleClosedCircle) {
    const std::size_t n = 101;
    const double c = 50.0;
    const double r = 30.0;
    const auto v = sample(n, n, [&](double x, double y) {
        return ((x - c) * (x - c) + (y - c) * (y - c)) / (r * r);
    });
    const ScalarField f{v, n, n};
    const auto lines = marching_squares(f, 1.0);
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_TRUE(lines[0].closed);
    EXPECT_GT(lines[0].points.size(), 100u);
    for (const auto &p : lines[0].points) {
        const double rad = std::hypot(p.x - c, p.y - c);
        EXPECT_LT(std::abs(rad - r), 2.0) << p.x << " " << p.y;
    }
}

TEST(ContourTest, OpenLineEndsOnBoundary) {
    const auto v = sample(20, 10, [](double x, double) { return x; });
    const ScalarField f{v, 20, 10};
    const auto lines = marching_squares(f, 7.5);
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_FALSE(lines[0].closed);
    EXPECT_EQ(lines[0].points.size(), 10u);
    for (const auto &p : lines[0].points) {
        EXPECT_DOUBLE_EQ(p.x, 7.5);
    }
}

TEST(ContourTest, AmbiguousCellUsesCornerAverage) {
    // Saddle cell: diagonal corners above the level.
    const std::vector<double> high_center = {1.0, 0.0, 0.0, 1.0}; // (0,0) (0,1) (1,0) (1,1)
    const ScalarField f{high_center, 2, 2};
    const auto segs = cell_segments(f, 0.4);
    ASSERT_EQ(segs.size(), 2u);
    EXPECT_TRUE(segs[0].ambiguous);
    // Average 0.5 > 0.4: inside corners are joined through the center, so each
    // segment separates one outside corner.
    for (const auto &s : segs) {
        const double mx = 0.5 * (s.a.x + s.b.x);
        const double my = 0.5 * (s.a.y + s.b.y);
        const bool near_01 = mx < 0.5 && my > 0.5;
        const bool near_10 = mx > 0.5 && my < 0.5;
        EXPECT_TRUE(near_01 || near_10) << mx << " " << my;
    }
    const auto segs_low = cell_segments(f, 0.6);
    ASSERT_EQ(segs_low.size(), 2u);
    for (const auto &s : segs_low) {
        const double mx = 0.5 * (s.a.x + s.b.x);
        const double my = 0.5 * (s.a.y + s.b.y);
        const bool near_00 = mx < 0.5 && my < 0.5;
        const bool near_11 = mx > 0.5 && my > 0.5;
        EXPECT_TRUE(near_00 || near_11) << mx << " " << my;
    }
}

TEST(ContourTest, SegmentsLieInCrossingCellsOnly) {
    const std::size_t n = 40;
    const auto v = sample(n, n, [](double x, double y) { return std::sin(0.3 * x) * std::cos(0.2 * y); });
    const ScalarField f{v, n, n};
    const double level = 0.1;
    for (const auto &s : cell_segments(f, level)) {
        const double lo = std::min({f(s.i, s.j), f(s.i + 1, s.j), f(s.i, s.j + 1), f(s.i + 1, s.j + 1)});
        const double hi = std::max({f(s.i, s.j), f(s.i + 1, s.j), f(s.i, s.j + 1), f(s.i + 1, s.j + 1)});
        EXPECT_LE(lo, level);
        EXPECT_GT(hi, level);
        for (const auto &p : {s.a, s.b}) {
            EXPECT_GE(p.x, static_cast<double>(s.i));
            EXPECT_LE(p.x, static_cast<double>(s.i + 1));
            EXPECT_GE(p.y, static_cast<double>(s.j));
            EXPECT_LE(p.y, static_cast<double>(s.j + 1));
        }
    }
}

TEST(ContourTest, ChainingUsesEverySegmentOnce) {
    const std::size_t n = 60;
    const auto v = sample(n, n, [](double x, double y) { return std::sin(0.25 * x) + std::sin(0.3 * y); });
    const ScalarField f{v, n, n};
    const auto segs = cell_segments(f, 0.3);
    std::size_t edges = 0;
    for (const auto &line : chain_segments(segs)) {
        ASSERT_GE(line.points.size(), 2u);
        edges += line.points.size() - 1;
    }
    EXPECT_EQ(edges, segs.size());
}

TEST(ContourTest, RejectsMismatchedSize) {
    const std::vector<double> v(5, 0.0);
    EXPECT_THROW(cell_segments(ScalarField{v, 2, 2}, 0.0), ParameterError);
}

} // namespace
} // namespace pendulum_vib
