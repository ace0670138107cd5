#include <gtest/gtest.h>

#include "qlane/hough.hpp"
#include "support/oracles.hpp"

namespace qlane {
namespace {

constexpr double kPi = std::numbers::pi;

double endpoint_error(const LineSegment& s, Point2 a, Point2 b) {
    const double same = std::max(distance(s.p0, a), distance(s.p1, b));
    const double swapped = std::max(distance(s.p0, b), distance(s.p1, a));
    return std::min(same, swapped);
}

double theta_gap(double a, double b) {
    const double d = std::fmod(std::abs(a - b), kPi);
    return std::min(d, kPi - d);
}

TEST(Hough, EmptyMaskHasNoVotesOrSegments) {
    const EdgeMask m(40, 60, 0);
    const Accumulator acc = vote(m);
    EXPECT_EQ(acc.total(), 0);
    EXPECT_EQ(acc.peak().votes, 0);
    EXPECT_TRUE(detect_segments(m).empty());
    EXPECT_THROW(vote(EdgeMask{}), std::invalid_argument);
}

TEST(Hough, SinglePixelVotesOncePerAngle) {
    EdgeMask m(30, 30, 0);
    m(12, 7) = 1;
    const Accumulator acc = vote(m);
    EXPECT_EQ(acc.theta_bins(), 180u);
    EXPECT_EQ(acc.total(), 180);
    for (std::size_t n = 0; n < acc.theta_bins(); ++n) {
        int row_sum = 0;
        for (std::size_t r = 0; r < acc.rho_bins(); ++r) row_sum += acc.at(n, r);
        EXPECT_EQ(row_sum, 1);
        const double expect = 7.0 * std::cos(acc.theta(n)) + 12.0 * std::sin(acc.theta(n));
        EXPECT_LE(std::abs(acc.rho(acc.rho_bin(7, 12, n)) - expect), 0.5 + 1e-12);
    }
}

TEST(Hough, VerticalColumnPeaksAtThetaZero) {
    EdgeMask m(64, 64, 0);
    for (std::size_t y = 0; y < 50; ++y) m(y, 20) = 1;
    const auto peak = vote(m).peak();
    EXPECT_EQ(peak.votes, 50);
    EXPECT_EQ(peak.theta, 0.0);
    EXPECT_EQ(peak.rho, 20.0);
}

TEST(Hough, LineThroughTwoPoints) {
    const auto [rho, theta] = line_through({0, 0}, {10, 10});
    EXPECT_NEAR(theta, 3.0 * kPi / 4.0, 1e-12);
    EXPECT_NEAR(rho, 0.0, 1e-12);
    const auto [r2, t2] = line_through({5, 0}, {5, 9});
    EXPECT_NEAR(t2, 0.0, 1e-12);
    EXPECT_NEAR(r2, 5.0, 1e-12);
    const auto [r3, t3] = line_through({0, 4}, {9, 4});
    EXPECT_NEAR(t3, kPi / 2.0, 1e-12);
    EXPECT_NEAR(r3, 4.0, 1e-12);
}

TEST(Hough, OnGridLinePeaksAtItsBin) {
    testing::Rng rng(51);
    const HoughConfig cfg;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = rng.index(0, 179);
        const double theta = static_cast<double>(n) * cfg.theta_res;
        const double rho = std::round(rng.uniform(20.0, 100.0)) + rng.uniform(-0.3, 0.3);
        const EdgeMask m = testing::ideal_line_mask(160, 160, rho, theta);
        if (count_set(m) < 60) continue;
        const auto peak = vote(m, cfg).peak();
        EXPECT_LE(theta_gap(peak.theta, theta), cfg.theta_res + 1e-9) << trial;
        EXPECT_LE(std::abs(peak.rho - std::round(rho)), 1.0) << trial;
    }
}

TEST(Hough, DiagonalSegmentRecovered) {
    EdgeMask m(128, 128, 0);
    for (std::size_t t = 10; t < 110; ++t) m(t, t) = 1;
    HoughConfig cfg;
    cfg.min_len = 30;
    const auto segs = detect_segments(m, cfg);
    ASSERT_EQ(segs.size(), 1u);
    EXPECT_LE(endpoint_error(segs[0], {10, 10}, {109, 109}), 2.0);
    EXPECT_LE(theta_gap(segs[0].theta, 3.0 * kPi / 4.0), cfg.theta_res);
    EXPECT_NEAR(segs[0].rho, 0.0, 1.0);
}

TEST(Hough, TwoParallelLines) {
    EdgeMask m(128, 128, 0);
    for (std::size_t y = 5; y < 121; ++y) {
        m(y, 30) = 1;
        m(y, 70) = 1;
    }
    const auto segs = detect_segments(m);
    ASSERT_EQ(segs.size(), 2u);
    std::vector<double> xs{segs[0].p0.x, segs[1].p0.x};
    std::sort(xs.begin(), xs.end());
    EXPECT_NEAR(xs[0], 30.0, 1e-9);
    EXPECT_NEAR(xs[1], 70.0, 1e-9);
    for (const auto& s : segs) EXPECT_LE(endpoint_error(s, {s.p0.x, 5}, {s.p0.x, 120}), 2.0);
}

TEST(Hough, GapBridging) {
    EdgeMask m(100, 100, 0);
    for (std::size_t x = 10; x < 90; ++x) {
        if (x >= 45 && x < 52) continue;
        m(60, x) = 1;
    }
    HoughConfig cfg;
    cfg.vote_threshold = 20;
    auto segs = detect_segments(m, cfg);
    ASSERT_EQ(segs.size(), 1u);
    EXPECT_LE(endpoint_error(segs[0], {10, 60}, {89, 60}), 2.0);

    cfg.max_gap = 3;
    cfg.min_len = 20;
    segs = detect_segments(m, cfg);
    EXPECT_EQ(segs.size(), 2u);
}

TEST(Hough, EndpointsLieOnReportedLine) {
    testing::Rng rng(52);
    EdgeMask m(200, 200, 0);
    testing::draw_ideal_segment(m, {20, 180}, {90, 30});
    testing::draw_ideal_segment(m, {120, 190}, {170, 40});
    for (int n = 0; n < 300; ++n) m(rng.index(0, 199), rng.index(0, 199)) = 1;
    const auto segs = detect_segments(m);
    ASSERT_GE(segs.size(), 2u);
    for (const auto& s : segs) {
        EXPECT_NEAR(s.residual(s.p0), 0.0, 1e-9);
        EXPECT_NEAR(s.residual(s.p1), 0.0, 1e-9);
        EXPECT_GE(s.length(), 50.0);
        EXPECT_GE(s.theta, 0.0);
        EXPECT_LT(s.theta, kPi);
    }
}

TEST(Hough, SeededRunsAreIdentical) {
    testing::Rng rng(53);
    EdgeMask m(150, 150, 0);
    testing::draw_ideal_segment(m, {10, 140}, {70, 20});
    testing::draw_ideal_segment(m, {80, 20}, {140, 140});
    for (int n = 0; n < 500; ++n) m(rng.index(0, 149), rng.index(0, 149)) = 1;
    HoughConfig cfg;
    cfg.rng_seed = 99;
    EXPECT_EQ(detect_segments(m, cfg), detect_segments(m, cfg));
}

TEST(Hough, LinePeakDominatesNoise) {
    testing::Rng rng(54);
    EdgeMask m(120, 120, 0);
    for (std::size_t x = 0; x < 120; ++x) m(40, x) = 1;
    for (int n = 0; n < 200; ++n) m(rng.index(60, 119), rng.index(0, 119)) = 1;
    const auto peak = vote(m).peak();
    EXPECT_NEAR(peak.theta, kPi / 2.0, 1e-12);
    EXPECT_EQ(peak.rho, 40.0);
    EXPECT_GE(peak.votes, 120);
}

TEST(Hough, ConfigValidation) {
    const EdgeMask m(10, 10, 0);
    HoughConfig bad;
    bad.rho_res = 0;
    EXPECT_THROW(vote(m, bad), std::invalid_argument);
    bad = {};
    bad.theta_res = -0.1;
    EXPECT_THROW(detect_segments(m, bad), std::invalid_argument);
    bad = {};
    bad.vote_threshold = 0;
    EXPECT_THROW(detect_segments(m, bad), std::invalid_argument);
    bad = {};
    bad.max_gap = -1;
    EXPECT_THROW(detect_segments(m, bad), std::invalid_argument);
}

LineSegment seg(Point2 a, Point2 b) {
    const auto [rho, theta] = line_through(a, b);
    return {a, b, rho, theta, 60};
}

TEST(LaneSelection, EmptyInput) {
    const LanePair lp = select_lane_lines({}, 200, 100);
    EXPECT_FALSE(lp.left);
    EXPECT_FALSE(lp.right);
}

TEST(LaneSelection, PicksOneOfEachSign) {
    const LineSegment left = seg({50, 99}, {100, 49});
    const LineSegment right = seg({150, 99}, {100, 49});
    ASSERT_LT(left.slope(), 0.0);
    ASSERT_GT(right.slope(), 0.0);
    const LanePair lp = select_lane_lines({left, right}, 200, 100);
    ASSERT_TRUE(lp.left);
    ASSERT_TRUE(lp.right);
    EXPECT_EQ(*lp.left, left);
    EXPECT_EQ(*lp.right, right);
}

TEST(LaneSelection, SlopeBand) {
    // Slopes 0.05 and 8 fall outside tan 20..tan 80; 0.7 and 3.5 are inside.
    const LineSegment flat = seg({110, 99}, {190, 103});
    const LineSegment steepest = seg({120, 99}, {110, 19});
    const LineSegment a = seg({130, 99}, {70, 57});
    const LineSegment b = seg({140, 99}, {120, 29});
    ASSERT_NEAR(flat.slope(), 0.05, 1e-12);
    ASSERT_NEAR(steepest.slope(), 8.0, 1e-12);
    ASSERT_NEAR(a.slope(), 0.7, 1e-12);
    ASSERT_NEAR(b.slope(), 3.5, 1e-12);

    EXPECT_FALSE(select_lane_lines({flat}, 200, 100).right);
    EXPECT_FALSE(select_lane_lines({steepest}, 200, 100).right);
    EXPECT_TRUE(select_lane_lines({a}, 200, 100).right);
    EXPECT_TRUE(select_lane_lines({b}, 200, 100).right);

    // Both in band: the bottom crossing closest to centre wins.
    LanePair lp = select_lane_lines({b, a, flat}, 200, 100);
    ASSERT_TRUE(lp.right);
    EXPECT_EQ(*lp.right, a);
    const LineSegment b_inner = seg({110, 99}, {90, 29});
    lp = select_lane_lines({a, b_inner, steepest}, 200, 100);
    ASSERT_TRUE(lp.right);
    EXPECT_EQ(*lp.right, b_inner);
}

TEST(LaneSelection, NearestCentreOnEachSide) {
    const LineSegment outer = seg({30, 99}, {80, 49});
    const LineSegment inner = seg({70, 99}, {120, 49});
    LanePair lp = select_lane_lines({outer, inner}, 200, 100);
    ASSERT_TRUE(lp.left);
    EXPECT_EQ(*lp.left, inner);
    lp = select_lane_lines({inner, outer}, 200, 100);
    EXPECT_EQ(*lp.left, inner);
}

TEST(LaneSelection, WrongSideIsRejected) {
    // Negative slope but crossing the bottom right of centre.
    const LineSegment s = seg({150, 99}, {200, 49});
    const LanePair lp = select_lane_lines({s}, 200, 100);
    EXPECT_FALSE(lp.left);
    EXPECT_FALSE(lp.right);
}

TEST(LaneSelection, UsesExtensionToBottomRow) {
    // Segment far above the bottom row; its extension decides the side.
    const LineSegment s = seg({90, 20}, {80, 30});
    ASSERT_NEAR(s.slope(), -1.0, 1e-12);
    EXPECT_NEAR(bottom_crossing(s, 99), 11.0, 1e-12);
    EXPECT_TRUE(select_lane_lines({s}, 200, 100).left);
}

}  // namespace
}  // namespace qlane
