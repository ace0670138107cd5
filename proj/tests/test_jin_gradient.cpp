#include <gtest/gtest.h>

#include "qlane/jin_gradient.hpp"
#include "support/oracles.hpp"

namespace qlane {
namespace {

RealGrid ramp(std::size_t rows, std::size_t cols, double ax, double ay) {
    RealGrid g(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) g(r, c) = ax * double(c) + ay * double(r);
    }
    return g;
}

RealGrid rotate90(const RealGrid& g) {
    RealGrid out(g.width(), g.height());
    for (std::size_t r = 0; r < out.height(); ++r) {
        for (std::size_t c = 0; c < out.width(); ++c) out(r, c) = g(c, g.width() - 1 - r);
    }
    return out;
}

bool interior(const RealGrid& g, std::size_t r, std::size_t c) {
    return r > 0 && c > 0 && r + 1 < g.height() && c + 1 < g.width();
}

TEST(Derivatives, LinearRampIsExactEverywhere) {
    const Derivatives d = channel_derivatives(ramp(6, 9, 1.0, 2.0));
    for (double v : d.dx) EXPECT_EQ(v, 1.0);
    for (double v : d.dy) EXPECT_EQ(v, 2.0);
}

TEST(Derivatives, ConstantHasNoGradient) {
    const Derivatives d = channel_derivatives(RealGrid(5, 5, 42.0));
    for (double v : d.dx) EXPECT_EQ(v, 0.0);
    for (double v : d.dy) EXPECT_EQ(v, 0.0);
}

TEST(Derivatives, SobelRampInterior) {
    const RealGrid g = ramp(7, 7, 1.0, 0.0);
    const Derivatives d = channel_derivatives(g, DerivativeScheme::sobel);
    for (std::size_t r = 1; r + 1 < 7; ++r) {
        for (std::size_t c = 1; c + 1 < 7; ++c) {
            EXPECT_DOUBLE_EQ(d.dx(r, c), 1.0);
            EXPECT_DOUBLE_EQ(d.dy(r, c), 0.0);
        }
    }
}

TEST(Derivatives, RejectsDegenerateGrids) {
    EXPECT_THROW(channel_derivatives(RealGrid(1, 8)), std::invalid_argument);
    EXPECT_THROW(channel_derivatives(RealGrid(8, 1)), std::invalid_argument);
    EXPECT_THROW(gradient(RealGrid(1, 5), RealGrid(1, 5), RealGrid(1, 5)), std::invalid_argument);
    EXPECT_THROW(gradient(RealGrid(4, 5), RealGrid(4, 5), RealGrid(5, 4)), std::invalid_argument);
}

TEST(StructureTerms, RampInAllChannels) {
    const RealGrid x = ramp(8, 8, 1.0, 0.0);
    const StructureTerms t = structure_terms(x, x, x);
    for (std::size_t n = 0; n < t.h.size(); ++n) {
        EXPECT_EQ(t.h.data()[n], 3.0);
        EXPECT_EQ(t.j.data()[n], 0.0);
        EXPECT_EQ(t.k.data()[n], 0.0);
    }
}

TEST(StructureTerms, MixedChannels) {
    const StructureTerms t = structure_terms(ramp(5, 5, 1, 0), ramp(5, 5, 0, 2), ramp(5, 5, 1, 1));
    EXPECT_EQ(t.h(2, 2), 2.0);
    EXPECT_EQ(t.j(2, 2), 5.0);
    EXPECT_EQ(t.k(2, 2), 1.0);
}

TEST(Gradient, HorizontalRamp) {
    const RealGrid x = ramp(10, 10, 1.0, 0.0);
    const GradientField gf = gradient(x, x, x);
    for (std::size_t n = 0; n < gf.magnitude.size(); ++n) {
        EXPECT_EQ(gf.magnitude.data()[n], 3.0);
        EXPECT_EQ(gf.direction.data()[n], 0.0);
    }
}

TEST(Gradient, VerticalRampPointsAlongRows) {
    const RealGrid y = ramp(10, 10, 0.0, 1.0);
    const GradientField gf = gradient(y, y, y);
    for (std::size_t n = 0; n < gf.magnitude.size(); ++n) {
        EXPECT_DOUBLE_EQ(gf.magnitude.data()[n], 3.0);
        EXPECT_DOUBLE_EQ(std::abs(gf.direction.data()[n]), std::numbers::pi / 2.0);
    }
}

TEST(Gradient, DiagonalRampDirection) {
    const RealGrid d = ramp(10, 10, 1.0, 1.0);
    const GradientField gf = gradient(d, d, d);
    EXPECT_DOUBLE_EQ(gf.magnitude(5, 5), 6.0);
    EXPECT_NEAR(gf.direction(5, 5), std::numbers::pi / 4.0, 1e-12);
    const RealGrid a = ramp(10, 10, 1.0, -1.0);
    EXPECT_NEAR(gradient(a, a, a).direction(5, 5), -std::numbers::pi / 4.0, 1e-12);
}

TEST(Gradient, FlatImageHasUndefinedDirection) {
    const RealGrid c(6, 6, 3.0);
    const GradientField gf = gradient(c, c, c);
    for (std::size_t n = 0; n < gf.magnitude.size(); ++n) {
        EXPECT_EQ(gf.magnitude.data()[n], 0.0);
        EXPECT_TRUE(std::isnan(gf.direction.data()[n]));
    }
}

TEST(Gradient, GrayscaleIsThreeTimesScalarOracle) {
    testing::Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const RealGrid g = rng.real_grid(32, 32, 0, 255);
        const RealGrid expect = testing::scalar_squared_gradient(g);
        const GradientField gf = gradient(g, g, g);
        for (std::size_t n = 0; n < g.size(); ++n) {
            ASSERT_NEAR(gf.magnitude.data()[n], 3.0 * expect.data()[n], 1e-9 * (1.0 + expect.data()[n]));
        }
    }
}

TEST(Gradient, ChannelPermutationInvariant) {
    testing::Rng rng(42);
    const RealGrid a = rng.real_grid(12, 14), b = rng.real_grid(12, 14), c = rng.real_grid(12, 14);
    const GradientField abc = gradient(a, b, c);
    const GradientField cab = gradient(c, a, b);
    const GradientField bca = gradient(b, c, a);
    for (std::size_t n = 0; n < a.size(); ++n) {
        EXPECT_NEAR(abc.magnitude.data()[n], cab.magnitude.data()[n], 1e-12);
        EXPECT_NEAR(abc.magnitude.data()[n], bca.magnitude.data()[n], 1e-12);
    }
}

TEST(Gradient, RotationMovesMagnitudeInterior) {
    testing::Rng rng(43);
    const RealGrid a = rng.real_grid(11, 17), b = rng.real_grid(11, 17), c = rng.real_grid(11, 17);
    const RealGrid rotated = rotate90(gradient(a, b, c).magnitude);
    const GradientField after = gradient(rotate90(a), rotate90(b), rotate90(c));
    for (std::size_t r = 0; r < rotated.height(); ++r) {
        for (std::size_t col = 0; col < rotated.width(); ++col) {
            if (!interior(rotated, r, col)) continue;
            EXPECT_NEAR(after.magnitude(r, col), rotated(r, col), 1e-9);
        }
    }
}

TEST(Gradient, MagnitudeIsLargestEigenvalue) {
    testing::Rng rng(44);
    for (int trial = 0; trial < 200; ++trial) {
        const double gx1 = rng.uniform(-5, 5), gy1 = rng.uniform(-5, 5);
        const double gx2 = rng.uniform(-5, 5), gy2 = rng.uniform(-5, 5);
        const double h = gx1 * gx1 + gx2 * gx2, j = gy1 * gy1 + gy2 * gy2, k = gx1 * gy1 + gx2 * gy2;
        const auto [mag, dir] = max_variation(h, j, k);
        // Quadratic form along the reported direction reaches the eigenvalue.
        const double c = std::cos(dir), s = std::sin(dir);
        EXPECT_NEAR(h * c * c + 2.0 * k * c * s + j * s * s, mag, 1e-9 * (1.0 + mag));
        // Trace minus the other eigenvalue.
        const double tr = h + j, det = h * j - k * k;
        const double other = tr - mag;
        EXPECT_NEAR(mag * other, det, 1e-8 * (1.0 + mag * mag));
        EXPECT_GE(mag, other - 1e-12);
    }
}

TEST(Gradient, LiteralLetteringDiffers) {
    const double h = 4.0, j = 1.0, k = 2.0;
    // Literal reading: J and K trade places and the ratio is not square-rooted.
    const double lj = k, lk = j;
    const double mag = 0.5 * (h + lj + std::sqrt((h - lj) * (h - lj) + 4.0 * lk * lk));
    const double dir = std::asin((mag - h) / (2.0 * mag - h - lj));
    const auto [m, d] = max_variation(h, j, k, GradientFormula::literal);
    EXPECT_DOUBLE_EQ(m, mag);
    EXPECT_DOUBLE_EQ(d, dir);
    EXPECT_NE(d, max_variation(h, j, k).second);
}

GradientField field_from(const RealGrid& mag) {
    return {mag, RealGrid(mag.height(), mag.width())};
}

TEST(Binarize, ZeroFieldHasNoEdges) {
    const EdgeMask m = binarize(field_from(RealGrid(10, 10)), TopPercentile{5});
    EXPECT_EQ(count_set(m), 0u);
}

TEST(Binarize, SinglePeakIsOnlyEdge) {
    RealGrid mag(10, 10);
    mag(3, 7) = 1.0;
    const EdgeMask m = binarize(field_from(mag), TopPercentile{5});
    EXPECT_EQ(count_set(m), 1u);
    EXPECT_EQ(m(3, 7), 1);
}

TEST(Binarize, KeepsTopFraction) {
    RealGrid mag(10, 10);
    for (std::size_t n = 0; n < 100; ++n) mag.data()[n] = double(n + 1);
    const EdgeMask m = binarize(field_from(mag), TopPercentile{5});
    EXPECT_EQ(count_set(m), 5u);
    for (std::size_t n = 95; n < 100; ++n) EXPECT_EQ(m.data()[n], 1);
    EXPECT_EQ(count_set(binarize(field_from(mag), FixedThreshold{50.5})), 50u);
}

TEST(Binarize, StepEdgeLandsOnBoundary) {
    const std::size_t rows = 32, cols = 32, step = 16;
    RealGrid ch(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = step; c < cols; ++c) ch(r, c) = 100.0;
    }
    const EdgeMask m = binarize(gradient(ch, ch, ch), TopPercentile{5});
    ASSERT_GT(count_set(m), 0u);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (m(r, c)) EXPECT_LE(std::abs(double(c) - (double(step) - 0.5)), 1.0);
        }
    }
}

TEST(Binarize, RejectsInvalidPercentile) {
    const GradientField gf = field_from(RealGrid(4, 4, 1.0));
    EXPECT_THROW(binarize(gf, TopPercentile{0.0}), std::invalid_argument);
    EXPECT_THROW(binarize(gf, TopPercentile{-3.0}), std::invalid_argument);
    EXPECT_THROW(binarize(gf, TopPercentile{100.5}), std::invalid_argument);
    EXPECT_EQ(count_set(binarize(gf, TopPercentile{100.0})), 16u);
}

}  // namespace
}  // namespace qlane
