#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rkbs/admissibility.hpp"
#include "rkbs/interpolation.hpp"

using namespace rkbs;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double e : v) out(i++) = e;
    return out;
}

ExpansionFunction left(const KernelSpec &k, std::vector<double> x, Vector c) {
    return ExpansionFunction(k, PointSet(std::move(x)), CoefficientVector{std::move(c), Side::Left});
}

ExpansionFunction right(const KernelSpec &k, std::vector<double> x, Vector c) {
    return ExpansionFunction(k, PointSet(std::move(x)), CoefficientVector{std::move(c), Side::Right});
}

}  // namespace

TEST(Expansion, Evaluate) {
    const auto k = KernelSpec::exponential();
    EXPECT_NEAR(evaluate(left(k, {0.0, 1.0}, vec({1.0, 1.0})), 0.0), 1.0 + std::exp(-1.0), 1e-15);
    EXPECT_NEAR(evaluate(left(k, {0.0, 1.0}, vec({0.0, 1.0})), 0.3), std::exp(-0.7), 1e-15);
    EXPECT_EQ(evaluate(left(k, {0.0, 1.0}, vec({2.0, -1.0})), 0.4), evaluate(right(k, {0.0, 1.0}, vec({2.0, -1.0})), 0.4));
    EXPECT_THROW(evaluate(left(KernelSpec::brownian_bridge(), {0.5}, vec({1.0})), 1.0), Error);
}

TEST(Expansion, ConstructionChecks) {
    const auto k = KernelSpec::exponential();
    try {
        left(k, {0.0, 1.0}, vec({1.0}));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
    EXPECT_THROW(left(KernelSpec::brownian_bridge(), {0.5, 1.5}, vec({1.0, 1.0})), Error);
}

TEST(Norms, Bnorm) {
    const auto k = KernelSpec::exponential();
    EXPECT_EQ(bnorm(left(k, {0.0, 1.0, 2.0}, vec({0.0, 0.0, 0.0}))), 0.0);
    EXPECT_EQ(bnorm(left(k, {0.0, 1.0, 2.0}, vec({1.0, -2.0, 0.5}))), 3.5);
    EXPECT_THROW(bnorm(right(k, {0.0}, vec({1.0}))), Error);
}

TEST(Norms, BsharpFormula) {
    const auto k = KernelSpec::exponential();
    EXPECT_NEAR(bsharp_norm(right(k, {0.0, 1.0}, vec({1.0, 1.0}))), 1.0 + std::exp(-1.0), 1e-15);
    EXPECT_NEAR(bsharp_norm(right(k, {0.0, 0.3, 1.0}, vec({0.0, 1.0, 0.0}))), 1.0, 1e-15);
    EXPECT_NEAR(bsharp_norm(right(k, {0.2}, vec({-3.0}))), 3.0, 1e-15);
    EXPECT_NEAR(bsharp_norm(right(KernelSpec::brownian_bridge(), {0.5}, vec({2.0}))), 0.5, 1e-15);
    try {
        bsharp_norm(right(KernelSpec::gaussian(1.0), {0.0}, vec({1.0})));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::FormulaUnavailable);
    }
    EXPECT_THROW(bsharp_norm(left(k, {0.0}, vec({1.0}))), Error);
}

TEST(Norms, GridSupExceedsNodeMaximumForGaussian) {
    // The peak sits between the nodes, so the node-maximum formula would undercount.
    const auto f = right(KernelSpec::gaussian(1.0), {-0.5, 0.5}, vec({1.0, 1.0}));
    const auto grid = uniform_grid(Interval::closed(-1.0, 1.0), 201);
    EXPECT_NEAR(grid_sup_norm(f, grid), 2.0 * std::exp(-0.25), 1e-15);
    EXPECT_GT(grid_sup_norm(f, grid), 1.0 + std::exp(-1.0));
}

TEST(MinNormB, ReferenceCases) {
    const GramSystem s(KernelSpec::exponential(), PointSet{0.0, 1.0});
    const auto zero = min_norm_interpolant_b(s, Vector::Zero(2));
    EXPECT_EQ(bnorm(zero), 0.0);

    const auto f = min_norm_interpolant_b(s, vec({1.0, std::exp(-1.0)}));
    EXPECT_NEAR(f.coef()(0), 1.0, 1e-15);
    EXPECT_NEAR(f.coef()(1), 0.0, 1e-15);
    EXPECT_NEAR(bnorm(f), 1.0, 1e-15);

    const GramSystem g(KernelSpec::gaussian(1.0), PointSet{-0.3, 0.2, 0.9});
    const auto e1 = min_norm_interpolant_b(g, g.gram().col(1));
    EXPECT_NEAR(e1.coef()(1), 1.0, 1e-12);
    EXPECT_NEAR(bnorm(e1), 1.0, 1e-12);
}

TEST(MinNormBsharp, ReferenceCases) {
    const GramSystem s(KernelSpec::exponential(), PointSet{0.0, 1.0});
    const auto f = min_norm_interpolant_bsharp(s, vec({1.0, 1.0}));
    EXPECT_EQ(f.side(), Side::Right);
    EXPECT_NEAR(bsharp_norm(f), 1.0, 1e-12);

    const GramSystem t(KernelSpec::exponential(), PointSet{-0.7, 0.1, 0.4, 1.3});
    const auto g = min_norm_interpolant_bsharp(t, vec({0.0, 0.0, -2.5, 0.0}));
    EXPECT_NEAR(bsharp_norm(g), 2.5, 1e-12);
    EXPECT_NEAR(evaluate(g, 0.4), -2.5, 1e-12);
    EXPECT_NEAR(evaluate(g, 1.3), 0.0, 1e-12);

    const GramSystem gauss(KernelSpec::gaussian(1.0), PointSet{0.0, 1.0});
    EXPECT_THROW(min_norm_interpolant_bsharp(gauss, vec({1.0, 1.0})), Error);
}

TEST(Bilinear, SingleTermsAndMismatch) {
    const auto k = KernelSpec::gaussian(0.5);
    EXPECT_NEAR(bilinear_form(left_section(k, 0.2), right_section(k, -0.4)), k.value(0.2, -0.4), 1e-15);
    try {
        bilinear_form(left_section(k, 0.2), right_section(KernelSpec::exponential(), 0.1));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::KernelMismatch);
    }
    EXPECT_THROW(bilinear_form(right_section(k, 0.2), left_section(k, 0.1)), Error);
}

TEST(InterpolationProperties, NodeReproduction) {
    oracle::Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const bool bridge = trial % 2 == 0;
        const double lo = bridge ? 0.0 : -3.0;
        const double hi = bridge ? 1.0 : 3.0;
        const int n = rng.integer(1, 25);
        const auto xs = rng.spaced_points(n, lo, hi, 1e-3 * (hi - lo));
        const GramSystem s(bridge ? KernelSpec::brownian_bridge() : KernelSpec::exponential(), PointSet(xs));
        Vector y(n);
        for (int i = 0; i < n; ++i) y(i) = rng.uniform(-1.0, 1.0);
        const auto fb = min_norm_interpolant_b(s, y);
        const auto fs = min_norm_interpolant_bsharp(s, y);
        for (int j = 0; j < n; ++j) {
            const double xj = xs[static_cast<std::size_t>(j)];
            ASSERT_NEAR(evaluate(fb, xj), y(j), 1e-9 * std::max(1.0, std::abs(y(j))));
            ASSERT_NEAR(evaluate(fs, xj), y(j), 1e-10);
        }
        ASSERT_NEAR(bsharp_norm(fs), y.lpNorm<Eigen::Infinity>(), 1e-9);
    }
}

TEST(InterpolationProperties, ReproducingAndHolder) {
    oracle::Rng rng(77);
    const auto k = KernelSpec::exponential();
    for (int trial = 0; trial < 300; ++trial) {
        const int nf = rng.integer(1, 10);
        const int ng = rng.integer(1, 10);
        Vector a(nf), b(ng);
        for (int i = 0; i < nf; ++i) a(i) = rng.uniform(-1.0, 1.0);
        for (int i = 0; i < ng; ++i) b(i) = rng.uniform(-1.0, 1.0);
        const auto f = left(k, rng.spaced_points(nf, -2.0, 2.0, 0.01), a);
        const auto g = right(k, rng.spaced_points(ng, -2.0, 2.0, 0.01), b);
        const double x = rng.uniform(-2.5, 2.5);

        const double fx = evaluate(f, x);
        ASSERT_NEAR(bilinear_form(f, right_section(k, x)), fx, 1e-10 * std::max(1.0, std::abs(fx)));
        const double gx = evaluate(g, x);
        ASSERT_NEAR(bilinear_form(left_section(k, x), g), gx, 1e-10 * std::max(1.0, std::abs(gx)));

        const double bound = bnorm(f) * bsharp_norm(g);
        ASSERT_LE(std::abs(bilinear_form(f, g)), bound * (1.0 + 1e-10));
    }
}

TEST(InterpolationProperties, BsharpFormulaMatchesDenseGrid) {
    oracle::Rng rng(99);
    const auto k = KernelSpec::exponential();
    const auto grid = uniform_grid(Interval::closed(-1.0, 1.0), 10001);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = rng.integer(1, 8);
        Vector c(n);
        for (int i = 0; i < n; ++i) c(i) = rng.uniform(-1.0, 1.0);
        const auto f = right(k, rng.spaced_points(n, -1.0, 1.0, 0.01), c);
        const double formula = bsharp_norm(f);
        const double sup = grid_sup_norm(f, grid);
        ASSERT_LE(sup, formula + 1e-9);
        ASSERT_GE(sup, formula - 1e-3);
    }
}
