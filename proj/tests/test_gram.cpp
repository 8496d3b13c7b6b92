#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "rkbs/gram.hpp"
#include "rkbs/random.hpp"

using namespace rkbs;

TEST(PointSet, RejectsDuplicatesAndEmpty) {
    try {
        PointSet{0.1, 0.5, 0.1};
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DuplicatePoints);
    }
    EXPECT_THROW(PointSet(std::vector<double>{}), Error);
    EXPECT_THROW(PointSet({0.0, std::nan("")}), Error);
}

TEST(PointSet, KeepsOrderAndSortedPermutation) {
    const PointSet x{0.5, -1.0, 0.25};
    EXPECT_EQ(x[0], 0.5);
    EXPECT_EQ(x.sorted(), (std::vector<double>{-1.0, 0.25, 0.5}));
    EXPECT_DOUBLE_EQ(x.min_spacing(), 0.25);
    EXPECT_TRUE(x.contains(0.25));
    EXPECT_FALSE(x.contains(0.3));
    EXPECT_EQ(x.with_point(2.0).size(), 4u);
    EXPECT_THROW(x.with_point(0.5), Error);
}

TEST(GramSystem, ExponentialTwoPoints) {
    const GramSystem s(KernelSpec::exponential(), PointSet{0.0, 1.0});
    const double e = std::exp(-1.0);
    EXPECT_DOUBLE_EQ(s.gram()(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(s.gram()(0, 1), e);
    EXPECT_DOUBLE_EQ(s.gram()(1, 0), e);
    EXPECT_DOUBLE_EQ(s.gram()(1, 1), 1.0);

    const Vector k0 = kx_column(s, 0.0);
    EXPECT_DOUBLE_EQ(k0(0), 1.0);
    EXPECT_DOUBLE_EQ(k0(1), e);
    EXPECT_EQ(kx_row(s, 0.3), kx_column(s, 0.3));

    Vector y(2);
    y << 1.0, 0.0;
    const Vector c = solve(s, y);
    const double d = 1.0 - std::exp(-2.0);
    EXPECT_NEAR(c(0), 1.0 / d, 1e-14);
    EXPECT_NEAR(c(1), -e / d, 1e-14);

    const Vector w = cardinal_coefficients(s, 2.0);
    EXPECT_NEAR(w(0), 0.0, 1e-15);
    EXPECT_NEAR(w(1), e, 1e-15);
}

TEST(GramSystem, OnePoint) {
    const GramSystem s(KernelSpec::brownian_bridge(), PointSet{0.5});
    EXPECT_DOUBLE_EQ(s.gram()(0, 0), 0.25);
    EXPECT_DOUBLE_EQ(s.kx_column(0.25)(0), 0.125);
    Vector y(1);
    y << 3.0;
    EXPECT_DOUBLE_EQ(s.solve(y)(0), 12.0);
}

TEST(GramSystem, BrownianBridgeCardinalBelowFirstNode) {
    const GramSystem s(KernelSpec::brownian_bridge(), PointSet{0.2, 0.6});
    const Vector w = s.cardinal_coefficients(0.1);
    EXPECT_NEAR(w(0), 0.5, 1e-14);
    EXPECT_NEAR(w(1), 0.0, 1e-14);
}

TEST(GramSystem, SincOnIntegersIsIdentity) {
    const GramSystem s(KernelSpec::sinc(), PointSet{0.0, 1.0, 2.0});
    EXPECT_TRUE(s.gram().isApprox(Matrix::Identity(3, 3), 0.0));
    EXPECT_GT(s.rcond_estimate(), 0.5);
}

TEST(GramSystem, NearDuplicatesAreSingular) {
    try {
        GramSystem(KernelSpec::gaussian(1.0), PointSet{0.0, 1e-9, 1.0});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularGram);
        EXPECT_TRUE(e.is_numerical());
        EXPECT_NE(std::string(e.what()).find("spacing"), std::string::npos);
    }
}

TEST(GramSystem, DomainAndLengthChecks) {
    EXPECT_THROW(GramSystem(KernelSpec::brownian_bridge(), PointSet{0.0, 0.5}), Error);
    const GramSystem s(KernelSpec::exponential(), PointSet{0.0, 1.0});
    try {
        s.solve(Vector::Ones(3));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}

TEST(GramProperties, FactorizationAndSolveRoundTrip) {
    oracle::Rng rng(3);
    const std::vector<KernelSpec> kernels{KernelSpec::exponential(), KernelSpec::gaussian(1.0),
                                          KernelSpec::inverse_multiquadric(0.5), KernelSpec::wendland_d3k1()};
    for (int trial = 0; trial < 200; ++trial) {
        const auto &k = kernels[static_cast<std::size_t>(trial) % kernels.size()];
        const int n = rng.integer(1, 20);
        const auto xs = rng.spaced_points(n, -3.0, 3.0, 0.05);
        std::optional<GramSystem> s;
        try {
            s.emplace(k, PointSet(xs));
        } catch (const Error &) {
            continue;
        }
        const Matrix &g = s->gram();
        ASSERT_TRUE(g.isApprox(g.transpose(), 0.0));
        const auto &lu = s->factorization();
        const Matrix recon = lu.permutationP().inverse() * lu.matrixLU().triangularView<Eigen::UnitLower>().toDenseMatrix() *
                             lu.matrixLU().triangularView<Eigen::Upper>().toDenseMatrix();
        ASSERT_LE((recon - g).cwiseAbs().maxCoeff(), 1e-12 * g.cwiseAbs().maxCoeff());

        Vector y(n);
        for (int i = 0; i < n; ++i) y(i) = rng.uniform(-1.0, 1.0);
        const Vector c = s->solve(y);
        const double scale = g.lpNorm<Eigen::Infinity>() * c.lpNorm<Eigen::Infinity>() + y.lpNorm<Eigen::Infinity>();
        if (s->rcond_estimate() >= 1e-10) {
            ASSERT_LE((g * c - y).lpNorm<Eigen::Infinity>(), 1e-10 * scale);
        }
        const Vector ct = s->solve_transposed(y);
        ASSERT_LE((g.transpose() * ct - y).lpNorm<Eigen::Infinity>(), 1e-9 * scale);

        for (int j = 0; j < n; ++j) {
            const Vector w = s->cardinal_coefficients(xs[static_cast<std::size_t>(j)]);
            ASSERT_NEAR(w(j), 1.0, 1e-10);
            ASSERT_NEAR(w.lpNorm<1>(), 1.0, 1e-9 * std::max(1.0, 1.0 / (1e6 * s->rcond_estimate())));
        }
    }
}

TEST(GramProperties, CardinalMatchesClosedForm) {
    oracle::Rng rng(23);
    for (int trial = 0; trial < 400; ++trial) {
        const bool bridge = trial % 2 == 1;
        const int n = rng.integer(1, 30);
        const double lo = bridge ? 0.0 : -3.0;
        const double hi = bridge ? 1.0 : 3.0;
        const auto xs = rng.spaced_points(n, lo, hi, 1e-3 * (hi - lo));
        const auto k = bridge ? KernelSpec::brownian_bridge() : KernelSpec::exponential();
        const GramSystem s(k, PointSet(xs));
        const double t = rng.uniform(lo + 1e-6, hi - 1e-6);
        const Vector w = s.cardinal_coefficients(t);
        const auto ref = closed_form_cardinal(k, s.points(), t);
        for (int j = 0; j < n; ++j) ASSERT_NEAR(w(j), ref[static_cast<std::size_t>(j)], 1e-9);
    }
}

TEST(EvaluationMatrix, Layout) {
    const PointSet x{0.0, 1.0};
    const std::vector<double> at{0.5, 2.0, -1.0};
    const Matrix e = evaluation_matrix(KernelSpec::exponential(), x, at);
    ASSERT_EQ(e.rows(), 3);
    ASSERT_EQ(e.cols(), 2);
    EXPECT_DOUBLE_EQ(e(1, 0), std::exp(-2.0));
    EXPECT_DOUBLE_EQ(e(2, 1), std::exp(-2.0));
}

TEST(KeyedStream, DeterministicAndKeyed) {
    KeyedStream a(7, 3, StreamPurpose::Noise);
    KeyedStream b(7, 3, StreamPurpose::Noise);
    KeyedStream c(7, 4, StreamPurpose::Noise);
    KeyedStream d(7, 3, StreamPurpose::PointSet);
    int same_c = 0, same_d = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto va = a();
        ASSERT_EQ(va, b());
        same_c += va == c();
        same_d += va == d();
    }
    EXPECT_EQ(same_c, 0);
    EXPECT_EQ(same_d, 0);
}

TEST(KeyedStream, DistributionMoments) {
    KeyedStream s(1, 0, StreamPurpose::Test);
    const int m = 200000;
    double sum = 0.0, sq = 0.0, usum = 0.0;
    int heads = 0;
    std::set<std::int64_t> ints;
    for (int i = 0; i < m; ++i) {
        const double z = s.normal();
        sum += z;
        sq += z * z;
        const double u = s.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        usum += u;
        heads += s.coin();
        const auto k = s.uniform_int(2, 30);
        ASSERT_GE(k, 2);
        ASSERT_LE(k, 30);
        ints.insert(k);
    }
    EXPECT_NEAR(sum / m, 0.0, 0.01);
    EXPECT_NEAR(sq / m, 1.0, 0.01);
    EXPECT_NEAR(usum / m, 0.5, 0.005);
    EXPECT_NEAR(static_cast<double>(heads) / m, 0.5, 0.005);
    EXPECT_EQ(ints.size(), 29u);
}
