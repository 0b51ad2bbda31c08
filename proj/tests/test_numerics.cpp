#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <string>

#include "infodemic/error.hpp"
#include "infodemic/numerics.hpp"
#include "infodemic/rng.hpp"
#include "oracles.hpp"

using namespace infodemic;
using namespace infodemic::numerics;

namespace {

Matrix random_symmetric(std::size_t n, rng::Rng& r) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = 2 * r.uniform() - 1;
    return a;
}

Matrix diag(const std::vector<double>& v) {
    Matrix d(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) d(i, i) = v[i];
    return d;
}

}  // namespace

TEST(Matrix, BasicAlgebra) {
    const auto a = Matrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
    EXPECT_EQ(a.transpose(), Matrix::from_rows({{1, 3, 5}, {2, 4, 6}}));
    EXPECT_EQ(a.transpose() * a, Matrix::from_rows({{35, 44}, {44, 56}}));
    EXPECT_EQ(Matrix::identity(2) * Matrix::from_rows({{1, 2}, {3, 4}}), Matrix::from_rows({{1, 2}, {3, 4}}));
    EXPECT_DOUBLE_EQ(Matrix::from_rows({{3, 4}}).frobenius_norm(), 5.0);
    EXPECT_EQ(a.column(1), (std::vector<double>{2, 4, 6}));
    EXPECT_THROW(Matrix::from_rows({{1, 2}, {3}}), DomainError);
}

TEST(Covariance, MatchesHandComputation) {
    const auto c = covariance(Matrix::from_rows({{1, 2}, {2, 4}, {3, 9}}));
    EXPECT_DOUBLE_EQ(c(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(c(0, 1), 3.5);
    EXPECT_DOUBLE_EQ(c(1, 1), 13.0);
}

TEST(SymmetricEigen, ResidualAndOrthonormality) {
    rng::Rng r(17);
    for (std::size_t n : {1u, 2u, 3u, 7u, 12u}) {
        for (int rep = 0; rep < 5; ++rep) {
            const auto a = random_symmetric(n, r);
            const auto e = symmetric_eigen(a);
            ASSERT_EQ(e.values.size(), n);
            for (std::size_t i = 0; i + 1 < n; ++i) EXPECT_GE(e.values[i], e.values[i + 1]);
            for (std::size_t i = 0; i < n; ++i) {
                double res = 0.0;
                for (std::size_t row = 0; row < n; ++row) {
                    double av = 0.0;
                    for (std::size_t col = 0; col < n; ++col) av += a(row, col) * e.vectors(i, col);
                    res += std::pow(av - e.values[i] * e.vectors(i, row), 2);
                }
                EXPECT_LE(std::sqrt(res), 1e-9);
                // Largest-magnitude entry is positive.
                std::size_t big = 0;
                for (std::size_t j = 1; j < n; ++j)
                    if (std::abs(e.vectors(i, j)) > std::abs(e.vectors(i, big))) big = j;
                EXPECT_GT(e.vectors(i, big), 0.0);
            }
            const auto gram = e.vectors * e.vectors.transpose();
            EXPECT_LE((gram - Matrix::identity(n)).frobenius_norm(), 1e-12);
        }
    }
}

TEST(SymmetricEigen, RejectsNonSquare) {
    EXPECT_THROW(symmetric_eigen(Matrix(2, 3)), DomainError);
}

TEST(Pca, CovarianceReconstruction) {
    rng::Rng r(23);
    Matrix data(40, 7);
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t j = 0; j < 7; ++j) data(i, j) = (j + 1) * r.normal() + (j == 2 ? data(i, 0) : 0.0);
    const auto p = pca(data);
    const auto rebuilt = p.eigenvectors.transpose() * diag(p.eigenvalues) * p.eigenvectors;
    EXPECT_LE((rebuilt - covariance(data)).frobenius_norm(), 1e-9);
    EXPECT_NEAR(std::accumulate(p.contribution.begin(), p.contribution.end(), 0.0), 1.0, 1e-12);
    // Projecting on all components and back is the identity.
    const auto back = inverse_project(p, project(p, data, 7));
    EXPECT_LE((back - data).frobenius_norm(), 1e-9);
    // Scores are centred.
    const auto scores = project(p, data, 3);
    for (std::size_t c = 0; c < 3; ++c) {
        const auto col = scores.column(c);
        EXPECT_NEAR(std::accumulate(col.begin(), col.end(), 0.0), 0.0, 1e-9);
    }
}

TEST(Pca, ConstantDataHasZeroContributions) {
    const auto p = pca(Matrix(5, 3, 2.0));
    for (double c : p.contribution) EXPECT_EQ(c, 0.0);
    EXPECT_THROW(pca(Matrix(1, 3)), NumericError);
    auto bad = Matrix(3, 2);
    bad(1, 1) = std::nan("");
    EXPECT_THROW(pca(bad), NumericError);
}

TEST(ContributionRatios, SumsToOne) {
    const std::vector<double> l{9.97e-1, 1.83e-3, 2.35e-4, 2.03e-5, 1.72e-6, 3.43e-7, 8.44e-11};
    const auto c = contribution_ratios(l);
    EXPECT_NEAR(std::accumulate(c.begin(), c.end(), 0.0), 1.0, 1e-12);
    EXPECT_THROW(contribution_ratios(std::vector<double>{0, 0}), NumericError);
    EXPECT_THROW(contribution_ratios(std::vector<double>{1, -1e-3}), NumericError);
}

TEST(Ols, RecoversPlantedLaw) {
    rng::Rng r(31);
    Matrix x(30, 3);
    std::vector<double> y(30);
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = 0; j < 3; ++j) x(i, j) = 10 * r.normal();
        y[i] = 0.5 + 2.0 * x(i, 0) - 3.0 * x(i, 1) + 0.25 * x(i, 2);
    }
    const auto f = ols(x, y);
    EXPECT_NEAR(f.coefficients[0], 2.0, 1e-8);
    EXPECT_NEAR(f.coefficients[1], -3.0, 1e-8);
    EXPECT_NEAR(f.coefficients[2], 0.25, 1e-8);
    EXPECT_NEAR(f.intercept, 0.5, 1e-8);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
    EXPECT_EQ(f.dof, 26u);
    for (double e : f.residuals) EXPECT_NEAR(e, 0.0, 1e-8);
}

TEST(Ols, NoisyFitAgreesWithNormalEquations) {
    rng::Rng r(37);
    Matrix x(25, 2);
    std::vector<double> y(25);
    for (std::size_t i = 0; i < 25; ++i) {
        x(i, 0) = r.normal();
        x(i, 1) = r.normal();
        y[i] = 1 + x(i, 0) + r.normal();
    }
    const auto f = ols(x, y);
    // Residuals are orthogonal to every regressor and to the intercept.
    double s0 = 0, s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < 25; ++i) {
        s0 += f.residuals[i];
        s1 += f.residuals[i] * x(i, 0);
        s2 += f.residuals[i] * x(i, 1);
    }
    EXPECT_NEAR(s0, 0.0, 1e-10);
    EXPECT_NEAR(s1, 0.0, 1e-10);
    EXPECT_NEAR(s2, 0.0, 1e-10);
    EXPECT_NEAR(f.r_squared, 1 - f.ssr / f.sst, 1e-12);
    const double fval = (f.r_squared / 2) / ((1 - f.r_squared) / 22);
    EXPECT_NEAR(f.f_value, fval, 1e-9 * fval);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(f.t_values[i], (i < 2 ? f.coefficients[i] : f.intercept) / f.std_errors[i], 1e-12);
        EXPECT_NEAR(f.p_values[i], t_two_sided_p(f.t_values[i], 22), 1e-15);
    }
}

TEST(Ols, RankDeficiencyNamesDependentColumn) {
    Matrix x(6, 3);
    std::vector<double> y(6);
    for (std::size_t i = 0; i < 6; ++i) {
        x(i, 0) = static_cast<double>(i);
        x(i, 1) = static_cast<double>(i * i);
        x(i, 2) = 2 * x(i, 0) + 1;  // depends on column 1 and the intercept
        y[i] = static_cast<double>(i % 2);
    }
    try {
        ols(x, y);
        FAIL();
    } catch (const NumericError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("x3"), std::string::npos) << msg;
        EXPECT_NE(msg.find("{intercept, x1}"), std::string::npos) << msg;
    }
}

TEST(Ols, DegenerateResponseAndShapeErrors) {
    const auto x = Matrix::from_rows({{1}, {2}, {3}, {4}});
    const auto f = ols(x, std::vector<double>{2, 2, 2, 2});
    EXPECT_TRUE(f.degenerate_response);
    EXPECT_EQ(f.r_squared, 0.0);
    EXPECT_EQ(f.f_value, 0.0);
    EXPECT_NEAR(f.intercept, 2.0, 1e-12);
    EXPECT_THROW(ols(x, std::vector<double>{1, 2, 3}), DomainError);
    EXPECT_THROW(ols(Matrix::from_rows({{1, 2}, {2, 1}, {3, 3}}), std::vector<double>{1, 2, 3}),
                 NumericError);
}

TEST(TDistribution, MatchesIntegrationOracle) {
    for (double dof : {1.0, 3.0, 14.0, 60.0}) {
        for (int i = 0; i < 20; ++i) {
            const double t = -6.0 + 12.0 * i / 19.0;
            EXPECT_NEAR(t_cdf(t, dof), oracle::t_cdf_by_integration(t, dof), 1e-8)
                << "t=" << t << " dof=" << dof;
        }
    }
    EXPECT_NEAR(t_cdf(1.0, 1.0), 0.75, 1e-14);  // Cauchy
    EXPECT_THROW(t_cdf(0.0, 0.0), DomainError);
}

TEST(TDistribution, PublishedPValuesAtFourteenDegreesOfFreedom) {
    // 19 days, four regressors and an intercept.
    EXPECT_NEAR(t_two_sided_p(-0.400, 14), 0.695, 5e-4);
    EXPECT_NEAR(t_two_sided_p(3.211, 14), 0.006, 5e-4);
    EXPECT_NEAR(t_two_sided_p(4.470, 14), 0.001, 5e-4);
    EXPECT_LT(t_two_sided_p(13.55, 14), 5e-4);
    EXPECT_LT(t_two_sided_p(13.47, 14), 5e-4);
}

TEST(FDistribution, TailAndConsistencyWithRSquared) {
    // F(1, d) = T(d)^2.
    for (double t : {0.5, 1.3, 2.7})
        EXPECT_NEAR(f_sf(t * t, 1, 9), t_two_sided_p(t, 9), 1e-12);
    // F(2, 2) has survival 1 / (1 + f).
    EXPECT_NEAR(f_sf(3.0, 2, 2), 0.25, 1e-12);
    EXPECT_EQ(f_sf(0.0, 3, 5), 1.0);
    // R^2 = 0.939 with four regressors and 14 residual dof implies F near the published 53.49.
    const double f = (0.939 / 4) / ((1 - 0.939) / 14);
    EXPECT_NEAR(f, 53.49, 0.01 * 53.49);
}

TEST(IncompleteBeta, KnownValues) {
    EXPECT_NEAR(incomplete_beta(1, 1, 0.3), 0.3, 1e-14);
    EXPECT_NEAR(incomplete_beta(2, 3, 0.4), 0.5248, 1e-12);  // 1 - (0.6^4 + 4*0.4*0.6^3)
    EXPECT_EQ(incomplete_beta(2, 2, 0.0), 0.0);
    EXPECT_EQ(incomplete_beta(2, 2, 1.0), 1.0);
}
