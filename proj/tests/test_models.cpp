#include <cmath>

#include <gtest/gtest.h>

#include "levypop/models.hpp"

using namespace levypop;

TEST(GrowthModel, DriftAndCoefficients) {
    const GrowthParams gp{1.0, 2.0, 1.0, 0.1, 0.2};
    const auto c = make_coefficients(gp);
    const double x = 0.7;
    EXPECT_DOUBLE_EQ(c.f1(x), x * (-1.0 + 2.0 * std::exp(-x)));
    EXPECT_DOUBLE_EQ(c.f2(x), 0.1 * x);
    EXPECT_DOUBLE_EQ(c.f3(x), 0.2 * x);
    EXPECT_EQ(c.f1(0.0), 0.0);
    EXPECT_DOUBLE_EQ(c.domain_hint, 5.0 * std::log(2.0));
    EXPECT_DOUBLE_EQ(gp.mu(), 2.0);
}

TEST(GrowthModel, DomainHintWithoutPositiveEquilibrium) {
    const auto c = make_coefficients(GrowthParams{1.0, 0.5, 2.0, 0.0, 0.0});
    EXPECT_DOUBLE_EQ(c.domain_hint, 2.5);
}

TEST(GrowthModel, Validation) {
    EXPECT_THROW(make_coefficients(GrowthParams{0.0, 2.0, 1.0, 0.0, 0.0}), DomainError);
    EXPECT_THROW(make_coefficients(GrowthParams{1.0, 2.0, 0.0, 0.0, 0.0}), DomainError);
    EXPECT_THROW(make_coefficients(GrowthParams{1.0, 2.0, 1.0, -0.1, 0.0}), DomainError);
    EXPECT_THROW(make_coefficients(GrowthParams{1.0, 2.0, 1.0, 0.0, -1.0}), DomainError);
}

TEST(LogisticModel, CapacityBetweenBoundsAndPhiFixed) {
    LogisticParams lp;
    lp.beta_sens = 7.0;
    EXPECT_DOUBLE_EQ(lp.phi(), 1.0);
    EXPECT_NEAR(carrying_capacity(lp.phi(), lp), lp.phi(), 1e-15);
    for (double x = 0.0; x < 5.0; x += 0.05) {
        const double m = carrying_capacity(x, lp);
        EXPECT_GE(m, lp.k1);
        EXPECT_LE(m, lp.k2);
    }
    EXPECT_NEAR(logistic_drift(lp.phi(), lp), 0.0, 1e-15);
}

TEST(LogisticModel, BetaZeroIsClassicLogistic) {
    LogisticParams lp;
    lp.beta_sens = 0.0;
    for (double x : {0.1, 0.5, 1.3})
        EXPECT_NEAR(logistic_drift(x, lp), lp.s * x * (1.0 - x / lp.phi()), 1e-15);
}

TEST(LogisticModel, Validation) {
    LogisticParams lp;
    lp.k1 = 1.3;
    EXPECT_THROW(make_coefficients(lp), DomainError);
    lp = {};
    lp.s = 0.0;
    EXPECT_THROW(make_coefficients(lp), DomainError);
}

TEST(Models, VariantDispatch) {
    const ModelParams m = LogisticParams{};
    EXPECT_EQ(make_coefficients(m).name, "logistic");
    EXPECT_EQ(make_coefficients(ModelParams{GrowthParams{}}).name, "growth");
}
