#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "levypop/rng.hpp"
#include "levypop/stable.hpp"

using namespace levypop;
using boost::multiprecision::cpp_bin_float_50;

namespace {

cpp_bin_float_50 c_alpha_oracle(double alpha) {
    const cpp_bin_float_50 a(alpha);
    using boost::multiprecision::pow;
    using boost::multiprecision::sqrt;
    return a * boost::math::tgamma((1 + a) / 2) /
           (pow(cpp_bin_float_50(2), 1 - a) * sqrt(boost::math::constants::pi<cpp_bin_float_50>()) *
            boost::math::tgamma(1 - a / 2));
}

std::complex<double> empirical_cf(const std::vector<double>& xs, double u) {
    double re = 0.0, im = 0.0;
    for (double x : xs) {
        re += std::cos(u * x);
        im += std::sin(u * x);
    }
    return {re / xs.size(), im / xs.size()};
}

}  // namespace

TEST(RngStream, SameSeedSameSequence) {
    RngStream a(123, 4), b(123, 4);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(RngStream, StreamsAndChildrenDiffer) {
    RngStream a(123, 0), b(123, 1);
    EXPECT_NE(a(), b());
    const RngStream base(5);
    RngStream c0 = base.derive(0), c1 = base.derive(1), c0b = base.derive(0);
    const auto v0 = c0();
    EXPECT_NE(v0, c1());
    EXPECT_EQ(v0, c0b());
}

TEST(RngStream, UniformOpenStaysInside) {
    RngStream r(9);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform_open();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(hi, 1.0);
    EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(RngStream, BelowIsUniformOverRange) {
    RngStream r(11);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto k = r.below(7);
        ASSERT_LT(k, 7u);
        ++counts[k];
    }
    for (int c : counts) EXPECT_NEAR(c, n / 7.0, 5.0 * std::sqrt(n / 7.0));
}

TEST(RngStream, NormalMoments) {
    RngStream r(17);
    const int n = 400000;
    double m1 = 0.0, m2 = 0.0, m4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        m1 += z;
        m2 += z * z;
        m4 += z * z * z * z;
    }
    EXPECT_NEAR(m1 / n, 0.0, 0.01);
    EXPECT_NEAR(m2 / n, 1.0, 0.01);
    EXPECT_NEAR(m4 / n, 3.0, 0.05);
}

// ---------------------------------------------------------------------------

TEST(CAlpha, CauchyValue) { EXPECT_NEAR(c_alpha(1.0), 1.0 / std::numbers::pi, 1e-15); }

TEST(CAlpha, MatchesArbitraryPrecisionGamma) {
    for (double a : {0.3, 0.5, 0.8, 1.2, 1.5, 1.9}) {
        const double oracle = static_cast<double>(c_alpha_oracle(a));
        EXPECT_NEAR(c_alpha(a), oracle, 1e-12 * oracle) << "alpha = " << a;
    }
}

TEST(CAlpha, RejectsOutOfRange) {
    for (double a : {0.0, 2.0, -1.0, 2.5}) EXPECT_THROW(c_alpha(a), DomainError);
}

TEST(LevyMeasure, DensityAndSingularity) {
    EXPECT_NEAR(levy_measure_density(1.0, 2.0), 1.0 / (4.0 * std::numbers::pi), 1e-16);
    EXPECT_DOUBLE_EQ(levy_measure_density(1.5, -0.7), levy_measure_density(1.5, 0.7));
    EXPECT_THROW(levy_measure_density(1.0, 0.0), SingularityError);
}

TEST(LevyMeasure, MassMatchesQuadrature) {
    for (double a : {0.5, 1.0, 1.7}) {
        const auto f = [a](double u) { return levy_measure_density(a, u); };
        const double q = 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.3, 4.0, 10, 1e-13);
        EXPECT_NEAR(levy_measure_mass(a, 0.3, 4.0), q, 1e-10 * q);
    }
    // Tail mass 2c/(a L^a).
    EXPECT_NEAR(levy_measure_mass(1.0, 2.0, INFINITY), 2.0 / (std::numbers::pi * 2.0), 1e-15);
}

TEST(CharacteristicExponent, SymmetricForm) {
    const auto psi = characteristic_exponent({1.5, 0.0, 2.0, 0.3}, -1.2);
    EXPECT_NEAR(psi.real(), -std::pow(2.4, 1.5), 1e-12);
    EXPECT_NEAR(psi.imag(), -0.36, 1e-15);
    EXPECT_THROW(characteristic_exponent({1.5, 0.5, 1.0, 0.0}, 1.0), DomainError);
}

TEST(StableSampler, RejectsSkewAndBadParams) {
    RngStream r(1);
    EXPECT_THROW(sample_standard_stable({1.0, 0.3, 1.0, 0.0}, r), DomainError);
    EXPECT_THROW(sample_standard_stable({0.0, 0.0, 1.0, 0.0}, r), DomainError);
    EXPECT_THROW(stable_increment(1.0, 0.0, r), DomainError);
    EXPECT_EQ(sample_standard_stable({1.2, 0.0, 0.0, 3.5}, r), 3.5);
}

TEST(StableSampler, CauchyKolmogorovSmirnov) {
    RngStream r(2024);
    std::vector<double> xs(100000);
    for (double& x : xs) x = sample_standard_stable({1.0, 0.0, 1.0, 0.0}, r);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double cdf = 0.5 + std::atan(xs[i]) / std::numbers::pi;
        d = std::max({d, std::abs(cdf - i / n), std::abs(cdf - (i + 1) / n)});
    }
    // 1% critical value 1.63 / sqrt(n).
    EXPECT_LT(d, 1.63 / std::sqrt(n));
}

TEST(StableSampler, EmpiricalCharacteristicFunction) {
    for (double a : {0.5, 1.0, 1.5, 1.9}) {
        RngStream r(77, static_cast<std::uint64_t>(a * 10));
        std::vector<double> xs(200000);
        for (double& x : xs) x = sample_standard_stable({a, 0.0, 1.0, 0.0}, r);
        for (double u : {0.5, 1.0, 2.0}) {
            const auto cf = empirical_cf(xs, u);
            EXPECT_NEAR(cf.real(), std::exp(-std::pow(u, a)), 0.01) << "alpha " << a << " u " << u;
            EXPECT_NEAR(cf.imag(), 0.0, 0.01);
        }
    }
}

TEST(StableSampler, IncrementScalesAsDtToOneOverAlpha) {
    const double a = 1.5, dt = 0.01;
    RngStream r(3);
    std::vector<double> xs(200000);
    for (double& x : xs) x = stable_increment(a, dt, r);
    for (double u : {5.0, 20.0}) {
        const double expected = std::exp(-dt * std::pow(u, a));
        EXPECT_NEAR(empirical_cf(xs, u).real(), expected, 0.01);
    }
}

TEST(StableSampler, Deterministic) {
    RngStream a(8), b(8);
    for (int i = 0; i < 100; ++i)
        ASSERT_EQ(sample_standard_stable({0.7, 0.0, 1.0, 0.0}, a), sample_standard_stable({0.7, 0.0, 1.0, 0.0}, b));
}
