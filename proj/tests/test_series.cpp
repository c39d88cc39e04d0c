#include "support.hpp"

#include <gtest/gtest.h>

using namespace hdtest;

TEST(Series, ProductOfConjugateBinomials)
{
    auto p = scalar({1, 1}) * scalar({1, -1});
    EXPECT_TRUE(series_equal(p, scalar({1, 0, -1})));
    EXPECT_FALSE(p.truncation_exceeded());
}

TEST(Series, ProductPastTruncationIsFlagged)
{
    const int n = 8;
    auto zeta = exact_series::monomial(exact_complex(1), 1, n);
    auto top = exact_series::monomial(exact_complex(1), n, n);
    auto p = zeta * top;
    EXPECT_TRUE(p.truncation_exceeded());
    EXPECT_EQ(p.order(), n);
    EXPECT_TRUE(p.is_zero());
}

TEST(Series, AddZeroIsIdentity)
{
    auto u = vec({{0, 0}, {1, 2}, {3, -1}});
    EXPECT_TRUE(series_equal(u + exact_series(2, 32), u));
}

TEST(Series, DimensionMismatchThrows)
{
    EXPECT_THROW(vec({{0, 0}, {1, 0}}) + scalar({0, 1}), dimension_error);
}

TEST(Series, ScalarTimesVector)
{
    auto p = scalar({0, 1}) * vec({{0, 0}, {1, 2}});
    EXPECT_TRUE(series_equal(p, vec({{0, 0}, {0, 0}, {1, 2}})));
}

TEST(Series, ComposeBinomial)
{
    auto r = compose(scalar({0, 0, 1}), scalar({0, 1, 1}));
    EXPECT_TRUE(series_equal(r, scalar({0, 0, 1, 2, 1})));
}

TEST(Series, ComposeIdentityAndSignFlip)
{
    auto u = vec({{0, 0}, {2, 1}, {-1, 5}, {7, 0}});
    EXPECT_TRUE(series_equal(compose(u, exact_series::identity()), u));
    EXPECT_TRUE(series_equal(compose(scalar({0, 1}), scalar({0, -1})), scalar({0, -1})));
}

TEST(Series, ComposeRejectsNonzeroConstant)
{
    EXPECT_THROW(compose(scalar({0, 1}), scalar({1, 1})), precondition_error);
}

TEST(Series, ConjugateReflect)
{
    exact_series u(1, 10);
    u.at(1) = exact_complex(rational(0), rational(1));
    auto r = conjugate_reflect(u);
    EXPECT_EQ(r.at(1), exact_complex(rational(0), rational(-1)));
    EXPECT_TRUE(series_equal(conjugate_reflect(r), u));
    auto real = vec({{0, 0}, {1, 3}});
    EXPECT_TRUE(series_equal(conjugate_reflect(real), real));
    EXPECT_TRUE(real.is_real());
    EXPECT_FALSE(u.is_real());
}

namespace {
exact_series random_scalar(std::mt19937_64& rng, int order, bool complex_coeffs, bool zero_const = false)
{
    exact_series s(1, order);
    for (int k = zero_const ? 1 : 0; k <= order; ++k)
        s.at(k) = complex_coeffs ? exact_complex(random_rational(rng), random_rational(rng)) : exact_complex(random_rational(rng));
    return s;
}
}  // namespace

TEST(Series, RingAxiomsExact)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_scalar(rng, 6, true), b = random_scalar(rng, 6, true), c = random_scalar(rng, 6, true);
        EXPECT_TRUE(series_equal((a * b) * c, a * (b * c)));
        EXPECT_TRUE(series_equal(a * (b + c), a * b + a * c));
        EXPECT_TRUE(series_equal(a * b, b * a));
    }
}

TEST(Series, ConjugationFixedPointsAreReal)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_scalar(rng, 5, trial % 2 == 0);
        EXPECT_EQ(series_equal(conjugate_reflect(a), a), a.is_real());
    }
}

TEST(Series, CompositionIsAssociative)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        auto u = random_scalar(rng, 7, true);
        auto p1 = random_scalar(rng, 7, false, true), p2 = random_scalar(rng, 7, false, true);
        EXPECT_TRUE(series_equal(compose(compose(u, p1), p2), compose(u, compose(p1, p2))));
    }
}

TEST(Series, ReciprocalAndShift)
{
    auto r = reciprocal(scalar({1, -1}, 6));
    EXPECT_TRUE(series_equal(r, scalar({1, 1, 1, 1, 1, 1, 1}, 6)));
    auto s = scalar({0, 0, 3, 4}, 6).shift_down(2);
    EXPECT_EQ(s.order(), 4);
    EXPECT_TRUE(series_equal(s, scalar({3, 4}, 4)));
    EXPECT_THROW(scalar({1, 1}).shift_down(1), precondition_error);
}

TEST(Series, FloatZeroThresholdAndTolerance)
{
    float_series s(1, 6);
    s.at(0) = 1e-14;
    s.at(2) = 1.0;
    EXPECT_EQ(s.valuation(), 2);
    float_series t = s;
    t.at(2) = 1.0 + 1e-12;
    EXPECT_TRUE(series_equal(s, t));
    t.at(2) = 1.0 + 1e-8;
    EXPECT_FALSE(series_equal(s, t));
}

TEST(Series, ParseRational)
{
    EXPECT_EQ(parse_rational("3/6"), q(1, 2));
    EXPECT_EQ(parse_rational("-0.25"), q(-1, 4));
    EXPECT_EQ(parse_rational("1.5e2"), q(150));
    EXPECT_EQ(parse_rational("7"), q(7));
}
