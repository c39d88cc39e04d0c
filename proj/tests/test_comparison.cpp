#include "support.hpp"

#include <halfdisk/comparison.hpp>

#include <gtest/gtest.h>

using namespace hdtest;

namespace {

/// u2(+-zeta) - u1(psi) - zeta^nu w, over the order where all terms are known.
exact_series identity_residual(const exact_series& u1, const exact_series& u2, const comparison_result<exact_complex>& r)
{
    exact_series lhs = u2;
    if (r.kind == contact_kind::meeting) lhs = compose(u2, scalar({0, -1}, u2.order()));
    exact_series rhs = compose(u1, r.psi);
    if (!r.reparametrization()) {
        exact_series w(2, lhs.order());
        for (int k = 0; k <= r.w.order() && k + *r.nu <= lhs.order(); ++k)
            for (int j = 0; j < 2; ++j) w.at(k + *r.nu, j) = r.w.at(k, j);
        rhs = rhs + w;
    }
    return lhs - rhs;
}

}  // namespace

TEST(Compare, AlreadyNormal)
{
    auto u1 = vec({{0, 0}, {1, 0}}), u2 = vec({{0, 0}, {1, 0}, {0, 0}, {0, 1}});
    auto r = compare(u1, u2);
    ASSERT_TRUE(r.nu);
    EXPECT_EQ(*r.nu, 3);
    EXPECT_TRUE(series_equal(r.psi, exact_series::identity()));
    EXPECT_EQ(r.w0[0], 0);
    EXPECT_EQ(r.w0[1], 1);
}

TEST(Compare, Reparametrization)
{
    auto u1 = vec({{0, 0}, {1, 0}, {0, 1}, {2, 0}});
    auto r = compare(u1, compose(u1, scalar({0, 1, 1})));
    EXPECT_TRUE(r.reparametrization());
    EXPECT_TRUE(series_equal(compose(u1, r.psi), compose(u1, scalar({0, 1, 1}))));
}

TEST(Compare, RecoversPsi)
{
    auto u1 = vec({{0, 0}, {1, 0}}), u2 = vec({{0, 0}, {1, 0}, {1, 0}, {0, 0}, {0, 1}});
    auto r = compare(u1, u2);
    ASSERT_TRUE(r.nu);
    EXPECT_EQ(*r.nu, 4);
    EXPECT_TRUE(series_equal(r.psi, scalar({0, 1, 1})));
    EXPECT_EQ(r.w0[0], 0);
    EXPECT_TRUE(identity_residual(u1, u2, r).is_zero());
}

TEST(Compare, Meeting)
{
    auto u1 = vec({{0, 0}, {1, 0}}), u2 = vec({{0, 0}, {-1, 0}, {0, 1}});
    auto r = compare(u1, u2);
    EXPECT_EQ(r.kind, contact_kind::meeting);
    ASSERT_TRUE(r.nu);
    EXPECT_EQ(*r.nu, 2);
    EXPECT_TRUE(identity_residual(u1, u2, r).is_zero());
}

TEST(Compare, Errors)
{
    auto flat = vec({{0, 0}, {1, 0}});
    EXPECT_THROW(compare(flat, vec({{0, 0}, {0, 0}, {1, 0}})), precondition_error);
    EXPECT_THROW(compare(flat, vec({{0, 0}, {2, 0}})), precondition_error);
    // parallel contact sitting in the last known coefficient
    EXPECT_THROW(compare(vec({{0, 0}, {1, 0}}, 6), vec({{0, 0}, {1, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {1, 0}}, 6)), truncation_error);
}

TEST(Compare, RandomClosure)
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const int mu = 1 + trial % 2;
        exact_series u1(2, 16);
        u1.at(mu, 0) = exact_complex(random_rational(rng) + q(5));
        u1.at(mu, 1) = exact_complex(random_rational(rng));
        for (int k = mu + 1; k <= 9; ++k)
            for (int j = 0; j < 2; ++j) u1.at(k, j) = exact_complex(random_rational(rng));
        exact_series psi = scalar({0, 1}, 16);
        for (int k = 2; k <= 4; ++k) psi.at(k) = exact_complex(random_rational(rng));
        exact_series u2 = compose(u1, psi);
        const int nu = mu + 2 + trial % 4;
        u2.at(nu, 0) += exact_complex(random_rational(rng));
        u2.at(nu, 1) += exact_complex(random_rational(rng) + q(10));
        const bool meeting = mu == 1 && trial % 3 == 0;
        if (meeting) u2 = compose(u2, scalar({0, -1}, 16));
        auto r = compare(u1, u2);
        ASSERT_FALSE(r.reparametrization());
        EXPECT_GT(*r.nu, mu);
        EXPECT_TRUE(identity_residual(u1, u2, r).is_zero());
        EXPECT_TRUE(r.psi.is_real());
        EXPECT_EQ(r.psi.at(1), exact_complex(1));
        EXPECT_TRUE(r.w.is_real());
        auto nf = normal_form(u1);
        EXPECT_EQ(rational(r.w0[0] * nf.v0[0] + r.w0[1] * nf.v0[1]), 0);
        EXPECT_EQ(r.kind, meeting ? contact_kind::meeting : contact_kind::touching);
    }
}
