#include "support.hpp"

#include <halfdisk/intersection.hpp>

#include <gtest/gtest.h>

using namespace hdtest;

namespace {
exact_series graph_pair(long a, int d, int order = 16)
{
    exact_series u(2, order);
    u.at(1, 0) = exact_complex(1);
    u.at(d, 1) = exact_complex(a);
    return u;
}
}  // namespace

TEST(SeriesIndex, EqualsTangencyOrder)
{
    auto flat = vec({{0, 0}, {1, 0}}, 16);
    for (int d = 1; d <= 6; ++d) {
        auto r = boundary_index_series(flat, graph_pair(1, d));
        EXPECT_EQ(r.index, d);
        EXPECT_EQ(r.transverse, d == 1);
    }
}

TEST(SeriesIndex, MeetingAndErrors)
{
    auto flat = vec({{0, 0}, {1, 0}}, 16);
    auto r = boundary_index_series(flat, vec({{0, 0}, {-1, 0}, {0, 1}}, 16));
    EXPECT_EQ(r.index, 2);
    EXPECT_EQ(r.kind, contact_kind::meeting);
    EXPECT_THROW(boundary_index_series(flat, compose(flat, scalar({0, 1, 1}, 16))), precondition_error);
    EXPECT_THROW(boundary_index_series(flat, vec({{0, 0}, {0, 0}, {1, 0}})), precondition_error);
}

TEST(SeriesIndex, ScaledTangent)
{
    auto flat = vec({{0, 0}, {1, 0}}, 16);
    auto r = boundary_index_series(flat, vec({{0, 0}, {3, 0}, {0, 0}, {0, 2}}, 16));
    EXPECT_EQ(r.index, 3);
    r = boundary_index_series(flat, vec({{0, 0}, {-2, 0}, {1, 0}, {0, 0}, {0, 5}}, 16));
    EXPECT_EQ(r.index, 4);
}

TEST(SeriesIndex, RectificationIndependence)
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + trial % 5;
        auto u1 = random_curve(rng, {q(1), q(0)}, 5, 14);
        auto u2 = u1;
        u2.at(d, 1) += exact_complex(q(2));
        rational a = random_rational(rng) + q(9), b = random_rational(rng), c = random_rational(rng), e = random_rational(rng) + q(9);
        auto r0 = boundary_index_series(u1, u2);
        auto r1 = boundary_index_series(detail::apply_real_block(u1, a, b, c, e), detail::apply_real_block(u2, a, b, c, e));
        EXPECT_EQ(r0.index, d);
        EXPECT_EQ(r1.index, d);
    }
}

TEST(LinkingIndex, HopfPairLinksPositively)
{
    auto r = boundary_index_linking(vec({{0, 0}, {1, 0}}), vec({{0, 0}, {0, 1}}));
    EXPECT_EQ(r.index, 1);
    EXPECT_LT(r.residual, 1e-6);
}

TEST(LinkingIndex, Examples)
{
    auto flat = vec({{0, 0}, {1, 0}});
    linking_options opt;
    opt.radius = 0.3;
    auto r = boundary_index_linking(flat, graph_pair(1, 3), opt);
    EXPECT_EQ(r.index, 3);
    EXPECT_LT(r.residual, 0.05);
    exact_series tilt(2, 16);
    tilt.at(1, 0) = exact_complex(1);
    tilt.at(1, 1) = exact_complex(q(1, 100));
    r = boundary_index_linking(flat, tilt, opt);
    EXPECT_EQ(r.index, 1);
    // meeting pair samples the second curve directly
    r = boundary_index_linking(flat, vec({{0, 0}, {-1, 0}, {0, 1}}));
    EXPECT_EQ(r.index, 2);
}

TEST(LinkingIndex, ThreadsAgree)
{
    auto flat = vec({{0, 0}, {1, 0}});
    linking_options one, four;
    four.threads = 4;
    auto a = boundary_index_linking(flat, graph_pair(2, 4), one);
    auto b = boundary_index_linking(flat, graph_pair(2, 4), four);
    EXPECT_EQ(a.index, 4);
    EXPECT_EQ(a.index, b.index);
    EXPECT_NEAR(a.linking_value, b.linking_value, 1e-9);
}

TEST(LinkingIndex, SecondIntersectionNearOriginIsExcluded)
{
    // transverse pair whose extensions meet again inside the default-size sphere
    exact_series u1(2, 12), u2(2, 12);
    u1.at(1, 0) = exact_complex(1);
    u1.at(2, 0) = exact_complex(1), u1.at(2, 1) = exact_complex(q(1, 2));
    u1.at(3, 0) = exact_complex(q(-2, 9)), u1.at(3, 1) = exact_complex(q(-1, 3));
    u2.at(1, 0) = exact_complex(-1), u2.at(1, 1) = exact_complex(1);
    u2.at(2, 0) = exact_complex(q(-2, 3)), u2.at(2, 1) = exact_complex(q(4, 9));
    u2.at(3, 0) = exact_complex(q(5, 18)), u2.at(3, 1) = exact_complex(q(-1, 27));
    linking_options opt;
    opt.radius = 0.3;
    auto r = boundary_index_linking(u1, u2, opt);
    EXPECT_EQ(r.index, 1);
    EXPECT_GT(r.halvings, 0);
}

TEST(LinkingIndex, RefinesSamplingForHighContact)
{
    auto flat = vec({{0, 0}, {1, 0}});
    linking_options opt;
    opt.samples = 32;
    auto r = boundary_index_linking(flat, graph_pair(1, 5), opt);
    EXPECT_EQ(r.index, 5);
    EXPECT_GT(r.samples, 32);
    opt.max_refinements = 0;
    opt.max_halvings = 0;
    EXPECT_THROW(boundary_index_linking(flat, graph_pair(1, 5), opt), verification_error);
}

TEST(Split, OtherRealIntersectionStaysOutsideDisk)
{
    // difference z^3/2 - 6 z^4 vanishes again at z = 1/12
    auto flat = vec({{0, 0}, {1, 0}});
    exact_series u2(2, 16);
    u2.at(1, 0) = exact_complex(1);
    u2.at(3, 1) = exact_complex(q(1, 2));
    u2.at(4, 1) = exact_complex(-6);
    auto s = split_to_transverse(flat, u2, q(1, 1000));
    EXPECT_LT(s.radius, 1.0 / 12);
    EXPECT_EQ(s.roots.size(), 3u);
    EXPECT_TRUE(verify_split(s).ok);
    EXPECT_THROW(split_to_transverse(flat, u2, q(1, 50)), precondition_error);
}

TEST(Split, QuadraticExample)
{
    auto flat = vec({{0, 0}, {1, 0}});
    auto s = split_to_transverse(flat, graph_pair(1, 2), q(1, 100));
    EXPECT_EQ(s.rounds, 1);
    ASSERT_EQ(s.roots.size(), 2u);
    EXPECT_NEAR(s.roots[0], -0.01, 1e-15);
    EXPECT_EQ(s.roots[1], 0.0);
    // perturbed difference eps zeta + zeta^2
    EXPECT_EQ(s.difference.at(1), exact_complex(q(1, 100)));
    EXPECT_EQ(s.difference.at(2), exact_complex(1));
    EXPECT_TRUE(verify_split(s).ok);
    EXPECT_TRUE(series_equal(s.u2_perturbed, vec({{0, 0}, {1, 0}, {0, 1}}) + [] {
        exact_series e(2, 16);
        e.at(1, 1) = exact_complex(q(1, 100));
        return e;
    }()));
}

TEST(Split, TransverseNeedsNothing)
{
    auto s = split_to_transverse(vec({{0, 0}, {1, 0}}), graph_pair(1, 1), q(1, 100));
    EXPECT_EQ(s.rounds, 0);
    ASSERT_EQ(s.roots.size(), 1u);
    EXPECT_EQ(s.roots[0], 0.0);
}

TEST(Split, CubicAndHigher)
{
    auto flat = vec({{0, 0}, {1, 0}});
    auto s = split_to_transverse(flat, graph_pair(1, 3), q(1, 100));
    EXPECT_LE(s.rounds, 2);
    EXPECT_EQ(s.roots.size(), 3u);
    EXPECT_TRUE(verify_split(s).ok);
    for (int d = 2; d <= 6; ++d) {
        auto t = split_to_transverse(flat, graph_pair(-3, d), q(1, 50));
        EXPECT_EQ(int(t.roots.size()), d);
        auto v = verify_split(t);
        EXPECT_EQ(v.sturm_count, d);
        EXPECT_TRUE(v.ok);
    }
}

TEST(Split, FloatBackend)
{
    float_series flat(2, 16), u2(2, 16);
    flat.at(1, 0) = 1;
    u2.at(1, 0) = 1;
    u2.at(4, 1) = 0.5;
    u2.at(5, 0) = 0.25;
    auto s = split_to_transverse(flat, u2, 0.01);
    EXPECT_EQ(s.roots.size(), 4u);
    EXPECT_TRUE(s.simple);
}

TEST(Polynomial, SturmAndGcd)
{
    using poly::dense;
    dense<rational> p{q(0), q(-1), q(0), q(1)};  // x^3 - x
    EXPECT_EQ(poly::count_real_roots(p, q(-2), q(2)), 3);
    EXPECT_EQ(poly::count_real_roots(p, q(-1, 2), q(2)), 2);
    dense<rational> sq{q(1), q(-2), q(1)};  // (x-1)^2
    EXPECT_EQ(poly::degree(poly::gcd(sq, poly::derivative(sq))), 1);
    auto roots = poly::durand_kerner({-6, 11, -6, 1});
    ASSERT_EQ(roots.size(), 3u);
    EXPECT_NEAR(roots[0].real(), 1, 1e-12);
    EXPECT_NEAR(roots[2].real(), 3, 1e-12);
    EXPECT_EQ(roots[1].imag(), 0);
}
