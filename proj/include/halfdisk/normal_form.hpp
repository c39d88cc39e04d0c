#pragma once

#include <halfdisk/series.hpp>

#include <optional>
#include <string>

namespace halfdisk {

/// A half-disk germ given by its Taylor series: dim 2, real coefficients, u(0) = 0.
template <class C>
class half_disk_series {
public:
    explicit half_disk_series(truncated_series<C> s) : s_(std::move(s))
    {
        if (s_.dim() != 2) throw dimension_error("half-disk map must take values in C^2");
        if (!s_.is_real()) throw precondition_error("half-disk map must have real coefficients (edge maps into R^2)");
        if (!coeff_traits<C>::is_zero(s_.at(0, 0), 0) || !coeff_traits<C>::is_zero(s_.at(0, 1), 0))
            throw precondition_error("half-disk map must satisfy u(0) = 0");
    }
    const truncated_series<C>& series() const { return s_; }
    operator const truncated_series<C>&() const { return s_; }

private:
    truncated_series<C> s_;
};

template <class C>
using real_vec2 = std::array<typename coeff_traits<C>::real_type, 2>;

/// u = zeta^mu P(zeta) + zeta^(2mu-1) remainder(zeta), remainder(0) = 0, deg P <= mu - 1.
template <class C>
struct normal_form_result {
    int mu = 0;
    real_vec2<C> v0{};
    truncated_series<C> P;
    truncated_series<C> remainder;
};

template <class C>
normal_form_result<C> normal_form(const truncated_series<C>& u)
{
    using T = coeff_traits<C>;
    if (u.dim() != 2) throw dimension_error("normal form expects a C^2-valued series");
    const int mu = u.valuation();
    if (mu < 0) throw truncation_error("vanishes to truncation order");
    if (mu == 0) throw precondition_error("normal form expects u(0) = 0");
    if (2 * mu - 1 > u.order()) throw truncation_error("truncation too short for the polynomial part");
    normal_form_result<C> nf;
    nf.mu = mu;
    nf.v0 = {T::re(u.at(mu, 0)), T::re(u.at(mu, 1))};
    nf.P = truncated_series<C>(2, u.order() - mu);
    for (int k = 0; k < mu; ++k)
        for (int j = 0; j < 2; ++j) nf.P.at(k, j) = u.at(mu + k, j);
    const int base = 2 * mu - 1;
    nf.remainder = truncated_series<C>(2, u.order() - base);
    for (int k = 1; k + base <= u.order(); ++k)
        for (int j = 0; j < 2; ++j) nf.remainder.at(k, j) = u.at(base + k, j);
    nf.P.mark_exceeded(u.truncation_exceeded());
    nf.remainder.mark_exceeded(u.truncation_exceeded());
    return nf;
}

/// Reassembles zeta^mu P + zeta^(2mu-1) remainder at the order of the source series.
template <class C>
truncated_series<C> recompose(const normal_form_result<C>& nf, int order)
{
    truncated_series<C> s(2, order);
    for (int k = 0; k <= nf.P.order() && nf.mu + k <= order; ++k)
        for (int j = 0; j < 2; ++j) s.at(nf.mu + k, j) += nf.P.at(k, j);
    const int base = 2 * nf.mu - 1;
    for (int k = 0; k <= nf.remainder.order() && base + k <= order; ++k)
        for (int j = 0; j < 2; ++j) s.at(base + k, j) += nf.remainder.at(k, j);
    return s;
}

/// Compositional inverse of f = f1 zeta + ..., by Lagrange inversion:
/// [zeta^n] g = (1/n) [w^(n-1)] (w / f(w))^n.
template <class C>
truncated_series<C> series_inverse(const truncated_series<C>& f)
{
    using T = coeff_traits<C>;
    if (f.dim() != 1) throw dimension_error("series_inverse expects a scalar series");
    if (!T::is_zero(f.at(0), 0)) throw precondition_error("series_inverse: f(0) must vanish");
    if (T::is_zero(f.at(1), 0)) throw precondition_error("series_inverse: f'(0) = 0");
    const int n = f.order();
    truncated_series<C> g(1, n);
    const truncated_series<C> h = reciprocal(f.shift_down(1));  // order n - 1
    truncated_series<C> hp = h;
    for (int k = 1; k <= n; ++k) {
        if (k > 1) {
            hp = hp * h;
        }
        g.at(k) = hp.at(k - 1) / T::from_int(k);
    }
    g.mark_exceeded(f.truncation_exceeded());
    return g;
}

enum class contact_kind { touching, meeting };

inline const char* to_string(contact_kind k) { return k == contact_kind::touching ? "touching" : "meeting"; }

template <class C>
struct tangency_result {
    std::optional<int> d;  ///< empty: the graphs agree to the truncation order
    contact_kind kind = contact_kind::touching;
    int valid_order = 0;
    bool infinite() const { return !d.has_value(); }
};

namespace detail {

/// Applies the real matrix [[a, b], [c, e]] to a C^2-valued series.
template <class C, class R>
truncated_series<C> apply_real_block(const truncated_series<C>& u, const R& a, const R& b, const R& c, const R& e)
{
    using T = coeff_traits<C>;
    truncated_series<C> s(2, u.order());
    for (int k = 0; k <= u.order(); ++k) {
        s.at(k, 0) = u.at(k, 0) * T::from_real(a) + u.at(k, 1) * T::from_real(b);
        s.at(k, 1) = u.at(k, 0) * T::from_real(c) + u.at(k, 1) * T::from_real(e);
    }
    s.mark_exceeded(u.truncation_exceeded());
    return s;
}

template <class C>
truncated_series<C> graph_of(const truncated_series<C>& u)
{
    return compose(u.component(1), series_inverse(u.component(0)));
}

}  // namespace detail

/// Rotates (x, y) so that v becomes a positive multiple of e1: L = [[vx, vy], [-vy, vx]].
template <class C>
truncated_series<C> align_to(const truncated_series<C>& u, const real_vec2<C>& v)
{
    using R = typename coeff_traits<C>::real_type;
    return detail::apply_real_block(u, R(v[0]), R(v[1]), R(-v[1]), R(v[0]));
}

/// Difference of the two curves written as graphs over the tangent line of u1.
template <class C>
truncated_series<C> graph_difference(const truncated_series<C>& u1, const truncated_series<C>& u2)
{
    using T = coeff_traits<C>;
    auto nf1 = normal_form(u1);
    const auto a1 = align_to(u1, nf1.v0);
    const auto a2 = align_to(u2, nf1.v0);
    if (T::sign(T::re(a2.at(1, 0))) == 0)
        throw precondition_error("not tangent: tangent vectors are orthogonal, no common graph direction");
    return detail::graph_of(a2) - detail::graph_of(a1);
}

/// Order of tangency of two immersed half-disks and the touching/meeting type.
template <class C>
tangency_result<C> tangency_order(const truncated_series<C>& u1, const truncated_series<C>& u2)
{
    using T = coeff_traits<C>;
    auto nf1 = normal_form(u1);
    auto nf2 = normal_form(u2);
    if (nf1.mu != 1 || nf2.mu != 1) throw precondition_error("tangency order is defined only for immersed points (mu = 1)");
    typename T::real_type dot = nf1.v0[0] * nf2.v0[0] + nf1.v0[1] * nf2.v0[1];
    tangency_result<C> r;
    r.kind = T::sign(dot) > 0 ? contact_kind::touching : contact_kind::meeting;
    auto h = graph_difference(u1, u2);
    r.valid_order = h.order();
    int v = h.valuation();
    if (v >= 0) r.d = v;
    return r;
}

}  // namespace halfdisk
