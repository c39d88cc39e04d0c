#pragma once

#include <halfdisk/normal_form.hpp>

namespace halfdisk {

/// u2(+-zeta) - u1(psi(zeta)) = zeta^nu w(zeta).
template <class C>
struct comparison_result {
    truncated_series<C> psi;
    std::optional<int> nu;  ///< empty when u2 is a reparametrization of u1 to truncation order
    truncated_series<C> w;
    real_vec2<C> w0{};
    contact_kind kind = contact_kind::touching;
    int mu = 0;
    int steps = 0;  ///< number of psi corrections made
    bool reparametrization() const { return !nu.has_value(); }
};

/// Builds the reparametrization psi = zeta + a_1 zeta^m1 + ... that pushes the contact
/// of u2 against u1 as high as possible, stopping once the leading difference is
/// transverse to the common tangent vector.
template <class C>
comparison_result<C> compare(const truncated_series<C>& u1, const truncated_series<C>& u2)
{
    using T = coeff_traits<C>;
    using R = typename T::real_type;
    auto nf1 = normal_form(u1);
    auto nf2 = normal_form(u2);
    if (nf1.mu != nf2.mu) throw precondition_error("compare: vanishing orders differ");
    const int mu = nf1.mu;
    const auto& v = nf1.v0;
    comparison_result<C> res;
    res.mu = mu;
    if (T::equal(T::from_real(nf2.v0[0]), T::from_real(v[0]), 1.0) && T::equal(T::from_real(nf2.v0[1]), T::from_real(v[1]), 1.0))
        res.kind = contact_kind::touching;
    else if (T::equal(T::from_real(nf2.v0[0]), T::from_real(R(-v[0])), 1.0) && T::equal(T::from_real(nf2.v0[1]), T::from_real(R(-v[1])), 1.0))
        res.kind = contact_kind::meeting;
    else
        throw precondition_error("compare: tangent vectors must agree up to sign");

    const int n = std::min(u1.order(), u2.order());
    truncated_series<C> target = u2.truncate(n);
    if (res.kind == contact_kind::meeting) {
        // u2(-zeta); the first coefficient then matches v0 when mu is odd, -v0 when even
        target = compose(target, truncated_series<C>::monomial(T::from_int(-1), 1, n));
    }
    if (!T::equal(target.at(mu, 0), u1.at(mu, 0), 1.0) || !T::equal(target.at(mu, 1), u1.at(mu, 1), 1.0))
        throw precondition_error("compare: leading coefficients cannot be matched by zeta -> -zeta");

    const R vv = v[0] * v[0] + v[1] * v[1];
    res.psi = truncated_series<C>::identity(n);
    bool finishing = false;
    for (;;) {
        truncated_series<C> diff = target - compose(u1, res.psi);
        const int nu = diff.valuation();
        if (nu < 0) {
            res.nu.reset();
            res.w = truncated_series<C>(2, 0);
            res.w0 = {R(0), R(0)};
            return res;
        }
        if (nu <= mu) throw std::logic_error("compare: contact order failed to exceed mu");
        const R wx = T::re(diff.at(nu, 0)), wy = T::re(diff.at(nu, 1));
        const R along = wx * v[0] + wy * v[1];
        const R cross = wx * v[1] - wy * v[0];
        const bool parallel = T::sign(cross) == 0 || (!T::exact && std::abs(T::to_double(cross)) <= 1e-12 * diff.scale() * std::sqrt(T::to_double(vv)));
        if (finishing || T::sign(along) == 0 || (!T::exact && std::abs(T::to_double(along)) <= 1e-12 * diff.scale() * std::sqrt(T::to_double(vv)))) {
            res.nu = nu;
            res.w = diff.shift_down(nu);
            res.w0 = {wx, wy};
            return res;
        }
        if (parallel && nu >= n) throw truncation_error("contact beyond truncation");
        // mu a v0 = w(0)^parallel
        const R a = along / (R(mu) * vv);
        const int m = nu - mu + 1;
        res.psi.at(m) += T::from_real(a);
        ++res.steps;
        if (!parallel) finishing = true;
    }
}

}  // namespace halfdisk
