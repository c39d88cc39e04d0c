#pragma once

#include <halfdisk/errors.hpp>
#include <halfdisk/scalar.hpp>

#include <algorithm>
#include <array>
#include <complex>
#include <string>
#include <vector>

namespace halfdisk {

/// Truncated power series in one variable with values in C^dim, dim in {1, 2}.
///
/// Coefficients 0..order() are meaningful; anything beyond is unknown. Arithmetic
/// results carry the tightest order at which they are still exact, and a flag
/// recording that some product produced terms past the truncation.
template <class C>
class truncated_series {
public:
    using coeff_type = C;
    using traits = coeff_traits<C>;
    static constexpr int default_order = 32;

    truncated_series() : truncated_series(1, default_order) {}
    truncated_series(int dim, int order) : dim_(dim), order_(order), c_(std::size_t(dim) * (order + 1), traits::zero())
    {
        if (dim != 1 && dim != 2) throw dimension_error("series dimension must be 1 or 2");
        if (order < 0) throw precondition_error("negative truncation order");
    }

    /// c * zeta^k (scalar).
    static truncated_series monomial(const C& c, int k, int order = default_order)
    {
        truncated_series s(1, order);
        if (k <= order) s.at(k) = c;
        return s;
    }
    /// zeta itself, the identity reparametrization.
    static truncated_series identity(int order = default_order) { return monomial(traits::from_int(1), 1, order); }

    /// Vector series from two scalar components.
    static truncated_series stack(const truncated_series& a, const truncated_series& b)
    {
        if (a.dim() != 1 || b.dim() != 1) throw dimension_error("stack expects scalar components");
        truncated_series s(2, std::min(a.order(), b.order()));
        for (int k = 0; k <= s.order(); ++k) {
            s.at(k, 0) = a.at(k);
            s.at(k, 1) = b.at(k);
        }
        s.exceeded_ = a.exceeded_ || b.exceeded_;
        return s;
    }

    int dim() const { return dim_; }
    int order() const { return order_; }
    bool truncation_exceeded() const { return exceeded_; }
    void mark_exceeded(bool v = true) { exceeded_ = exceeded_ || v; }

    C& at(int k, int comp = 0) { return c_[std::size_t(k) * dim_ + comp]; }
    const C& at(int k, int comp = 0) const { return c_[std::size_t(k) * dim_ + comp]; }

    truncated_series component(int comp) const
    {
        truncated_series s(1, order_);
        for (int k = 0; k <= order_; ++k) s.at(k) = at(k, comp);
        s.exceeded_ = exceeded_;
        return s;
    }

    /// Largest coefficient magnitude, the reference scale for float zero tests.
    double scale() const
    {
        double m = 0;
        for (const auto& c : c_) m = std::max(m, traits::magnitude(c));
        return m;
    }

    bool coeff_is_zero(int k, double ref) const
    {
        for (int j = 0; j < dim_; ++j)
            if (!traits::is_zero(at(k, j), ref)) return false;
        return true;
    }

    /// Index of the first nonzero coefficient vector, or -1 when zero to truncation.
    int valuation() const
    {
        double ref = scale();
        if (ref == 0) return -1;
        for (int k = 0; k <= order_; ++k)
            if (!coeff_is_zero(k, ref)) return k;
        return -1;
    }

    /// Highest nonzero index, or -1.
    int degree() const
    {
        double ref = scale();
        if (ref == 0) return -1;
        for (int k = order_; k >= 0; --k)
            if (!coeff_is_zero(k, ref)) return k;
        return -1;
    }

    bool is_zero() const { return valuation() < 0; }

    /// Highest index holding any nonzero value, without thresholds.
    int stored_degree() const
    {
        for (int k = order_; k >= 0; --k)
            for (int j = 0; j < dim_; ++j)
                if (!traits::is_zero(at(k, j), 0)) return k;
        return -1;
    }

    bool is_real() const
    {
        return std::all_of(c_.begin(), c_.end(), [](const C& c) { return traits::real(c); });
    }

    /// Same series seen at a lower truncation order.
    truncated_series truncate(int order) const
    {
        order = std::min(order, order_);
        truncated_series s(dim_, order);
        std::copy(c_.begin(), c_.begin() + std::ptrdiff_t(dim_) * (order + 1), s.c_.begin());
        s.exceeded_ = exceeded_;
        return s;
    }

    /// Multiply by zeta^k. Coefficients pushed past the order are dropped and flagged.
    truncated_series shift_up(int k) const
    {
        truncated_series s(dim_, order_);
        double ref = scale();
        for (int i = 0; i <= order_; ++i) {
            if (i + k <= order_) {
                for (int j = 0; j < dim_; ++j) s.at(i + k, j) = at(i, j);
            } else if (!coeff_is_zero(i, ref)) {
                s.exceeded_ = true;
            }
        }
        s.exceeded_ = s.exceeded_ || exceeded_;
        return s;
    }

    /// Divide by zeta^k; the first k coefficients must vanish. The order drops by k.
    truncated_series shift_down(int k) const
    {
        if (k > order_) throw truncation_error("shift exceeds truncation order");
        double ref = scale();
        for (int i = 0; i < k; ++i)
            if (!coeff_is_zero(i, ref)) throw precondition_error("series not divisible by requested power of zeta");
        truncated_series s(dim_, order_ - k);
        for (int i = 0; i <= order_ - k; ++i)
            for (int j = 0; j < dim_; ++j) s.at(i, j) = at(i + k, j);
        s.exceeded_ = exceeded_;
        return s;
    }

    /// Formal derivative; valid to order - 1.
    truncated_series derivative() const
    {
        truncated_series s(dim_, std::max(order_ - 1, 0));
        for (int k = 1; k <= order_; ++k)
            for (int j = 0; j < dim_; ++j) s.at(k - 1, j) = at(k, j) * traits::from_int(k);
        s.exceeded_ = exceeded_;
        return s;
    }

    /// Evaluate the truncated polynomial at a complex point.
    std::array<float_complex, 2> evaluate(float_complex z) const
    {
        std::array<float_complex, 2> r{};
        for (int j = 0; j < dim_; ++j) {
            float_complex acc = 0;
            for (int k = order_; k >= 0; --k) acc = acc * z + traits::to_float(at(k, j));
            r[j] = acc;
        }
        return r;
    }

    const std::vector<C>& raw() const { return c_; }

private:
    int dim_;
    int order_;
    std::vector<C> c_;
    bool exceeded_ = false;
};

using exact_series = truncated_series<exact_complex>;
using float_series = truncated_series<float_complex>;

namespace detail {
template <class C>
void require_same_dim(const truncated_series<C>& a, const truncated_series<C>& b)
{
    if (a.dim() != b.dim()) throw dimension_error("series dimension mismatch");
}
}  // namespace detail

template <class C>
truncated_series<C> operator+(const truncated_series<C>& a, const truncated_series<C>& b)
{
    detail::require_same_dim(a, b);
    truncated_series<C> s(a.dim(), std::min(a.order(), b.order()));
    for (int k = 0; k <= s.order(); ++k)
        for (int j = 0; j < s.dim(); ++j) s.at(k, j) = a.at(k, j) + b.at(k, j);
    s.mark_exceeded(a.truncation_exceeded() || b.truncation_exceeded());
    return s;
}

template <class C>
truncated_series<C> operator-(const truncated_series<C>& a)
{
    truncated_series<C> s(a.dim(), a.order());
    for (int k = 0; k <= s.order(); ++k)
        for (int j = 0; j < s.dim(); ++j) s.at(k, j) = -a.at(k, j);
    s.mark_exceeded(a.truncation_exceeded());
    return s;
}

template <class C>
truncated_series<C> operator-(const truncated_series<C>& a, const truncated_series<C>& b)
{
    return a + (-b);
}

template <class C>
truncated_series<C> scale(const truncated_series<C>& a, const C& c)
{
    truncated_series<C> s(a.dim(), a.order());
    for (int k = 0; k <= s.order(); ++k)
        for (int j = 0; j < s.dim(); ++j) s.at(k, j) = a.at(k, j) * c;
    s.mark_exceeded(a.truncation_exceeded());
    return s;
}

/// Product. A scalar factor multiplies every component; two vectors multiply componentwise.
template <class C>
truncated_series<C> operator*(const truncated_series<C>& a, const truncated_series<C>& b)
{
    if (a.dim() != b.dim() && a.dim() != 1 && b.dim() != 1) throw dimension_error("series dimension mismatch");
    const int dim = std::max(a.dim(), b.dim());
    const int n = std::min(a.order(), b.order());
    truncated_series<C> s(dim, n);
    const int da = a.degree(), db = b.degree();
    for (int j = 0; j < dim; ++j) {
        const int ja = a.dim() == 1 ? 0 : j, jb = b.dim() == 1 ? 0 : j;
        for (int i = 0; i <= n; ++i) {
            if (coeff_traits<C>::is_zero(a.at(i, ja), 0)) continue;
            for (int l = 0; l <= n - i; ++l)
                if (!coeff_traits<C>::is_zero(b.at(l, jb), 0)) s.at(i + l, j) += a.at(i, ja) * b.at(l, jb);
        }
    }
    s.mark_exceeded(a.truncation_exceeded() || b.truncation_exceeded() || (da >= 0 && db >= 0 && da + db > n));
    return s;
}

/// u(psi(zeta)) for scalar psi with psi(0) = 0.
template <class C>
truncated_series<C> compose(const truncated_series<C>& u, const truncated_series<C>& psi)
{
    using T = coeff_traits<C>;
    if (psi.dim() != 1) throw dimension_error("inner series must be scalar");
    if (!T::is_zero(psi.at(0), 0)) throw precondition_error("compose: psi(0) must vanish");
    const int n = std::min(u.order(), psi.order());
    truncated_series<C> s(u.dim(), n);
    for (int j = 0; j < u.dim(); ++j) s.at(0, j) = u.at(0, j);
    // power = psi^k, valuation >= k so only indices k..n matter
    truncated_series<C> power = psi.truncate(n);
    power.mark_exceeded(false);
    for (int k = 1; k <= std::min(u.stored_degree(), n); ++k) {
        if (k > 1) power = power * psi.truncate(n);
        for (int j = 0; j < u.dim(); ++j) {
            if (T::is_zero(u.at(k, j), 0)) continue;
            for (int i = k; i <= n; ++i) s.at(i, j) += u.at(k, j) * power.at(i);
        }
    }
    s.mark_exceeded(u.truncation_exceeded() || psi.truncation_exceeded());
    return s;
}

/// 1/s for scalar s with s(0) != 0.
template <class C>
truncated_series<C> reciprocal(const truncated_series<C>& s)
{
    using T = coeff_traits<C>;
    if (s.dim() != 1) throw dimension_error("reciprocal expects a scalar series");
    if (T::is_zero(s.at(0), 0)) throw precondition_error("reciprocal: constant term vanishes");
    truncated_series<C> r(1, s.order());
    const C inv = T::from_int(1) / s.at(0);
    r.at(0) = inv;
    for (int k = 1; k <= s.order(); ++k) {
        C acc = T::zero();
        for (int i = 1; i <= k; ++i)
            if (!T::is_zero(s.at(i), 0)) acc += s.at(i) * r.at(k - i);
        r.at(k) = -(acc * inv);
    }
    r.mark_exceeded(s.truncation_exceeded());
    return r;
}

/// zeta -> conj(u(conj zeta)), i.e. conjugate every coefficient.
template <class C>
truncated_series<C> conjugate_reflect(const truncated_series<C>& u)
{
    truncated_series<C> s(u.dim(), u.order());
    for (int k = 0; k <= s.order(); ++k)
        for (int j = 0; j < s.dim(); ++j) s.at(k, j) = coeff_traits<C>::conj(u.at(k, j));
    s.mark_exceeded(u.truncation_exceeded());
    return s;
}

/// Exact equality for rationals, relative 1e-10 for floats, over the common order.
template <class C>
bool series_equal(const truncated_series<C>& a, const truncated_series<C>& b)
{
    if (a.dim() != b.dim()) return false;
    const double ref = std::max(a.scale(), b.scale());
    const int n = std::min(a.order(), b.order());
    for (int k = 0; k <= n; ++k)
        for (int j = 0; j < a.dim(); ++j)
            if (!coeff_traits<C>::equal(a.at(k, j), b.at(k, j), ref)) return false;
    return true;
}

/// Exact series to floating coefficients.
inline float_series to_float(const exact_series& s)
{
    float_series f(s.dim(), s.order());
    for (int k = 0; k <= s.order(); ++k)
        for (int j = 0; j < s.dim(); ++j) f.at(k, j) = coeff_traits<exact_complex>::to_float(s.at(k, j));
    f.mark_exceeded(s.truncation_exceeded());
    return f;
}

inline float_series to_float(const float_series& s) { return s; }

/// Convenience builder for real-coefficient vector series: cols[k] = {x_k, y_k}.
template <class C>
truncated_series<C> real_vector_series(const std::vector<std::array<long, 2>>& cols, int order = truncated_series<C>::default_order)
{
    truncated_series<C> s(2, order);
    for (std::size_t k = 0; k < cols.size() && int(k) <= order; ++k) {
        s.at(int(k), 0) = coeff_traits<C>::from_int(cols[k][0]);
        s.at(int(k), 1) = coeff_traits<C>::from_int(cols[k][1]);
    }
    return s;
}

}  // namespace halfdisk
