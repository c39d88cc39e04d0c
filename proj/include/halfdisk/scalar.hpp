#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <string>

namespace halfdisk {

using rational = mpq_class;

/// Complex number with components in an exact field Q.
template <class Q>
struct gaussian {
    Q re{0};
    Q im{0};

    gaussian() = default;
    gaussian(Q r) : re(std::move(r)) {}
    gaussian(Q r, Q i) : re(std::move(r)), im(std::move(i)) {}
    gaussian(long r) : re(r) {}

    gaussian& operator+=(const gaussian& o) { re += o.re; im += o.im; return *this; }
    gaussian& operator-=(const gaussian& o) { re -= o.re; im -= o.im; return *this; }
    gaussian& operator*=(const gaussian& o) { *this = *this * o; return *this; }

    friend gaussian operator+(gaussian a, const gaussian& b) { return a += b; }
    friend gaussian operator-(gaussian a, const gaussian& b) { return a -= b; }
    friend gaussian operator-(const gaussian& a) { return gaussian(Q(-a.re), Q(-a.im)); }
    friend gaussian operator*(const gaussian& a, const gaussian& b)
    {
        if (sgn(a.im) == 0 && sgn(b.im) == 0) return gaussian(Q(a.re * b.re));
        return gaussian(Q(a.re * b.re - a.im * b.im), Q(a.re * b.im + a.im * b.re));
    }
    friend gaussian operator/(const gaussian& a, const gaussian& b)
    {
        if (sgn(b.im) == 0) return gaussian(Q(a.re / b.re), Q(a.im / b.re));
        Q n = b.re * b.re + b.im * b.im;
        return gaussian(Q((a.re * b.re + a.im * b.im) / n), Q((a.im * b.re - a.re * b.im) / n));
    }
    friend bool operator==(const gaussian& a, const gaussian& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const gaussian& a, const gaussian& b) { return !(a == b); }
};

using exact_complex = gaussian<rational>;
using float_complex = std::complex<double>;

/// Uniform interface over the two coefficient backends.
template <class C>
struct coeff_traits;

template <>
struct coeff_traits<exact_complex> {
    using real_type = rational;
    static constexpr bool exact = true;

    static exact_complex zero() { return {}; }
    static exact_complex from_int(long v) { return exact_complex(v); }
    static exact_complex from_real(const rational& v) { return exact_complex(v); }
    static exact_complex make(const rational& re, const rational& im) { return exact_complex(re, im); }
    static exact_complex conj(const exact_complex& c) { return exact_complex(c.re, rational(-c.im)); }
    static const rational& re(const exact_complex& c) { return c.re; }
    static const rational& im(const exact_complex& c) { return c.im; }
    static bool real(const exact_complex& c) { return sgn(c.im) == 0; }
    static double magnitude(const exact_complex& c) { return std::hypot(c.re.get_d(), c.im.get_d()); }
    static float_complex to_float(const exact_complex& c) { return {c.re.get_d(), c.im.get_d()}; }
    static bool is_zero(const exact_complex& c, double /*scale*/) { return sgn(c.re) == 0 && sgn(c.im) == 0; }
    static bool equal(const exact_complex& a, const exact_complex& b, double /*scale*/) { return a == b; }
    static int sign(const rational& r) { return sgn(r); }
    static double to_double(const rational& r) { return r.get_d(); }
};

template <>
struct coeff_traits<float_complex> {
    using real_type = double;
    static constexpr bool exact = false;
    static constexpr double equal_rtol = 1e-10;
    static constexpr double zero_rtol = 1e-12;

    static float_complex zero() { return {}; }
    static float_complex from_int(long v) { return {double(v), 0.0}; }
    static float_complex from_real(double v) { return {v, 0.0}; }
    static float_complex make(double re, double im) { return {re, im}; }
    static float_complex conj(const float_complex& c) { return std::conj(c); }
    static double re(const float_complex& c) { return c.real(); }
    static double im(const float_complex& c) { return c.imag(); }
    static bool real(const float_complex& c) { return c.imag() == 0.0; }
    static double magnitude(const float_complex& c) { return std::abs(c); }
    static float_complex to_float(const float_complex& c) { return c; }
    /// `scale` is the largest coefficient magnitude of the series the value belongs to.
    static bool is_zero(const float_complex& c, double scale) { return std::abs(c) <= zero_rtol * scale; }
    static bool equal(const float_complex& a, const float_complex& b, double scale)
    {
        return std::abs(a - b) <= equal_rtol * std::max({std::abs(a), std::abs(b), scale});
    }
    static int sign(double r) { return (r > 0) - (r < 0); }
    static double to_double(double r) { return r; }
};

/// Parses "p/q", "p" or a decimal literal into an exact rational.
inline rational parse_rational(const std::string& text)
{
    auto dot = text.find_first_of(".eE");
    if (dot == std::string::npos) {
        rational r(text, 10);
        r.canonicalize();
        return r;
    }
    // decimal with optional exponent: mantissa digits over a power of ten
    std::string s = text;
    long exp10 = 0;
    auto e = s.find_first_of("eE");
    if (e != std::string::npos) {
        exp10 = std::stol(s.substr(e + 1));
        s = s.substr(0, e);
    }
    auto d = s.find('.');
    if (d != std::string::npos) {
        exp10 -= long(s.size() - d - 1);
        s.erase(d, 1);
    }
    mpz_class mant(s, 10);
    mpz_class ten = 10, p;
    mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::labs(exp10)));
    rational r = exp10 >= 0 ? rational(mant * p) : rational(mant, p);
    r.canonicalize();
    return r;
}

inline std::string to_string(const rational& r) { return r.get_str(); }

}  // namespace halfdisk
