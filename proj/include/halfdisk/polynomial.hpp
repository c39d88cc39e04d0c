#pragma once

#include <halfdisk/errors.hpp>
#include <halfdisk/scalar.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

namespace halfdisk::poly {

/// Dense polynomial over an exact field, coefficient k multiplies x^k.
template <class Q>
using dense = std::vector<Q>;

template <class Q>
void trim(dense<Q>& p)
{
    while (!p.empty() && p.back() == 0) p.pop_back();
}

template <class Q>
int degree(const dense<Q>& p)
{
    for (int k = int(p.size()) - 1; k >= 0; --k)
        if (p[k] != 0) return k;
    return -1;
}

template <class Q>
dense<Q> derivative(const dense<Q>& p)
{
    dense<Q> d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * Q(long(k)));
    trim(d);
    return d;
}

/// Remainder of a / b (b nonzero).
template <class Q>
dense<Q> remainder(dense<Q> a, dense<Q> b)
{
    trim(a);
    trim(b);
    if (b.empty()) throw precondition_error("polynomial division by zero");
    const int db = int(b.size()) - 1;
    while (int(a.size()) - 1 >= db && !a.empty()) {
        const int da = int(a.size()) - 1;
        Q f = a.back() / b.back();
        for (int k = 0; k <= db; ++k) a[da - db + k] -= f * b[k];
        a.pop_back();
        trim(a);
    }
    return a;
}

template <class Q>
dense<Q> monic(dense<Q> p)
{
    trim(p);
    if (p.empty()) return p;
    Q lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

template <class Q>
dense<Q> gcd(dense<Q> a, dense<Q> b)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        dense<Q> r = remainder(a, b);
        a = std::move(b);
        b = monic(std::move(r));
    }
    return monic(a);
}

template <class Q>
Q evaluate(const dense<Q>& p, const Q& x)
{
    Q acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

/// Sturm chain p, p', -rem(p_{k-1}, p_k), ... (each member made positive-scaled to tame growth).
template <class Q>
std::vector<dense<Q>> sturm_chain(dense<Q> p)
{
    trim(p);
    std::vector<dense<Q>> chain;
    if (p.empty()) return chain;
    chain.push_back(p);
    dense<Q> d = derivative(p);
    if (d.empty()) return chain;
    chain.push_back(d);
    for (;;) {
        dense<Q> r = remainder(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        // normalize by a positive constant; sign changes are unaffected
        Q lead = r.back();
        if (lead < 0) lead = -lead;
        for (auto& c : r) c = -c / lead;
        chain.push_back(std::move(r));
    }
    return chain;
}

template <class Q>
int sign_changes(const std::vector<dense<Q>>& chain, const Q& x)
{
    int changes = 0, last = 0;
    for (const auto& q : chain) {
        Q v = evaluate(q, x);
        int s = (v > 0) - (v < 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

/// Number of distinct real roots in the half-open interval (a, b].
template <class Q>
int count_real_roots(const dense<Q>& p, const Q& a, const Q& b)
{
    auto chain = sturm_chain(p);
    if (chain.empty()) throw precondition_error("root count of the zero polynomial");
    return sign_changes(chain, a) - sign_changes(chain, b);
}

/// All complex roots by the Weierstrass / Durand-Kerner simultaneous iteration.
/// Roots with |Im| below `real_tol` are snapped to the real axis; the rest are paired
/// with their conjugates.
inline std::vector<std::complex<double>> durand_kerner(std::vector<double> coeffs, double real_tol = 1e-9, int max_iter = 2000)
{
    using cd = std::complex<double>;
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    const int n = int(coeffs.size()) - 1;
    if (n < 1) return {};
    const double lead = coeffs.back();
    for (auto& c : coeffs) c /= lead;
    // Fujiwara-type bound for the initial circle
    double bound = 0;
    for (int k = 0; k < n; ++k) bound = std::max(bound, std::pow(std::abs(coeffs[k]), 1.0 / (n - k)));
    bound = std::max(2 * bound, 1e-300);
    std::vector<cd> z(n);
    const cd seed(0.4, 0.9);
    for (int k = 0; k < n; ++k) z[k] = bound * std::pow(seed, k) / std::pow(std::abs(seed), k) * 0.5;
    auto eval = [&](cd x) {
        cd acc = 1.0;
        for (int k = n - 1; k >= 0; --k) acc = acc * x + coeffs[k];
        return acc;
    };
    for (int it = 0; it < max_iter; ++it) {
        double change = 0, size = 0;
        for (int i = 0; i < n; ++i) {
            cd denom = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= (z[i] - z[j]);
            if (std::abs(denom) == 0) denom = 1e-300;
            cd step = eval(z[i]) / denom;
            z[i] -= step;
            change = std::max(change, std::abs(step));
            size = std::max(size, std::abs(z[i]));
        }
        if (change <= 1e-15 * std::max(size, 1e-300)) break;
    }
    // reality symmetrization
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        if (std::abs(z[i].imag()) < real_tol) {
            z[i] = z[i].real();
            used[i] = true;
        }
    }
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        int best = -1;
        double bd = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i || used[j]) continue;
            double d = std::abs(z[j] - std::conj(z[i]));
            if (best < 0 || d < bd) best = j, bd = d;
        }
        used[i] = true;
        if (best >= 0) {
            cd avg = 0.5 * (z[i] + std::conj(z[best]));
            z[i] = avg;
            z[best] = std::conj(avg);
            used[best] = true;
        }
    }
    std::sort(z.begin(), z.end(), [](cd a, cd b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return z;
}

}  // namespace halfdisk::poly
