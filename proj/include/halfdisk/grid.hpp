#pragma once

#include <halfdisk/errors.hpp>
#include <halfdisk/structures.hpp>

#include <cmath>
#include <complex>
#include <climits>
#include <cstddef>
#include <tuple>
#include <vector>

namespace halfdisk {

using cplx = std::complex<double>;

/// Uniform Cartesian nodes (i h, j h), |i|, |j| <= m = 1/h, masked to the closed unit disk.
class disk_grid {
public:
    explicit disk_grid(int cells_per_unit) : m_(cells_per_unit), side_(2 * cells_per_unit + 1), h_(1.0 / cells_per_unit)
    {
        if (cells_per_unit < 4) throw precondition_error("grid needs at least 4 cells per unit length");
        inside_.assign(size(), false);
        fraction_.assign(size(), 0.0);
        const int sub = 16;
        for (int j = -m_; j <= m_; ++j)
            for (int i = -m_; i <= m_; ++i) {
                const std::size_t k = index(i, j);
                inside_[k] = double(i) * i + double(j) * j <= double(m_) * m_;
                // corner test, then subsampling for cut cells
                bool all_in = true;
                for (int a : {-1, 1})
                    for (int b : {-1, 1}) {
                        double x = (i + 0.5 * a) * h_, y = (j + 0.5 * b) * h_;
                        all_in = all_in && x * x + y * y <= 1.0;
                    }
                if (all_in) {
                    fraction_[k] = 1.0;
                    continue;
                }
                int hits = 0;
                for (int a = 0; a < sub; ++a)
                    for (int b = 0; b < sub; ++b) {
                        double x = (i - 0.5 + (a + 0.5) / sub) * h_, y = (j - 0.5 + (b + 0.5) / sub) * h_;
                        hits += x * x + y * y <= 1.0;
                    }
                fraction_[k] = double(hits) / (sub * sub);
            }
        // cut cells whose node lies outside hand their area to the innermost neighbour
        for (std::size_t k = 0; k < size(); ++k) {
            if (inside_[k] || fraction_[k] == 0) continue;
            const int i = i_of(k), j = j_of(k);
            // ties broken by a key that is invariant under j -> -j, so weights stay symmetric
            std::size_t best = k;
            std::tuple<long, int, int> best_key{LONG_MAX, 0, 0};
            for (int a = -1; a <= 1; ++a)
                for (int b = -1; b <= 1; ++b) {
                    if (!inside(i + a, j + b)) continue;
                    std::tuple<long, int, int> key{long(i + a) * (i + a) + long(j + b) * (j + b), std::abs(a) + std::abs(b), a};
                    if (key < best_key) best_key = key, best = index(i + a, j + b);
                }
            if (best != k) fraction_[best] += fraction_[k];
            fraction_[k] = 0;
        }
        for (std::size_t k = 0; k < size(); ++k)
            if (inside_[k]) nodes_.push_back(k);
    }

    int m() const { return m_; }
    int side() const { return side_; }
    double h() const { return h_; }
    std::size_t size() const { return std::size_t(side_) * side_; }
    std::size_t index(int i, int j) const { return std::size_t(j + m_) * side_ + std::size_t(i + m_); }
    int i_of(std::size_t k) const { return int(k % side_) - m_; }
    int j_of(std::size_t k) const { return int(k / side_) - m_; }
    cplx point(std::size_t k) const { return {i_of(k) * h_, j_of(k) * h_}; }
    bool inside(std::size_t k) const { return inside_[k]; }
    bool inside(int i, int j) const { return std::abs(i) <= m_ && std::abs(j) <= m_ && inside_[index(i, j)]; }
    /// Quadrature weight of the node in units of h^2: the part of its cell inside the
    /// disk plus any cut cells of outside neighbours assigned to it (0 outside the mask).
    double fraction(std::size_t k) const { return fraction_[k]; }
    std::size_t mirror(std::size_t k) const { return index(i_of(k), -j_of(k)); }
    std::size_t origin() const { return index(0, 0); }
    const std::vector<std::size_t>& nodes() const { return nodes_; }

private:
    int m_;
    int side_;
    double h_;
    std::vector<bool> inside_;
    std::vector<double> fraction_;
    std::vector<std::size_t> nodes_;
};

/// C^2-valued grid function stored as real 4-vectors (x1, y1, x2, y2) per node.
using field4 = std::vector<vec4>;
using scalar_field = std::vector<cplx>;

inline field4 zero_field(const disk_grid& g) { return field4(g.size(), vec4::Zero()); }

inline vec4 to_vec4(cplx a, cplx b) { return vec4(a.real(), a.imag(), b.real(), b.imag()); }
inline cplx component(const vec4& v, int c) { return {v[2 * c], v[2 * c + 1]}; }

/// Real 4x4 matrix of multiplication by the complex scalar c.
inline mat4 complex_mult(cplx c) { return c.real() * mat4::Identity() + c.imag() * standard_j(); }

inline double sup_norm(const disk_grid& g, const field4& f)
{
    double s = 0;
    for (auto k : g.nodes()) s = std::max(s, f[k].norm());
    return s;
}

inline double sup_norm_within(const disk_grid& g, const field4& f, double radius)
{
    double s = 0;
    for (auto k : g.nodes())
        if (std::abs(g.point(k)) <= radius + 1e-12) s = std::max(s, f[k].norm());
    return s;
}

/// Partial derivative along the first (axis = 0) or second (axis = 1) coordinate:
/// centered inside the mask, one-sided where a neighbour is missing.
template <class V>
std::vector<V> partial(const disk_grid& g, const std::vector<V>& f, int axis)
{
    std::vector<V> d(f.size(), V(f[0] * 0.0));
    const double h = g.h();
    for (auto k : g.nodes()) {
        const int i = g.i_of(k), j = g.j_of(k);
        const int di = axis == 0, dj = axis == 1;
        const bool fwd = g.inside(i + di, j + dj), bwd = g.inside(i - di, j - dj);
        if (fwd && bwd) d[k] = (f[g.index(i + di, j + dj)] - f[g.index(i - di, j - dj)]) * (0.5 / h);
        else if (fwd) d[k] = (f[g.index(i + di, j + dj)] - f[k]) * (1.0 / h);
        else if (bwd) d[k] = (f[k] - f[g.index(i - di, j - dj)]) * (1.0 / h);
    }
    return d;
}

/// d-bar = (d_xi + i d_eta) / 2 of a scalar field.
inline scalar_field dbar(const disk_grid& g, const scalar_field& f)
{
    auto dx = partial(g, f, 0), dy = partial(g, f, 1);
    scalar_field out(f.size());
    for (auto k : g.nodes()) out[k] = 0.5 * (dx[k] + cplx(0, 1) * dy[k]);
    return out;
}

/// Enforces w(conj zeta) = conj w(zeta) on mirrored nodes (real on the axis) and
/// returns the largest violation found before averaging.
inline double symmetrize_reality(const disk_grid& g, field4& w)
{
    double worst = 0;
    for (auto k : g.nodes()) {
        const int j = g.j_of(k);
        if (j < 0) continue;
        const std::size_t mk = g.mirror(k);
        const vec4 conj_m = conjugation() * w[mk];
        worst = std::max(worst, (w[k] - conj_m).norm());
        if (j == 0) {
            w[k] = 0.5 * (w[k] + conjugation() * w[k]);
        } else {
            const vec4 avg = 0.5 * (w[k] + conj_m);
            w[k] = avg;
            w[mk] = conjugation() * avg;
        }
    }
    return worst;
}

/// Extension across the edge: u~(x, y) = -3 u(x, -y) + 4 u(x, -y/2) for y < 0.
/// Values at half-integer rows come from 4-point cubic interpolation along y.
template <class V>
std::vector<V> extend_l1p(const disk_grid& g, const std::vector<V>& upper)
{
    std::vector<V> out = upper;
    auto at = [&](int i, int j) -> const V& { return upper[g.index(i, j)]; };
    for (auto k : g.nodes()) {
        const int i = g.i_of(k), j = g.j_of(k);
        if (j >= 0) continue;
        const int a = -j;  // mirrored row
        V half;
        if (a % 2 == 0) {
            half = at(i, a / 2);
        } else {
            const int lo = a / 2;  // interpolate at lo + 1/2
            if (lo >= 1 && g.inside(i, lo + 2)) {
                half = (at(i, lo - 1) * (-1.0) + at(i, lo) * 9.0 + at(i, lo + 1) * 9.0 + at(i, lo + 2) * (-1.0)) * (1.0 / 16);
            } else if (lo == 0 && g.inside(i, 3)) {
                half = (at(i, 0) * 5.0 + at(i, 1) * 15.0 + at(i, 2) * (-5.0) + at(i, 3) * 1.0) * (1.0 / 16);
            } else {
                half = (at(i, lo) + at(i, lo + 1)) * 0.5;
            }
        }
        out[k] = at(i, a) * (-3.0) + half * 4.0;
    }
    return out;
}

}  // namespace halfdisk
