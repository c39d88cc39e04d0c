#pragma once

#include <halfdisk/comparison.hpp>
#include <halfdisk/polynomial.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace halfdisk {

struct index_report {
    int index = 0;
    std::string method;
    std::optional<int> nu;
    std::optional<int> d;
    double sphere_radius = 0;
    bool transverse = false;
    contact_kind kind = contact_kind::touching;
    double linking_value = 0;  ///< unrounded linking number (linking route)
    double residual = 0;       ///< |linking_value - index|
    int halvings = 0;
    int samples = 0;  ///< trace samples actually used (linking route)
};

/// Radius (in the parameter disk) inside which the linear term dominates, capped at 1.
template <class C>
double convergence_proxy(const truncated_series<C>& u)
{
    using T = coeff_traits<C>;
    double lin = 0;
    for (int j = 0; j < u.dim(); ++j) lin = std::hypot(lin, T::magnitude(u.at(1, j)));
    if (lin == 0) lin = std::max(u.scale(), 1e-300);
    double worst = 0;
    for (int k = 2; k <= u.order(); ++k) {
        double m = 0;
        for (int j = 0; j < u.dim(); ++j) m = std::hypot(m, T::magnitude(u.at(k, j)));
        if (m > 0) worst = std::max(worst, std::pow(m / lin, 1.0 / (k - 1)));
    }
    return worst > 1 ? 1 / worst : 1.0;
}

namespace detail {

template <class R>
R dot2(const std::array<R, 2>& a, const std::array<R, 2>& b)
{
    return a[0] * b[0] + a[1] * b[1];
}

}  // namespace detail

/// Index through the comparison recursion: nu of compare(), cross-checked with the tangency order.
template <class C>
index_report boundary_index_series(const truncated_series<C>& u1, const truncated_series<C>& u2)
{
    using T = coeff_traits<C>;
    using R = typename T::real_type;
    auto nf1 = normal_form(u1);
    auto nf2 = normal_form(u2);
    if (nf1.mu != 1 || nf2.mu != 1) throw precondition_error("boundary index is defined only at immersed points (mu = 1)");
    const auto &v1 = nf1.v0, &v2 = nf2.v0;
    index_report rep;
    rep.method = "series";
    const R dot = detail::dot2<R>(v1, v2);
    const R cross = v1[0] * v2[1] - v1[1] * v2[0];
    rep.kind = T::sign(dot) >= 0 ? contact_kind::touching : contact_kind::meeting;
    bool collinear = T::sign(cross) == 0;
    if constexpr (!T::exact) {
        collinear = std::abs(cross) <= 1e-12 * std::sqrt(detail::dot2<R>(v1, v1) * detail::dot2<R>(v2, v2));
    }
    if (!collinear) {
        rep.index = 1;
        rep.nu = 1;
        rep.d = 1;
        rep.transverse = true;
        return rep;
    }
    // rescale u2 so that its tangent vector is +-v1
    const R lam = dot / detail::dot2<R>(v2, v2);
    const R c = T::sign(lam) < 0 ? R(-lam) : lam;
    auto u2s = compose(u2, truncated_series<C>::monomial(T::from_real(c), 1, u2.order()));
    auto cmp = compare(u1, u2s);
    if (cmp.reparametrization()) throw precondition_error("index undefined: curves coincide");
    auto tan = tangency_order(u1, u2);
    if (tan.infinite() || *tan.d != *cmp.nu) throw std::logic_error("series index: contact order and tangency order disagree");
    rep.index = *cmp.nu;
    rep.nu = cmp.nu;
    rep.d = tan.d;
    rep.transverse = rep.index == 1;
    return rep;
}

struct linking_options {
    std::optional<double> radius;  ///< sphere radius in R^4; default 0.3 * proxy * |v0|
    int samples = 512;
    int threads = 1;
    int max_halvings = 6;
    int max_refinements = 3;  ///< sample doublings when traces are too close to resolve
    double residual_guard = 0.2;
};

namespace linking {

using point4 = std::array<double, 4>;
using point3 = std::array<double, 3>;

inline point4 to_real4(const std::array<float_complex, 2>& z) { return {z[0].real(), z[0].imag(), z[1].real(), z[1].imag()}; }

inline double norm4(const point4& p) { return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]); }

/// Raised when the sampled picture at the current radius cannot be trusted.
struct radius_rejected : std::runtime_error {
    explicit radius_rejected(const std::string& what, bool resolution = false) : std::runtime_error(what), resolution(resolution) {}
    bool resolution;  ///< more samples would help, a smaller sphere would not
};

/// Closed polygon of the sphere trace u(Delta) cap S_r, ordered by the argument of zeta.
struct trace {
    std::vector<point4> points;
    double sagitta = 0;  ///< max distance between chord midpoints and the curve
};

/// Parameter radius where |u(rho e^{i theta})| = r along one ray.
inline double ray_root(const float_series& u, const float_series& du, double theta, double r, double rho_guess, double rho_max)
{
    const float_complex dir = std::polar(1.0, theta);
    auto f = [&](double rho) { return norm4(to_real4(u.evaluate(rho * dir))) - r; };
    double hi = rho_guess;
    while (f(hi) <= 0) {
        hi *= 1.5;
        if (hi > rho_max) throw radius_rejected("sphere does not meet the ray inside the convergence disk");
    }
    double lo = 0;
    // the ray should cross the sphere once: check a few interior points
    for (int k = 1; k < 8; ++k)
        if (f(hi * k / 8.0) > 0) {
            hi = hi * k / 8.0;
            break;
        }
    for (int it = 0; it < 80 && hi - lo > 1e-16 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? hi : lo) = mid;
    }
    const double rho = 0.5 * (lo + hi);
    // transversality: radial derivative of |u| against the conical value r / rho
    auto z = u.evaluate(rho * dir);
    auto dz = du.evaluate(rho * dir);
    const double radial = (std::conj(z[0]) * dz[0] * dir + std::conj(z[1]) * dz[1] * dir).real() / r;
    if (!(radial * rho / r > 0.25)) throw radius_rejected("curve not transverse to the sphere");
    return rho;
}

inline trace trace_curve(const float_series& u, double r, int samples)
{
    const float_series du = u.derivative();
    double lin = std::hypot(std::abs(u.at(1, 0)), std::abs(u.at(1, 1)));
    trace t;
    t.points.resize(samples);
    const double rho_max = 1.0;
    const double guess = std::min(0.5 * r / lin, rho_max);
    for (int j = 0; j < samples; ++j) {
        double th = 2 * std::numbers::pi * j / samples;
        double rho = ray_root(u, du, th, r, guess, rho_max);
        t.points[j] = to_real4(u.evaluate(std::polar(rho, th)));
    }
    for (int j = 0; j < samples; ++j) {
        double th = 2 * std::numbers::pi * (j + 0.5) / samples;
        double rho = ray_root(u, du, th, r, guess, rho_max);
        point4 m = to_real4(u.evaluate(std::polar(rho, th)));
        const point4& a = t.points[j];
        const point4& b = t.points[(j + 1) % samples];
        point4 d{};
        for (int k = 0; k < 4; ++k) d[k] = m[k] - 0.5 * (a[k] + b[k]);
        t.sagitta = std::max(t.sagitta, norm4(d));
    }
    return t;
}

/// Distance between segments [p0,p1] and [q0,q1] in R^4.
inline double segment_distance(const point4& p0, const point4& p1, const point4& q0, const point4& q1)
{
    point4 d1{}, d2{}, r{};
    for (int k = 0; k < 4; ++k) d1[k] = p1[k] - p0[k], d2[k] = q1[k] - q0[k], r[k] = p0[k] - q0[k];
    auto dot = [](const point4& a, const point4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; };
    const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r), c = dot(d1, r), b = dot(d1, d2);
    const double denom = a * e - b * b;
    double s = denom > 1e-300 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
    double t = e > 0 ? (b * s + f) / e : 0.0;
    if (t < 0) {
        t = 0;
        s = a > 0 ? std::clamp(-c / a, 0.0, 1.0) : 0.0;
    } else if (t > 1) {
        t = 1;
        s = a > 0 ? std::clamp((b - c) / a, 0.0, 1.0) : 0.0;
    }
    point4 w{};
    for (int k = 0; k < 4; ++k) w[k] = r[k] + s * d1[k] - t * d2[k];
    return norm4(w);
}

inline double polygon_separation(const trace& a, const trace& b)
{
    const int n = int(a.points.size()), m = int(b.points.size());
    double best = INFINITY;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            best = std::min(best, segment_distance(a.points[i], a.points[(i + 1) % n], b.points[j], b.points[(j + 1) % m]));
    return best;
}

/// Stereographic chart of S_r from the pole n r, with an oriented basis of the
/// complement: det[n, b1, b2, b3] = +1.
struct stereographic_chart {
    point4 n{};
    std::array<point4, 3> basis{};

    point3 operator()(const point4& p, double r) const
    {
        double along = 0;
        for (int k = 0; k < 4; ++k) along += n[k] * p[k];
        const double denom = r - along;
        point3 q{};
        for (int i = 0; i < 3; ++i) {
            double c = 0;
            for (int k = 0; k < 4; ++k) c += basis[i][k] * p[k];
            q[i] = r * c / denom;
        }
        return q;
    }
};

inline stereographic_chart make_chart(const point4& pole)
{
    stereographic_chart ch;
    const double l = norm4(pole);
    for (int k = 0; k < 4; ++k) ch.n[k] = pole[k] / l;
    // Gram-Schmidt of the coordinate vectors against n
    std::vector<point4> frame{ch.n};
    for (int e = 0; e < 4 && frame.size() < 4; ++e) {
        point4 v{};
        v[e] = 1;
        for (const auto& f : frame) {
            double d = 0;
            for (int k = 0; k < 4; ++k) d += f[k] * v[k];
            for (int k = 0; k < 4; ++k) v[k] -= d * f[k];
        }
        double nv = norm4(v);
        if (nv < 1e-6) continue;
        for (auto& c : v) c /= nv;
        frame.push_back(v);
    }
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) m(k, i) = frame[i][k];
    if (m.determinant() < 0)
        for (auto& c : frame[1]) c = -c;
    for (int i = 0; i < 3; ++i) ch.basis[i] = frame[i + 1];
    return ch;
}

/// Pole among axis and diagonal directions farthest from both traces.
inline stereographic_chart choose_chart(const trace& a, const trace& b, double r)
{
    std::vector<point4> candidates;
    for (int i = 0; i < 4; ++i)
        for (double s : {1.0, -1.0}) {
            point4 p{};
            p[i] = s;
            candidates.push_back(p);
        }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (double s : {1.0, -1.0})
                for (double t : {1.0, -1.0}) {
                    point4 p{};
                    p[i] = s / std::sqrt(2.0);
                    p[j] = t / std::sqrt(2.0);
                    candidates.push_back(p);
                }
    point4 best{};
    double best_dist = -1;
    for (const auto& c : candidates) {
        double dmin = INFINITY;
        for (const trace* t : {&a, &b})
            for (const auto& p : t->points) {
                point4 q{};
                for (int k = 0; k < 4; ++k) q[k] = p[k] - r * c[k];
                dmin = std::min(dmin, norm4(q));
            }
        if (dmin > best_dist) best_dist = dmin, best = c;
    }
    return make_chart(best);
}

inline point3 sub(const point3& a, const point3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline point3 cross(const point3& a, const point3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double dot(const point3& a, const point3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

/// Signed solid-angle contribution of segment pair (p1->p2, q1->q2), divided by 4 pi.
inline double segment_pair_linking(const point3& p1, const point3& p2, const point3& q1, const point3& q2)
{
    const point3 r13 = sub(q1, p1), r14 = sub(q2, p1), r23 = sub(q1, p2), r24 = sub(q2, p2);
    std::array<point3, 4> n{cross(r13, r14), cross(r14, r24), cross(r24, r23), cross(r23, r13)};
    for (auto& v : n) {
        double l = std::sqrt(dot(v, v));
        if (l == 0) return 0;
        v = {v[0] / l, v[1] / l, v[2] / l};
    }
    double omega = 0;
    for (int k = 0; k < 4; ++k) omega += std::asin(std::clamp(dot(n[k], n[(k + 1) % 4]), -1.0, 1.0));
    const double s = dot(cross(sub(q2, q1), sub(p2, p1)), r13);
    return (s > 0 ? omega : -omega) / (4 * std::numbers::pi);
}

/// Linking number of two closed polygons in R^3.
inline double polygon_linking(const std::vector<point3>& a, const std::vector<point3>& b, int threads)
{
    const int n = int(a.size()), m = int(b.size());
    threads = std::max(1, std::min(threads, n));
    std::vector<double> partial(threads, 0.0);
    auto work = [&](int t) {
        double acc = 0;
        for (int i = t; i < n; i += threads)
            for (int j = 0; j < m; ++j) acc += segment_pair_linking(a[i], a[(i + 1) % n], b[j], b[(j + 1) % m]);
        partial[t] = acc;
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    double sum = 0;
    for (double p : partial) sum += p;
    return sum;
}

/// Orientation of S_r as the boundary of the ball with the complex orientation of C^2,
/// pushed through the chart conventions above; fixed so the coordinate-axis Hopf pair links +1.
inline constexpr double chart_orientation = -1.0;

struct linking_sample {
    double value = 0;
    double separation = 0;
    double sagitta = 0;
};

inline linking_sample link_at(const float_series& u1, const float_series& u2, double r, int samples, int threads)
{
    trace t1 = trace_curve(u1, r, samples);
    trace t2 = trace_curve(u2, r, samples);
    linking_sample s;
    s.sagitta = t1.sagitta + t2.sagitta;
    s.separation = polygon_separation(t1, t2);
    if (!(s.separation > 2 * s.sagitta)) throw radius_rejected("traces too close for the sampling density", true);
    auto chart = choose_chart(t1, t2, r);
    std::vector<point3> p1, p2;
    for (auto& p : t1.points) p1.push_back(chart(p, r));
    for (auto& p : t2.points) p2.push_back(chart(p, r));
    s.value = chart_orientation * polygon_linking(p1, p2, threads);
    return s;
}

}  // namespace linking

/// Index as the linking number of the sphere traces of the reflected extensions.
template <class C>
index_report boundary_index_linking(const truncated_series<C>& u1in, const truncated_series<C>& u2in, const linking_options& opt = {})
{
    auto nf1 = normal_form(u1in);
    auto nf2 = normal_form(u2in);
    if (nf1.mu != 1 || nf2.mu != 1) throw precondition_error("boundary index is defined only at immersed points (mu = 1)");
    const float_series u1 = to_float(u1in), u2 = to_float(u2in);
    if (opt.samples < 16) throw precondition_error("linking: at least 16 samples required");
    const double l1 = std::hypot(std::abs(u1.at(1, 0)), std::abs(u1.at(1, 1)));
    const double l2 = std::hypot(std::abs(u2.at(1, 0)), std::abs(u2.at(1, 1)));
    double r = opt.radius ? *opt.radius : 0.3 * std::min(convergence_proxy(u1), convergence_proxy(u2)) * std::min(l1, l2);
    if (!(r > 0)) throw precondition_error("linking: sphere radius must be positive");
    index_report rep;
    rep.method = "linking";
    {
        double dot = (u1.at(1, 0) * u2.at(1, 0) + u1.at(1, 1) * u2.at(1, 1)).real();
        rep.kind = dot >= 0 ? contact_kind::touching : contact_kind::meeting;
    }
    std::string last_reason = "no attempt";
    for (int h = 0; h <= opt.max_halvings; ++h, r *= 0.5) {
        int n = opt.samples;
        for (int refine = 0; refine <= opt.max_refinements; ++refine, n *= 2) {
            try {
                // a second intersection inside the sphere shows up as a jump across nested radii;
                // r/4 may be unresolvable for high contact and then only r, r/2 are compared
                auto a = linking::link_at(u1, u2, r, n, opt.threads);
                auto b = linking::link_at(u1, u2, 0.5 * r, n, opt.threads);
                bool stable = std::lround(a.value) == std::lround(b.value);
                try {
                    auto c = linking::link_at(u1, u2, 0.25 * r, n, opt.threads);
                    stable = stable && std::lround(b.value) == std::lround(c.value);
                } catch (const linking::radius_rejected&) {
                }
                if (!stable) {
                    last_reason = "linking number changes between nested radii";
                    break;
                }
                rep.linking_value = a.value;
                rep.index = int(std::lround(a.value));
                rep.residual = std::abs(a.value - rep.index);
                rep.sphere_radius = r;
                rep.halvings = h;
                rep.samples = n;
                rep.transverse = rep.index == 1;
                if (rep.residual > opt.residual_guard) throw verification_error("radius too large / refine sampling");
                return rep;
            } catch (const linking::radius_rejected& e) {
                last_reason = e.what();
                if (!e.resolution) break;
            }
        }
    }
    throw verification_error(std::string("linking index: no admissible sphere radius (") + last_reason + ")");
}

template <class C>
struct split_result {
    truncated_series<C> u2_perturbed;
    truncated_series<C> difference;  ///< perturbed graph difference over the tangent line of u1
    truncated_series<C> perturbation;
    std::vector<double> roots;       ///< real intersection coordinates in the disk, ascending
    std::vector<float_complex> nonreal_roots;
    int index = 0;
    int rounds = 0;
    double radius = 0;  ///< disk (in the graph coordinate) where roots are counted
    bool simple = false;
};

namespace detail {

inline std::vector<float_complex> roots_in_disk(const std::vector<double>& coeffs_from_j, double radius)
{
    std::vector<float_complex> out;
    for (auto z : poly::durand_kerner(coeffs_from_j))
        if (std::abs(z) < radius) out.push_back(z);
    return out;
}

}  // namespace detail

/// Adds small real terms delta z^(j-1) to the graph difference until the contact point
/// splits into index-many simple real intersections.
template <class C>
split_result<C> split_to_transverse(const truncated_series<C>& u1, const truncated_series<C>& u2,
                                    const typename coeff_traits<C>::real_type& eps, int budget = -1)
{
    using T = coeff_traits<C>;
    using R = typename T::real_type;
    if (T::sign(eps) <= 0) throw precondition_error("split: epsilon must be positive");
    auto rep = boundary_index_series(u1, u2);
    auto nf1 = normal_form(u1);
    const auto& v = nf1.v0;
    const R vv = v[0] * v[0] + v[1] * v[1];
    const auto a1 = align_to(u1, v), a2 = align_to(u2, v);
    split_result<C> out;
    out.index = rep.index;
    out.difference = detail::graph_of(a2) - detail::graph_of(a1);
    const int n = out.difference.order();
    out.perturbation = truncated_series<C>(1, n);
    out.radius = 0.5 * std::min(convergence_proxy(u1), convergence_proxy(u2)) * T::to_double(vv);
    auto& p = out.difference;
    {
        // other intersections of the unperturbed pair stay outside the counting disk
        std::vector<double> c;
        for (int k = p.valuation(); k <= p.degree(); ++k) c.push_back(T::to_double(T::re(p.at(k))));
        for (auto z : detail::roots_in_disk(c, out.radius)) out.radius = std::min(out.radius, 0.5 * std::abs(z));
    }
    if (T::to_double(eps) * 4 > out.radius) throw precondition_error("split: epsilon too large for the contact neighborhood");
    if (budget < 0) budget = 2 * rep.index + 4;
    double t = T::to_double(eps);
    for (;;) {
        const int j = p.valuation();
        if (j < 1) throw std::logic_error("split: graph difference lost its zero at the origin");
        std::vector<double> c;
        for (int k = j; k <= p.degree(); ++k) c.push_back(T::to_double(T::re(p.at(k))));
        auto others = detail::roots_in_disk(c, out.radius);
        out.roots.clear();
        out.nonreal_roots.clear();
        double smallest = out.radius;
        for (auto z : others) {
            if (z.imag() == 0) out.roots.push_back(z.real());
            else out.nonreal_roots.push_back(z);
            smallest = std::min(smallest, std::abs(z));
        }
        if (j == 1) {
            out.roots.push_back(0.0);
            std::sort(out.roots.begin(), out.roots.end());
            bool separated = out.nonreal_roots.empty();
            for (std::size_t k = 1; k < out.roots.size(); ++k)
                separated = separated && out.roots[k] - out.roots[k - 1] > 1e-9 * out.radius;
            out.simple = separated;
            if (!separated) throw verification_error("split: roots fail to separate within the iteration budget");
            break;
        }
        if (out.rounds >= budget) throw verification_error("split: roots fail to separate within the iteration budget");
        if (out.rounds > 0) t = std::min(T::to_double(eps), smallest / 8);
        // new root at -t next to the origin
        R tq;
        if constexpr (T::exact) tq = R(t);
        else tq = t;
        if (out.rounds == 0) tq = eps;
        const C delta = T::from_real(R(tq * T::re(p.at(j))));
        p.at(j - 1) += delta;
        out.perturbation.at(j - 1) += delta;
        ++out.rounds;
    }
    // u2 + L^{-1}(0, pert(first aligned coordinate of u2))
    auto s = compose(out.perturbation, a2.component(0));
    truncated_series<C> add(2, s.order());
    for (int k = 0; k <= s.order(); ++k) {
        add.at(k, 0) = s.at(k) * T::from_real(R(-v[1] / vv));
        add.at(k, 1) = s.at(k) * T::from_real(R(v[0] / vv));
    }
    out.u2_perturbed = u2 + add;
    return out;
}

struct split_verification {
    int sturm_count = 0;       ///< distinct real roots in [-radius, radius]
    bool repeated_real = true;  ///< some real root in the interval is multiple
    int disk_count = 0;         ///< numerical count of all roots in the disk
    bool ok = false;
};

/// Exact check that the perturbed difference has exactly `index` simple real roots near 0.
inline split_verification verify_split(const split_result<exact_complex>& s)
{
    split_verification v;
    poly::dense<rational> p;
    for (int k = 0; k <= s.difference.order(); ++k) {
        if (sgn(s.difference.at(k).im) != 0) throw precondition_error("split: difference must be real");
        p.push_back(s.difference.at(k).re);
    }
    poly::trim(p);
    rational R(s.radius);
    // (a, b] convention: include -R by starting just left of it; roots at exactly +-R are not expected
    v.sturm_count = poly::count_real_roots(p, rational(-R), R);
    auto g = poly::gcd(p, poly::derivative(p));
    v.repeated_real = poly::degree(g) > 0 && poly::count_real_roots(g, rational(-R), R) > 0;
    std::vector<double> c;
    for (auto& q : p) c.push_back(q.get_d());
    int zeros_at_origin = 0;
    while (zeros_at_origin < int(c.size()) && c[zeros_at_origin] == 0) ++zeros_at_origin;
    std::vector<double> rest(c.begin() + zeros_at_origin, c.end());
    v.disk_count = zeros_at_origin + int(detail::roots_in_disk(rest, s.radius).size());
    v.ok = v.sturm_count == s.index && !v.repeated_real && v.disk_count == s.index;
    return v;
}

}  // namespace halfdisk
