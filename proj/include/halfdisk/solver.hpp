#pragma once

#include <halfdisk/cauchy_green.hpp>
#include <halfdisk/errors.hpp>
#include <halfdisk/grid.hpp>
#include <halfdisk/normal_form.hpp>
#include <halfdisk/polynomial.hpp>
#include <halfdisk/structures.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace halfdisk {

// Operators act on C^2-valued grid fields. Throughout,
//   D w = 1/2 (d_xi + J d_eta) w + R w,
// so that D = d-bar for J = J_st, R = 0 and the normalized Cauchy-Green operator T
// (T f)(0) = 0 is its right inverse.

using matrix_field = std::vector<mat4>;

/// P v = 1/2 (J - J_st) d_eta v + R v, the part of D not covered by d-bar.
inline field4 perturbation_part(const disk_grid& g, const matrix_field& j, const matrix_field& r, const field4& v)
{
    const field4 dy = partial(g, v, 1);
    field4 out = zero_field(g);
    for (auto k : g.nodes()) out[k] = 0.5 * ((j[k] - standard_j()) * dy[k]) + r[k] * v[k];
    return out;
}

struct neumann_result {
    field4 w;        ///< T g, vanishing at the origin
    field4 density;  ///< g = sum of the series, w = T g
    int terms = 0;
    double max_ratio = 0;  ///< largest successive-term norm ratio
    double residual = 0;   ///< sup |g + P(T g) - f|
};

/// Right inverse of D normalized at 0: w = T sum_n (-P T)^n f.
inline neumann_result neumann_inverse(const cauchy_green_operator& t, const matrix_field& j, const matrix_field& r,
                                      const field4& f, double tol, int max_terms = 200)
{
    const disk_grid& g = t.grid();
    neumann_result out;
    out.density = zero_field(g);
    field4 term = f;
    double prev = sup_norm(g, term);
    int growing = 0;
    while (true) {
        for (auto k : g.nodes()) out.density[k] += term[k];
        ++out.terms;
        if (prev == 0) break;
        if (out.terms >= max_terms) throw convergence_error("perturbation too large: Neumann series did not reach tolerance");
        field4 next = perturbation_part(g, j, r, t.apply_normalized(term));
        for (auto k : g.nodes()) next[k] = -next[k];
        const double norm = sup_norm(g, next);
        const double ratio = norm / prev;
        out.max_ratio = std::max(out.max_ratio, ratio);
        growing = ratio >= 1 ? growing + 1 : 0;
        if (growing >= 3) throw convergence_error("perturbation too large: Neumann terms stopped contracting");
        if (norm <= tol) break;
        term = std::move(next);
        prev = norm;
    }
    out.w = t.apply_normalized(out.density);
    const field4 pw = perturbation_part(g, j, r, out.w);
    for (auto k : g.nodes()) out.residual = std::max(out.residual, (out.density[k] + pw[k] - f[k]).norm());
    return out;
}

/// Same with J sampled at the parameter point (xi, eta, 0, 0) and R = 0.
inline neumann_result neumann_inverse(const cauchy_green_operator& t, const structure_field& j, const field4& f, double tol,
                                      int max_terms = 200)
{
    const disk_grid& g = t.grid();
    matrix_field jm(g.size(), standard_j()), rm(g.size(), mat4::Zero());
    for (auto k : g.nodes()) {
        const cplx z = g.point(k);
        jm[k] = j(vec4(z.real(), z.imag(), 0, 0));
    }
    return neumann_inverse(t, jm, rm, f, tol, max_terms);
}

struct solve_config {
    int nu = 1;
    std::array<double, 2> w0{0, 0};
    double tol = 1e-6;
    int max_iter = 60;
    int cells_per_unit = 64;
    double alpha = 0.5;
    int max_rescales = 3;
};

struct solve_result {
    std::shared_ptr<const disk_grid> grid;
    field4 w;   ///< on the full disk, w(conj z) = conj w(z)
    field4 u;   ///< u0 + zeta^nu w on the full disk
    float_series u0;  ///< the germ actually solved for (after any rescaling)
    std::array<double, 2> w0{0, 0};  ///< initial value actually imposed
    int mu = 0;
    int nu = 0;
    int iterations = 0;
    std::vector<double> steps;   ///< sup |w_{n+1} - w_n|
    std::vector<double> ratios;  ///< steps[n] / steps[n-1]
    double max_ratio = 0;
    double discrete_residual = 0;     ///< sup |g + P w - F/2| with w = w0 + T g
    double fd_residual = 0;           ///< finite-difference D w - F/2 on |zeta| <= 0.8
    double fixed_point_residual = 0;  ///< sup |w - T[F(w)/2] - w1|
    double reality_residual = 0;      ///< before the last symmetrization
    double origin_error = 0;          ///< |w(0) - w0|
    double w_sup = 0;
    double stability = 0;  ///< sup |w - w0| / |w0| (0 when w0 = 0)
    double r_bound_ratio = 0;  ///< max |R| / (nu Lip(J) Lip(u0)), 0 if not applicable
    double scale = 1;      ///< product of the dilatations applied
    int rescales = 0;
    int neumann_terms = 0;
};

namespace detail {

struct not_contracting {
    std::string why;
};

inline cplx ipow(cplx z, int n)
{
    cplx r = 1;
    const bool inv = n < 0;
    for (int k = 0; k < std::abs(n); ++k) r *= z;
    return inv ? 1.0 / r : r;
}

inline mat4 reflected_at(const structure_field& j, const vec4& p, bool upper)
{
    if (upper) return j(p);
    return -(conjugation() * j(conj_point(p)) * conjugation());
}

inline double lipschitz_of(const structure_field& j, double radius)
{
    const double measured = measure_regularity(j, std::max(radius, 1e-3), 2000, 11).lipschitz;
    return std::max(measured, j.lipschitz_bound.value_or(0.0));
}

inline solve_result solve_once(const float_series& u0, const structure_field& j, const solve_config& cfg,
                               std::array<double, 2> w0)
{
    solve_result res;
    auto gp = std::make_shared<const disk_grid>(cfg.cells_per_unit);
    const disk_grid& g = *gp;
    const cauchy_green_operator t(g);
    const int nu = cfg.nu;
    const std::size_t origin = g.origin();
    const vec4 w0v(w0[0], 0, w0[1], 0);
    const mat4 jst = standard_j();
    res.grid = gp;
    res.u0 = u0;
    res.w0 = w0;
    res.nu = nu;
    res.mu = u0.valuation();

    const float_series du = u0.derivative();
    field4 tu0 = zero_field(g), du0 = zero_field(g);
    matrix_field jt0(g.size(), jst);
    double lip_u0 = 0, reach = 0;
    for (auto k : g.nodes()) {
        const cplx z = g.point(k);
        const auto a = u0.evaluate(z), d = du.evaluate(z);
        tu0[k] = to_vec4(a[0], a[1]);
        du0[k] = to_vec4(d[0], d[1]);
        lip_u0 = std::max(lip_u0, du0[k].norm());
        reach = std::max(reach, tu0[k].norm());
        const bool upper = g.j_of(k) >= 0;
        jt0[k] = reflected_at(j, tu0[k], upper);
        if (upper) {
            const vec4 r = du0[k] + jt0[k] * (jst * du0[k]);
            if (r.norm() > 1e-8 * std::max(1.0, du0[k].norm()))
                throw precondition_error("u0 is not J-holomorphic on the upper half-disk");
        }
        if (g.j_of(k) == 0 && (jt0[k] - jst).cwiseAbs().maxCoeff() > 1e-10)
            throw precondition_error("structure differs from J_st on the real plane along u0");
    }

    // twisted structure and zero-order term (halved to match D)
    matrix_field jnu(g.size(), jst), rh(g.size(), mat4::Zero());
    for (auto k : g.nodes()) {
        if (nu > 0 && k == origin) continue;
        const cplx z = g.point(k);
        jnu[k] = jst + complex_mult(ipow(z, -nu)) * (jt0[k] - jst) * complex_mult(ipow(z, nu));
        if (nu > 0)
            rh[k] = 0.5 * nu * complex_mult(ipow(z, -nu)) * (mat4::Identity() + jt0[k] * jst) * complex_mult(ipow(z, nu - 1));
    }
    if (nu > 0) {
        const double lip = lipschitz_of(j, reach);
        if (lip > 0 && lip_u0 > 0) {
            double worst = 0;
            for (auto k : g.nodes()) worst = std::max(worst, spectral_norm(2 * rh[k]));
            res.r_bound_ratio = worst / (nu * lip * lip_u0);
        }
    }

    // F(w) / 2
    auto half_f = [&](const field4& w) {
        const field4 dy = partial(g, w, 1);
        field4 f = zero_field(g);
        for (auto k : g.nodes()) {
            if (nu > 0 && k == origin) continue;
            const cplx z = g.point(k);
            const mat4 zn = complex_mult(ipow(z, nu));
            const vec4 u = tu0[k] + zn * w[k];
            const mat4 ju = reflected_at(j, u, g.j_of(k) >= 0);
            vec4 deta = jst * du0[k] + zn * dy[k];
            if (nu > 0) deta += complex_mult(cplx(0, nu) * ipow(z, nu - 1)) * w[k];
            f[k] = 0.5 * (complex_mult(ipow(z, -nu)) * ((jt0[k] - ju) * deta));
        }
        if (nu > 0) {
            f[origin] = 0.25 * (f[g.index(1, 0)] + f[g.index(-1, 0)] + f[g.index(0, 1)] + f[g.index(0, -1)]);
        }
        return f;
    };

    const double ntol = 1e-3 * cfg.tol;
    field4 rw0 = zero_field(g);
    for (auto k : g.nodes()) rw0[k] = rh[k] * w0v;
    const neumann_result base = neumann_inverse(t, jnu, rh, rw0, ntol);
    field4 w1 = zero_field(g);
    for (auto k : g.nodes()) w1[k] = w0v - base.w[k];
    symmetrize_reality(g, w1);
    res.neumann_terms = base.terms;

    field4 w = w1;
    field4 hf = half_f(w);
    const double cap = 0.5;
    int slow = 0;
    bool done = false;
    for (int n = 1; n <= cfg.max_iter; ++n) {
        const neumann_result nr = neumann_inverse(t, jnu, rh, hf, ntol);
        res.neumann_terms = std::max(res.neumann_terms, nr.terms);
        field4 next = zero_field(g);
        for (auto k : g.nodes()) next[k] = nr.w[k] + w1[k];
        res.reality_residual = symmetrize_reality(g, next);
        double step = 0;
        for (auto k : g.nodes()) step = std::max(step, (next[k] - w[k]).norm());
        res.steps.push_back(step);
        res.iterations = n;
        if (res.steps.size() >= 2 && res.steps[res.steps.size() - 2] > 0) {
            const double ratio = step / res.steps[res.steps.size() - 2];
            res.ratios.push_back(ratio);
            res.max_ratio = std::max(res.max_ratio, ratio);
            slow = (ratio > 0.9 && n > 2) ? slow + 1 : 0;
        }
        if (sup_norm(g, next) > cap) throw not_contracting{"L-infinity cap 1/2 violated"};
        if (slow >= 3) throw not_contracting{"step ratio above 0.9 three times running"};
        if (res.steps.front() > 0 && step > 10 * res.steps.front()) throw not_contracting{"steps growing"};

        w = std::move(next);
        hf = half_f(w);
        field4 dens = zero_field(g);
        for (auto k : g.nodes()) dens[k] = nr.density[k] - base.density[k];
        const field4 pw = perturbation_part(g, jnu, rh, w);
        double resid = 0;
        for (auto k : g.nodes()) resid = std::max(resid, (dens[k] + pw[k] - hf[k]).norm());
        res.discrete_residual = resid;
        if (resid <= cfg.tol && step <= cfg.tol) {
            done = true;
            break;
        }
    }
    if (!done) throw not_contracting{"no convergence within max_iter"};

    {
        const neumann_result nr = neumann_inverse(t, jnu, rh, hf, ntol);
        double fp = 0;
        for (auto k : g.nodes()) fp = std::max(fp, (w[k] - nr.w[k] - w1[k]).norm());
        res.fixed_point_residual = fp;
    }
    {
        const field4 dx = partial(g, w, 0), dy = partial(g, w, 1);
        double fd = 0;
        for (auto k : g.nodes()) {
            if (std::abs(g.point(k)) > 0.8 + 1e-12) continue;
            const vec4 d = 0.5 * (dx[k] + jnu[k] * dy[k]) + rh[k] * w[k] - hf[k];
            fd = std::max(fd, d.norm());
        }
        res.fd_residual = fd;
    }
    res.origin_error = (w[origin] - w0v).norm();
    res.w_sup = sup_norm(g, w);
    if (w0v.norm() > 0) {
        double dev = 0;
        for (auto k : g.nodes()) dev = std::max(dev, (w[k] - w0v).norm());
        res.stability = dev / w0v.norm();
    }
    res.u = zero_field(g);
    for (auto k : g.nodes()) res.u[k] = tu0[k] + complex_mult(ipow(g.point(k), nu)) * w[k];
    res.w = std::move(w);
    return res;
}

/// u0_d(zeta) = d^-mu u0(d zeta).
inline float_series dilate(const float_series& u0, int mu, double d)
{
    float_series s = u0;
    for (int k = 0; k <= s.order(); ++k)
        for (int c = 0; c < 2; ++c) s.at(k, c) *= std::pow(d, k - mu);
    return s;
}

/// J_d(z) = J(d^mu z).
inline structure_field dilate(const structure_field& j, int mu, double d)
{
    structure_field out = j;
    const double f = std::pow(d, mu);
    out.eval = [e = j.eval, f](const vec4& z) { return e(f * z); };
    if (out.lipschitz_bound) *out.lipschitz_bound *= f;
    return out;
}

}  // namespace detail

/// u = u0 + zeta^nu w with w(0) = w0, w real on the edge, and u J-holomorphic.
/// On loss of contraction the problem is dilated by 1/2 (up to max_rescales times).
inline solve_result solve_perturbation(const half_disk_series<float_complex>& u0, const structure_field& j, const solve_config& cfg)
{
    if (cfg.nu < 0) throw precondition_error("nu must be nonnegative");
    if (cfg.tol <= 0 || cfg.max_iter < 1) throw precondition_error("tol must be positive and max_iter at least 1");
    if (std::hypot(cfg.w0[0], cfg.w0[1]) > 0.5) throw precondition_error("w0 too large: L-infinity cap 1/2 violated");
    const int mu = u0.series().valuation();
    if (mu < 1) throw precondition_error("u0 must vanish at the origin and be nonzero");
    if (mu >= 2 && cfg.nu >= 1 && 2 * mu - 2 + (cfg.alpha - 1) * cfg.nu < 0)
        throw precondition_error("vanishing order too small for this nu and alpha");

    double d = 1;
    std::string last;
    for (int attempt = 0; attempt <= cfg.max_rescales; ++attempt) {
        const float_series us = attempt ? detail::dilate(u0.series(), mu, d) : u0.series();
        const structure_field js = attempt ? detail::dilate(j, mu, d) : j;
        const double f = std::pow(d, cfg.nu - mu);
        const std::array<double, 2> w0{cfg.w0[0] * f, cfg.w0[1] * f};
        if (std::hypot(w0[0], w0[1]) > 0.5) {
            last = "rescaled w0 exceeds the L-infinity cap";
            break;
        }
        try {
            solve_result r = detail::solve_once(us, js, cfg, w0);
            r.scale = d;
            r.rescales = attempt;
            return r;
        } catch (const detail::not_contracting& e) {
            last = e.why;
        }
        d *= 0.5;
    }
    throw convergence_error("no geometric contraction after rescaling: " + last);
}

struct cusp_result {
    solve_result solve;
    double a = 0;            ///< |w0| in the solved (possibly dilated) coordinates
    double radius = 0;       ///< verified radius, original coordinates
    double min_differential = 0;  ///< min |d_xi u| over the verified half-disk
    double sigma = 0;
    double c = 0;
    double a_lhs = 0, a_rhs = 0;
    double theoretical_radius = 0;  ///< original coordinates
};

/// u = u0 + zeta w with w(0) = a e2, e2 orthogonal to v0; checks |d_xi u| > |a|/3 near 0.
inline cusp_result smooth_cusp(const half_disk_series<float_complex>& u0, const structure_field& j, double a, solve_config cfg = {},
                               int max_halvings = 4)
{
    const auto nf = normal_form(u0.series());
    const int mu = nf.mu;
    if (mu < 2) throw precondition_error("smooth_cusp expects a cusp (vanishing order >= 2)");
    const double alpha = cfg.alpha;
    if (!(alpha > 0 && alpha < 1)) throw precondition_error("alpha must lie in (0, 1)");
    const double vn = std::hypot(nf.v0[0], nf.v0[1]);
    const std::array<double, 2> e2{-nf.v0[1] / vn, nf.v0[0] / vn};
    cfg.nu = 1;
    cfg.w0 = {a * e2[0], a * e2[1]};

    cusp_result out;
    out.solve = solve_perturbation(u0, j, cfg);
    const solve_result& s = out.solve;
    const disk_grid& g = *s.grid;
    const float_series du = s.u0.derivative();
    const vec4 w0v(s.w0[0], 0, s.w0[1], 0);
    const vec4 v0v(nf.v0[0], 0, nf.v0[1], 0);  // dilation by d leaves the leading coefficient fixed
    out.a = w0v.norm();

    const field4 dx = partial(g, s.w, 0);
    field4 dxu = zero_field(g);
    for (auto k : g.nodes()) {
        if (g.j_of(k) < 0) continue;
        const cplx z = g.point(k);
        const auto d = du.evaluate(z);
        dxu[k] = to_vec4(d[0], d[1]) + s.w[k] + complex_mult(z) * dx[k];
        if (z == cplx(0) || std::abs(z) > 0.5 + 1e-12) continue;
        const double rz = std::abs(z);
        const vec4 lead = complex_mult(double(mu) * detail::ipow(z, mu - 1)) * v0v;
        out.sigma = std::max(out.sigma, (to_vec4(d[0], d[1]) - lead).norm() / std::pow(rz, mu - 1 + alpha));
        if (out.a > 0)
            out.c = std::max(out.c, (s.w[k] + complex_mult(z) * dx[k] - w0v).norm() / (std::pow(rz, alpha) * out.a));
    }

    const double inf = std::numeric_limits<double>::infinity();
    out.a_lhs = std::pow(out.a, 2 * alpha / ((mu - 1.0) * (mu - 1.0) - alpha * alpha));
    out.a_rhs = (out.c > 0 ? std::pow(mu / (3 * out.c), 1 / (mu - 1 - alpha)) : inf) *
                (out.sigma > 0 ? std::pow(1 / (3 * out.sigma), 1 / (mu - 1 + alpha)) : inf);
    if (out.a > 0 && out.a_lhs > out.a_rhs) throw precondition_error("|a| violates the smallness condition for the measured sigma, C");
    out.theoretical_radius = s.scale * std::min(out.c > 0 ? std::pow(1 / (3 * out.c), 1 / alpha) : inf,
                                                out.sigma > 0 ? std::pow(mu / (3 * out.sigma), 1 / alpha) : inf);

    double radius = 0.5;
    for (int attempt = 0; attempt <= max_halvings; ++attempt, radius *= 0.5) {
        double least = inf;
        for (auto k : g.nodes()) {
            if (g.j_of(k) < 0 || std::abs(g.point(k)) > radius + 1e-12) continue;
            least = std::min(least, dxu[k].norm());
        }
        if (least > out.a / 3) {
            out.radius = radius * s.scale;
            out.min_differential = least;
            return out;
        }
    }
    throw verification_error("differential nearly vanishes near the origin: cusp not removed within the radius budget");
}

struct analytic_cusp_report {
    poly::dense<rational> gcd;  ///< monic gcd of the components of du
    bool nonvanishing = false;
};

/// Integrable case: u = u0 + a zeta e2 with e2 = (-v0_y, v0_x); du has no zero iff the gcd is constant.
inline analytic_cusp_report analytic_cusp_check(const half_disk_series<exact_complex>& u0, const rational& a)
{
    const auto& s = u0.series();
    const auto nf = normal_form(s);
    const std::array<rational, 2> e2{-nf.v0[1], nf.v0[0]};
    std::array<poly::dense<rational>, 2> p;
    for (int c = 0; c < 2; ++c) {
        for (int k = 1; k <= s.order(); ++k) p[c].push_back(s.at(k, c).re * k);
        if (p[c].empty()) p[c].push_back(0);
        p[c][0] += a * e2[c];
    }
    analytic_cusp_report r;
    r.gcd = poly::gcd(p[0], p[1]);
    r.nonvanishing = poly::degree(r.gcd) == 0;
    return r;
}

}  // namespace halfdisk
