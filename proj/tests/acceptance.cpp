// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "support.hpp"

#include <halfdisk/adjunction.hpp>
#include <halfdisk/cauchy_green.hpp>
#include <halfdisk/comparison.hpp>
#include <halfdisk/intersection.hpp>
#include <halfdisk/solver.hpp>
#include <halfdisk/structures.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace hdtest;

namespace {

struct outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok && pass) detail << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<void(outcome&)>& body)
{
    outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << "exception: " << e.what() << "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0 && secs >= budget_s) {
        o.pass = false;
        o.detail << "over time budget " << budget_s << " s; ";
    }
    std::printf("%s [%2d] %s: %s(%.3f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.str().c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

rational nonzero_rational(std::mt19937_64& rng)
{
    rational r = random_rational(rng);
    while (r == 0) r = random_rational(rng);
    return r;
}

/// Random tangent pair sharing the linear term v0; the second curve is u1(psi) plus c zeta^d n with n normal to v0.
std::pair<exact_series, exact_series> tangent_pair(std::mt19937_64& rng, int d, int order, bool meeting)
{
    std::array<rational, 2> v0{random_rational(rng, 1, 2) + q(3), random_rational(rng, 1, 2)};  // v0[0] in [1, 5]
    auto u1 = random_curve(rng, v0, 6, order, q(1, 3));
    exact_series psi = scalar({0, 1}, order);
    psi.at(2) = exact_complex(random_rational(rng, 1, 4));
    auto u2 = compose(u1, psi);
    const rational c = nonzero_rational(rng);
    u2.at(d, 0) += exact_complex(rational(-c * v0[1]));
    u2.at(d, 1) += exact_complex(rational(c * v0[0]));
    for (int k = d + 1; k <= std::min(order, d + 3); ++k)
        for (int j = 0; j < 2; ++j) u2.at(k, j) += exact_complex(rational(random_rational(rng) * q(1, 4)));
    if (meeting) u2 = compose(u2, scalar({0, -1}, order));
    return {u1, u2};
}

half_disk_series<float_complex> line_germ() { return half_disk_series<float_complex>(real_vector_series<float_complex>({{0, 0}, {1, 0}}, 8)); }

double max_abs(const mat4& m) { return m.cwiseAbs().maxCoeff(); }

vec4 random_point(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1, 1);
    return vec4(u(rng), u(rng), u(rng), u(rng));
}

}  // namespace

int main()
{
    criterion(1, "series index equals tangency order, d = 1..6", 1.0, [](outcome& o) {
        std::mt19937_64 rng(101);
        auto flat = vec({{0, 0}, {1, 0}}, 16);
        for (int d = 1; d <= 6; ++d) {
            exact_series u2(2, 16);
            u2.at(1, 0) = exact_complex(1);
            u2.at(d, 1) += exact_complex(nonzero_rational(rng));
            for (int k = d + 1; k <= d + 4; ++k)
                for (int j = 0; j < 2; ++j) u2.at(k, j) += exact_complex(random_rational(rng));
            const int idx = boundary_index_series(flat, u2).index;
            o.require(idx == d, "d = " + std::to_string(d) + " gave index " + std::to_string(idx));
            o.detail << idx << (d < 6 ? "," : "; ");
        }
    });

    criterion(2, "positivity sweep: 200 tangent pairs index >= 2, 200 transverse index 1", 10.0, [](outcome& o) {
        std::mt19937_64 rng(202);
        int min_tangent = 1 << 30, meeting = 0;
        for (int t = 0; t < 200; ++t) {
            const int d = 2 + t % 5;
            const bool meet = t % 4 == 3;
            auto [u1, u2] = tangent_pair(rng, d, 16, meet);
            const int idx = boundary_index_series(u1, u2).index;
            min_tangent = std::min(min_tangent, idx);
            meeting += meet;
            o.require(idx >= 2, "tangent pair " + std::to_string(t) + " has index " + std::to_string(idx));
        }
        int transverse_ok = 0;
        for (int t = 0; t < 200; ++t) {
            auto u1 = random_curve(rng, {nonzero_rational(rng), random_rational(rng)}, 6, 16, q(1, 3));
            std::array<rational, 2> w{random_rational(rng), random_rational(rng)};
            // force w off the line of v0
            while (rational(w[0] * u1.at(1, 1).re - w[1] * u1.at(1, 0).re) == 0) w[1] += q(1);
            auto u2 = random_curve(rng, w, 6, 16, q(1, 3));
            const int idx = boundary_index_series(u1, u2).index;
            transverse_ok += idx == 1;
            o.require(idx == 1, "transverse pair " + std::to_string(t) + " has index " + std::to_string(idx));
        }
        o.detail << "min tangent index " << min_tangent << " (" << meeting << " meeting), transverse index 1 in " << transverse_ok
                 << "/200; ";
    });

    criterion(3, "series index = rounded linking index on 50 pairs, residual < 0.1", 60.0, [](outcome& o) {
        std::mt19937_64 rng(303);
        double worst = 0;
        int agree = 0;
        for (int t = 0; t < 50; ++t) {
            const int d = 1 + t % 5;
            exact_series u1, u2;
            if (d == 1) {
                u1 = random_curve(rng, {q(1), random_rational(rng, 1, 4)}, 4, 12, q(1, 3));
                u2 = random_curve(rng, {random_rational(rng, 1, 4), q(1)}, 4, 12, q(1, 3));
            } else {
                std::tie(u1, u2) = tangent_pair(rng, d, 12, t % 7 == 3);
            }
            const int s = boundary_index_series(u1, u2).index;
            linking_options opt;
            opt.samples = 512;
            auto l = boundary_index_linking(u1, u2, opt);
            worst = std::max(worst, l.residual);
            agree += s == l.index;
            o.require(s == l.index, "pair " + std::to_string(t) + ": series " + std::to_string(s) + " vs linking " + std::to_string(l.index));
            o.require(l.residual < 0.1, "pair " + std::to_string(t) + " residual " + std::to_string(l.residual));
        }
        o.detail << agree << "/50 agree, worst residual " << worst << "; ";
    });

    criterion(4, "split count: d simple real roots for d = 2..5 (exact)", 0, [](outcome& o) {
        std::mt19937_64 rng(404);
        auto flat = vec({{0, 0}, {1, 0}}, 16);
        int cases = 0;
        for (int d = 2; d <= 5; ++d)
            for (int t = 0; t < 5; ++t) {
                exact_series u2(2, 16);
                u2.at(1, 0) = exact_complex(1);
                u2.at(d, 1) = exact_complex(nonzero_rational(rng));
                if (t > 0)
                    for (int k = d + 1; k <= d + 3; ++k) u2.at(k, 1) = exact_complex(random_rational(rng));
                auto s = split_to_transverse(flat, u2, q(1, 1000));
                auto v = verify_split(s);
                ++cases;
                o.require(s.index == d && int(s.roots.size()) == d && v.sturm_count == d && !v.repeated_real && v.ok,
                          "d = " + std::to_string(d) + " trial " + std::to_string(t) + ": sturm " + std::to_string(v.sturm_count));
            }
        o.detail << cases << " splits verified by Sturm count; ";
    });

    criterion(5, "comparison closure on 100 random pairs (exact)", 0, [](outcome& o) {
        std::mt19937_64 rng(505);
        int closed = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const int mu = 1 + trial % 2;
            exact_series u1(2, 16);
            u1.at(mu, 0) = exact_complex(random_rational(rng) + q(5));
            u1.at(mu, 1) = exact_complex(random_rational(rng));
            for (int k = mu + 1; k <= 9; ++k)
                for (int j = 0; j < 2; ++j) u1.at(k, j) = exact_complex(random_rational(rng));
            exact_series psi0 = scalar({0, 1}, 16);
            for (int k = 2; k <= 4; ++k) psi0.at(k) = exact_complex(random_rational(rng));
            exact_series u2 = compose(u1, psi0);
            const int nu = mu + 2 + trial % 4;
            u2.at(nu, 0) += exact_complex(random_rational(rng));
            u2.at(nu, 1) += exact_complex(random_rational(rng) + q(10));
            const bool meeting = mu == 1 && trial % 3 == 0;
            if (meeting) u2 = compose(u2, scalar({0, -1}, 16));
            auto r = compare(u1, u2);
            if (r.reparametrization()) {
                o.require(false, "trial " + std::to_string(trial) + " reported a reparametrization");
                continue;
            }
            exact_series lhs = r.kind == contact_kind::meeting ? compose(u2, scalar({0, -1}, 16)) : u2;
            exact_series rhs = compose(u1, r.psi);
            exact_series shifted(2, lhs.order());
            for (int k = 0; k <= r.w.order() && k + *r.nu <= lhs.order(); ++k)
                for (int j = 0; j < 2; ++j) shifted.at(k + *r.nu, j) = r.w.at(k, j);
            const bool identity = (lhs - (rhs + shifted)).is_zero();
            auto nf = normal_form(u1);
            const bool normal = rational(r.w0[0] * nf.v0[0] + r.w0[1] * nf.v0[1]) == 0;
            const bool ok = identity && *r.nu > mu && normal && r.psi.is_real() && r.psi.at(1) == exact_complex(1) &&
                            r.psi.at(0) == exact_complex(0);
            closed += ok;
            o.require(ok, "trial " + std::to_string(trial));
        }
        o.detail << closed << "/100 closed; ";
    });

    criterion(6, "Cauchy-Green dbar residual order >= 0.9, T(1) - conj(z) < 5h", 0, [](outcome& o) {
        std::vector<double> r_one, r_smooth;
        for (int n : {32, 64, 128}) {
            disk_grid g(n);
            cauchy_green_operator T(g);
            scalar_field one(g.size(), 0.0), f(g.size(), 0.0);
            for (auto k : g.nodes()) {
                const cplx z = g.point(k);
                one[k] = 1.0;
                f[k] = std::exp(z) * std::cos(2.0 * z.imag()) + cplx(0.3, -0.2) * std::conj(z) * z.real();
            }
            auto t1 = T.apply(one), tf = T.apply(f);
            auto d1 = dbar(g, t1), df = dbar(g, tf);
            double e1 = 0, ef = 0, tz = 0;
            for (auto k : g.nodes()) {
                tz = std::max(tz, std::abs(t1[k] - std::conj(g.point(k))));
                if (std::abs(g.point(k)) > 0.8) continue;
                e1 = std::max(e1, std::abs(d1[k] - one[k]));
                ef = std::max(ef, std::abs(df[k] - f[k]));
            }
            r_one.push_back(e1);
            r_smooth.push_back(ef);
            o.require(tz < 5 * g.h(), "T(1) error " + std::to_string(tz) + " at n = " + std::to_string(n));
        }
        double min_order = 1e300;
        for (auto* r : {&r_one, &r_smooth})
            for (int i = 0; i < 2; ++i) min_order = std::min(min_order, std::log2((*r)[i] / (*r)[i + 1]));
        o.require(min_order >= 0.9, "measured order " + std::to_string(min_order));
        o.detail << "residuals f=1 " << r_one[0] << "," << r_one[1] << "," << r_one[2] << " smooth " << r_smooth[0] << "," << r_smooth[1]
                 << "," << r_smooth[2] << ", min order " << min_order << "; ";
    });

    criterion(7, "perturbation solver contract at h = 1/64", 0, [](outcome& o) {
        solve_config cfg;
        cfg.cells_per_unit = 64;
        cfg.w0 = {0, 0.1};
        auto integrable = solve_perturbation(line_germ(), standard_field(), cfg);
        bool exact = integrable.discrete_residual == 0.0;
        for (auto k : integrable.grid->nodes()) exact = exact && integrable.w[k] == vec4(0, 0, 0.1, 0);
        o.require(exact, "integrable case not reproduced exactly");

        const auto lip005 = calibrate_lipschitz([](double a) { return tangent_adapted_field(a); }, 0.05);
        cfg.w0 = {0, 0.01};
        const auto t0 = std::chrono::steady_clock::now();
        auto r = solve_perturbation(line_germ(), lip005, cfg);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.require(r.max_ratio <= 0.9, "ratio " + std::to_string(r.max_ratio));
        o.require(r.discrete_residual <= 1e-6, "residual " + std::to_string(r.discrete_residual));
        o.require(r.origin_error == 0.0, "w(0) differs from w0");
        o.require(r.reality_residual <= 1e-12, "reality residual " + std::to_string(r.reality_residual));
        o.require(secs < 120, "solve took " + std::to_string(secs) + " s");

        std::vector<double> cs;
        const std::array<std::array<double, 2>, 3> pairs{{{0.005, 0.01}, {0.01, 0.02}, {0.02, 0.04}}};
        for (auto [a, b] : pairs) {
            cfg.w0 = {0, a};
            auto r1 = solve_perturbation(line_germ(), lip005, cfg);
            cfg.w0 = {0.3 * b, b};
            auto r2 = solve_perturbation(line_germ(), lip005, cfg);
            double diff = 0;
            for (auto k : r1.grid->nodes()) diff = std::max(diff, (r1.w[k] - r2.w[k]).norm());
            cs.push_back(diff / std::hypot(0.3 * b, b - a));
        }
        const auto [lo, hi] = std::minmax_element(cs.begin(), cs.end());
        o.require(*hi / *lo <= 2.0, "stability constants spread " + std::to_string(*hi / *lo));
        o.detail << "ratio " << r.max_ratio << ", residual " << r.discrete_residual << ", reality " << r.reality_residual
                 << ", stability C in [" << *lo << ", " << *hi << "], solve " << secs << " s; ";
    });

    criterion(8, "cusp smoothing: analytic integrable case and perturbed C^1,a = 0.02 case", 0, [](outcome& o) {
        auto exact_cusp = half_disk_series<exact_complex>(real_vector_series<exact_complex>({{0, 0}, {0, 0}, {1, 0}, {0, 1}}, 8));
        auto a = analytic_cusp_check(exact_cusp, rational(1, 10));
        o.require(a.nonvanishing, "integrable case: du has a zero");
        const auto c1 = calibrate_c1([](double s) { return cusp_adapted_field(s); }, 0.02);
        solve_config cfg;
        cfg.cells_per_unit = 64;
        auto germ = half_disk_series<float_complex>(real_vector_series<float_complex>({{0, 0}, {0, 0}, {1, 0}, {0, 1}}, 8));
        auto r = smooth_cusp(germ, c1, 0.05, cfg);
        o.require(r.radius > 0, "no verified radius");
        o.detail << "gcd degree " << (a.gcd.size() - 1) << ", perturbed radius " << r.radius << ", min |du| " << r.min_differential << "; ";
    });

    criterion(9, "Maslov table and adjunction closure over 1000 move sequences", 1.0, [](outcome& o) {
        for (int g = 0; g <= 2; ++g)
            for (int s = 1; s <= 3; ++s) {
                // tangent index of the double = Euler characteristic of the closed double
                const long chi_double = 2 * (2 - 2L * g - s);
                o.require(maslov_tangent(g, s) == chi_double, "table entry g = " + std::to_string(g) + ", sigma = " + std::to_string(s));
            }
        std::mt19937_64 rng(909);
        std::uniform_int_distribution<int> gd(0, 2), sd(1, 3), md(-8, 8), len(5, 30);
        long steps = 0, literal_checks = 0;
        for (int seq = 0; seq < 1000; ++seq) {
            const int g = gd(rng), s = sd(rng);
            const long m = md(rng);
            curve_config c{g, s, 0, 0, 0, m, m + maslov_tangent(g, s), m};
            o.require(check_adjunction(c).equal(), "seed not equal");
            for (int k = len(rng); k > 0; --k) {
                if (c.g == 0 && c.sigma == 1 && c.delta_i == 0 && c.kappa_i == 0 && c.delta_b == 0) break;
                const auto mv = random_move(c, rng);
                ++steps;
                o.require(check_adjunction(mv.after).equal(), std::string("adjunction broken by ") + to_string(mv.kind));
                o.require(mv.after.double_sq == c.double_sq && mv.after.maslov_total == c.maslov_total, "move changed an invariant");
                o.require(mv.after.double_sq == consistent_double_sq(mv.after), "double_sq drifted");
                if (mv.after.kappa_i == 0 && mv.after.delta_b == 0) {
                    ++literal_checks;
                    o.require(mv.after.double_sq == mv.after.normal_maslov + 4L * mv.after.delta_i, "double_sq != normal + 4 delta_i");
                }
                c = mv.after;
            }
        }
        o.detail << steps << " moves, " << literal_checks << " immersed-form checks; ";
    });

    criterion(10, "structure calculus on 100 random tamed structures, eta reflection", 0, [](outcome& o) {
        std::mt19937_64 rng(1010);
        double worst = 0;
        for (int k = 0; k < 100; ++k) {
            auto j = random_tamed_field(rng, 0.4);
            const vec4 z = random_point(rng);
            const mat4 jz = j(z);
            worst = std::max(worst, max_abs(cayley_k(cayley_l(jz)) - jz));
            const mat4 wr = random_anti_linear(rng, 0.5);
            worst = std::max(worst, max_abs(cayley_l(cayley_k(anti_linear_contraction(wr))).matrix() - wr));
            auto b = blend_cones(j, 1.0);
            auto jm = minus_structure(j);
            const vec4 plus(z[0], std::abs(z[3]) + 0.1 + std::abs(z[1]), z[2], z[3]);
            worst = std::max(worst, max_abs(b(plus) - j(plus)));
            worst = std::max(worst, max_abs(b(conj_point(plus)) - jm(conj_point(plus))));
            worst = std::max(worst, max_abs(b(conj_point(z)) + conjugation() * b(z) * conjugation()));
        }
        o.require(worst <= 1e-10, "worst deviation " + std::to_string(worst));
        auto r = reflect_structure(eta_example());
        bool exact = true;
        for (double eta : {-0.9, -0.5, -0.25, -1e-3, 0.0, 0.3, 0.8})
            exact = exact && r(vec4(0.2, eta, 0, 0)) == eta_matrix(std::abs(eta));
        o.require(exact, "reflected eta example differs from the |eta| matrix");
        o.detail << "worst deviation " << worst << ", eta reflection exact; ";
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
