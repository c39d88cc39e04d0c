#pragma once

#include <halfdisk/errors.hpp>

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <random>
#include <string>

namespace halfdisk {

/// Points of R^4 = C^2 are ordered (x1, y1, x2, y2) with z_k = x_k + i y_k.
using mat4 = Eigen::Matrix4d;
using vec4 = Eigen::Vector4d;

inline const mat4& standard_j()
{
    static const mat4 j = [] {
        mat4 m = mat4::Zero();
        m(1, 0) = 1;
        m(0, 1) = -1;
        m(3, 2) = 1;
        m(2, 3) = -1;
        return m;
    }();
    return j;
}

/// Complex conjugation (x1, y1, x2, y2) -> (x1, -y1, x2, -y2).
inline const mat4& conjugation()
{
    static const mat4 t = vec4(1, -1, 1, -1).asDiagonal();
    return t;
}

inline vec4 conj_point(const vec4& z) { return conjugation() * z; }

enum class regularity { constant, lipschitz, c1alpha };

inline const char* to_string(regularity r)
{
    switch (r) {
    case regularity::constant: return "constant";
    case regularity::lipschitz: return "lipschitz";
    default: return "c1alpha";
    }
}

/// z -> J(z). Parameter-space fields J_u on the half-disk use the point (xi, eta, 0, 0).
struct structure_field {
    std::function<mat4(const vec4&)> eval;
    regularity tag = regularity::lipschitz;
    std::optional<double> lipschitz_bound;
    bool rectified = false;
    std::string name;

    mat4 operator()(const vec4& z) const { return eval(z); }
};

inline bool is_complex_structure(const mat4& j, double tol = 1e-10)
{
    return ((j * j + mat4::Identity()).cwiseAbs().maxCoeff()) <= tol * std::max(1.0, j.squaredNorm());
}

inline structure_field standard_field()
{
    return {[](const vec4&) { return standard_j(); }, regularity::constant, 0.0, true, "standard"};
}

/// Lower block [[0, eta], [eta, 0]] on the z2 rows, eta = Im zeta.
inline mat4 eta_matrix(double eta)
{
    mat4 m = standard_j();
    m(2, 1) = eta;
    m(3, 0) = eta;
    return m;
}

inline structure_field eta_example()
{
    return {[](const vec4& z) { return eta_matrix(z[1]); }, regularity::c1alpha, 1.0, true, "eta_example"};
}

/// J^-(z) = -tau J(tau z) tau.
inline structure_field minus_structure(const structure_field& j)
{
    structure_field m = j;
    m.eval = [f = j.eval](const vec4& z) -> mat4 { return -(conjugation() * f(conj_point(z)) * conjugation()); };
    m.name = j.name.empty() ? "minus" : "minus:" + j.name;
    return m;
}

/// Extension of a half-disk structure J_u to the full disk: J_u above the edge, J_u^- below.
inline structure_field reflect_structure(const structure_field& ju, int edge_samples = 65, double tol = 1e-10)
{
    for (int k = 0; k < edge_samples; ++k) {
        double xi = -1.0 + 2.0 * k / (edge_samples - 1);
        if ((ju(vec4(xi, 0, 0, 0)) - standard_j()).cwiseAbs().maxCoeff() > tol)
            throw precondition_error("reflect_structure: J_u differs from J_st on the edge");
    }
    structure_field r = ju;
    r.eval = [f = ju.eval](const vec4& z) -> mat4 {
        if (z[1] >= 0) return f(z);
        return -(conjugation() * f(conj_point(z)) * conjugation());
    };
    r.name = ju.name.empty() ? "reflected" : "reflected:" + ju.name;
    if (r.tag == regularity::c1alpha) r.tag = regularity::lipschitz;
    return r;
}

/// Anti-linear (W J_st = -J_st W) matrix with Id - W^t W positive definite.
class anti_linear_contraction {
public:
    explicit anti_linear_contraction(const mat4& w, double tol = 1e-10) : w_(w)
    {
        const double scale = std::max(1.0, w.norm());
        if ((w * standard_j() + standard_j() * w).cwiseAbs().maxCoeff() > tol * scale)
            throw taming_error("W is not anti-linear");
        Eigen::SelfAdjointEigenSolver<mat4> es(mat4::Identity() - w.transpose() * w);
        if (!(es.eigenvalues().minCoeff() > 0)) throw taming_error("W is not a strict contraction (taming violated)");
    }
    const mat4& matrix() const { return w_; }
    double norm() const { return Eigen::JacobiSVD<mat4>(w_).singularValues()(0); }

private:
    mat4 w_;
};

namespace detail {

inline void require_conditioned(const mat4& m, const char* what)
{
    Eigen::JacobiSVD<mat4> svd(m);
    const auto& s = svd.singularValues();
    if (!(s(3) > 0) || s(0) / s(3) > 1e12) throw taming_error(what);
}

}  // namespace detail

/// W = -(J - J_st)(J + J_st)^{-1}.
inline anti_linear_contraction cayley_l(const mat4& j)
{
    const mat4 plus = j + standard_j();
    detail::require_conditioned(plus, "J + J_st singular: taming violated");
    const mat4 w = -(j - standard_j()) * plus.partialPivLu().inverse();
    return anti_linear_contraction(w);
}

inline mat4 cayley_k_matrix(const mat4& w)
{
    const mat4 minus = mat4::Identity() - w;
    detail::require_conditioned(minus, "Id - W singular");
    return standard_j() * (mat4::Identity() + w) * minus.partialPivLu().inverse();
}

/// J = J_st (Id + W)(Id - W)^{-1}.
inline mat4 cayley_k(const anti_linear_contraction& w) { return cayley_k_matrix(w.matrix()); }

/// Real 4x4 matrix of v -> M conj(v) for a complex 2x2 M.
inline mat4 anti_linear_matrix(const std::array<std::array<std::complex<double>, 2>, 2>& m)
{
    mat4 w = mat4::Zero();
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            const double a = m[r][c].real(), b = m[r][c].imag();
            w(2 * r, 2 * c) = a;
            w(2 * r, 2 * c + 1) = b;
            w(2 * r + 1, 2 * c) = b;
            w(2 * r + 1, 2 * c + 1) = -a;
        }
    return w;
}

/// Anti-linear matrix with Gaussian complex entries scaled to operator norm `norm`.
inline mat4 random_anti_linear(std::mt19937_64& rng, double norm)
{
    std::normal_distribution<double> g;
    std::array<std::array<std::complex<double>, 2>, 2> m;
    for (auto& row : m)
        for (auto& e : row) e = {g(rng), g(rng)};
    mat4 w = anti_linear_matrix(m);
    return w * (norm / Eigen::JacobiSVD<mat4>(w).singularValues()(0));
}

/// Cone cutoff on the unit sphere: 1 on {y1 >= C|y2|}, 0 on {y1 <= -C|y2|}, smoothstep between.
inline double cone_cutoff(const vec4& z, double cone_constant)
{
    const double a = z[1], b = cone_constant * std::abs(z[3]);
    if (a >= b && (a > 0 || b > 0)) return 1.0;
    if (a <= -b && (a < 0 || b > 0)) return 0.0;
    if (b == 0) return 0.5;  // y = 0: both cone values are J_st there
    const double t = std::clamp((a + b) / (2 * b), 0.0, 1.0);
    return t * t * (3 - 2 * t);
}

/// Conjugation-invariant structure equal to J on the cone y1 > C|y2| and to J^- on its mirror.
inline structure_field blend_cones(const structure_field& j, double cone_constant = 1.0)
{
    if (!(cone_constant > 0)) throw precondition_error("cone constant must be positive");
    if (!j.rectified) throw precondition_error("blend_cones requires a rectified structure");
    structure_field out = j;
    out.eval = [f = j.eval, cone_constant](const vec4& z) -> mat4 {
        const double chi = cone_cutoff(z, cone_constant);
        if (chi == 1.0) return f(z);
        const mat4 jm = -(conjugation() * f(conj_point(z)) * conjugation());
        if (chi == 0.0) return jm;
        const mat4 w = chi * cayley_l(f(z)).matrix() + (1 - chi) * cayley_l(jm).matrix();
        return cayley_k(anti_linear_contraction(w));
    };
    out.name = j.name.empty() ? "blend" : "blend:" + j.name;
    out.lipschitz_bound.reset();
    out.tag = regularity::lipschitz;
    return out;
}

/// Structure K(W(z)) with W(z) = (y1 A1 + y2 A2): rectified, J = J_st on R^2.
inline structure_field linear_cayley_field(const mat4& a1, const mat4& a2, std::string name)
{
    structure_field f;
    f.eval = [a1, a2](const vec4& z) -> mat4 { return cayley_k_matrix(z[1] * a1 + z[3] * a2); };
    f.tag = regularity::c1alpha;
    f.rectified = true;
    f.name = std::move(name);
    return f;
}

/// Random rectified tamed structure, W(z) = amplitude (y1 A1 + y2 A2) with unit-norm A_k.
inline structure_field random_tamed_field(std::mt19937_64& rng, double amplitude)
{
    mat4 a1 = random_anti_linear(rng, amplitude), a2 = random_anti_linear(rng, amplitude);
    return linear_cayley_field(a1, a2, "random_tamed");
}

/// Rectified structure for which zeta -> (zeta, 0) is holomorphic: W kills the z1-line.
inline structure_field tangent_adapted_field(double amplitude)
{
    using cd = std::complex<double>;
    mat4 a = anti_linear_matrix({{{cd(0), cd(0.6, 0.2)}, {cd(0), cd(0.3, -0.7)}}});
    mat4 b = anti_linear_matrix({{{cd(0), cd(-0.4, 0.5)}, {cd(0), cd(0.8, 0.1)}}});
    a *= amplitude / Eigen::JacobiSVD<mat4>(a).singularValues()(0);
    b *= amplitude / Eigen::JacobiSVD<mat4>(b).singularValues()(0);
    auto f = linear_cayley_field(a, b, "tangent_adapted");
    return f;
}

/// Rectified structure for which zeta -> (zeta^2, zeta^3) is holomorphic:
/// W(z) v = amplitude * y1 * b * (3 conj(z2) conj(v1) - 2 conj(z1) conj(v2)).
inline structure_field cusp_adapted_field(double amplitude)
{
    using cd = std::complex<double>;
    structure_field f;
    f.eval = [amplitude](const vec4& z) -> mat4 {
        const cd z1(z[0], z[1]), z2(z[2], z[3]);
        const std::array<cd, 2> b{cd(0.6, 0.3), cd(-0.2, 0.7)};
        const std::array<cd, 2> r{3.0 * std::conj(z2), -2.0 * std::conj(z1)};
        std::array<std::array<cd, 2>, 2> m;
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) m[i][k] = amplitude * z[1] * b[i] * r[k];
        return cayley_k_matrix(anti_linear_matrix(m));
    };
    f.tag = regularity::c1alpha;
    f.rectified = true;
    f.name = "cusp_adapted";
    return f;
}

inline double spectral_norm(const mat4& m) { return Eigen::JacobiSVD<mat4>(m).singularValues()(0); }

struct regularity_estimate {
    double sup = 0;        ///< sup |J - J_st|
    double lipschitz = 0;  ///< sup of difference quotients
    double c1() const { return std::max(sup, lipschitz); }
};

/// Difference quotients of J on a sample of the ball of the given radius (spectral norm).
inline regularity_estimate measure_regularity(const structure_field& j, double radius, int samples = 400, unsigned seed = 7,
                                              double step = 1e-5)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0, 1);
    regularity_estimate est;
    for (int s = 0; s < samples; ++s) {
        vec4 z(g(rng), g(rng), g(rng), g(rng));
        z *= radius * std::pow(u(rng), 0.25) / z.norm();
        vec4 d(g(rng), g(rng), g(rng), g(rng));
        d.normalize();
        const mat4 jz = j(z);
        est.sup = std::max(est.sup, spectral_norm(jz - standard_j()));
        est.lipschitz = std::max(est.lipschitz, spectral_norm(j(z + step * d) - j(z - step * d)) / (2 * step));
    }
    return est;
}

/// Rescales a structure of the form K(amplitude * W1(z)) so that its measured Lipschitz
/// constant on the ball equals `target`.
template <class Factory>
structure_field calibrate_lipschitz(Factory make, double target, double radius = 1.0)
{
    const double probe = 0.01;
    double lip = measure_regularity(make(probe), radius).lipschitz;
    if (!(lip > 0)) throw precondition_error("calibration: structure is constant");
    double amp = probe * target / lip;
    for (int it = 0; it < 4; ++it) {
        lip = measure_regularity(make(amp), radius).lipschitz;
        amp *= target / lip;
    }
    auto f = make(amp);
    f.lipschitz_bound = measure_regularity(f, radius).lipschitz;
    return f;
}

/// Same, targeting max(sup |J - J_st|, Lip) on the ball.
template <class Factory>
structure_field calibrate_c1(Factory make, double target, double radius = 1.0)
{
    const double probe = 0.01;
    double c1 = measure_regularity(make(probe), radius).c1();
    double amp = probe * target / c1;
    for (int it = 0; it < 4; ++it) {
        c1 = measure_regularity(make(amp), radius).c1();
        amp *= target / c1;
    }
    auto f = make(amp);
    f.lipschitz_bound = measure_regularity(f, radius).lipschitz;
    return f;
}

}  // namespace halfdisk
