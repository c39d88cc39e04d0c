#pragma once

#include <halfdisk/grid.hpp>

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <numbers>

namespace halfdisk {

/// Integral of 1/zeta over the axis-aligned square of side h centred at (cx, cy).
inline cplx cell_integral_inverse(double cx, double cy, double h)
{
    // d^2/dx dy of G is x/r^2, of H is y/r^2; 1/zeta = (x - i y)/r^2
    auto G = [](double x, double y) { return 0.5 * y * std::log(x * x + y * y) + x * std::atan(y / x); };
    auto H = [](double x, double y) { return 0.5 * x * std::log(x * x + y * y) + y * std::atan(x / y); };
    const double x1 = cx - 0.5 * h, x2 = cx + 0.5 * h, y1 = cy - 0.5 * h, y2 = cy + 0.5 * h;
    auto corners = [&](auto F) { return F(x2, y2) - F(x1, y2) - F(x2, y1) + F(x1, y1); };
    return {corners(G), -corners(H)};
}

namespace detail {

struct fftw_buffer {
    fftw_complex* p = nullptr;
    explicit fftw_buffer(std::size_t n) : p(fftw_alloc_complex(n)) {}
    ~fftw_buffer() { fftw_free(p); }
    fftw_buffer(const fftw_buffer&) = delete;
    fftw_buffer& operator=(const fftw_buffer&) = delete;
};

struct fftw_plan_holder {
    fftw_plan plan = nullptr;
    ~fftw_plan_holder()
    {
        if (plan) fftw_destroy_plan(plan);
    }
};

}  // namespace detail

/// Discrete Cauchy-Green operator T f(z) = -(1/pi) int_D f(zeta) / (zeta - z) dA.
///
/// f is taken constant on each node's cell (weighted by the cell's area fraction in the
/// disk) and the kernel is integrated exactly over each cell, so the singular cell is
/// handled without special casing. The discrete convolution runs through FFTW.
class cauchy_green_operator {
public:
    explicit cauchy_green_operator(const disk_grid& g)
        : grid_(g), n_(2 * g.side()), kernel_(std::size_t(n_) * n_), work_(std::size_t(n_) * n_)
    {
        forward_.plan = fftw_plan_dft_2d(n_, n_, work_.p, work_.p, FFTW_FORWARD, FFTW_ESTIMATE);
        backward_.plan = fftw_plan_dft_2d(n_, n_, work_.p, work_.p, FFTW_BACKWARD, FFTW_ESTIMATE);
        const int reach = g.side() - 1;
        const double h = g.h();
        for (std::size_t k = 0; k < std::size_t(n_) * n_; ++k) work_.p[k][0] = work_.p[k][1] = 0;
        for (int dj = -reach; dj <= reach; ++dj)
            for (int di = -reach; di <= reach; ++di) {
                // out_k = sum_j g_j I(z_j - z_k) / (-pi), and I is odd: convolve with I / pi
                cplx v = cell_integral_inverse(di * h, dj * h, h) / std::numbers::pi;
                const std::size_t idx = std::size_t((dj + n_) % n_) * n_ + std::size_t((di + n_) % n_);
                work_.p[idx][0] = v.real();
                work_.p[idx][1] = v.imag();
            }
        fftw_execute(forward_.plan);
        const double norm = 1.0 / (double(n_) * n_);
        for (std::size_t k = 0; k < std::size_t(n_) * n_; ++k) {
            kernel_.p[k][0] = work_.p[k][0] * norm;
            kernel_.p[k][1] = work_.p[k][1] * norm;
        }
    }

    const disk_grid& grid() const { return grid_; }

    scalar_field apply(const scalar_field& f) const
    {
        const int side = grid_.side();
        for (std::size_t k = 0; k < std::size_t(n_) * n_; ++k) work_.p[k][0] = work_.p[k][1] = 0;
        for (auto k : grid_.nodes()) {
            const cplx v = f[k] * grid_.fraction(k);
            const std::size_t idx = std::size_t(grid_.j_of(k) + grid_.m()) * n_ + std::size_t(grid_.i_of(k) + grid_.m());
            work_.p[idx][0] = v.real();
            work_.p[idx][1] = v.imag();
        }
        fftw_execute(forward_.plan);
        for (std::size_t k = 0; k < std::size_t(n_) * n_; ++k) {
            const cplx a(work_.p[k][0], work_.p[k][1]), b(kernel_.p[k][0], kernel_.p[k][1]);
            const cplx c = a * b;
            work_.p[k][0] = c.real();
            work_.p[k][1] = c.imag();
        }
        fftw_execute(backward_.plan);
        scalar_field out(f.size(), 0.0);
        (void)side;
        for (auto k : grid_.nodes()) {
            const std::size_t idx = std::size_t(grid_.j_of(k) + grid_.m()) * n_ + std::size_t(grid_.i_of(k) + grid_.m());
            out[k] = {work_.p[idx][0], work_.p[idx][1]};
        }
        return out;
    }

    /// T f - (T f)(0).
    scalar_field apply_normalized(const scalar_field& f) const
    {
        scalar_field out = apply(f);
        const cplx at0 = out[grid_.origin()];
        for (auto k : grid_.nodes()) out[k] -= at0;
        return out;
    }

    /// Componentwise on C^2-valued fields, normalized at the origin.
    field4 apply_normalized(const field4& f) const
    {
        field4 out = zero_field(grid_);
        for (int c = 0; c < 2; ++c) {
            scalar_field s(f.size());
            for (auto k : grid_.nodes()) s[k] = component(f[k], c);
            auto t = apply_normalized(s);
            for (auto k : grid_.nodes()) {
                out[k][2 * c] = t[k].real();
                out[k][2 * c + 1] = t[k].imag();
            }
        }
        return out;
    }

private:
    const disk_grid& grid_;
    int n_;
    detail::fftw_buffer kernel_;
    mutable detail::fftw_buffer work_;
    detail::fftw_plan_holder forward_, backward_;
};

}  // namespace halfdisk
