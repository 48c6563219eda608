#pragma once

// Classical one-dimensional transforms and convolutions, written from their
// textbook formulas and applied axis by axis. They share no code with the
// N-dimensional machinery and serve as its reference for separable matrices.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "metaplectic/sigspace.hpp"

namespace metaplectic::classical {

/// Dense operator on one axis: out[j] = sum_m k[j][m] in[m].
using AxisOperator = std::vector<std::vector<cplx>>;

/// Plain Fourier integral, e^{-2 pi i t u}.
inline AxisOperator fourier_axis(const Grid& grid, std::size_t axis) {
    const std::size_t n = grid.count()[axis];
    const double dt = grid.step()[axis];
    AxisOperator k(n, std::vector<cplx>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t m = 0; m < n; ++m)
            k[j][m] = std::polar(dt, -2.0 * std::numbers::pi * grid.coord(axis, m) * grid.coord(axis, j));
    return k;
}

/// Fractional Fourier kernel without its unit-modulus constant:
/// |csc a|^{1/2} e^{pi i cot a (t^2 + u^2) - 2 pi i csc a t u}.
inline AxisOperator frft_axis(const Grid& grid, std::size_t axis, double alpha) {
    const std::size_t n = grid.count()[axis];
    const double dt = grid.step()[axis];
    const double cot = std::cos(alpha) / std::sin(alpha), csc = 1.0 / std::sin(alpha);
    AxisOperator k(n, std::vector<cplx>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const double u = grid.coord(axis, j);
        for (std::size_t m = 0; m < n; ++m) {
            const double t = grid.coord(axis, m);
            k[j][m] = std::polar(std::sqrt(std::abs(csc)) * dt,
                                 std::numbers::pi * cot * (t * t + u * u) - 2.0 * std::numbers::pi * csc * t * u);
        }
    }
    return k;
}

/// Linear canonical kernel for (a, b; c, d), b != 0:
/// |b|^{-1/2} e^{pi i (a t^2 - 2 t u + d u^2) / b}.
inline AxisOperator lct_axis(const Grid& grid, std::size_t axis, double a, double b, double d) {
    const std::size_t n = grid.count()[axis];
    const double dt = grid.step()[axis];
    AxisOperator k(n, std::vector<cplx>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const double u = grid.coord(axis, j);
        for (std::size_t m = 0; m < n; ++m) {
            const double t = grid.coord(axis, m);
            k[j][m] = std::polar(dt / std::sqrt(std::abs(b)), std::numbers::pi * (a * t * t - 2.0 * t * u + d * u * u) / b);
        }
    }
    return k;
}

/// Inverse LCT kernel, the parameters (d, -b, -c, a).
inline AxisOperator inverse_lct_axis(const Grid& grid, std::size_t axis, double a, double b, double d) {
    return lct_axis(grid, axis, d, -b, a);
}

inline std::vector<cplx> apply_axis(const Grid& grid, const std::vector<cplx>& x, std::size_t axis,
                                    const AxisOperator& k) {
    std::size_t inner = 1;
    for (std::size_t a = axis + 1; a < grid.dim(); ++a) inner *= grid.count()[a];
    const std::size_t len = grid.count()[axis];
    const std::size_t outer = x.size() / (len * inner);
    std::vector<cplx> out(x.size());
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < inner; ++i)
            for (std::size_t j = 0; j < len; ++j) {
                cplx acc = 0.0;
                for (std::size_t m = 0; m < len; ++m) acc += k[j][m] * x[(o * len + m) * inner + i];
                out[(o * len + j) * inner + i] = acc;
            }
    return out;
}

/// Applies one operator per axis.
inline Signal separable_apply(const Signal& f, const std::vector<AxisOperator>& ops) {
    std::vector<cplx> x(f.samples().begin(), f.samples().end());
    for (std::size_t axis = 0; axis < ops.size(); ++axis) x = apply_axis(f.grid(), x, axis, ops[axis]);
    return Signal(f.grid(), std::move(x));
}

/// Ordinary convolution of two sampled signals on a centered grid (0 at index
/// count/2 on every axis): z(t_i) = sum_j f(t_j) g(t_i - t_j) dt, with g taken
/// as zero off the grid.
inline Signal linear_convolution(const Signal& f, const Signal& g) {
    const Grid& grid = f.grid();
    const std::size_t n = grid.dim();
    std::vector<std::size_t> ii(n), jj(n), kk(n);
    std::vector<cplx> out(grid.size());
    const double w = riemann_weight(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.multi_index(i, ii);
        cplx acc = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            grid.multi_index(j, jj);
            bool inside = true;
            for (std::size_t k = 0; k < n && inside; ++k) {
                const long idx = static_cast<long>(ii[k]) - static_cast<long>(jj[k]) + static_cast<long>(grid.count()[k] / 2);
                inside = idx >= 0 && idx < static_cast<long>(grid.count()[k]);
                if (inside) kk[k] = static_cast<std::size_t>(idx);
            }
            if (inside) acc += f[j] * g[grid.flat_index(kk)];
        }
        out[i] = acc * w;
    }
    return Signal(grid, std::move(out));
}

/// Four-point Lagrange interpolation of 1-D samples (origin, step), zero
/// outside the sampled range.
inline cplx lagrange4(const std::vector<cplx>& s, double origin, double step, double x) {
    const double pos = (x - origin) / step;
    const long base = static_cast<long>(std::floor(pos));
    cplx acc = 0.0;
    for (long r = base - 1; r <= base + 2; ++r) {
        if (r < 0 || r >= static_cast<long>(s.size())) continue;
        double l = 1.0;
        for (long q = base - 1; q <= base + 2; ++q)
            if (q != r) l *= (pos - static_cast<double>(q)) / static_cast<double>(r - q);
        acc += l * s[static_cast<std::size_t>(r)];
    }
    return acc;
}

/// One-dimensional second-kind chirp convolution for the LCT (a, b; c, d):
/// sqrt2 |b|^{-1/2} int f(tau) g(sqrt2 t - tau) e^{2 pi i (a/b) (t/sqrt2 - tau)^2} dtau.
/// With a = 0, b = 1 this is the classical sqrt2 int f(tau) g(sqrt2 t - tau) dtau.
inline std::vector<cplx> second_kind_1d(const std::vector<cplx>& f, const std::vector<cplx>& g, double origin,
                                        double step, double a, double b) {
    std::vector<cplx> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double t = origin + step * static_cast<double>(i);
        cplx acc = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double tau = origin + step * static_cast<double>(j);
            const double d = t / std::numbers::sqrt2 - tau;
            acc += f[j] * lagrange4(g, origin, step, std::numbers::sqrt2 * t - tau) *
                   std::polar(1.0, 2.0 * std::numbers::pi * (a / b) * d * d);
        }
        out[i] = acc * (std::numbers::sqrt2 / std::sqrt(std::abs(b)) * step);
    }
    return out;
}

/// Outer product of per-axis factors in row-major order.
inline Signal outer(const Grid& grid, const std::vector<std::vector<cplx>>& factors) {
    std::vector<cplx> out(grid.size());
    std::vector<std::size_t> idx(grid.dim());
    for (std::size_t j = 0; j < out.size(); ++j) {
        grid.multi_index(j, idx);
        cplx v = 1.0;
        for (std::size_t k = 0; k < grid.dim(); ++k) v *= factors[k][idx[k]];
        out[j] = v;
    }
    return Signal(grid, std::move(out));
}

}  // namespace metaplectic::classical
