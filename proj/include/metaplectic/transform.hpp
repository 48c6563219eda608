#pragma once

// Free metaplectic transform
//
//   F(u) = int f(t) K(t, u) dt,
//   K(t, u) = |det B|^{-1/2} exp(pi i (u Q u^T + t P t^T) - 2 pi i t B^-1 u^T),
//
// with P = B^-1 A, Q = D B^-1 and t, u row vectors. Two evaluation routes are
// kept side by side:
//
//   DirectQuadrature  sums f(t) K(t, u) over every (t, u) pair. O(P Q), used as
//                     the reference.
//   ChirpFourier      F(u) = |det B|^{-1/2} e^{pi i u Q u^T} h^(u B^-T),
//                     h(t) = f(t) e^{pi i t P t^T}, h^ the 2 pi Fourier
//                     integral. The Fourier integral runs through FFTs when B
//                     is diagonal and the grids are aligned
//                     (|out_step / b_kk| * in_step * count = 1 on every axis),
//                     otherwise through the factorized nonuniform sum.
//
// Output sampling is the caller's choice. No anti-aliasing is attempted: the
// grids have to cover the phase-space footprint of the signal and its image.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "metaplectic/fourier_sum.hpp"
#include "metaplectic/sigspace.hpp"
#include "metaplectic/symplectic.hpp"

namespace metaplectic {

namespace detail {

inline double quad_form(const Matrix& m, const double* x, Eigen::Index n) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) row += m(i, j) * x[j];
        s += x[i] * row;
    }
    return s;
}

inline double bilinear(const Matrix& m, const double* x, const double* y, Eigen::Index n) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) s += x[i] * m(i, j) * y[j];
    return s;
}

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace detail

/// Kernel evaluator with P and Q symmetrized once, so validation-level
/// asymmetry cannot leak into the quadratic phases.
class Kernel {
public:
    explicit Kernel(const SymplecticMatrix& m)
        : n_(m.dim()),
          p_(detail::symmetrized(m.p())),
          q_(detail::symmetrized(m.q())),
          b_inv_(m.b_inv()),
          norm_(1.0 / std::sqrt(std::abs(m.det_b()))) {}

    cplx operator()(const double* t, const double* u) const {
        const double phase = std::numbers::pi * (detail::quad_form(q_, u, n_) + detail::quad_form(p_, t, n_)) -
                             2.0 * std::numbers::pi * detail::bilinear(b_inv_, t, u, n_);
        return std::polar(norm_, phase);
    }

    double norm() const noexcept { return norm_; }

private:
    Eigen::Index n_;
    Matrix p_, q_, b_inv_;
    double norm_;
};

inline cplx kernel_eval(const SymplecticMatrix& m, std::span<const double> t, std::span<const double> u) {
    require(t.size() == static_cast<std::size_t>(m.dim()) && u.size() == static_cast<std::size_t>(m.dim()),
            ErrorCode::DimMismatch, "kernel arguments must have N entries");
    return Kernel(m)(t.data(), u.data());
}

/// The inverse-transform kernel written out from the blocks of M:
/// |det B|^{-1/2} exp(-pi i (u B^-T D^T u^T + t A^T B^-T t^T) + 2 pi i u B^-T t^T).
inline cplx inverse_kernel_eval(const SymplecticMatrix& m, std::span<const double> u, std::span<const double> t) {
    const auto n = m.dim();
    require(t.size() == static_cast<std::size_t>(n) && u.size() == static_cast<std::size_t>(n),
            ErrorCode::DimMismatch, "kernel arguments must have N entries");
    const Matrix bt_inv = m.b_inv_t();
    const Matrix uq = bt_inv * m.d().transpose();
    const Matrix tp = m.a().transpose() * bt_inv;
    const double phase = -std::numbers::pi * (detail::quad_form(uq, u.data(), n) + detail::quad_form(tp, t.data(), n)) +
                         2.0 * std::numbers::pi * detail::bilinear(bt_inv, u.data(), t.data(), n);
    return std::polar(1.0 / std::sqrt(std::abs(m.det_b())), phase);
}

/// Largest |K_{M^-1}(u, t) - inverse_kernel_eval(M, u, t)| over `samples`
/// (t, u) pairs spread across the two grids, scaled by 1 / (1 + |phase|).
inline double inverse_kernel_deviation(const SymplecticMatrix& m, const Grid& t_grid, const Grid& u_grid,
                                       std::size_t samples = 16) {
    const SymplecticMatrix inv = inverse(m);
    const Kernel k_inv(inv);
    std::vector<double> t(t_grid.dim()), u(u_grid.dim());
    double worst = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t jt = (s * 7919u) % t_grid.size();
        const std::size_t ju = (s * 104729u + t_grid.size() / 3) % u_grid.size();
        t_grid.point(jt, t);
        u_grid.point(ju, u);
        const cplx lhs = k_inv(u.data(), t.data());
        const cplx rhs = inverse_kernel_eval(m, u, t);
        double mag = 1.0;
        for (double x : t) mag += x * x;
        for (double x : u) mag += x * x;
        worst = std::max(worst, std::abs(lhs - rhs) / (k_inv.norm() * mag));
    }
    return worst;
}

enum class Method { DirectQuadrature, ChirpFourier };

/// Everything about a transform that does not depend on the input samples.
class FmtPlan {
public:
    FmtPlan(const SymplecticMatrix& m, Grid in_grid, Grid out_grid, Method method)
        : matrix_(m), in_(std::move(in_grid)), out_(std::move(out_grid)), method_(method), kernel_(m) {
        const auto n = static_cast<std::size_t>(m.dim());
        require(in_.dim() == n && out_.dim() == n, ErrorCode::DimMismatch,
                "grid dimensions must match the matrix dimension");
        if (method_ == Method::DirectQuadrature) return;

        const Matrix p = detail::symmetrized(m.p());
        const Matrix q = detail::symmetrized(m.q());
        std::vector<double> x(n);
        in_chirp_.resize(in_.size());
        for (std::size_t j = 0; j < in_.size(); ++j) {
            in_.point(j, x);
            in_chirp_[j] = std::polar(1.0, std::numbers::pi * detail::quad_form(p, x.data(), m.dim()));
        }
        out_chirp_.resize(out_.size());
        for (std::size_t j = 0; j < out_.size(); ++j) {
            out_.point(j, x);
            out_chirp_[j] = std::polar(1.0, std::numbers::pi * detail::quad_form(q, x.data(), m.dim()));
        }
        sum_.emplace(in_, out_, m.b_inv(), -1);
    }

    const SymplecticMatrix& matrix() const noexcept { return matrix_; }
    const Grid& in_grid() const noexcept { return in_; }
    const Grid& out_grid() const noexcept { return out_; }
    Method method() const noexcept { return method_; }
    bool uses_fft() const noexcept { return sum_ && sum_->aligned(); }
    std::span<const cplx> input_chirp() const noexcept { return in_chirp_; }
    std::span<const cplx> output_chirp() const noexcept { return out_chirp_; }

    Signal execute(const Signal& f) const {
        require(f.grid().dim() == in_.dim(), ErrorCode::DimMismatch, "signal dimension does not match the plan");
        require(f.grid() == in_, ErrorCode::GridMismatch, "signal grid does not match the plan input grid");
        return method_ == Method::DirectQuadrature ? direct(f) : fast(f);
    }

private:
    // Kernel exponent split as pi t P t + pi u Q u - 2 pi t . (B^-1 u): the
    // quadratic parts are tabulated per point, the cross term per pair.
    Signal direct(const Signal& f) const {
        const Eigen::Index n = matrix_.dim();
        const Matrix t_pts = in_.points();
        const Matrix u_pts = out_.points();
        const Matrix w_pts = matrix_.b_inv() * u_pts;
        const Matrix p = detail::symmetrized(matrix_.p());
        const Matrix q = detail::symmetrized(matrix_.q());
        std::vector<double> t_phase(in_.size());
        for (std::size_t m = 0; m < in_.size(); ++m)
            t_phase[m] = std::numbers::pi * detail::quad_form(p, t_pts.col(static_cast<Eigen::Index>(m)).data(), n);
        const double w = riemann_weight(in_) * kernel_.norm();
        std::vector<cplx> out(out_.size());
        for (std::size_t j = 0; j < out_.size(); ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const double u_phase = std::numbers::pi * detail::quad_form(q, u_pts.col(jj).data(), n);
            const double* wj = w_pts.col(jj).data();
            cplx acc = 0.0;
            for (std::size_t m = 0; m < in_.size(); ++m) {
                if (f[m] == cplx{}) continue;
                const double* t = t_pts.col(static_cast<Eigen::Index>(m)).data();
                double dot = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) dot += t[k] * wj[k];
                acc += f[m] * std::polar(1.0, t_phase[m] + u_phase - 2.0 * std::numbers::pi * dot);
            }
            out[j] = acc * w;
        }
        return Signal(out_, std::move(out));
    }

    Signal fast(const Signal& f) const {
        std::vector<cplx> h(in_.size());
        for (std::size_t j = 0; j < h.size(); ++j) h[j] = f[j] * in_chirp_[j];
        std::vector<cplx> out = (*sum_)(h);
        const double scale = kernel_.norm() * riemann_weight(in_);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] *= scale * out_chirp_[j];
        return Signal(out_, std::move(out));
    }

    SymplecticMatrix matrix_;
    Grid in_, out_;
    Method method_;
    Kernel kernel_;
    std::vector<cplx> in_chirp_, out_chirp_;
    std::optional<detail::MappedFourierSum> sum_;
};

/// Reference transform: Riemann sum of f(t) K(t, u) for every output sample.
inline Signal fmt_direct(const Signal& f, const SymplecticMatrix& m, const Grid& out_grid) {
    return FmtPlan(m, f.grid(), out_grid, Method::DirectQuadrature).execute(f);
}
inline Signal fmt_direct(const Signal& f, const SymplecticMatrix& m) { return fmt_direct(f, m, f.grid()); }

inline Signal fmt_fast(const Signal& f, const SymplecticMatrix& m, const Grid& out_grid) {
    return FmtPlan(m, f.grid(), out_grid, Method::ChirpFourier).execute(f);
}
inline Signal fmt_fast(const Signal& f, const SymplecticMatrix& m) { return fmt_fast(f, m, f.grid()); }

inline Signal fmt(const Signal& f, const SymplecticMatrix& m, const Grid& out_grid, Method method) {
    return FmtPlan(m, f.grid(), out_grid, method).execute(f);
}

/// Inverse transform: the forward machinery run with M^-1, whose kernel is
/// the inverse formula's conjugate kernel. Debug builds re-check that
/// identity on a sample of (t, u) pairs.
inline Signal ifmt(const Signal& spectrum, const SymplecticMatrix& m, const Grid& out_grid,
                   Method method = Method::ChirpFourier) {
#ifndef NDEBUG
    require(inverse_kernel_deviation(m, out_grid, spectrum.grid(), 8) <= 1e-12, ErrorCode::Fault,
            "M^-1 kernel disagrees with the inverse formula");
#endif
    return FmtPlan(inverse(m), spectrum.grid(), out_grid, method).execute(spectrum);
}
inline Signal ifmt(const Signal& spectrum, const SymplecticMatrix& m) { return ifmt(spectrum, m, spectrum.grid()); }

}  // namespace metaplectic
