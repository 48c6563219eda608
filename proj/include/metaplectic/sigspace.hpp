#pragma once

// Uniform N-D sampling grids and complex signals on them. Every integral in
// the library is a plain Riemann sum: sample sum times the cell volume.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "metaplectic/error.hpp"

namespace metaplectic {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxGridPoints = std::size_t{1} << 26;

class Grid {
public:
    Grid() = default;

    Grid(std::vector<double> origin, std::vector<double> step, std::vector<std::size_t> count)
        : origin_(std::move(origin)), step_(std::move(step)), count_(std::move(count)) {
        require(!count_.empty(), ErrorCode::BadGrid, "grid dimension must be >= 1");
        require(origin_.size() == count_.size() && step_.size() == count_.size(), ErrorCode::BadGrid,
                "origin, step and count must have the same length");
        std::size_t total = 1;
        for (std::size_t k = 0; k < count_.size(); ++k) {
            require(std::isfinite(origin_[k]), ErrorCode::BadGrid, "non-finite origin");
            require(std::isfinite(step_[k]) && step_[k] > 0.0, ErrorCode::BadGrid, "step must be positive");
            require(count_[k] >= 1, ErrorCode::BadGrid, "count must be >= 1");
            require(total <= kMaxGridPoints / count_[k], ErrorCode::BadGrid, "grid exceeds 2^26 points");
            total *= count_[k];
        }
        size_ = total;
    }

    /// Cubic grid of `count` points per axis with the given step, origin at
    /// -(count/2)*step so that 0 is a sample.
    static Grid centered(std::size_t dims, std::size_t count, double step) {
        const double o = -static_cast<double>(count / 2) * step;
        return Grid(std::vector<double>(dims, o), std::vector<double>(dims, step),
                    std::vector<std::size_t>(dims, count));
    }

    std::size_t dim() const noexcept { return count_.size(); }
    std::size_t size() const noexcept { return size_; }
    const std::vector<double>& origin() const noexcept { return origin_; }
    const std::vector<double>& step() const noexcept { return step_; }
    const std::vector<std::size_t>& count() const noexcept { return count_; }

    double coord(std::size_t axis, std::size_t i) const { return origin_[axis] + step_[axis] * static_cast<double>(i); }

    /// Row-major: the last axis varies fastest.
    void multi_index(std::size_t flat, std::span<std::size_t> idx) const {
        for (std::size_t k = dim(); k-- > 0;) {
            idx[k] = flat % count_[k];
            flat /= count_[k];
        }
    }

    std::size_t flat_index(std::span<const std::size_t> idx) const {
        std::size_t flat = 0;
        for (std::size_t k = 0; k < dim(); ++k) flat = flat * count_[k] + idx[k];
        return flat;
    }

    void point(std::size_t flat, std::span<double> x) const {
        for (std::size_t k = dim(); k-- > 0;) {
            x[k] = coord(k, flat % count_[k]);
            flat /= count_[k];
        }
    }

    /// All sample coordinates as an N x size() matrix.
    Eigen::MatrixXd points() const {
        Eigen::MatrixXd pts(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(size_));
        std::vector<double> x(dim());
        for (std::size_t j = 0; j < size_; ++j) {
            point(j, x);
            for (std::size_t k = 0; k < dim(); ++k) pts(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = x[k];
        }
        return pts;
    }

    /// Same lattice with every coordinate multiplied by `factor` (> 0).
    Grid scaled(double factor) const {
        require(factor > 0 && std::isfinite(factor), ErrorCode::BadGrid, "scale factor must be positive");
        auto o = origin_;
        auto s = step_;
        for (auto& v : o) v *= factor;
        for (auto& v : s) v *= factor;
        return Grid(std::move(o), std::move(s), count_);
    }

    bool operator==(const Grid& other) const {
        if (count_ != other.count_) return false;
        for (std::size_t k = 0; k < dim(); ++k) {
            const double tol = 1e-12 * (1.0 + std::abs(step_[k]) * static_cast<double>(count_[k]));
            if (std::abs(origin_[k] - other.origin_[k]) > tol) return false;
            if (std::abs(step_[k] - other.step_[k]) > 1e-12 * step_[k]) return false;
        }
        return true;
    }

private:
    std::vector<double> origin_, step_;
    std::vector<std::size_t> count_;
    std::size_t size_ = 0;
};

/// Product of the per-axis steps; the weight of every Riemann sum.
inline double riemann_weight(const Grid& grid) {
    double w = 1.0;
    for (double s : grid.step()) w *= s;
    return w;
}

class Signal {
public:
    Signal() = default;

    explicit Signal(Grid grid) : grid_(std::move(grid)), samples_(grid_.size()) {}

    Signal(Grid grid, std::vector<cplx> samples) : grid_(std::move(grid)), samples_(std::move(samples)) {
        require(samples_.size() == grid_.size(), ErrorCode::BadParams, "sample count does not match grid");
        for (const auto& z : samples_)
            require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorCode::BadParams, "non-finite sample");
    }

    const Grid& grid() const noexcept { return grid_; }
    std::span<const cplx> samples() const noexcept { return samples_; }
    const cplx& operator[](std::size_t i) const { return samples_[i]; }
    std::size_t size() const noexcept { return samples_.size(); }

    std::vector<cplx> release() && { return std::move(samples_); }

private:
    Grid grid_;
    std::vector<cplx> samples_;
};

// Generators.

/// exp(-pi * sum_k c_k (t_k - mu_k)^2)
inline Signal make_gaussian(const Grid& grid, std::span<const double> center, std::span<const double> inv_cov_diag) {
    require(center.size() == grid.dim() && inv_cov_diag.size() == grid.dim(), ErrorCode::DimMismatch,
            "gaussian parameters must have one entry per axis");
    for (double c : inv_cov_diag) require(c > 0 && std::isfinite(c), ErrorCode::BadParams, "inverse covariance must be positive");
    std::vector<cplx> out(grid.size());
    std::vector<double> t(grid.dim());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        grid.point(j, t);
        double e = 0.0;
        for (std::size_t k = 0; k < grid.dim(); ++k) e += inv_cov_diag[k] * (t[k] - center[k]) * (t[k] - center[k]);
        out[j] = std::exp(-std::numbers::pi * e);
    }
    return Signal(grid, std::move(out));
}

inline Signal make_gaussian(const Grid& grid) {
    const std::vector<double> zero(grid.dim(), 0.0), one(grid.dim(), 1.0);
    return make_gaussian(grid, zero, one);
}

/// Discrete delta: 1/riemann_weight at the sample nearest `at`, so that the
/// Riemann sum of delta * phi reproduces phi(at).
inline Signal make_delta(const Grid& grid, std::span<const double> at) {
    require(at.size() == grid.dim(), ErrorCode::DimMismatch, "delta position must have one entry per axis");
    std::vector<std::size_t> idx(grid.dim());
    for (std::size_t k = 0; k < grid.dim(); ++k) {
        const double pos = (at[k] - grid.origin()[k]) / grid.step()[k];
        const double r = std::round(pos);
        // Exactly midway between two samples is ambiguous and rejected.
        if (!(std::abs(pos - r) < 0.5 * (1.0 - 1e-9)) || r < 0 || r >= static_cast<double>(grid.count()[k])) {
            std::ostringstream os;
            os << "position " << at[k] << " on axis " << k << " is not within step/2 of a grid point";
            throw Error(ErrorCode::OffGrid, os.str());
        }
        idx[k] = static_cast<std::size_t>(r);
    }
    std::vector<cplx> out(grid.size());
    out[grid.flat_index(idx)] = 1.0 / riemann_weight(grid);
    return Signal(grid, std::move(out));
}

/// exp(pi i (t - s) S (t - s)^T) with S symmetric.
inline Signal make_chirp(const Grid& grid, const Eigen::MatrixXd& s, std::span<const double> shift) {
    const auto n = static_cast<Eigen::Index>(grid.dim());
    require(s.rows() == n && s.cols() == n && shift.size() == grid.dim(), ErrorCode::DimMismatch,
            "chirp matrix must be N x N and shift must have N entries");
    require((s - s.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + s.cwiseAbs().maxCoeff()),
            ErrorCode::BadParams, "chirp matrix must be symmetric");
    std::vector<cplx> out(grid.size());
    std::vector<double> t(grid.dim());
    Eigen::VectorXd x(n);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        grid.point(j, t);
        for (Eigen::Index k = 0; k < n; ++k) x(k) = t[static_cast<std::size_t>(k)] - shift[static_cast<std::size_t>(k)];
        out[j] = std::polar(1.0, std::numbers::pi * x.dot(s * x));
    }
    return Signal(grid, std::move(out));
}

// Pointwise arithmetic.

namespace detail {

inline void check_same_grid(const Signal& a, const Signal& b) {
    require(a.grid().dim() == b.grid().dim(), ErrorCode::DimMismatch, "signals have different dimensions");
    require(a.grid() == b.grid(), ErrorCode::GridMismatch, "signals live on different grids");
}

template <class Op>
Signal zip(const Signal& a, const Signal& b, Op op) {
    check_same_grid(a, b);
    std::vector<cplx> out(a.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = op(a[j], b[j]);
    return Signal(a.grid(), std::move(out));
}

}  // namespace detail

inline Signal add(const Signal& a, const Signal& b) { return detail::zip(a, b, std::plus<>{}); }
inline Signal sub(const Signal& a, const Signal& b) { return detail::zip(a, b, std::minus<>{}); }
inline Signal mul(const Signal& a, const Signal& b) { return detail::zip(a, b, std::multiplies<>{}); }

inline Signal scale(const Signal& a, cplx factor) {
    std::vector<cplx> out(a.samples().begin(), a.samples().end());
    for (auto& z : out) z *= factor;
    return Signal(a.grid(), std::move(out));
}

/// Same samples, reinterpreted on another grid of equal shape.
inline Signal regrid(const Signal& a, const Grid& grid) {
    require(grid.count() == a.grid().count(), ErrorCode::GridMismatch, "regrid needs identical counts");
    return Signal(grid, std::vector<cplx>(a.samples().begin(), a.samples().end()));
}

// Norms and error metrics.

inline double sum_sq(std::span<const cplx> x) {
    double s = 0.0;
    for (const auto& z : x) s += std::norm(z);
    return s;
}

/// sqrt(riemann_weight * sum |x|^2)
inline double l2_norm(const Signal& a) { return std::sqrt(riemann_weight(a.grid()) * sum_sq(a.samples())); }

inline double max_abs_diff(const Signal& a, const Signal& b) {
    detail::check_same_grid(a, b);
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

/// ||a - ref|| / ||ref||; 0 when both vanish, +inf when only ref vanishes.
inline double relative_l2(const Signal& a, const Signal& ref) {
    detail::check_same_grid(a, ref);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        num += std::norm(a[j] - ref[j]);
        den += std::norm(ref[j]);
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

}  // namespace metaplectic
