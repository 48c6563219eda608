#pragma once

// Fourier sums over a uniform grid, evaluated at arbitrary frequencies:
//
//   out_j = sum_m x_m exp(sign * 2 pi i * t_m . w_j)
//
// The exponential factorizes per axis, so each output costs one pass over the
// samples with precomputed per-axis phase vectors instead of one complex
// exponential per (m, j) pair. When the frequencies themselves form a grid
// matched to the sample spacing, the sums are one FFT per axis.

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include <fftw3.h>
#include <Eigen/Dense>

#include "metaplectic/sigspace.hpp"

namespace metaplectic::detail {

/// Direct nonuniform evaluation. `freqs` is N x J, one frequency per column.
inline void fourier_sum(const Grid& grid, std::span<const cplx> x, const Eigen::MatrixXd& freqs, int sign,
                        std::span<cplx> out) {
    const std::size_t n = grid.dim();
    const auto& count = grid.count();
    const double two_pi = 2.0 * std::numbers::pi * sign;

    std::vector<std::vector<cplx>> phase(n);
    for (std::size_t k = 0; k < n; ++k) phase[k].resize(count[k]);
    std::vector<cplx> buf_a(grid.size() / count[n - 1]), buf_b(buf_a.size());

    for (Eigen::Index j = 0; j < freqs.cols(); ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const double w = freqs(static_cast<Eigen::Index>(k), j);
            for (std::size_t i = 0; i < count[k]; ++i) phase[k][i] = std::polar(1.0, two_pi * grid.coord(k, i) * w);
        }
        // Contract the last axis against the raw samples, then the remaining
        // axes against the shrinking buffer.
        std::size_t inner = count[n - 1];
        std::size_t outer = grid.size() / inner;
        const cplx* src = x.data();
        const cplx* ph = phase[n - 1].data();
        for (std::size_t o = 0; o < outer; ++o) {
            cplx acc = 0.0;
            const cplx* row = src + o * inner;
            for (std::size_t i = 0; i < inner; ++i) acc += row[i] * ph[i];
            buf_a[o] = acc;
        }
        for (std::size_t k = n - 1; k-- > 0;) {
            inner = count[k];
            const std::size_t next = outer / inner;
            ph = phase[k].data();
            for (std::size_t o = 0; o < next; ++o) {
                cplx acc = 0.0;
                for (std::size_t i = 0; i < inner; ++i) acc += buf_a[o * inner + i] * ph[i];
                buf_b[o] = acc;
            }
            std::swap(buf_a, buf_b);
            outer = next;
        }
        out[static_cast<std::size_t>(j)] = buf_a[0];
    }
}

/// Frequencies along one axis: w_j = w0 + dir * j / (count * step).
struct AlignedAxis {
    double w0 = 0.0;
    int dir = 1;
};

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwPlanDeleter {
    void operator()(fftw_plan_s* p) const {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(p);
    }
};
using FftwPlan = std::unique_ptr<fftw_plan_s, FftwPlanDeleter>;

/// Same sums as fourier_sum, for frequencies on an aligned grid; output in
/// row-major order of the frequency multi-index.
inline std::vector<cplx> fourier_sum_aligned(const Grid& grid, std::span<const cplx> x,
                                             std::span<const AlignedAxis> axes, int sign) {
    const std::size_t n = grid.dim();
    const auto& count = grid.count();
    const double two_pi = 2.0 * std::numbers::pi * sign;
    std::vector<cplx> y(x.begin(), x.end());

    std::size_t inner = grid.size();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t len = count[k];
        inner /= len;
        const std::size_t outer = grid.size() / (len * inner);
        const double dt = grid.step()[k];
        const double t0 = grid.origin()[k];
        const double dw = axes[k].dir / (static_cast<double>(len) * dt);

        std::vector<cplx> pre(len), post(len);
        for (std::size_t m = 0; m < len; ++m) {
            pre[m] = std::polar(1.0, two_pi * static_cast<double>(m) * dt * axes[k].w0);
            post[m] = std::polar(1.0, two_pi * t0 * (axes[k].w0 + dw * static_cast<double>(m)));
        }
        auto for_axis = [&](const std::vector<cplx>& factor) {
            for (std::size_t o = 0; o < outer; ++o)
                for (std::size_t m = 0; m < len; ++m) {
                    cplx* line = y.data() + (o * len + m) * inner;
                    for (std::size_t i = 0; i < inner; ++i) line[i] *= factor[m];
                }
        };

        for_axis(pre);
        const int direction = sign * axes[k].dir < 0 ? FFTW_FORWARD : FFTW_BACKWARD;
        FftwPlan plan;
        {
            std::lock_guard lock(fftw_planner_mutex());
            int nn = static_cast<int>(len);
            auto* data = reinterpret_cast<fftw_complex*>(y.data());
            plan.reset(fftw_plan_many_dft(1, &nn, static_cast<int>(inner), data, nullptr, static_cast<int>(inner), 1,
                                          data, nullptr, static_cast<int>(inner), 1, direction,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED));
        }
        require(plan != nullptr, ErrorCode::Fault, "FFTW planning failed");
        for (std::size_t o = 0; o < outer; ++o) {
            auto* block = reinterpret_cast<fftw_complex*>(y.data() + o * len * inner);
            fftw_execute_dft(plan.get(), block, block);
        }
        for_axis(post);
    }
    return y;
}

/// out(y_j) = sum_m x_m exp(sign * 2 pi i * s_m . (L y_j)) with s_m the samples
/// of `in` and y_j those of `out`. Uses FFTs when L is diagonal and
/// |l_kk * out_step| * in_step * count = 1 on every axis.
class MappedFourierSum {
public:
    MappedFourierSum(Grid in, const Grid& out, const Eigen::MatrixXd& map, int sign)
        : in_(std::move(in)), out_size_(out.size()), sign_(sign) {
        aligned_ = detect(out, map);
        if (aligned_.empty()) freqs_ = map * out.points();
    }

    bool aligned() const noexcept { return !aligned_.empty(); }
    const Eigen::MatrixXd& frequencies() const noexcept { return freqs_; }

    std::vector<cplx> operator()(std::span<const cplx> x) const {
        if (aligned()) return fourier_sum_aligned(in_, x, aligned_, sign_);
        std::vector<cplx> out(out_size_);
        fourier_sum(in_, x, freqs_, sign_, out);
        return out;
    }

private:
    std::vector<AlignedAxis> detect(const Grid& out, const Eigen::MatrixXd& map) const {
        const auto n = map.rows();
        const double tiny = 1e-14 * map.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (i != j && std::abs(map(i, j)) > tiny) return {};
        std::vector<AlignedAxis> axes(static_cast<std::size_t>(n));
        for (std::size_t k = 0; k < axes.size(); ++k) {
            const double l = map(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
            if (in_.count()[k] != out.count()[k]) return {};
            const double product = std::abs(l) * out.step()[k] * in_.step()[k] * static_cast<double>(in_.count()[k]);
            if (std::abs(product - 1.0) > 1e-12) return {};
            axes[k] = {l * out.origin()[k], l > 0 ? 1 : -1};
        }
        return axes;
    }

    Grid in_;
    std::size_t out_size_;
    int sign_;
    std::vector<AlignedAxis> aligned_;
    Eigen::MatrixXd freqs_;
};

}  // namespace metaplectic::detail
