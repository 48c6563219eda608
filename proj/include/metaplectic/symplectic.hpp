#pragma once

// Free symplectic matrices M = (A, B; C, D) with det(B) != 0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metaplectic/error.hpp"

namespace metaplectic {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSymplecticTolerance = 1e-10;
inline constexpr double kSingularDetB = 1e-12;

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Constraint residuals of a candidate block matrix, max-norm.
struct SymplecticResiduals {
    double ab = 0.0;     // |A B^T - B A^T|
    double cd = 0.0;     // |C D^T - D C^T|
    double ad_bc = 0.0;  // |A D^T - B C^T - I|
    double det_b = 0.0;
    double scale = 1.0;  // 1 + max block magnitude
};

inline SymplecticResiduals residuals(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
    SymplecticResiduals r;
    const auto n = a.rows();
    r.ab = max_abs(a * b.transpose() - b * a.transpose());
    r.cd = max_abs(c * d.transpose() - d * c.transpose());
    r.ad_bc = max_abs(a * d.transpose() - b * c.transpose() - Matrix::Identity(n, n));
    r.det_b = b.determinant();
    r.scale = 1.0 + std::max({max_abs(a), max_abs(b), max_abs(c), max_abs(d)});
    return r;
}

/// Immutable, validated free symplectic matrix with the derived blocks the
/// kernel needs: B^-1, B^-T, P = B^-1 A and Q = D B^-1 (both symmetric).
class SymplecticMatrix {
public:
    /// Checks shapes, the three symplectic constraints and |det B| > 1e-12.
    static SymplecticMatrix validate(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
        const auto n = a.rows();
        const bool square = n >= 1 && a.cols() == n;
        require(square && b.rows() == n && b.cols() == n && c.rows() == n && c.cols() == n && d.rows() == n &&
                    d.cols() == n,
                ErrorCode::ShapeMismatch, "blocks A, B, C, D must all be N x N with N >= 1");
        require(a.allFinite() && b.allFinite() && c.allFinite() && d.allFinite(), ErrorCode::BadParams,
                "non-finite matrix entry");

        const auto r = residuals(a, b, c, d);
        const double tol = kSymplecticTolerance * r.scale;
        auto fail = [&](const char* which, double value) {
            std::ostringstream os;
            os << "constraint " << which << " violated: residual " << value << " > " << tol;
            throw Error(ErrorCode::NotSymplectic, os.str());
        };
        if (r.ab > tol) fail("A B^T = B A^T", r.ab);
        if (r.cd > tol) fail("C D^T = D C^T", r.cd);
        if (r.ad_bc > tol) fail("A D^T - B C^T = I", r.ad_bc);
        if (!(std::abs(r.det_b) > kSingularDetB)) {
            std::ostringstream os;
            os << "|det B| = " << std::abs(r.det_b) << " <= " << kSingularDetB;
            throw Error(ErrorCode::SingularB, os.str());
        }

        SymplecticMatrix m;
        m.a_ = a;
        m.b_ = b;
        m.c_ = c;
        m.d_ = d;
        m.det_b_ = r.det_b;
        m.residuals_ = r;
        m.b_inv_ = b.inverse();
        m.b_inv_t_ = m.b_inv_.transpose();
        m.p_ = m.b_inv_ * a;
        m.q_ = d * m.b_inv_;
        const double p_asym = max_abs(m.p_ - m.p_.transpose());
        const double q_asym = max_abs(m.q_ - m.q_.transpose());
        if (p_asym > kSymplecticTolerance * (1.0 + max_abs(m.p_))) fail("B^-1 A symmetric", p_asym);
        if (q_asym > kSymplecticTolerance * (1.0 + max_abs(m.q_))) fail("D B^-1 symmetric", q_asym);
        return m;
    }

    Eigen::Index dim() const noexcept { return a_.rows(); }
    const Matrix& a() const noexcept { return a_; }
    const Matrix& b() const noexcept { return b_; }
    const Matrix& c() const noexcept { return c_; }
    const Matrix& d() const noexcept { return d_; }
    const Matrix& b_inv() const noexcept { return b_inv_; }
    const Matrix& b_inv_t() const noexcept { return b_inv_t_; }
    /// P = B^-1 A
    const Matrix& p() const noexcept { return p_; }
    /// Q = D B^-1
    const Matrix& q() const noexcept { return q_; }
    double det_b() const noexcept { return det_b_; }
    const SymplecticResiduals& constraint_residuals() const noexcept { return residuals_; }

    /// The full 2N x 2N block matrix.
    Matrix full() const {
        const auto n = dim();
        Matrix m(2 * n, 2 * n);
        m << a_, b_, c_, d_;
        return m;
    }

    bool operator==(const SymplecticMatrix& o) const {
        return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && d_ == o.d_;
    }

private:
    SymplecticMatrix() = default;

    Matrix a_, b_, c_, d_;
    Matrix b_inv_, b_inv_t_, p_, q_;
    double det_b_ = 0.0;
    SymplecticResiduals residuals_;
};

/// M^-1 = (D^T, -B^T; -C^T, A^T)
inline SymplecticMatrix inverse(const SymplecticMatrix& m) {
    try {
        return SymplecticMatrix::validate(m.d().transpose(), -m.b().transpose(), -m.c().transpose(),
                                          m.a().transpose());
    } catch (const Error& e) {
        throw Error(ErrorCode::Fault, std::string("inverse failed re-validation: ") + e.what());
    }
}

/// Builds M from an invertible B and symmetric P, Q:
/// A = B P, D = Q B, C = (D A^T - I) B^-T.
inline SymplecticMatrix from_parameters(const Matrix& b, const Matrix& p, const Matrix& q) {
    const auto n = b.rows();
    require(n >= 1 && b.cols() == n && p.rows() == n && p.cols() == n && q.rows() == n && q.cols() == n,
            ErrorCode::ShapeMismatch, "B, P, Q must all be N x N");
    const Matrix a = b * p;
    const Matrix d = q * b;
    const Matrix c = (d * a.transpose() - Matrix::Identity(n, n)) * b.inverse().transpose();
    return SymplecticMatrix::validate(a, b, c, d);
}

namespace detail {

inline Matrix random_symmetric(Eigen::Index n, double bound, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix s(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) s(i, j) = s(j, i) = dist(rng);
    return s;
}

inline Matrix random_orthogonal(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k)
        if (r(k, k) < 0) q.col(k) = -q.col(k);
    return q;
}

}  // namespace detail

/// Test-fixture generator. B has entries uniform in [-1, 1], re-drawn until
/// |det B| > 0.1; P and Q are symmetric with entries in [-1, 1].
inline SymplecticMatrix random_symplectic(Eigen::Index n, std::uint64_t seed) {
    require(n >= 1, ErrorCode::BadParams, "dimension must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix b(n, n);
    bool found = false;
    for (int attempt = 0; attempt < 100 && !found; ++attempt) {
        for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = dist(rng);
        found = std::abs(b.determinant()) > 0.1;
    }
    require(found, ErrorCode::Fault, "could not draw an invertible B in 100 attempts");
    const Matrix p = detail::random_symmetric(n, 1.0, rng);
    const Matrix q = detail::random_symmetric(n, 1.0, rng);
    return from_parameters(b, p, q);
}

/// Singular values of B and the P/Q entry bound for the conditioned family.
struct ConditionedFamily {
    double sv_lo = 1.0;
    double sv_hi = 1.4;
    double sym_bound = 0.3;
};

/// B = U diag(s) V^T with random orthogonal U, V and s in [sv_lo, sv_hi].
/// Keeps the image of a unit phase-space cell within a bounded region, which
/// is what finite sampling grids need.
inline SymplecticMatrix random_conditioned_symplectic(Eigen::Index n, std::uint64_t seed,
                                                      const ConditionedFamily& family = {}) {
    require(n >= 1, ErrorCode::BadParams, "dimension must be >= 1");
    require(family.sv_lo > 0 && family.sv_hi >= family.sv_lo && family.sym_bound >= 0, ErrorCode::BadParams,
            "bad conditioned family");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> sv(family.sv_lo, family.sv_hi);
    const Matrix u = detail::random_orthogonal(n, rng);
    const Matrix v = detail::random_orthogonal(n, rng);
    Vector s(n);
    for (Eigen::Index k = 0; k < n; ++k) s(k) = sv(rng);
    const Matrix b = u * s.asDiagonal() * v.transpose();
    const Matrix p = detail::random_symmetric(n, family.sym_bound, rng);
    const Matrix q = detail::random_symmetric(n, family.sym_bound, rng);
    return from_parameters(b, p, q);
}

// Table 1 specializations.

enum class SpecialCase {
    FT,
    SeparableLCT,
    SeparableFRFT,
    NonseparableFRFT,
    SeparableFresnel,
    NonseparableFresnel,
};

struct Lct1d {
    double a = 1, b = 1, c = 0, d = 1;
};

/// Parameters for from_special; which fields are read depends on the case.
struct SpecialParams {
    Eigen::Index n = 1;            // FT, NonseparableFRFT
    std::vector<double> angles;    // SeparableFRFT
    double angle = 0.0;            // NonseparableFRFT
    std::vector<Lct1d> axes;       // SeparableLCT
    std::vector<double> b_diag;    // SeparableFresnel
    Matrix b_matrix;               // NonseparableFresnel, symmetric invertible
};

inline SymplecticMatrix from_special(SpecialCase kind, const SpecialParams& params) {
    auto diag = [](const std::vector<double>& v) {
        Vector x = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
        return Matrix(x.asDiagonal());
    };
    auto wrap = [](auto&& build) {
        try {
            return build();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::SingularB) throw Error(ErrorCode::DegenerateCase, e.what());
            throw;
        }
    };
    switch (kind) {
        case SpecialCase::FT: {
            require(params.n >= 1, ErrorCode::BadParams, "FT needs n >= 1");
            const auto n = params.n;
            const Matrix id = Matrix::Identity(n, n);
            return SymplecticMatrix::validate(Matrix::Zero(n, n), id, -id, Matrix::Zero(n, n));
        }
        case SpecialCase::SeparableLCT: {
            require(!params.axes.empty(), ErrorCode::BadParams, "separable LCT needs per-axis parameters");
            std::vector<double> a, b, c, d;
            for (const auto& ax : params.axes) {
                require(std::isfinite(ax.a) && std::isfinite(ax.b) && std::isfinite(ax.c) && std::isfinite(ax.d),
                        ErrorCode::BadParams, "non-finite LCT parameter");
                require(std::abs(ax.a * ax.d - ax.b * ax.c - 1.0) <= kSymplecticTolerance *
                                                                         (1.0 + std::abs(ax.a * ax.d) +
                                                                          std::abs(ax.b * ax.c)),
                        ErrorCode::BadParams, "per-axis LCT parameters need ad - bc = 1");
                require(ax.b != 0.0, ErrorCode::DegenerateCase, "per-axis LCT parameter b must be nonzero");
                a.push_back(ax.a);
                b.push_back(ax.b);
                c.push_back(ax.c);
                d.push_back(ax.d);
            }
            return wrap([&] { return SymplecticMatrix::validate(diag(a), diag(b), diag(c), diag(d)); });
        }
        case SpecialCase::SeparableFRFT: {
            require(!params.angles.empty(), ErrorCode::BadParams, "separable FRFT needs one angle per axis");
            std::vector<double> cs, sn, msn;
            for (double alpha : params.angles) {
                require(std::isfinite(alpha), ErrorCode::BadParams, "non-finite angle");
                const double s = std::sin(alpha);
                require(std::abs(s) > kSingularDetB, ErrorCode::DegenerateCase,
                        "sin(alpha) = 0 makes B singular");
                cs.push_back(std::cos(alpha));
                sn.push_back(s);
                msn.push_back(-s);
            }
            return wrap([&] { return SymplecticMatrix::validate(diag(cs), diag(sn), diag(msn), diag(cs)); });
        }
        case SpecialCase::NonseparableFRFT: {
            // A = D = I cos(alpha), B = I sin(alpha), C = -I sin(alpha). With C = +B
            // the constraint A D^T - B C^T = I would fail (it gives cos(2 alpha) I).
            require(params.n >= 1, ErrorCode::BadParams, "FRFT needs n >= 1");
            require(std::isfinite(params.angle), ErrorCode::BadParams, "non-finite angle");
            const double s = std::sin(params.angle);
            require(std::abs(s) > kSingularDetB, ErrorCode::DegenerateCase, "sin(alpha) = 0 makes B singular");
            const Matrix id = Matrix::Identity(params.n, params.n);
            const double cs = std::cos(params.angle);
            return wrap([&] { return SymplecticMatrix::validate(id * cs, id * s, -id * s, id * cs); });
        }
        case SpecialCase::SeparableFresnel: {
            require(!params.b_diag.empty(), ErrorCode::BadParams, "separable Fresnel needs one b per axis");
            for (double b : params.b_diag) {
                require(std::isfinite(b), ErrorCode::BadParams, "non-finite b");
                require(b != 0.0, ErrorCode::DegenerateCase, "b = 0 makes B singular");
            }
            const auto n = static_cast<Eigen::Index>(params.b_diag.size());
            const Matrix id = Matrix::Identity(n, n);
            return wrap([&] { return SymplecticMatrix::validate(id, diag(params.b_diag), Matrix::Zero(n, n), id); });
        }
        case SpecialCase::NonseparableFresnel: {
            // The B block is left free apart from symmetry and invertibility.
            const auto n = params.b_matrix.rows();
            require(n >= 1 && params.b_matrix.cols() == n, ErrorCode::BadParams, "Fresnel B must be square");
            require(max_abs(params.b_matrix - params.b_matrix.transpose()) <=
                        kSymplecticTolerance * (1.0 + max_abs(params.b_matrix)),
                    ErrorCode::BadParams, "non-separable Fresnel B must be symmetric");
            const Matrix id = Matrix::Identity(n, n);
            return wrap([&] { return SymplecticMatrix::validate(id, params.b_matrix, Matrix::Zero(n, n), id); });
        }
    }
    throw Error(ErrorCode::BadParams, "unknown special case");
}

}  // namespace metaplectic
