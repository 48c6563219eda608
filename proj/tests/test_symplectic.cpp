#include <gtest/gtest.h>

#include <numbers>

#include "metaplectic/symplectic.hpp"

using namespace metaplectic;

namespace {

Matrix omega(Eigen::Index n) {
    Matrix j = Matrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = Matrix::Identity(n, n);
    j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    return j;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::Fault;
}

SymplecticMatrix ft(Eigen::Index n) {
    SpecialParams p;
    p.n = n;
    return from_special(SpecialCase::FT, p);
}

}  // namespace

TEST(Symplectic, FourierMatrixIsValidWithZeroResiduals) {
    const auto m = ft(3);
    const auto& r = m.constraint_residuals();
    EXPECT_EQ(r.ab, 0.0);
    EXPECT_EQ(r.cd, 0.0);
    EXPECT_EQ(r.ad_bc, 0.0);
    EXPECT_DOUBLE_EQ(m.det_b(), 1.0);
    EXPECT_TRUE(m.p().isZero());
    EXPECT_TRUE(m.q().isZero());
}

TEST(Symplectic, EachViolatedConstraintIsNamed) {
    const Matrix id = Matrix::Identity(2, 2);
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 1.0;  // A B^T not symmetric
    try {
        SymplecticMatrix::validate(a, id, -id, Matrix::Zero(2, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotSymplectic);
        EXPECT_NE(std::string(e.what()).find("A B^T"), std::string::npos);
    }
    Matrix c = -id;
    c(1, 0) = 0.5;
    try {
        SymplecticMatrix::validate(id, id, c, 2.0 * id);  // C D^T not symmetric
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotSymplectic);
    }
    try {
        SymplecticMatrix::validate(Matrix::Zero(2, 2), id, -2.0 * id, Matrix::Zero(2, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotSymplectic);
        EXPECT_NE(std::string(e.what()).find("A D^T - B C^T = I"), std::string::npos);
    }
}

TEST(Symplectic, SingularBIsRejected) {
    // Identity matrix: symplectic, B = 0.
    const Matrix id = Matrix::Identity(2, 2), z = Matrix::Zero(2, 2);
    EXPECT_EQ(code_of([&] { SymplecticMatrix::validate(id, z, z, id); }), ErrorCode::SingularB);
}

TEST(Symplectic, ShapeAndFinitenessChecks) {
    const Matrix id2 = Matrix::Identity(2, 2), id3 = Matrix::Identity(3, 3);
    EXPECT_EQ(code_of([&] { SymplecticMatrix::validate(id2, id3, -id2, id2); }), ErrorCode::ShapeMismatch);
    Matrix bad = id2;
    bad(0, 0) = std::nan("");
    EXPECT_EQ(code_of([&] { SymplecticMatrix::validate(Matrix::Zero(2, 2), bad, -id2, Matrix::Zero(2, 2)); }),
              ErrorCode::BadParams);
}

TEST(Symplectic, RandomMatricesPreserveTheSymplecticForm) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto n = static_cast<Eigen::Index>(1 + seed % 4);
        const auto m = random_symplectic(n, seed);
        const Matrix full = m.full();
        EXPECT_LE(max_abs(full.transpose() * omega(n) * full - omega(n)), 1e-9 * (1 + max_abs(full) * max_abs(full)));
        EXPECT_GT(std::abs(m.det_b()), 0.1);
        EXPECT_LE(max_abs(m.p() - m.p().transpose()), 1e-10 * (1 + max_abs(m.p())));
        EXPECT_LE(max_abs(m.q() - m.q().transpose()), 1e-10 * (1 + max_abs(m.q())));
    }
}

TEST(Symplectic, RandomGenerationIsDeterministicPerSeed) {
    EXPECT_TRUE(random_symplectic(3, 11) == random_symplectic(3, 11));
    EXPECT_FALSE(random_symplectic(3, 11) == random_symplectic(3, 12));
}

TEST(Symplectic, ParametersAreRecovered) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const Eigen::Index n = 1 + i % 3;
        const Matrix b = Matrix::Identity(n, n) + 0.3 * detail::random_symmetric(n, 1.0, rng);
        const Matrix p = detail::random_symmetric(n, 1.0, rng), q = detail::random_symmetric(n, 1.0, rng);
        const auto m = from_parameters(b, p, q);
        EXPECT_LE(max_abs(m.p() - p), 1e-12);
        EXPECT_LE(max_abs(m.q() - q), 1e-12);
    }
}

TEST(Symplectic, InverseIsTheMatrixInverse) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto n = static_cast<Eigen::Index>(1 + seed % 3);
        const auto m = random_symplectic(n, seed);
        const auto inv = inverse(m);
        const Matrix prod = m.full() * inv.full();
        EXPECT_LE(max_abs(prod - Matrix::Identity(2 * n, 2 * n)), 1e-10 * (1 + max_abs(m.full()) * max_abs(m.full())));
        // For the inverse, P' = -Q and Q' = -P.
        EXPECT_LE(max_abs(inv.p() + m.q()), 1e-9 * (1 + max_abs(m.q())));
        EXPECT_LE(max_abs(inv.q() + m.p()), 1e-9 * (1 + max_abs(m.p())));
        EXPECT_TRUE(inverse(inv) == m);
    }
}

TEST(Symplectic, ConditionedFamilyHasBoundedSingularValues) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto m = random_conditioned_symplectic(2, seed);
        const Eigen::JacobiSVD<Matrix> svd(m.b());
        EXPECT_GE(svd.singularValues().minCoeff(), 1.0 - 1e-12);
        EXPECT_LE(svd.singularValues().maxCoeff(), 1.4 + 1e-12);
        EXPECT_LE(max_abs(m.p()), 0.3 + 1e-12);
    }
    EXPECT_EQ(code_of([] { random_conditioned_symplectic(2, 1, {2.0, 1.0, 0.3}); }), ErrorCode::BadParams);
}

TEST(SpecialCases, QuarterTurnFractionalTransformIsTheFourierMatrix) {
    SpecialParams p;
    p.angles = {std::numbers::pi / 2, std::numbers::pi / 2};
    const auto frft = from_special(SpecialCase::SeparableFRFT, p);
    EXPECT_LE(max_abs(frft.full() - ft(2).full()), 1e-15);
}

TEST(SpecialCases, DegenerateAnglesAndParameters) {
    SpecialParams p;
    p.angles = {0.3, 0.0};
    EXPECT_EQ(code_of([&] { from_special(SpecialCase::SeparableFRFT, p); }), ErrorCode::DegenerateCase);
    p.n = 2;
    p.angle = std::numbers::pi;
    EXPECT_EQ(code_of([&] { from_special(SpecialCase::NonseparableFRFT, p); }), ErrorCode::DegenerateCase);
    p.axes = {{1.0, 2.0, 1.0, 1.0}};  // ad - bc = -1
    EXPECT_EQ(code_of([&] { from_special(SpecialCase::SeparableLCT, p); }), ErrorCode::BadParams);
    p.axes = {{1.0, 0.0, 3.0, 1.0}};
    EXPECT_EQ(code_of([&] { from_special(SpecialCase::SeparableLCT, p); }), ErrorCode::DegenerateCase);
    p.b_diag = {1.0, 0.0};
    EXPECT_EQ(code_of([&] { from_special(SpecialCase::SeparableFresnel, p); }), ErrorCode::DegenerateCase);
    Matrix b(2, 2);
    b << 1.0, 0.5, 0.2, 1.0;
    p.b_matrix = b;
    EXPECT_EQ(code_of([&] { from_special(SpecialCase::NonseparableFresnel, p); }), ErrorCode::BadParams);
}

TEST(SpecialCases, NonseparableFresnelAcceptsAnySymmetricInvertibleB) {
    SpecialParams p;
    Matrix b(2, 2);
    b << 0.0, 1.0, 1.0, 0.0;  // indefinite, det -1
    p.b_matrix = b;
    const auto m = from_special(SpecialCase::NonseparableFresnel, p);
    EXPECT_DOUBLE_EQ(m.det_b(), -1.0);
    b << 1.0, 1.0, 1.0, 1.0;
    p.b_matrix = b;
    EXPECT_EQ(code_of([&] { from_special(SpecialCase::NonseparableFresnel, p); }), ErrorCode::DegenerateCase);
}

TEST(SpecialCases, NonseparableFractionalRotationUsesNegativeSineForC) {
    SpecialParams p;
    p.n = 2;
    p.angle = std::numbers::pi / 2;
    const auto m = from_special(SpecialCase::NonseparableFRFT, p);
    EXPECT_LE(max_abs(m.full() - ft(2).full()), 1e-15);
    // With C = +I sin(alpha) the block product gives cos(2 alpha) I instead of I.
    const Matrix id = Matrix::Identity(2, 2);
    EXPECT_EQ(code_of([&] { SymplecticMatrix::validate(Matrix::Zero(2, 2), id, id, Matrix::Zero(2, 2)); }),
              ErrorCode::NotSymplectic);
}

TEST(SpecialCases, SeparableLctBlocksAreDiagonal) {
    SpecialParams p;
    p.axes = {{2.0, 1.0, 1.0, 1.0}, {0.5, -2.0, 0.0, 2.0}};
    const auto m = from_special(SpecialCase::SeparableLCT, p);
    EXPECT_DOUBLE_EQ(m.b()(1, 1), -2.0);
    EXPECT_DOUBLE_EQ(m.a()(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(m.det_b(), -2.0);
}
