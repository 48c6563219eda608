#include <gtest/gtest.h>

#include <numbers>

#include "metaplectic/transform.hpp"
#include "oracle.hpp"

using namespace metaplectic;

namespace {

SymplecticMatrix ft(Eigen::Index n) {
    SpecialParams p;
    p.n = n;
    return from_special(SpecialCase::FT, p);
}

Grid aligned(std::size_t n, std::size_t count) { return Grid::centered(n, count, 1.0 / std::sqrt(double(count))); }

}  // namespace

TEST(Kernel, DirectTransformMatchesBlockAssembledOracle) {
    for (std::size_t n : {1u, 2u, 3u}) {
        const Grid g = Grid::centered(n, n == 3 ? 5 : 9, 0.4);
        const Signal f = make_gaussian(g, std::vector<double>(n, 0.2), std::vector<double>(n, 0.8));
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const auto m = random_symplectic(static_cast<Eigen::Index>(n), seed);
            EXPECT_LE(relative_l2(fmt_direct(f, m), oracle::transform(f, m, g)), 1e-12);
        }
    }
}

TEST(Kernel, DeltaGivesAKernelRow) {
    const Grid g = Grid::centered(2, 12, 0.3);
    const std::vector<double> t0 = {0.6, -0.9};
    const auto m = random_symplectic(2, 3);
    const Signal spec = fmt_direct(make_delta(g, t0), m);
    std::vector<double> u(2);
    for (std::size_t j = 0; j < g.size(); ++j) {
        g.point(j, u);
        EXPECT_LE(std::abs(spec[j] - kernel_eval(m, t0, u)), 1e-12);
    }
}

TEST(Kernel, InverseFormulaIsTheConjugateKernel) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto n = static_cast<Eigen::Index>(1 + seed % 3);
        const auto m = random_symplectic(n, seed);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> x(-3, 3);
        std::vector<double> t(static_cast<std::size_t>(n)), u(t.size());
        for (auto& v : t) v = x(rng);
        for (auto& v : u) v = x(rng);
        EXPECT_LE(std::abs(inverse_kernel_eval(m, u, t) - std::conj(kernel_eval(m, t, u))), 1e-11);
        EXPECT_LE(std::abs(kernel_eval(inverse(m), u, t) - inverse_kernel_eval(m, u, t)), 1e-10);
    }
    const Grid g = Grid::centered(2, 16, 0.5);
    EXPECT_LE(inverse_kernel_deviation(random_symplectic(2, 1), g, g, 32), 1e-12);
}

TEST(Transform, GaussianIsAFourierFixedPoint) {
    const Grid g = Grid::centered(1, 128, 12.0 / 128);
    const Signal spec = fmt_direct(make_gaussian(g), ft(1));
    EXPECT_LE(max_abs_diff(spec, make_gaussian(g)), 1e-6);
    EXPECT_LE(max_abs_diff(ifmt(spec, ft(1), g, Method::DirectQuadrature), make_gaussian(g)), 1e-6);
}

TEST(Transform, FourierOnAlignedGridIsACenteredDft) {
    for (std::size_t n : {1u, 2u}) {
        const Grid g = aligned(n, n == 1 ? 64 : 16);
        const Signal f = mul(make_gaussian(g, std::vector<double>(n, 0.3), std::vector<double>(n, 0.5)),
                             make_chirp(g, 0.4 * Matrix::Identity(long(n), long(n)), std::vector<double>(n, 0.0)));
        FmtPlan plan(ft(long(n)), g, g, Method::ChirpFourier);
        EXPECT_TRUE(plan.uses_fft());
        EXPECT_LE(relative_l2(plan.execute(f), oracle::centered_dft(f)), 1e-9);
    }
}

TEST(Transform, SeparableSpecialCasesMatchPerAxisKernels) {
    const Grid g = Grid::centered(2, 20, 0.35);
    const Signal f = mul(make_gaussian(g), make_chirp(g, Eigen::Matrix2d{{0.3, 0.1}, {0.1, -0.2}}, std::vector<double>{0, 0}));
    SpecialParams frft;
    frft.angles = {0.4, 2.2};
    EXPECT_LE(relative_l2(fmt_direct(f, from_special(SpecialCase::SeparableFRFT, frft)),
                          oracle::per_axis_lct(f, {{std::cos(0.4), std::sin(0.4), std::cos(0.4)},
                                                   {std::cos(2.2), std::sin(2.2), std::cos(2.2)}})),
              1e-9);
    SpecialParams lct;
    lct.axes = {{2.0, 1.5, (2.0 * 0.8 - 1.0) / 1.5, 0.8}, {-0.5, -1.0, 1.0, 0.0}};
    EXPECT_LE(relative_l2(fmt_direct(f, from_special(SpecialCase::SeparableLCT, lct)),
                          oracle::per_axis_lct(f, {{2.0, 1.5, 0.8}, {-0.5, -1.0, 0.0}})),
              1e-9);
    SpecialParams fres;
    fres.b_diag = {0.7, -1.3};
    EXPECT_LE(relative_l2(fmt_direct(f, from_special(SpecialCase::SeparableFresnel, fres)),
                          oracle::per_axis_lct(f, {{1.0, 0.7, 1.0}, {1.0, -1.3, 1.0}})),
              1e-9);
}

TEST(Transform, FastPathEqualsDirectQuadrature) {
    for (std::size_t n : {1u, 2u, 3u}) {
        const std::size_t count = n == 1 ? 64 : n == 2 ? 20 : 8;
        const Grid g = Grid::centered(n, count, 0.3);
        const Signal f = mul(make_gaussian(g), make_chirp(g, 0.3 * Matrix::Identity(long(n), long(n)), std::vector<double>(n, 0.1)));
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto m = random_symplectic(static_cast<Eigen::Index>(n), 100 + seed);
            EXPECT_LE(relative_l2(fmt_fast(f, m), fmt_direct(f, m)), 1e-9) << "N=" << n << " seed=" << seed;
        }
    }
}

TEST(Transform, FastPathEqualsDirectOnDistinctOutputGrid) {
    const Grid in = Grid::centered(2, 16, 0.3);
    const Grid out({-2.0, -1.0}, {0.2, 0.15}, {12, 18});
    const Signal f = make_gaussian(in);
    const auto m = random_symplectic(2, 9);
    EXPECT_LE(relative_l2(fmt_fast(f, m, out), fmt_direct(f, m, out)), 1e-9);
}

TEST(Transform, FftPathEngagesOnlyWhenAligned) {
    const Grid g = aligned(2, 32);
    SpecialParams lct;
    lct.axes = {{0.5, 1.0, -0.75, 0.5}, {0.5, 1.0, -0.75, 0.5}};
    EXPECT_TRUE(FmtPlan(from_special(SpecialCase::SeparableLCT, lct), g, g, Method::ChirpFourier).uses_fft());
    lct.axes[1] = {0.5, 2.0, -0.375, 0.5};  // b = 2 breaks alignment on axis 1
    EXPECT_FALSE(FmtPlan(from_special(SpecialCase::SeparableLCT, lct), g, g, Method::ChirpFourier).uses_fft());
    // An aligned grid for b = 2: |out_step / b| * in_step * count = 1.
    const Grid wide({-8.0, -8.0}, {0.5, 0.5}, {32, 32});
    const Grid spec({-2.0, -2.0}, {0.125, 0.125}, {32, 32});
    SpecialParams b2;
    b2.axes = {{0.5, 2.0, -0.375, 0.5}, {0.5, 2.0, -0.375, 0.5}};
    const auto m = from_special(SpecialCase::SeparableLCT, b2);
    FmtPlan plan(m, wide, spec, Method::ChirpFourier);
    EXPECT_TRUE(plan.uses_fft());
    const Signal f = make_gaussian(wide);
    EXPECT_LE(relative_l2(plan.execute(f), fmt_direct(f, m, spec)), 1e-9);
    EXPECT_FALSE(FmtPlan(random_symplectic(2, 1), g, g, Method::ChirpFourier).uses_fft());
}

TEST(Transform, NegativeDiagonalBUsesReversedFrequencies) {
    const Grid g = aligned(1, 64);
    SpecialParams lct;
    lct.axes = {{0.3, -1.0, (0.3 * 0.6 - 1.0) / -1.0, 0.6}};
    const auto m = from_special(SpecialCase::SeparableLCT, lct);
    FmtPlan plan(m, g, g, Method::ChirpFourier);
    EXPECT_TRUE(plan.uses_fft());
    const Signal f = make_gaussian(g, std::vector<double>{0.4}, std::vector<double>{1.2});
    EXPECT_LE(relative_l2(plan.execute(f), fmt_direct(f, m)), 1e-9);
}

TEST(Transform, Linearity) {
    const Grid g = Grid::centered(2, 16, 0.4);
    const Signal f = make_gaussian(g), h = make_gaussian(g, std::vector<double>{1.0, -0.5}, std::vector<double>{2.0, 0.5});
    const cplx a(0.3, -1.2), b(2.0, 0.5);
    const auto m = random_symplectic(2, 4);
    for (Method method : {Method::DirectQuadrature, Method::ChirpFourier}) {
        const Signal lhs = fmt(add(scale(f, a), scale(h, b)), m, g, method);
        const Signal rhs = add(scale(fmt(f, m, g, method), a), scale(fmt(h, m, g, method), b));
        EXPECT_LE(relative_l2(lhs, rhs), 1e-12);
    }
}

TEST(Transform, ZeroInZeroOut) {
    const Grid g = Grid::centered(2, 8, 0.5);
    const auto m = random_symplectic(2, 2);
    const Signal zero(g);
    EXPECT_EQ(l2_norm(fmt_fast(zero, m)), 0.0);
    EXPECT_EQ(l2_norm(fmt_direct(zero, m)), 0.0);
    EXPECT_EQ(l2_norm(ifmt(zero, m)), 0.0);
}

TEST(Transform, RoundTripAndNormPreservation) {
    for (std::size_t n : {1u, 2u}) {
        const Grid g = n == 1 ? aligned(1, 128) : Grid::centered(2, 64, 0.125);
        const Signal f = make_gaussian(g);
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            const auto m = random_conditioned_symplectic(static_cast<Eigen::Index>(n), seed);
            const Signal spec = fmt_fast(f, m);
            EXPECT_LE(relative_l2(ifmt(spec, m), f), 1e-3);
            EXPECT_LE(std::abs(l2_norm(spec) - l2_norm(f)) / l2_norm(f), 1e-3);
        }
    }
}

TEST(Transform, InverseDirectAndFastAgree) {
    const Grid g = Grid::centered(2, 16, 0.4);
    const auto m = random_symplectic(2, 8);
    const Signal spec = fmt_fast(make_gaussian(g), m);
    EXPECT_LE(relative_l2(ifmt(spec, m, g, Method::ChirpFourier), ifmt(spec, m, g, Method::DirectQuadrature)), 1e-9);
}

TEST(Transform, ShapeErrors) {
    const Grid g1 = Grid::centered(1, 8, 0.5), g2 = Grid::centered(2, 8, 0.5);
    const auto m2 = random_symplectic(2, 0);
    try {
        fmt_fast(make_gaussian(g1), m2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimMismatch);
    }
    FmtPlan plan(m2, g2, g2, Method::ChirpFourier);
    try {
        plan.execute(make_gaussian(Grid::centered(2, 8, 0.4)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
    }
}

TEST(Transform, PlanChirpsAreUnitModulus) {
    const Grid g = Grid::centered(2, 8, 0.5);
    FmtPlan plan(random_symplectic(2, 6), g, g, Method::ChirpFourier);
    for (const auto& z : plan.input_chirp()) EXPECT_NEAR(std::abs(z), 1.0, 1e-15);
    for (const auto& z : plan.output_chirp()) EXPECT_NEAR(std::abs(z), 1.0, 1e-15);
}
