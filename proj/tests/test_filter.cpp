#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "metaplectic/filter.hpp"

using namespace metaplectic;

namespace {

const Grid kGrid = Grid::centered(2, 64, 0.125);

SymplecticMatrix lct() {
    SpecialParams p;
    p.axes = {{0.5, 1.0, -0.75, 0.5}, {0.5, 1.0, -0.75, 0.5}};
    return from_special(SpecialCase::SeparableLCT, p);
}

}  // namespace

TEST(BoxMask, HardBox) {
    const Grid g = Grid::centered(1, 9, 1.0);  // -4..4
    const auto m = box_mask(g, std::vector<double>{-1.0}, std::vector<double>{1.0});
    EXPECT_EQ(m.gain[4], cplx(1.0));  // u = 0
    EXPECT_EQ(m.gain[5], cplx(1.0));  // u = 1, closed box
    EXPECT_EQ(m.gain[6], cplx(0.0));  // u = 2
    EXPECT_EQ(m.description, "box");
}

TEST(BoxMask, FullGridBoxIsAllPass) {
    const auto m = box_mask(kGrid, std::vector<double>{-4.0, -4.0}, std::vector<double>{3.875, 3.875});
    for (const auto& z : m.gain) EXPECT_EQ(z, cplx(1.0));
}

TEST(BoxMask, BadBounds) {
    for (auto [lo, hi] : {std::pair{1.0, 1.0}, std::pair{2.0, -2.0}, std::pair{std::nan(""), 1.0}}) {
        try {
            box_mask(kGrid, std::vector<double>{lo, -1.0}, std::vector<double>{hi, 1.0});
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::BadBounds);
        }
    }
    try {
        box_mask(kGrid, std::vector<double>{-1, -1}, std::vector<double>{1, 1}, EdgeProfile::raised_cosine(-0.5));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadBounds);
    }
}

TEST(BoxMask, ZeroWidthCosineIsHard) {
    const std::vector<double> lo = {-1.0, -0.5}, hi = {1.0, 2.0};
    EXPECT_EQ(box_mask(kGrid, lo, hi, EdgeProfile::raised_cosine(0.0)).gain, box_mask(kGrid, lo, hi).gain);
}

TEST(BoxMask, CosineEdgeTapersMonotonically) {
    const Grid g = Grid::centered(1, 201, 0.05);
    const auto m = box_mask(g, std::vector<double>{-1.0}, std::vector<double>{1.0}, EdgeProfile::raised_cosine(1.0));
    double prev = 1.0;
    for (std::size_t i = 100; i < g.size(); ++i) {
        const double u = g.coord(0, i), v = m.gain[i].real();
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0 + 1e-12);
        EXPECT_LE(v, prev + 1e-15);
        prev = v;
        if (std::abs(u - 1.5) < 1e-9) EXPECT_NEAR(v, 0.5, 1e-12);
        if (u >= 2.0 - 1e-9) EXPECT_EQ(v, 0.0);
        if (u <= 1.0) EXPECT_EQ(v, 1.0);
    }
}

TEST(BoxMask, ContractedMaskIsTheBoxAtScaledFrequencies) {
    const std::vector<double> lo = {-1.0, -1.0}, hi = {1.0, 1.0};
    const auto m = contracted_box_mask(kGrid, lo, hi);
    EXPECT_TRUE(m.grid == kGrid);
    std::vector<double> u(2);
    for (std::size_t j = 0; j < kGrid.size(); ++j) {
        kGrid.point(j, u);
        const bool inside = std::abs(u[0]) <= std::numbers::sqrt2 && std::abs(u[1]) <= std::numbers::sqrt2;
        EXPECT_EQ(m.gain[j].real(), inside ? 1.0 : 0.0);
    }
}

TEST(Filter, AllPassAndAllStop) {
    const Signal f = make_gaussian(kGrid, std::vector<double>{0.5, 0.0}, std::vector<double>{1.0, 2.0});
    RegionMask ones{kGrid, std::vector<cplx>(kGrid.size(), 1.0)};
    RegionMask zeros{kGrid, std::vector<cplx>(kGrid.size(), 0.0)};
    for (const auto& m : {lct(), random_conditioned_symplectic(2, 3)}) {
        EXPECT_LE(relative_l2(multiplicative_filter(f, m, ones), f), 1e-3);
        EXPECT_EQ(l2_norm(multiplicative_filter(f, m, zeros)), 0.0);
    }
}

TEST(Filter, MasksCompose) {
    const Signal f = make_gaussian(kGrid, std::vector<double>{0.5, 0.0}, std::vector<double>{0.5, 0.7});
    const auto m = random_conditioned_symplectic(2, 8);
    const auto h1 = box_mask(kGrid, std::vector<double>{-1.0, -2.0}, std::vector<double>{1.5, 1.0}, EdgeProfile::raised_cosine(0.5));
    const auto h2 = box_mask(kGrid, std::vector<double>{-0.5, -1.5}, std::vector<double>{2.0, 2.0});
    const Signal twice = multiplicative_filter(multiplicative_filter(f, m, h1), m, h2);
    const Signal once = multiplicative_filter(f, m, mask_product(h1, h2));
    EXPECT_LE(relative_l2(twice, once), 2e-3);
}

TEST(Filter, GridMismatch) {
    const Signal f = make_gaussian(kGrid);
    const auto h = box_mask(Grid::centered(2, 64, 0.1), std::vector<double>{-1, -1}, std::vector<double>{1, 1});
    try {
        multiplicative_filter(f, lct(), h);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
    }
}

TEST(Snr, Conventions) {
    const Signal f = make_gaussian(kGrid);
    EXPECT_TRUE(std::isinf(snr_db(f, f)));
    EXPECT_GT(snr_db(f, f), 0.0);
    const Signal noisy = add(f, scale(f, cplx(0.0, 1.0)));  // |noise| = |reference|
    EXPECT_NEAR(snr_db(f, noisy), 0.0, 1e-12);
    EXPECT_NEAR(snr_db(f, add(f, scale(f, 0.1))), 20.0, 1e-9);
    try {
        snr_db(Signal(kGrid), f);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroReference);
    }
}

TEST(Demo, ScenarioSeparatesAndDenoises) {
    for (std::uint64_t seed : {1u, 7u, 99u}) {
        const auto sc = build_demo(seed);
        EXPECT_EQ(sc.f.grid().count(), (std::vector<std::size_t>{128, 128}));
        EXPECT_DOUBLE_EQ(sc.f.grid().origin()[0], -6.0);
        EXPECT_TRUE(sc.m.b().isDiagonal());
        EXPECT_GE(sc.f_energy_inside, 0.99);
        EXPECT_LE(sc.noise_energy_inside, 0.01);
        EXPECT_NEAR(l2_norm(sc.noise), l2_norm(sc.f), 1e-12);
        const auto r = run_demo(sc);
        EXPECT_NEAR(r.snr_in_db, 0.0, 1.0);
        EXPECT_GE(r.snr_out_db - r.snr_in_db, 20.0);
        EXPECT_LE(r.output_energy_outside, 1e-6);
    }
}

TEST(Demo, DeterministicPerSeed) {
    const auto a = build_demo(5), b = build_demo(5), c = build_demo(6);
    EXPECT_EQ(max_abs_diff(a.r_in, b.r_in), 0.0);
    EXPECT_GT(max_abs_diff(a.r_in, c.r_in), 0.0);
}
