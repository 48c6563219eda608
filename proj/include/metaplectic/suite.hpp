#pragma once

// The acceptance criteria as runnable checks. Shared by `fmt verify` and the
// acceptance test binary so both report the same thing.
//
// Grids: N = 1 uses 128 samples with step 1/sqrt(128); N = 2 uses 64^2 samples
// with step 1/8. Both satisfy step^2 * count = 1, so the Fourier matrix runs on
// the FFT path, and both extend far enough for the unit Gaussian.
//
// Matrices: the oracle-equivalence and symplectic checks use the unconstrained
// random family, since they hold for any matrix. Checks that compare against a
// continuum identity (round trip, norm, the two theorems) use the conditioned
// family, whose images of the fixtures stay inside the sampled region.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "metaplectic/classical.hpp"
#include "metaplectic/convolution.hpp"
#include "metaplectic/filter.hpp"
#include "metaplectic/sigspace.hpp"
#include "metaplectic/symplectic.hpp"
#include "metaplectic/transform.hpp"

namespace metaplectic::suite {

struct CriterionResult {
    int id = 0;
    std::string name;
    std::vector<VerifyReport> reports;  // asserted
    std::vector<std::string> notes;     // reported only
    double seconds = 0.0;
    double time_limit = std::numeric_limits<double>::infinity();

    bool pass() const {
        if (seconds > time_limit) return false;
        for (const auto& r : reports)
            if (!r.pass) return false;
        return true;
    }
};

enum class Suite { Symplectic, Transform, Theorem1, Theorem2, Corollaries, Filter, All };

inline Suite parse_suite(const std::string& s) {
    if (s == "symplectic") return Suite::Symplectic;
    if (s == "transform") return Suite::Transform;
    if (s == "theorem1") return Suite::Theorem1;
    if (s == "theorem2") return Suite::Theorem2;
    if (s == "corollaries") return Suite::Corollaries;
    if (s == "filter") return Suite::Filter;
    if (s == "all") return Suite::All;
    throw Error(ErrorCode::BadParams, "unknown suite '" + s + "'");
}

inline constexpr int kRandomMatrices = 20;

inline Grid fixture_grid(std::size_t n) {
    return n == 1 ? Grid::centered(1, 128, 1.0 / std::sqrt(128.0)) : Grid::centered(2, 64, 0.125);
}

inline Signal gaussian_fixture(const Grid& g) { return make_gaussian(g); }

/// Second operand of the convolution checks: narrower and off-center.
inline Signal partner_fixture(const Grid& g) {
    return make_gaussian(g, std::vector<double>(g.dim(), 0.3), std::vector<double>(g.dim(), 1.5));
}

/// Gaussian-windowed chirp with a coupling term in 2-D.
inline Signal chirp_fixture(const Grid& g) {
    const std::size_t n = g.dim();
    Matrix s = 0.5 * Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    if (n > 1) s(0, 1) = s(1, 0) = 0.2, s(1, 1) = -0.3;
    return mul(make_gaussian(g), make_chirp(g, s, std::vector<double>(n, 0.0)));
}

inline SymplecticMatrix ft_matrix(std::size_t n) {
    SpecialParams p;
    p.n = static_cast<Eigen::Index>(n);
    return from_special(SpecialCase::FT, p);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::seed_seq seq{seed, stream, index};
    std::uint64_t out[1];
    seq.generate(reinterpret_cast<std::uint32_t*>(out), reinterpret_cast<std::uint32_t*>(out) + 2);
    return out[0];
}

/// Folds several reports for the same check into the worst case.
inline VerifyReport worst_of(std::string check, const std::vector<VerifyReport>& rs, double tol) {
    VerifyReport w;
    w.check = std::move(check);
    w.tol = tol;
    for (const auto& r : rs) {
        w.max_abs = std::max(w.max_abs, r.max_abs);
        w.rel_l2 = std::max(w.rel_l2, r.rel_l2);
    }
    w.pass = !rs.empty() && w.rel_l2 <= tol;
    return w;
}

inline VerifyReport scalar_report(std::string check, double value, double tol, bool pass) {
    return {std::move(check), value, value, tol, pass};
}

namespace detail {

template <class F>
CriterionResult timed(int id, std::string name, double limit, F&& body) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    r.time_limit = limit;
    const auto t0 = std::chrono::steady_clock::now();
    body(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

}  // namespace detail

// 1. Symplectic constraints and the unit phase factors.
inline CriterionResult criterion_symplectic(std::uint64_t seed) {
    return detail::timed(1, "symplectic degeneracy", 1.0, [&](CriterionResult& r) {
        double worst_res = 0.0, worst_phase = 0.0;
        std::mt19937_64 rng(derive_seed(seed, 1, 0));
        std::uniform_real_distribution<double> coord(-6.0, 6.0);
        for (int i = 0; i < 100; ++i) {
            const auto n = static_cast<Eigen::Index>(1 + i % 3);
            const SymplecticMatrix m = random_symplectic(n, derive_seed(seed, 1, static_cast<std::uint64_t>(i) + 1));
            const auto res = residuals(m.a(), m.b(), m.c(), m.d());
            worst_res = std::max(worst_res, std::max({res.ab, res.cd, res.ad_bc}) / res.scale);
            std::vector<double> t(static_cast<std::size_t>(n)), u(static_cast<std::size_t>(n));
            for (int k = 0; k < 10; ++k) {
                for (auto& x : t) x = coord(rng);
                for (auto& x : u) x = coord(rng);
                const auto f = translation_phase_factors(m, t, u);
                worst_phase = std::max({worst_phase, std::abs(f.u_factor - 1.0), std::abs(f.t_factor - 1.0),
                                        std::abs(f.cross_factor - 1.0)});
            }
        }
        r.reports.push_back(scalar_report("constraint_residual/scale", worst_res, 1e-10, worst_res <= 1e-10));
        r.reports.push_back(scalar_report("phase_factor_deviation", worst_phase, 1e-9, worst_phase <= 1e-9));
    });
}

// 2-4. Fast path against the oracle, inversion, norm preservation.
inline std::vector<CriterionResult> criteria_transform(std::uint64_t seed) {
    std::vector<CriterionResult> out;
    out.push_back(detail::timed(2, "oracle equivalence", 60.0, [&](CriterionResult& r) {
        for (std::size_t n : {1u, 2u}) {
            const Grid g = fixture_grid(n);
            for (const auto& [name, f] : {std::pair{"gaussian", gaussian_fixture(g)}, std::pair{"chirp", chirp_fixture(g)}}) {
                std::vector<VerifyReport> rs;
                for (int i = 0; i < kRandomMatrices; ++i) {
                    const auto m = random_symplectic(static_cast<Eigen::Index>(n), derive_seed(seed, 2, i));
                    rs.push_back(compare("", fmt_fast(f, m), fmt_direct(f, m), 1e-9));
                }
                r.reports.push_back(worst_of("fast_vs_direct N=" + std::to_string(n) + " " + name, rs, 1e-9));
            }
        }
    }));

    std::vector<VerifyReport> roundtrip, unitarity;
    out.push_back(detail::timed(3, "inversion round trip", std::numeric_limits<double>::infinity(), [&](CriterionResult& r) {
        for (std::size_t n : {1u, 2u}) {
            const Grid g = fixture_grid(n);
            for (const auto& [name, f] : {std::pair{"gaussian", gaussian_fixture(g)}, std::pair{"chirp", chirp_fixture(g)}}) {
                std::vector<VerifyReport> rt, un;
                const double norm_f = l2_norm(f);
                for (int i = 0; i < kRandomMatrices; ++i) {
                    const auto m = random_conditioned_symplectic(static_cast<Eigen::Index>(n), derive_seed(seed, 3, i));
                    const Signal spec = fmt_direct(f, m);
                    rt.push_back(compare("", ifmt(spec, m), f, 1e-3));
                    const double dev = std::abs(l2_norm(spec) - norm_f) / norm_f;
                    un.push_back(scalar_report("", dev, 1e-3, dev <= 1e-3));
                }
                const std::string tag = " N=" + std::to_string(n) + " " + name;
                r.reports.push_back(worst_of("ifmt_roundtrip" + tag, rt, 1e-3));
                unitarity.push_back(worst_of("norm_deviation" + tag, un, 1e-3));
            }
        }
    }));
    // Shares the transforms computed for criterion 3.
    CriterionResult unit;
    unit.id = 4;
    unit.name = "unitarity";
    unit.reports = unitarity;
    out.push_back(unit);
    return out;
}

// 5-6. First-kind convolution theorem and the product theorem.
inline std::vector<CriterionResult> criteria_theorem1(std::uint64_t seed) {
    std::vector<CriterionResult> out;
    out.push_back(detail::timed(5, "first-kind convolution theorem", std::numeric_limits<double>::infinity(),
                                [&](CriterionResult& r) {
        for (std::size_t n : {1u, 2u}) {
            const Grid g = fixture_grid(n);
            const Signal f = gaussian_fixture(g), h = partner_fixture(g);
            auto rep = verify_theorem1(f, h, ft_matrix(n), 1e-3);
            rep.check = "theorem1 FT N=" + std::to_string(n);
            r.reports.push_back(rep);
            std::vector<VerifyReport> rs;
            for (int i = 0; i < kRandomMatrices; ++i)
                rs.push_back(verify_theorem1(
                    f, h, random_conditioned_symplectic(static_cast<Eigen::Index>(n), derive_seed(seed, 5, i)), 1e-2));
            r.reports.push_back(worst_of("theorem1 random N=" + std::to_string(n), rs, 1e-2));
        }
    }));
    out.push_back(detail::timed(6, "product theorem", std::numeric_limits<double>::infinity(), [&](CriterionResult& r) {
        for (std::size_t n : {1u, 2u}) {
            const Grid g = fixture_grid(n);
            const Signal f = gaussian_fixture(g), h = partner_fixture(g);
            auto rep = verify_product_theorem(f, h, ft_matrix(n), 1e-3);
            rep.check = "product FT N=" + std::to_string(n);
            r.reports.push_back(rep);
            double worst = 0.0;
            for (int i = 0; i < kRandomMatrices; ++i)
                worst = std::max(worst, verify_product_theorem(f, h, random_conditioned_symplectic(
                                                                         static_cast<Eigen::Index>(n), derive_seed(seed, 6, i)))
                                            .rel_l2);
            r.notes.push_back("product random N=" + std::to_string(n) + ": worst rel_l2 " + detail::fmt_num(worst));
        }
    }));
    return out;
}

// 7. Second-kind convolution theorem and the Gaussian closed form.
inline CriterionResult criterion_theorem2(std::uint64_t seed) {
    return detail::timed(7, "second-kind convolution theorem", std::numeric_limits<double>::infinity(),
                         [&](CriterionResult& r) {
        for (std::size_t n : {1u, 2u}) {
            const Grid g = fixture_grid(n);
            const Signal f = gaussian_fixture(g), h = partner_fixture(g);
            const std::string tag = " N=" + std::to_string(n);
            auto ft = verify_theorem2(f, h, ft_matrix(n), 1e-3);
            ft.spectral.check = "theorem2 FT" + tag;
            ft.inversion.check = "theorem2 inversion FT" + tag;
            r.reports.push_back(ft.spectral);
            r.reports.push_back(ft.inversion);
            std::vector<VerifyReport> spec, inv;
            double asym = 0.0;
            for (int i = 0; i < kRandomMatrices; ++i) {
                const auto m = random_conditioned_symplectic(static_cast<Eigen::Index>(n), derive_seed(seed, 7, i));
                const auto rep = verify_theorem2(f, h, m, 1e-2);
                spec.push_back(rep.spectral);
                inv.push_back(rep.inversion);
                if (i == 0) asym = conv_second_asymmetry(f, h, m);
            }
            r.reports.push_back(worst_of("theorem2 random" + tag, spec, 1e-2));
            r.reports.push_back(worst_of("theorem2 inversion random" + tag, inv, 1e-2));
            r.notes.push_back("operand-swap gap" + tag + ": " + detail::fmt_num(asym));
        }
        const Grid wide = Grid::centered(1, 128, 12.0 / 128);
        const Signal f = make_gaussian(wide);
        const double err = max_abs_diff(conv_second(f, f, ft_matrix(1)), f);
        r.reports.push_back(scalar_report("closed form gaussian", err, 2e-3, err <= 2e-3));
    });
}

// 8. Separable special cases against classical per-axis computations.
inline CriterionResult criterion_corollaries() {
    return detail::timed(8, "corollary reductions", std::numeric_limits<double>::infinity(), [&](CriterionResult& r) {
        constexpr double tol = 1e-6;
        const Grid g = fixture_grid(2);
        const Grid g1 = fixture_grid(2);  // per-axis factors live on the first axis of this grid
        const Signal f = chirp_fixture(g);

        const std::vector<double> alphas = {0.7, 1.9};
        const Lct1d lct0{0.6, 1.3, (0.6 * 0.9 - 1.0) / 1.3, 0.9}, lct1{-0.4, 0.8, (-0.4 * 1.5 - 1.0) / 0.8, 1.5};
        SpecialParams frft_p, lct_p;
        frft_p.n = 2;
        frft_p.angles = alphas;
        lct_p.n = 2;
        lct_p.axes = {lct0, lct1};
        const SymplecticMatrix ft = ft_matrix(2);
        const SymplecticMatrix frft = from_special(SpecialCase::SeparableFRFT, frft_p);
        const SymplecticMatrix lct = from_special(SpecialCase::SeparableLCT, lct_p);

        // Transforms.
        const auto ft_ops = std::vector{classical::fourier_axis(g, 0), classical::fourier_axis(g, 1)};
        const auto frft_ops = std::vector{classical::frft_axis(g, 0, alphas[0]), classical::frft_axis(g, 1, alphas[1])};
        const auto lct_ops = std::vector{classical::lct_axis(g, 0, lct0.a, lct0.b, lct0.d),
                                         classical::lct_axis(g, 1, lct1.a, lct1.b, lct1.d)};
        r.reports.push_back(compare("transform FT", fmt_fast(f, ft), classical::separable_apply(f, ft_ops), tol));
        r.reports.push_back(compare("transform FRFT", fmt_fast(f, frft), classical::separable_apply(f, frft_ops), tol));
        r.reports.push_back(compare("transform LCT", fmt_fast(f, lct), classical::separable_apply(f, lct_ops), tol));

        // First kind: ordinary convolution for FT; per-axis spectral product for FRFT and LCT.
        const Signal a = gaussian_fixture(g), b = partner_fixture(g);
        r.reports.push_back(compare("first-kind FT", conv_first_spatial(a, b, ft), classical::linear_convolution(a, b), tol));
        auto per_axis_first = [&](const std::vector<classical::AxisOperator>& fwd,
                                  const std::vector<classical::AxisOperator>& inv) {
            return classical::separable_apply(
                mul(classical::separable_apply(a, fwd), classical::separable_apply(b, fwd)), inv);
        };
        // The inverse FRFT of angle alpha is the kernel of angle -alpha.
        r.reports.push_back(compare("first-kind FRFT", conv_first_spatial(a, b, frft),
                                    per_axis_first(frft_ops, {classical::frft_axis(g, 0, -alphas[0]),
                                                              classical::frft_axis(g, 1, -alphas[1])}),
                                    tol));
        r.reports.push_back(compare("first-kind LCT", conv_first_spatial(a, b, lct),
                                    per_axis_first(lct_ops, {classical::inverse_lct_axis(g, 0, lct0.a, lct0.b, lct0.d),
                                                             classical::inverse_lct_axis(g, 1, lct1.a, lct1.b, lct1.d)}),
                                    tol));

        // Second kind: separable operands, so the N-D result is the outer
        // product of one-dimensional classical chirp convolutions.
        std::vector<std::vector<cplx>> fa(2), fb(2);
        for (std::size_t k = 0; k < 2; ++k) {
            fa[k].resize(g1.count()[k]);
            fb[k].resize(g1.count()[k]);
            for (std::size_t i = 0; i < fa[k].size(); ++i) {
                const double t = g1.coord(k, i);
                fa[k][i] = std::exp(-std::numbers::pi * t * t);
                fb[k][i] = std::exp(-std::numbers::pi * 1.5 * (t - 0.3) * (t - 0.3));
            }
        }
        auto second_outer = [&](const std::vector<std::pair<double, double>>& ab) {
            std::vector<std::vector<cplx>> z(2);
            for (std::size_t k = 0; k < 2; ++k)
                z[k] = classical::second_kind_1d(fa[k], fb[k], g.origin()[k], g.step()[k], ab[k].first, ab[k].second);
            return classical::outer(g, z);
        };
        r.reports.push_back(compare("second-kind FT", conv_second(a, b, ft), second_outer({{0.0, 1.0}, {0.0, 1.0}}), tol));
        r.reports.push_back(compare("second-kind FRFT", conv_second(a, b, frft),
                                    second_outer({{std::cos(alphas[0]), std::sin(alphas[0])},
                                                  {std::cos(alphas[1]), std::sin(alphas[1])}}),
                                    tol));
        r.reports.push_back(compare("second-kind LCT", conv_second(a, b, lct),
                                    second_outer({{lct0.a, lct0.b}, {lct1.a, lct1.b}}), tol));
    });
}

// 9. Denoising demo.
inline CriterionResult criterion_filter(std::uint64_t seed) {
    return detail::timed(9, "filter demo", std::numeric_limits<double>::infinity(), [&](CriterionResult& r) {
        const DenoiseScenario sc = build_demo(seed);
        const DemoResult d = run_demo(sc);
        const double gain = d.snr_out_db - d.snr_in_db;
        r.reports.push_back(scalar_report("snr gain dB", gain, 20.0, gain >= 20.0));
        r.reports.push_back(
            scalar_report("clean energy inside", sc.f_energy_inside, 0.99, sc.f_energy_inside >= 0.99));
        r.reports.push_back(
            scalar_report("noise energy inside", sc.noise_energy_inside, 0.01, sc.noise_energy_inside <= 0.01));
        r.reports.push_back(scalar_report("output energy outside", d.output_energy_outside, 1e-6,
                                          d.output_energy_outside <= 1e-6));
        r.notes.push_back("snr in " + detail::fmt_num(d.snr_in_db) + " dB, out " + detail::fmt_num(d.snr_out_db) + " dB");
    });
}

inline constexpr double kSuiteTimeLimit = 120.0;

/// Runs the selected criteria in order. `on_result` sees each one as it
/// finishes.
inline std::vector<CriterionResult> run(Suite which, std::uint64_t seed,
                                        const std::function<void(const CriterionResult&)>& on_result = {}) {
    std::vector<CriterionResult> all;
    auto emit = [&](CriterionResult r) {
        if (on_result) on_result(r);
        all.push_back(std::move(r));
    };
    const bool every = which == Suite::All;
    if (every || which == Suite::Symplectic) emit(criterion_symplectic(seed));
    if (every || which == Suite::Transform)
        for (auto& r : criteria_transform(seed)) emit(std::move(r));
    if (every || which == Suite::Theorem1)
        for (auto& r : criteria_theorem1(seed)) emit(std::move(r));
    if (every || which == Suite::Theorem2) emit(criterion_theorem2(seed));
    if (every || which == Suite::Corollaries) emit(criterion_corollaries());
    if (every || which == Suite::Filter) emit(criterion_filter(seed));
    return all;
}

inline std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os << "criterion " << r.id << " [" << (r.pass() ? "PASS" : "FAIL") << "] " << r.name << " ("
       << detail::fmt_num(r.seconds) << " s)";
    return os.str();
}

}  // namespace metaplectic::suite
