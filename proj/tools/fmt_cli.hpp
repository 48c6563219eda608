#pragma once

// Command-line front end. Kept in a header so tests can drive run() in-process.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metaplectic/metaplectic.hpp"

namespace fmt_cli {

using namespace metaplectic;

enum Exit : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kIo = 3 };

/// Matrix selection shared by the subcommands that need one.
struct MatrixArgs {
    std::string path;
    std::string inverse_path;
    std::string special;
    int dim = 1;
    std::vector<double> alpha;
    std::vector<double> lct;  // a,b,c,d per axis
    std::vector<double> fresnel_b;
    bool inverse = false;

    void attach(CLI::App* app, bool allow_inverse_file) {
        auto* m = app->add_option("--matrix", path, "matrix JSON file");
        if (allow_inverse_file) {
            auto* mi = app->add_option("--matrix-inverse", inverse_path, "apply the inverse transform of this matrix");
            m->excludes(mi);
        }
        app->add_option("--special", special, "inline matrix: ft | frft | frft-nonsep | lct | fresnel")
            ->check(CLI::IsMember({"ft", "frft", "frft-nonsep", "lct", "fresnel"}));
        app->add_option("--dim", dim, "dimension for --special ft / frft-nonsep")->check(CLI::PositiveNumber);
        app->add_option("--alpha", alpha, "angles: one per axis for frft, one for frft-nonsep")->delimiter(',');
        app->add_option("--lct", lct, "a,b,c,d per axis for --special lct")->delimiter(',');
        app->add_option("--fresnel-b", fresnel_b, "per-axis b for --special fresnel")->delimiter(',');
        if (allow_inverse_file) app->add_flag("--inverse", inverse, "use the inverse of the inline matrix");
    }

    SymplecticMatrix build() const {
        const int given = !path.empty() + !inverse_path.empty() + !special.empty();
        if (given != 1) throw CLI::ValidationError("exactly one of --matrix, --matrix-inverse, --special is required");
        if (!path.empty()) return io::read_matrix(path);
        if (!inverse_path.empty()) return io::read_matrix(inverse_path);
        SpecialParams p;
        p.n = dim;
        if (special == "ft") return from_special(SpecialCase::FT, p);
        if (special == "frft") {
            p.angles = alpha;
            return from_special(SpecialCase::SeparableFRFT, p);
        }
        if (special == "frft-nonsep") {
            if (alpha.size() != 1) throw CLI::ValidationError("--special frft-nonsep takes one --alpha");
            p.angle = alpha[0];
            return from_special(SpecialCase::NonseparableFRFT, p);
        }
        if (special == "lct") {
            if (lct.empty() || lct.size() % 4 != 0) throw CLI::ValidationError("--lct needs a,b,c,d per axis");
            for (std::size_t k = 0; k < lct.size(); k += 4) p.axes.push_back({lct[k], lct[k + 1], lct[k + 2], lct[k + 3]});
            return from_special(SpecialCase::SeparableLCT, p);
        }
        p.b_diag = fresnel_b;
        return from_special(SpecialCase::SeparableFresnel, p);
    }

    bool wants_inverse() const { return !inverse_path.empty() || inverse; }
};

inline void print_reports(std::ostream& out, const std::vector<VerifyReport>& rs) {
    out << std::left << std::setw(40) << "check" << std::setw(14) << "max_abs" << std::setw(14) << "rel_l2"
        << std::setw(10) << "tol" << "pass\n";
    for (const auto& r : rs)
        out << std::left << std::setw(40) << r.check << std::setw(14) << r.max_abs << std::setw(14) << r.rel_l2
            << std::setw(10) << r.tol << (r.pass ? "yes" : "NO") << '\n';
}

inline int exit_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io:
        case ErrorCode::Format: return kIo;
        case ErrorCode::Fault:
        case ErrorCode::ConstructionFailed: return kVerifyFailed;
        default: return kUsage;
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Free metaplectic transforms, convolutions and filters", "fmt"};
    app.require_subcommand(1);
    int status = kOk;

    // validate-matrix
    MatrixArgs vm;
    auto* validate = app.add_subcommand("validate-matrix", "check a matrix and print its constraint residuals");
    vm.attach(validate, false);

    // make-signal
    std::string kind, sig_out;
    std::vector<double> origin, step, center, inv_cov, at, chirp_s, shift;
    std::vector<std::size_t> count;
    auto* make = app.add_subcommand("make-signal", "write a test signal");
    make->add_option("kind", kind, "gaussian | delta | chirp")->required()->check(CLI::IsMember({"gaussian", "delta", "chirp"}));
    make->add_option("--origin", origin, "per-axis origin")->required()->delimiter(',');
    make->add_option("--step", step, "per-axis step")->required()->delimiter(',');
    make->add_option("--count", count, "per-axis sample count")->required()->delimiter(',');
    make->add_option("--center", center, "gaussian center (default 0)")->delimiter(',');
    make->add_option("--inv-cov", inv_cov, "gaussian exp(-pi c t^2) coefficients (default 1)")->delimiter(',');
    make->add_option("--at", at, "delta position")->delimiter(',');
    make->add_option("--chirp", chirp_s, "chirp matrix S, row-major N*N")->delimiter(',');
    make->add_option("--shift", shift, "chirp center s (default 0)")->delimiter(',');
    make->add_option("--out", sig_out, "output .sig")->required();

    // transform
    MatrixArgs tm;
    std::string t_in, t_out, t_method = "fast";
    auto* transform = app.add_subcommand("transform", "forward or inverse transform");
    transform->add_option("--in", t_in)->required();
    transform->add_option("--out", t_out)->required();
    transform->add_option("--method", t_method)->check(CLI::IsMember({"direct", "fast"}));
    tm.attach(transform, true);

    // convolve
    MatrixArgs cm;
    std::string c_in, c_with, c_out, c_method = "spatial";
    int c_kind = 1;
    auto* convolve = app.add_subcommand("convolve", "first- or second-kind convolution");
    convolve->add_option("--in", c_in)->required();
    convolve->add_option("--with", c_with, "second operand")->required();
    convolve->add_option("--out", c_out)->required();
    convolve->add_option("--kind", c_kind)->check(CLI::IsMember({1, 2}));
    convolve->add_option("--method", c_method)->check(CLI::IsMember({"spatial", "spectral"}));
    cm.attach(convolve, false);

    // filter
    MatrixArgs fm;
    std::string f_in, f_out, f_edge = "hard";
    std::vector<double> box;
    bool contracted = false;
    auto* filter = app.add_subcommand("filter", "multiplicative box filter in the transform domain");
    filter->add_option("--in", f_in)->required();
    filter->add_option("--out", f_out)->required();
    filter->add_option("--mask-box", box, "lo_1 .. lo_N hi_1 .. hi_N")->required()->delimiter(',');
    filter->add_option("--edge", f_edge, "hard | cosine:W");
    filter->add_flag("--contracted", contracted, "evaluate the box at u/sqrt2 (second-kind selection)");
    fm.attach(filter, false);

    // demo-denoise
    std::uint64_t demo_seed = 1;
    std::string demo_dir = ".";
    auto* demo = app.add_subcommand("demo-denoise", "run the two-dimensional denoising scenario");
    demo->add_option("--seed", demo_seed);
    demo->add_option("--out-dir", demo_dir, "directory for f.sig, r_in.sig, r_out.sig, report.json");

    // verify
    std::string suite_name = "all", verify_report;
    std::uint64_t verify_seed = 7;
    auto* verify = app.add_subcommand("verify", "run acceptance checks");
    verify->add_option("--suite", suite_name)
        ->check(CLI::IsMember({"symplectic", "transform", "theorem1", "theorem2", "corollaries", "filter", "all"}));
    verify->add_option("--seed", verify_seed);
    verify->add_option("--report", verify_report, "write the reports as JSON");

    // bench
    std::vector<std::size_t> sizes = {32, 64}, dims = {1, 2};
    auto* bench = app.add_subcommand("bench", "time the direct and fast paths on FFT-aligned LCT grids");
    bench->add_option("--sizes", sizes)->delimiter(',');
    bench->add_option("--dims", dims)->delimiter(',')->check(CLI::Range(1, 3));

    // export-csv
    std::string e_in, e_out;
    std::vector<std::string> slices;
    auto* csv = app.add_subcommand("export-csv", "write samples as CSV");
    csv->add_option("--in", e_in)->required();
    csv->add_option("--out", e_out, "output file (default stdout)");
    csv->add_option("--slice", slices, "axis=index, fixes one axis; repeatable")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*validate) {
            const auto m = vm.build();
            const auto& r = m.constraint_residuals();
            out << "valid free symplectic matrix, N=" << m.dim() << '\n'
                << std::setprecision(6) << "|AB^T - BA^T| = " << r.ab << '\n'
                << "|CD^T - DC^T| = " << r.cd << '\n'
                << "|AD^T - BC^T - I| = " << r.ad_bc << '\n'
                << "det B = " << r.det_b << '\n';
        } else if (*make) {
            const Grid grid(origin, step, count);
            const std::size_t n = grid.dim();
            Signal s;
            if (kind == "gaussian") {
                if (center.empty()) center.assign(n, 0.0);
                if (inv_cov.empty()) inv_cov.assign(n, 1.0);
                s = make_gaussian(grid, center, inv_cov);
            } else if (kind == "delta") {
                if (at.empty()) at.assign(n, 0.0);
                s = make_delta(grid, at);
            } else {
                if (chirp_s.size() != n * n) throw Error(ErrorCode::DimMismatch, "--chirp needs N*N entries");
                if (shift.empty()) shift.assign(n, 0.0);
                const auto nn = static_cast<Eigen::Index>(n);
                const Matrix sm = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                    chirp_s.data(), nn, nn);
                s = make_chirp(grid, sm, shift);
            }
            io::write_signal(sig_out, s);
        } else if (*transform) {
            const auto m = tm.build();
            const Signal f = io::read_signal(t_in);
            const Method method = t_method == "direct" ? Method::DirectQuadrature : Method::ChirpFourier;
            io::write_signal(t_out, tm.wants_inverse() ? ifmt(f, m, f.grid(), method) : fmt(f, m, f.grid(), method));
        } else if (*convolve) {
            const auto m = cm.build();
            const Signal f = io::read_signal(c_in), g = io::read_signal(c_with);
            Signal z;
            if (c_kind == 1) z = c_method == "spatial" ? conv_first_spatial(f, g, m) : conv_first_spectral(f, g, m);
            else z = c_method == "spatial" ? conv_second(f, g, m) : conv_second_spectral(f, g, m);
            io::write_signal(c_out, z);
        } else if (*filter) {
            const auto m = fm.build();
            const Signal r_in = io::read_signal(f_in);
            const std::size_t n = r_in.grid().dim();
            if (box.size() != 2 * n) throw Error(ErrorCode::BadBounds, "--mask-box needs N lower then N upper bounds");
            EdgeProfile edge;
            if (f_edge.rfind("cosine:", 0) == 0) {
                std::size_t used = 0;
                double w = -1;
                try {
                    w = std::stod(f_edge.substr(7), &used);
                } catch (const std::exception&) {
                }
                if (used != f_edge.size() - 7) throw CLI::ValidationError("--edge cosine:W needs a number W");
                edge = EdgeProfile::raised_cosine(w);
            } else if (f_edge != "hard") {
                throw CLI::ValidationError("--edge must be hard or cosine:W");
            }
            const std::vector<double> lo(box.begin(), box.begin() + static_cast<long>(n)),
                hi(box.begin() + static_cast<long>(n), box.end());
            const RegionMask mask = contracted ? contracted_box_mask(r_in.grid(), lo, hi, edge)
                                               : box_mask(r_in.grid(), lo, hi, edge);
            io::write_signal(f_out, multiplicative_filter(r_in, m, mask));
        } else if (*demo) {
            const auto sc = build_demo(demo_seed);
            const auto res = run_demo(sc);
            const std::filesystem::path dir(demo_dir);
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string());
            io::write_signal((dir / "f.sig").string(), sc.f);
            io::write_signal((dir / "r_in.sig").string(), sc.r_in);
            io::write_signal((dir / "r_out.sig").string(), res.r_out);
            io::json report;
            report["snr_in_db"] = res.snr_in_db;
            report["snr_out_db"] = res.snr_out_db;
            report["energy_split"] = {{"clean_inside", sc.f_energy_inside},
                                      {"noise_inside", sc.noise_energy_inside},
                                      {"output_outside", res.output_energy_outside}};
            io::write_text((dir / "report.json").string(), report.dump(2) + "\n");
            out << "snr in " << res.snr_in_db << " dB, out " << res.snr_out_db << " dB\n";
        } else if (*verify) {
            std::vector<VerifyReport> all;
            bool ok = true;
            const auto t0 = std::chrono::steady_clock::now();
            suite::run(suite::parse_suite(suite_name), verify_seed, [&](const suite::CriterionResult& r) {
                out << suite::format_line(r) << '\n';
                print_reports(out, r.reports);
                for (const auto& note : r.notes) out << "  note: " << note << '\n';
                ok = ok && r.pass();
                all.insert(all.end(), r.reports.begin(), r.reports.end());
            });
            const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (suite_name == "all" && total > suite::kSuiteTimeLimit) {
                out << "suite exceeded " << suite::kSuiteTimeLimit << " s\n";
                ok = false;
            }
            if (!verify_report.empty()) io::write_text(verify_report, io::reports_json(all).dump(2) + "\n");
            status = ok ? kOk : kVerifyFailed;
        } else if (*bench) {
            out << "dims size  direct_s   fast_s     speedup  rel_l2\n";
            for (std::size_t n : dims)
                for (std::size_t size : sizes) {
                    const double step = 1.0 / std::sqrt(static_cast<double>(size));
                    const Grid grid = Grid::centered(n, size, step);
                    SpecialParams p;
                    p.n = static_cast<Eigen::Index>(n);
                    p.axes.assign(n, Lct1d{0.5, 1.0, -0.75, 0.5});
                    const auto m = from_special(SpecialCase::SeparableLCT, p);
                    const Signal f = make_gaussian(grid);
                    auto time = [&](auto&& fn) {
                        const auto t0 = std::chrono::steady_clock::now();
                        Signal s = fn();
                        return std::pair{std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), s};
                    };
                    const auto [td, sd] = time([&] { return fmt_direct(f, m); });
                    const auto [tf, sf] = time([&] { return fmt_fast(f, m); });
                    out << std::left << std::setw(5) << n << std::setw(6) << size << std::setw(11) << td << std::setw(11)
                        << tf << std::setw(9) << td / std::max(tf, 1e-9) << relative_l2(sf, sd) << '\n';
                }
        } else if (*csv) {
            const Signal s = io::read_signal(e_in);
            std::map<std::size_t, std::size_t> fixed;
            for (const auto& spec : slices) {
                const auto eq = spec.find('=');
                std::size_t axis = 0, index = 0, used_a = 0, used_i = 0;
                try {
                    if (eq == std::string::npos) throw std::invalid_argument("no '='");
                    axis = std::stoul(spec.substr(0, eq), &used_a);
                    index = std::stoul(spec.substr(eq + 1), &used_i);
                } catch (const std::exception&) {
                    throw CLI::ValidationError("--slice expects axis=index, got '" + spec + "'");
                }
                if (used_a != eq || used_i != spec.size() - eq - 1)
                    throw CLI::ValidationError("--slice expects axis=index, got '" + spec + "'");
                fixed[axis] = index;
            }
            if (e_out.empty()) {
                io::write_csv(out, s, fixed);
            } else {
                std::ostringstream buf;
                io::write_csv(buf, s, fixed);
                io::write_text(e_out, buf.str());
            }
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        // A matrix that fails validation is the expected "no" answer of validate-matrix.
        if (*validate && e.code() != ErrorCode::Io && e.code() != ErrorCode::Format) return kVerifyFailed;
        return exit_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kVerifyFailed;
    }
    return status;
}

}  // namespace fmt_cli
