#pragma once

// File formats: FMTSIG01 signal containers, matrix JSON, CSV export and JSON
// verification reports.
//
// FMTSIG01 layout:
//   8 bytes   ASCII "FMTSIG01"
//   4 bytes   little-endian u32 header length L
//   L bytes   UTF-8 JSON {"n", "origin", "step", "count"}
//   16 bytes per sample: little-endian float64 re, im; row-major order

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "metaplectic/convolution.hpp"
#include "metaplectic/sigspace.hpp"
#include "metaplectic/symplectic.hpp"

namespace metaplectic::io {

using json = nlohmann::ordered_json;

inline constexpr char kSignalMagic[8] = {'F', 'M', 'T', 'S', 'I', 'G', '0', '1'};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

inline std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

inline void put_f64(std::string& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFu));
}

inline double get_f64(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::Io, "read failed: " + path);
    return ss.str();
}

inline void spit(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

template <class T>
std::vector<T> json_vector(const json& j, const char* key, std::size_t n) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != n)
        throw Error(ErrorCode::Format, std::string("header field '") + key + "' must be an array of length n");
    try {
        return j[key].get<std::vector<T>>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, std::string("header field '") + key + "': " + e.what());
    }
}

}  // namespace detail

inline std::string encode_signal(const Signal& s) {
    const Grid& g = s.grid();
    json header;
    header["n"] = g.dim();
    header["origin"] = g.origin();
    header["step"] = g.step();
    header["count"] = g.count();
    const std::string text = header.dump();

    std::string out(kSignalMagic, sizeof kSignalMagic);
    detail::put_u32(out, static_cast<std::uint32_t>(text.size()));
    out += text;
    out.reserve(out.size() + 16 * s.size());
    for (const cplx& z : s.samples()) {
        detail::put_f64(out, z.real());
        detail::put_f64(out, z.imag());
    }
    return out;
}

inline Signal decode_signal(const std::string& bytes) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), kSignalMagic, 8) != 0)
        throw Error(ErrorCode::Format, "missing FMTSIG01 magic");
    const std::uint32_t len = detail::get_u32(p + 8);
    if (bytes.size() - 12 < len) throw Error(ErrorCode::Format, "truncated header");

    json header;
    try {
        header = json::parse(bytes.substr(12, len));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, std::string("header is not valid JSON: ") + e.what());
    }
    if (!header.is_object() || !header.contains("n") || !header["n"].is_number_integer() || header["n"].get<long>() < 1)
        throw Error(ErrorCode::Format, "header field 'n' must be a positive integer");
    const auto n = header["n"].get<std::size_t>();
    Grid grid;
    try {
        grid = Grid(detail::json_vector<double>(header, "origin", n), detail::json_vector<double>(header, "step", n),
                    detail::json_vector<std::size_t>(header, "count", n));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Format) throw;
        throw Error(ErrorCode::Format, std::string("invalid grid in header: ") + e.what());
    }

    const std::size_t payload = bytes.size() - 12 - len;
    if (payload != 16 * grid.size())
        throw Error(ErrorCode::Format, "payload holds " + std::to_string(payload) + " bytes, expected " +
                                           std::to_string(16 * grid.size()));
    std::vector<cplx> samples(grid.size());
    const unsigned char* data = p + 12 + len;
    for (std::size_t j = 0; j < samples.size(); ++j)
        samples[j] = {detail::get_f64(data + 16 * j), detail::get_f64(data + 16 * j + 8)};
    try {
        return Signal(std::move(grid), std::move(samples));
    } catch (const Error& e) {
        throw Error(ErrorCode::Format, e.what());
    }
}

inline Signal read_signal(const std::string& path) { return decode_signal(detail::slurp(path)); }
inline void write_signal(const std::string& path, const Signal& s) { detail::spit(path, encode_signal(s)); }

// Matrix JSON: {"n": N, "A": [[...], ...], "B": ..., "C": ..., "D": ...}

inline json matrix_to_json(const SymplecticMatrix& m) {
    auto rows = [](const Matrix& x) {
        json out = json::array();
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < x.cols(); ++j) row.push_back(x(i, j));
            out.push_back(std::move(row));
        }
        return out;
    };
    json j;
    j["n"] = m.dim();
    j["A"] = rows(m.a());
    j["B"] = rows(m.b());
    j["C"] = rows(m.c());
    j["D"] = rows(m.d());
    return j;
}

/// Parses and validates. Structural problems are Format errors; a well-formed
/// but non-free-symplectic matrix keeps its validation code.
inline SymplecticMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long>() < 1)
        throw Error(ErrorCode::Format, "matrix JSON needs a positive integer 'n'");
    const auto n = j["n"].get<Eigen::Index>();
    auto block = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_array() || static_cast<Eigen::Index>(j[key].size()) != n)
            throw Error(ErrorCode::Format, std::string("block '") + key + "' must have n rows");
        Matrix x(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const json& row = j[key][static_cast<std::size_t>(r)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
                throw Error(ErrorCode::Format, std::string("block '") + key + "' must have n columns");
            for (Eigen::Index c = 0; c < n; ++c) {
                if (!row[static_cast<std::size_t>(c)].is_number())
                    throw Error(ErrorCode::Format, std::string("block '") + key + "' holds a non-number");
                x(r, c) = row[static_cast<std::size_t>(c)].get<double>();
            }
        }
        return x;
    };
    return SymplecticMatrix::validate(block("A"), block("B"), block("C"), block("D"));
}

inline SymplecticMatrix read_matrix(const std::string& path) {
    json j;
    try {
        j = json::parse(detail::slurp(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, path + ": " + e.what());
    }
    return matrix_from_json(j);
}

inline void write_matrix(const std::string& path, const SymplecticMatrix& m) {
    detail::spit(path, matrix_to_json(m).dump(2) + "\n");
}

// CSV.

/// Rows for every sample whose index on each fixed axis equals the given
/// value. Columns: u0..u{N-1}, re, im, magnitude, phase.
inline void write_csv(std::ostream& out, const Signal& s, const std::map<std::size_t, std::size_t>& fixed = {}) {
    const Grid& g = s.grid();
    for (const auto& [axis, index] : fixed) {
        require(axis < g.dim(), ErrorCode::DimMismatch, "slice axis " + std::to_string(axis) + " out of range");
        require(index < g.count()[axis], ErrorCode::BadParams, "slice index " + std::to_string(index) + " out of range");
    }
    out << std::setprecision(17);
    for (std::size_t k = 0; k < g.dim(); ++k) out << 'u' << k << ',';
    out << "re,im,magnitude,phase\n";
    std::vector<std::size_t> idx(g.dim());
    for (std::size_t j = 0; j < s.size(); ++j) {
        g.multi_index(j, idx);
        bool keep = true;
        for (const auto& [axis, index] : fixed) keep = keep && idx[axis] == index;
        if (!keep) continue;
        for (std::size_t k = 0; k < g.dim(); ++k) out << g.coord(k, idx[k]) << ',';
        out << s[j].real() << ',' << s[j].imag() << ',' << std::abs(s[j]) << ',' << std::arg(s[j]) << '\n';
    }
}

// Reports.

inline json report_json(const VerifyReport& r) {
    json j;
    j["check"] = r.check;
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    j["max_abs"] = num(r.max_abs);
    j["rel_l2"] = num(r.rel_l2);
    j["tol"] = r.tol;
    j["pass"] = r.pass;
    return j;
}

inline json reports_json(const std::vector<VerifyReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    return arr;
}

inline void write_text(const std::string& path, const std::string& text) { detail::spit(path, text); }

}  // namespace metaplectic::io
