#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gzk/grid.hpp"

namespace gzk {

// ---------------------------------------------------------------------------
// Binary snapshot format: magic "GZKF", version u32, Nx, Ny (u32),
// Lx, lambda (f64), flag u8 (0 real / 1 spectral), then row-major
// little-endian f64 samples (real) or interleaved f64 pairs (spectral).
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kSnapshotVersion = 1;

namespace detail {

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("snapshot: truncated stream");
    return v;
}

inline void write_header(std::ostream& os, const GridSpec& g, std::uint8_t flag) {
    os.write("GZKF", 4);
    put<std::uint32_t>(os, kSnapshotVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.nx));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.ny));
    put<double>(os, g.Lx);
    put<double>(os, g.lambda);
    put<std::uint8_t>(os, flag);
}

inline GridSpec read_header(std::istream& is, std::uint8_t& flag) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "GZKF", 4) != 0) throw std::runtime_error("snapshot: bad magic");
    const auto version = get<std::uint32_t>(is);
    if (version != kSnapshotVersion)
        throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));
    const auto nx = get<std::uint32_t>(is);
    const auto ny = get<std::uint32_t>(is);
    const double Lx = get<double>(is);
    const double lambda = get<double>(is);
    flag = get<std::uint8_t>(is);
    return make_grid(Lx, lambda, static_cast<int>(nx), static_cast<int>(ny), 1.0);
}

}  // namespace detail

inline void save_snapshot(std::ostream& os, const RealField& u) {
    detail::write_header(os, u.grid, 0);
    os.write(reinterpret_cast<const char*>(u.samples.data()),
             static_cast<std::streamsize>(u.samples.size() * sizeof(double)));
}

inline void save_snapshot(std::ostream& os, const SpectralField& f) {
    detail::write_header(os, f.grid, 1);
    os.write(reinterpret_cast<const char*>(f.coeffs.data()),
             static_cast<std::streamsize>(f.coeffs.size() * 2 * sizeof(double)));
}

using Snapshot = std::variant<RealField, SpectralField>;

inline Snapshot load_snapshot(std::istream& is) {
    std::uint8_t flag = 0;
    GridSpec g = detail::read_header(is, flag);
    if (flag == 0) {
        RealField u(g);
        is.read(reinterpret_cast<char*>(u.samples.data()),
                static_cast<std::streamsize>(u.samples.size() * sizeof(double)));
        if (!is) throw std::runtime_error("snapshot: truncated real payload");
        return u;
    }
    if (flag == 1) {
        SpectralField f(g);
        is.read(reinterpret_cast<char*>(f.coeffs.data()),
                static_cast<std::streamsize>(f.coeffs.size() * 2 * sizeof(double)));
        if (!is) throw std::runtime_error("snapshot: truncated spectral payload");
        return f;
    }
    throw std::runtime_error("snapshot: unknown field flag " + std::to_string(flag));
}

inline void save_snapshot_file(const std::string& path, const Snapshot& snap) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    std::visit([&os](const auto& f) { save_snapshot(os, f); }, snap);
}

inline Snapshot load_snapshot_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return load_snapshot(is);
}

// ---------------------------------------------------------------------------
// CSV with full-precision decimal floats so oracle re-checks stay exact.
// ---------------------------------------------------------------------------

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(const std::vector<double>& row) {
        if (row.size() != header_.size())
            throw std::invalid_argument("CsvWriter: row width does not match header");
        rows_.push_back(row);
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
        os << "\n";
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_g17(row[i]);
            os << "\n";
        }
        return os.str();
    }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << content;
}

/// FNV-1a 64-bit content hash used by the run manifest.
inline std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t hash_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    const std::string s = ss.str();
    return fnv1a64(s.data(), s.size());
}

}  // namespace gzk
