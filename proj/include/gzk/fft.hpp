#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "gzk/grid.hpp"

namespace gzk {

/// Process-wide FFTW plan cache.  Plans are created once per shape with
/// FFTW_UNALIGNED so they can be executed on any caller-owned buffer;
/// new-array execution keeps the transforms thread-safe after planning.
class FftEngine {
  public:
    static FftEngine& instance() {
        static FftEngine e;
        return e;
    }

    void forward2d(int nx, int ny, std::complex<double>* in, std::complex<double>* out) {
        exec(plan2d(nx, ny, FFTW_FORWARD), in, out);
    }
    void backward2d(int nx, int ny, std::complex<double>* in, std::complex<double>* out) {
        exec(plan2d(nx, ny, FFTW_BACKWARD), in, out);
    }
    void forward3d(int nt, int nx, int ny, std::complex<double>* in, std::complex<double>* out) {
        exec(plan3d(nt, nx, ny, FFTW_FORWARD), in, out);
    }
    void backward3d(int nt, int nx, int ny, std::complex<double>* in, std::complex<double>* out) {
        exec(plan3d(nt, nx, ny, FFTW_BACKWARD), in, out);
    }

  private:
    FftEngine() = default;
    ~FftEngine() {
        for (auto& [k, p] : plans2d_) fftw_destroy_plan(p);
        for (auto& [k, p] : plans3d_) fftw_destroy_plan(p);
    }
    FftEngine(const FftEngine&) = delete;

    static void exec(fftw_plan p, std::complex<double>* in, std::complex<double>* out) {
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in), reinterpret_cast<fftw_complex*>(out));
    }

    fftw_plan plan2d(int nx, int ny, int sign) {
        std::lock_guard<std::mutex> lk(mtx_);
        const auto key = std::make_tuple(nx, ny, sign);
        auto it = plans2d_.find(key);
        if (it != plans2d_.end()) return it->second;
        std::vector<std::complex<double>> a(static_cast<std::size_t>(nx) * ny), b(a.size());
        fftw_plan p = fftw_plan_dft_2d(nx, ny, reinterpret_cast<fftw_complex*>(a.data()),
                                       reinterpret_cast<fftw_complex*>(b.data()), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw std::runtime_error("fftw_plan_dft_2d failed");
        plans2d_.emplace(key, p);
        return p;
    }

    fftw_plan plan3d(int nt, int nx, int ny, int sign) {
        std::lock_guard<std::mutex> lk(mtx_);
        const auto key = std::make_tuple(nt, nx, std::make_pair(ny, sign));
        auto it = plans3d_.find(key);
        if (it != plans3d_.end()) return it->second;
        std::vector<std::complex<double>> a(static_cast<std::size_t>(nt) * nx * ny), b(a.size());
        fftw_plan p = fftw_plan_dft_3d(nt, nx, ny, reinterpret_cast<fftw_complex*>(a.data()),
                                       reinterpret_cast<fftw_complex*>(b.data()), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw std::runtime_error("fftw_plan_dft_3d failed");
        plans3d_.emplace(key, p);
        return p;
    }

    std::mutex mtx_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans2d_;
    std::map<std::tuple<int, int, std::pair<int, int>>, fftw_plan> plans3d_;
};

/// u_hat = dx*dy * DFT(u): the Riemann-sum form of the paper's F^lambda,
/// so symbol formulas in (xi, q) port verbatim.
inline SpectralField to_spectral(const RealField& u) {
    const GridSpec& g = u.grid;
    if (u.samples.size() != g.size()) throw std::invalid_argument("to_spectral: sample count does not match grid");
    std::vector<std::complex<double>> in(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) in[i] = u.samples[i];
    SpectralField out(g);
    FftEngine::instance().forward2d(g.nx, g.ny, in.data(), out.coeffs.data());
    const double scale = g.dx() * g.dy();
    for (auto& c : out.coeffs) c *= scale;
    return out;
}

inline RealField from_spectral(const SpectralField& f) {
    const GridSpec& g = f.grid;
    if (f.coeffs.size() != g.size()) throw std::invalid_argument("from_spectral: coefficient count does not match grid");
    std::vector<std::complex<double>> tmp(f.coeffs), out(g.size());
    FftEngine::instance().backward2d(g.nx, g.ny, tmp.data(), out.data());
    RealField u(g);
    const double scale = 1.0 / (g.Lx * g.Ly());
    for (std::size_t i = 0; i < g.size(); ++i) u.samples[i] = out[i].real() * scale;
    return u;
}

/// Largest imaginary residue of the inverse transform, relative to the
/// field's magnitude; diagnostic for Hermitian-symmetry assertions.
inline double imaginary_residue(const SpectralField& f) {
    const GridSpec& g = f.grid;
    std::vector<std::complex<double>> tmp(f.coeffs), out(g.size());
    FftEngine::instance().backward2d(g.nx, g.ny, tmp.data(), out.data());
    double max_im = 0.0, max_abs = 0.0;
    for (const auto& c : out) {
        max_im = std::max(max_im, std::abs(c.imag()));
        max_abs = std::max(max_abs, std::abs(c));
    }
    return max_abs > 0.0 ? max_im / max_abs : 0.0;
}

/// Max deviation from u_hat(-xi,-q) = conj(u_hat(xi,q)), relative to the
/// largest coefficient.
inline double hermitian_defect(const SpectralField& f) {
    const GridSpec& g = f.grid;
    double max_abs = 0.0;
    for (const auto& c : f.coeffs) max_abs = std::max(max_abs, std::abs(c));
    if (max_abs == 0.0) return 0.0;
    double worst = 0.0;
    for (int ix = 0; ix < g.nx; ++ix) {
        for (int iy = 0; iy < g.ny; ++iy) {
            const int jx = GridSpec::signed_mode(ix, g.nx);
            const int jy = GridSpec::signed_mode(iy, g.ny);
            std::size_t mirror;
            if (!g.mode_index(-jx, -jy, mirror)) continue;  // Nyquist row has no mirror
            worst = std::max(worst, std::abs(f.coeffs[mirror] - std::conj(f.coeffs[g.index(ix, iy)])));
        }
    }
    return worst / max_abs;
}

/// Brute-force evaluation of the defining transform sum, O((NxNy)^2).
/// Test oracle only; refuses grids above 32x32.
inline SpectralField dft_oracle(const RealField& u) {
    const GridSpec& g = u.grid;
    if (g.nx > 32 || g.ny > 32)
        throw std::invalid_argument("dft_oracle: grid exceeds the 32x32 cost guard");
    SpectralField out(g);
    const double scale = g.dx() * g.dy();
    for (int ix = 0; ix < g.nx; ++ix) {
        for (int iy = 0; iy < g.ny; ++iy) {
            const double xi = g.xi(ix), q = g.q(iy);
            std::complex<double> acc{0.0, 0.0};
            for (int i = 0; i < g.nx; ++i)
                for (int j = 0; j < g.ny; ++j) {
                    const double ph = g.x(i) * xi + g.y(j) * q;
                    acc += u.at(i, j) * std::complex<double>(std::cos(ph), -std::sin(ph));
                }
            out.at(ix, iy) = acc * scale;
        }
    }
    return out;
}

}  // namespace gzk
