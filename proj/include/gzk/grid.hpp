#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gzk {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Discretization of the cylinder R x T_lambda as a long periodic box:
/// x in [0, Lx) with Nx points, y in [0, 2*pi*lambda) with Ny points.
/// x-frequencies xi_j = 2*pi*j/Lx, y-frequencies q_m = m/lambda with
/// j in [-Nx/2, Nx/2), m in [-Ny/2, Ny/2)  (FFT index order).
///
/// All "R x T" statements are exercised on data decaying below round-off
/// before reaching the x-boundary, so the box truncation is invisible at
/// the tolerances used here.
struct GridSpec {
    double Lx = 2.0 * kPi;
    double lambda = 1.0;
    int nx = 0;
    int ny = 0;
    double pad_factor = 1.0;

    double dx() const { return Lx / nx; }
    double dy() const { return 2.0 * kPi * lambda / ny; }
    double Ly() const { return 2.0 * kPi * lambda; }

    double x(int i) const { return i * dx(); }
    double y(int j) const { return j * dy(); }

    /// Signed mode index for FFT storage order: {0,...,n/2-1,-n/2,...,-1}.
    static int signed_mode(int idx, int n) { return idx < n / 2 ? idx : idx - n; }

    double xi(int ix) const { return 2.0 * kPi * signed_mode(ix, nx) / Lx; }
    double q(int iy) const { return signed_mode(iy, ny) / lambda; }

    double xi_max() const { return 2.0 * kPi * (nx / 2) / Lx; }
    double q_max() const { return (ny / 2) / lambda; }

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(ix) * ny + iy; }

    /// Index of the mode with signed indices (jx, jy); false if out of band.
    bool mode_index(int jx, int jy, std::size_t& out) const {
        if (jx < -nx / 2 || jx >= nx / 2 || jy < -ny / 2 || jy >= ny / 2) return false;
        const int ix = jx >= 0 ? jx : jx + nx;
        const int iy = jy >= 0 ? jy : jy + ny;
        out = index(ix, iy);
        return true;
    }

    bool same_as(const GridSpec& o) const {
        return nx == o.nx && ny == o.ny && Lx == o.Lx && lambda == o.lambda;
    }
};

inline GridSpec make_grid(double Lx, double lambda, int nx, int ny, double pad_factor) {
    std::string err;
    if (!(Lx > 0.0)) err += "Lx must be positive (got " + std::to_string(Lx) + "); ";
    if (!(lambda >= 1.0)) err += "lambda must be >= 1 (got " + std::to_string(lambda) + "); ";
    if (nx <= 0 || nx % 2 != 0) err += "Nx must be even and positive (got " + std::to_string(nx) + "); ";
    if (ny <= 0 || ny % 2 != 0) err += "Ny must be even and positive (got " + std::to_string(ny) + "); ";
    if (!(pad_factor >= 1.0)) err += "pad_factor must be >= 1 (got " + std::to_string(pad_factor) + "); ";
    if (!err.empty()) throw std::invalid_argument("make_grid: " + err);
    GridSpec g;
    g.Lx = Lx;
    g.lambda = lambda;
    g.nx = nx;
    g.ny = ny;
    g.pad_factor = pad_factor;
    return g;
}

/// Real samples u(x_i, y_j), row-major (x rows, y columns).
struct RealField {
    GridSpec grid;
    std::vector<double> samples;

    RealField() = default;
    explicit RealField(const GridSpec& g) : grid(g), samples(g.size(), 0.0) {}

    double& at(int ix, int iy) { return samples[grid.index(ix, iy)]; }
    double at(int ix, int iy) const { return samples[grid.index(ix, iy)]; }
};

/// Fourier coefficients u_hat(xi_j, q_m) in FFT index order, under the
/// Riemann-sum convention u_hat = dx*dy * sum u * exp(-i(x xi + y q)).
struct SpectralField {
    GridSpec grid;
    std::vector<std::complex<double>> coeffs;

    SpectralField() = default;
    explicit SpectralField(const GridSpec& g) : grid(g), coeffs(g.size(), {0.0, 0.0}) {}

    std::complex<double>& at(int ix, int iy) { return coeffs[grid.index(ix, iy)]; }
    std::complex<double> at(int ix, int iy) const { return coeffs[grid.index(ix, iy)]; }

    /// Coefficient at signed mode (jx, jy); zero outside the band.
    std::complex<double> mode(int jx, int jy) const {
        std::size_t idx;
        if (!grid.mode_index(jx, jy, idx)) return {0.0, 0.0};
        return coeffs[idx];
    }
};

/// Weight of one lattice point in the discrete Parseval identity:
///   sum |u|^2 dx dy = w2 * sum |u_hat|^2.
inline double parseval_weight(const GridSpec& g) { return 1.0 / (g.Lx * 2.0 * kPi * g.lambda); }

template <typename F>
RealField make_real_field(const GridSpec& g, F&& f) {
    RealField u(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) u.at(i, j) = f(g.x(i), g.y(j));
    return u;
}

}  // namespace gzk
