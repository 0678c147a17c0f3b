#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "gzk/fft.hpp"
#include "gzk/grid.hpp"

namespace gzk {

/// Dispersion phase of the linear flow: phi(xi, q) = xi (xi^2 + q^2).
inline double phase(double xi, double q) { return xi * (xi * xi + q * q); }

/// Dilated frequency norm squared 3 xi^2 + q^2 (the quantity whose
/// difference drives the bilinear smoothing multiplier).
inline double dilated_norm_sq(double xi, double q) { return 3.0 * xi * xi + q * q; }

/// Phase mismatch of an interacting pair: phi(out) - phi(1) - phi(out-1).
inline double resonance_zk(double xi1, double q1, double xi, double q) {
    return phase(xi, q) - phase(xi1, q1) - phase(xi - xi1, q - q1);
}

/// Phase mismatch of an interacting triple for the cubic nonlinearity.
inline double resonance_mzk(double xi1, double q1, double xi2, double q2, double xi, double q) {
    return phase(xi, q) - phase(xi1, q1) - phase(xi2, q2) - phase(xi - xi1 - xi2, q - q1 - q2);
}

/// Coefficient-wise multiplication by a frequency symbol.
template <typename Symbol>
SpectralField apply_symbol(const SpectralField& f, Symbol&& symbol) {
    const GridSpec& g = f.grid;
    SpectralField out(g);
    for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix);
        for (int iy = 0; iy < g.ny; ++iy) {
            const std::complex<double> s = symbol(xi, g.q(iy));
            if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
                throw std::invalid_argument("apply_symbol: non-finite symbol value at (xi=" +
                                            std::to_string(xi) + ", q=" + std::to_string(g.q(iy)) + ")");
            out.coeffs[g.index(ix, iy)] = f.coeffs[g.index(ix, iy)] * s;
        }
    }
    return out;
}

namespace symbols {

/// e^{-t dx Delta}: multiplies by e^{i t phi(xi,q)}.
inline auto free_propagator(double t) {
    return [t](double xi, double q) { return std::complex<double>(std::cos(t * phase(xi, q)), std::sin(t * phase(xi, q))); };
}
inline auto deriv_x() {
    return [](double xi, double) { return std::complex<double>(0.0, xi); };
}
inline auto laplacian() {
    return [](double xi, double q) { return std::complex<double>(-(xi * xi + q * q), 0.0); };
}
/// Riesz potential |(xi,q)|_2^s; the zero mode carries no homogeneous
/// content, so the symbol there is 0 for every s.
inline auto riesz(double s) {
    return [s](double xi, double q) {
        const double r2 = xi * xi + q * q;
        return std::complex<double>(r2 == 0.0 ? 0.0 : std::pow(r2, 0.5 * s), 0.0);
    };
}
inline auto bessel(double s) {
    return [s](double xi, double q) { return std::complex<double>(std::pow(1.0 + xi * xi + q * q, 0.5 * s), 0.0); };
}
/// Riesz potential in x only; symbol 0 on the xi = 0 column.
inline auto riesz_x(double s) {
    return [s](double xi, double) {
        return std::complex<double>(xi == 0.0 ? 0.0 : std::pow(std::abs(xi), s), 0.0);
    };
}
inline auto bessel_y(double s) {
    return [s](double, double q) { return std::complex<double>(std::pow(1.0 + q * q, 0.5 * s), 0.0); };
}

}  // namespace symbols

namespace detail {

inline int padded_size(int n, double pad_factor) {
    int np = static_cast<int>(std::ceil(n * pad_factor));
    if (np % 2 != 0) ++np;
    return np;
}

/// Scatter grid-band coefficients into a larger FFT-ordered array.
inline void embed(const SpectralField& f, int npx, int npy, std::vector<std::complex<double>>& out) {
    const GridSpec& g = f.grid;
    out.assign(static_cast<std::size_t>(npx) * npy, {0.0, 0.0});
    for (int ix = 0; ix < g.nx; ++ix) {
        const int jx = GridSpec::signed_mode(ix, g.nx);
        const int px = jx >= 0 ? jx : jx + npx;
        for (int iy = 0; iy < g.ny; ++iy) {
            const int jy = GridSpec::signed_mode(iy, g.ny);
            const int py = jy >= 0 ? jy : jy + npy;
            out[static_cast<std::size_t>(px) * npy + py] = f.coeffs[g.index(ix, iy)];
        }
    }
}

/// Physical samples of a band-limited field on its pad_factor-refined grid.
inline std::vector<std::complex<double>> padded_samples(const SpectralField& f, int npx, int npy) {
    std::vector<std::complex<double>> hat, phys(static_cast<std::size_t>(npx) * npy);
    embed(f, npx, npy, hat);
    FftEngine::instance().backward2d(npx, npy, hat.data(), phys.data());
    const double scale = 1.0 / (f.grid.Lx * f.grid.Ly());
    for (auto& c : phys) c *= scale;
    return phys;
}

/// Composite Simpson over equispaced samples; a 3/8 block absorbs an odd
/// interval count.
inline double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 3) throw std::invalid_argument("simpson: need at least 3 samples");
    std::size_t m = n;
    double tail = 0.0;
    if ((n - 1) % 2 != 0) {
        if (n < 4) throw std::invalid_argument("simpson: need at least 4 samples for odd interval count");
        tail = 3.0 * h / 8.0 * (f[n - 4] + 3.0 * f[n - 3] + 3.0 * f[n - 2] + f[n - 1]);
        m = n - 3;
    }
    double acc = f[0] + f[m - 1];
    for (std::size_t i = 1; i + 1 < m; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return acc * h / 3.0 + tail;
}

/// Truncate a padded FFT-ordered coefficient array back to the grid band.
inline SpectralField truncate(const GridSpec& g, int npx, int npy,
                              const std::vector<std::complex<double>>& hat) {
    SpectralField out(g);
    for (int ix = 0; ix < g.nx; ++ix) {
        const int jx = GridSpec::signed_mode(ix, g.nx);
        const int px = jx >= 0 ? jx : jx + npx;
        for (int iy = 0; iy < g.ny; ++iy) {
            const int jy = GridSpec::signed_mode(iy, g.ny);
            const int py = jy >= 0 ? jy : jy + npy;
            out.coeffs[g.index(ix, iy)] = hat[static_cast<std::size_t>(px) * npy + py];
        }
    }
    return out;
}

}  // namespace detail

/// Zero the unpaired Nyquist rows; product operations interpret fields as
/// trig polynomials on the open band [-n/2+1, n/2-1].
inline void zero_nyquist(SpectralField& f) {
    const GridSpec& g = f.grid;
    for (int iy = 0; iy < g.ny; ++iy) f.coeffs[g.index(g.nx / 2, iy)] = {0.0, 0.0};
    for (int ix = 0; ix < g.nx; ++ix) f.coeffs[g.index(ix, g.ny / 2)] = {0.0, 0.0};
}

/// u^p computed on the zero-padded grid and truncated back to the band:
/// alias-free for band-limited input when pad_factor >= (p+1)/2.
inline SpectralField dealiased_power_spectral(const SpectralField& f, int p) {
    const GridSpec& g = f.grid;
    if (p < 1) throw std::invalid_argument("dealiased_power: p must be >= 1");
    const double required = 0.5 * (p + 1);
    if (g.pad_factor + 1e-12 < required)
        throw std::invalid_argument("dealiased_power: pad_factor " + std::to_string(g.pad_factor) +
                                    " insufficient for degree " + std::to_string(p) +
                                    "; need >= " + std::to_string(required));
    if (p == 1) return f;
    const int npx = detail::padded_size(g.nx, g.pad_factor);
    const int npy = detail::padded_size(g.ny, g.pad_factor);
    auto phys = detail::padded_samples(f, npx, npy);
    for (auto& c : phys) {
        double v = c.real(), r = 1.0;
        for (int i = 0; i < p; ++i) r *= v;
        c = {r, 0.0};
    }
    std::vector<std::complex<double>> hat(phys.size());
    FftEngine::instance().forward2d(npx, npy, phys.data(), hat.data());
    const double scale = (g.Lx / npx) * (g.Ly() / npy);
    for (auto& c : hat) c *= scale;
    return detail::truncate(g, npx, npy, hat);
}

inline RealField dealiased_power(const RealField& u, int p) {
    return from_spectral(dealiased_power_spectral(to_spectral(u), p));
}

/// Exact quadrature of the integral of u^p over the box (the zero mode of
/// the degree-p product); alias-free when pad_factor >= p/2.
/// With take_abs the integrand is |u|^p (Lebesgue norms of odd power).
inline double integral_power(const SpectralField& f, int p, bool take_abs = false) {
    const GridSpec& g = f.grid;
    if (g.pad_factor + 1e-12 < 0.5 * p && !take_abs)
        throw std::invalid_argument("integral_power: pad_factor " + std::to_string(g.pad_factor) +
                                    " insufficient for degree " + std::to_string(p) +
                                    "; need >= " + std::to_string(0.5 * p));
    const double pad = std::max(g.pad_factor, 0.5 * p);
    const int npx = detail::padded_size(g.nx, pad);
    const int npy = detail::padded_size(g.ny, pad);
    auto phys = detail::padded_samples(f, npx, npy);
    double acc = 0.0;
    for (const auto& c : phys) {
        double v = c.real();
        if (take_abs) v = std::abs(v);
        double r = 1.0;
        for (int i = 0; i < p; ++i) r *= v;
        acc += r;
    }
    return acc * (g.Lx / npx) * (g.Ly() / npy);
}

/// Discrete ||J^s f||_{L^2} (inhomogeneous) or ||I^s f||_{L^2}
/// (homogeneous) under the Parseval convention of the grid.
inline double sobolev_norm(const SpectralField& f, double s, bool homogeneous = false) {
    const GridSpec& g = f.grid;
    const double w2 = parseval_weight(g);
    if (homogeneous && s < 0.0) {
        double scale = 0.0;
        for (const auto& c : f.coeffs) scale = std::max(scale, std::abs(c));
        if (std::abs(f.coeffs[0]) > 1e-13 * std::max(scale, 1.0))
            throw std::invalid_argument("sobolev_norm: homogeneous norm of negative order requires zero mean");
    }
    double acc = 0.0;
    for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix);
        for (int iy = 0; iy < g.ny; ++iy) {
            const double q = g.q(iy);
            const double r2 = xi * xi + q * q;
            double w;
            if (homogeneous)
                w = r2 == 0.0 ? 0.0 : std::pow(r2, s);
            else
                w = std::pow(1.0 + r2, s);
            acc += w * std::norm(f.coeffs[g.index(ix, iy)]);
        }
    }
    return std::sqrt(w2 * acc);
}

inline double l2_norm(const SpectralField& f) { return sobolev_norm(f, 0.0); }

}  // namespace gzk
