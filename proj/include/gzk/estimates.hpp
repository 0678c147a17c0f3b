#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gzk/fft.hpp"
#include "gzk/grid.hpp"
#include "gzk/spectral_ops.hpp"

namespace gzk {

/// (tau, xi, q) lattice: tau in (2*pi/Tt) Z, xi in (2*pi/Lx) Z, q in Z/lambda,
/// all truncated symmetrically, FFT index order, coefficients under the
/// Riemann-sum transform convention (dt dx dy sums).
struct SpaceTimeGrid {
    int nt = 0, nx = 0, ny = 0;
    double Tt = 2.0 * kPi;
    double Lx = 2.0 * kPi;
    double lambda = 1.0;

    double tau(int it) const { return 2.0 * kPi * GridSpec::signed_mode(it, nt) / Tt; }
    double xi(int ix) const { return 2.0 * kPi * GridSpec::signed_mode(ix, nx) / Lx; }
    double q(int iy) const { return GridSpec::signed_mode(iy, ny) / lambda; }

    std::size_t size() const { return static_cast<std::size_t>(nt) * nx * ny; }
    std::size_t index(int it, int ix, int iy) const {
        return (static_cast<std::size_t>(it) * nx + ix) * ny + iy;
    }
    bool mode_index(int jt, int jx, int jy, std::size_t& out) const {
        if (jt < -nt / 2 || jt >= nt / 2 || jx < -nx / 2 || jx >= nx / 2 || jy < -ny / 2 || jy >= ny / 2)
            return false;
        out = index(jt >= 0 ? jt : jt + nt, jx >= 0 ? jx : jx + nx, jy >= 0 ? jy : jy + ny);
        return true;
    }
    bool same_as(const SpaceTimeGrid& o) const {
        return nt == o.nt && nx == o.nx && ny == o.ny && Tt == o.Tt && Lx == o.Lx && lambda == o.lambda;
    }
};

inline SpaceTimeGrid make_spacetime_grid(int nt, int nx, int ny, double Tt, double Lx, double lambda) {
    if (nt <= 0 || nt % 2 || nx <= 0 || nx % 2 || ny <= 0 || ny % 2)
        throw std::invalid_argument("make_spacetime_grid: mode counts must be even and positive");
    if (!(Tt > 0.0 && Lx > 0.0 && lambda >= 1.0))
        throw std::invalid_argument("make_spacetime_grid: need Tt>0, Lx>0, lambda>=1");
    return SpaceTimeGrid{nt, nx, ny, Tt, Lx, lambda};
}

struct SpaceTimeField {
    SpaceTimeGrid grid;
    std::vector<std::complex<double>> coeffs;

    SpaceTimeField() = default;
    explicit SpaceTimeField(const SpaceTimeGrid& g) : grid(g), coeffs(g.size(), {0.0, 0.0}) {}
};

/// Parameters of the rescaled Bourgain norm X_{s,b,lambda}.
struct XsbSpec {
    double s = 0.0;
    double b = 0.0;
};

/// Weight of one lattice point in the space-time Parseval identity.
inline double parseval_weight(const SpaceTimeGrid& g) {
    return 1.0 / (2.0 * kPi * g.lambda * g.Tt * g.Lx);
}

/// Discrete X_{s,b,lambda} norm: weights <(xi,q)>^{2s} <tau - phi>^{2b}.
/// Extra y-weight exponent jy_s implements J_y^{jy_s} inside the norm.
inline double xsb_norm(const SpaceTimeField& f, const XsbSpec& spec, double jy_s = 0.0) {
    const SpaceTimeGrid& g = f.grid;
    double acc = 0.0;
    for (int it = 0; it < g.nt; ++it) {
        const double tau = g.tau(it);
        for (int ix = 0; ix < g.nx; ++ix) {
            const double xi = g.xi(ix);
            for (int iy = 0; iy < g.ny; ++iy) {
                const double q = g.q(iy);
                const std::complex<double>& c = f.coeffs[g.index(it, ix, iy)];
                if (c == std::complex<double>(0.0, 0.0)) continue;
                const double mod = tau - phase(xi, q);
                double w = std::pow(1.0 + xi * xi + q * q, spec.s) * std::pow(1.0 + mod * mod, spec.b);
                if (jy_s != 0.0) w *= std::pow(1.0 + q * q, jy_s);
                acc += w * std::norm(c);
            }
        }
    }
    return std::sqrt(parseval_weight(g) * acc);
}

/// Physical space-time samples by inverse 3D transform.
inline std::vector<std::complex<double>> spacetime_samples(const SpaceTimeField& f) {
    std::vector<std::complex<double>> tmp(f.coeffs), out(f.grid.size());
    FftEngine::instance().backward3d(f.grid.nt, f.grid.nx, f.grid.ny, tmp.data(), out.data());
    const double scale = 1.0 / (f.grid.Tt * f.grid.Lx * 2.0 * kPi * f.grid.lambda);
    for (auto& c : out) c *= scale;
    return out;
}

/// Lattice quadrature of ||f||_{L^p_{txy}}, p in {2, 4, 6}.
inline double spacetime_lebesgue_norm(const SpaceTimeField& f, int p) {
    if (p != 2 && p != 4 && p != 6)
        throw std::invalid_argument("spacetime_lebesgue_norm: p must be one of {2,4,6}");
    const SpaceTimeGrid& g = f.grid;
    auto phys = spacetime_samples(f);
    const double dv = (g.Tt / g.nt) * (g.Lx / g.nx) * (2.0 * kPi * g.lambda / g.ny);
    double acc = 0.0;
    for (const auto& c : phys) {
        const double a2 = std::norm(c);
        double w = a2;
        if (p >= 4) w *= a2;
        if (p == 6) w *= a2;
        acc += w;
    }
    return std::pow(dv * acc, 1.0 / p);
}

/// The bilinear smoothing convolution: multiplier | |(xi1,q1)|^2 - |(xi2,q2)|^2 |^{1/2}
/// with the dilated norm 3 xi^2 + q^2, prefactor 1/lambda, and the lattice
/// measure d(tau1, xi1) -> dtau dxi sum.  Zero coefficients are skipped,
/// which keeps sparse trial fields cheap; the pair-count budget guards the
/// dense case.
inline SpaceTimeField mp_spacetime(const SpaceTimeField& u, const SpaceTimeField& v) {
    const SpaceTimeGrid& g = u.grid;
    if (!v.grid.same_as(g)) throw std::invalid_argument("mp_spacetime: lattice mismatch");
    struct Entry {
        int jt, jx, jy;
        double dil;
        std::complex<double> c;
    };
    auto gather = [&g](const SpaceTimeField& f) {
        std::vector<Entry> list;
        for (int it = 0; it < g.nt; ++it)
            for (int ix = 0; ix < g.nx; ++ix)
                for (int iy = 0; iy < g.ny; ++iy) {
                    const auto& c = f.coeffs[g.index(it, ix, iy)];
                    if (c == std::complex<double>(0.0, 0.0)) continue;
                    list.push_back({GridSpec::signed_mode(it, g.nt), GridSpec::signed_mode(ix, g.nx),
                                    GridSpec::signed_mode(iy, g.ny), dilated_norm_sq(g.xi(ix), g.q(iy)), c});
                }
        return list;
    };
    const auto ul = gather(u);
    const auto vl = gather(v);
    if (static_cast<double>(ul.size()) * static_cast<double>(vl.size()) > 4.0e9)
        throw std::invalid_argument("mp_spacetime: pair budget exceeded (" + std::to_string(ul.size()) +
                                    " x " + std::to_string(vl.size()) + " nonzero entries)");
    SpaceTimeField out(g);
    const double measure = (2.0 * kPi / g.Tt) * (2.0 * kPi / g.Lx) / g.lambda;
    for (const auto& a : ul) {
        for (const auto& b : vl) {
            std::size_t idx;
            if (!g.mode_index(a.jt + b.jt, a.jx + b.jx, a.jy + b.jy, idx)) continue;
            out.coeffs[idx] += measure * std::sqrt(std::abs(a.dil - b.dil)) * a.c * b.c;
        }
    }
    return out;
}

enum class XsbProfile { flat_on_shells, gaussian_decay };

struct XsbSamplerConfig {
    XsbProfile profile = XsbProfile::flat_on_shells;
    double b_decay = 0.55;     // modulation decay exponent b + eps_dec
    int tau_window = 3;        // flat-on-shells: modulation slices kept around tau = phi
    int active_modes = 0;      // flat-on-shells: random spatial modes (0 = all)
    double gaussian_sigma = 0; // gaussian profile width (0 = quarter of the band)
};

/// Hermitian-symmetric random field with modulation weight
/// <tau - phi(xi,q)>^{-b_decay} centered on the characteristic surface.
/// Deterministic per seed, bit-exact.
inline SpaceTimeField random_xsb_field(const SpaceTimeGrid& g, const XsbSamplerConfig& cfg,
                                       std::uint64_t seed) {
    SpaceTimeField f(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);

    // choose the active spatial modes (positive-x half; mirrored later)
    std::vector<std::pair<int, int>> modes;
    for (int jx = 0; jx < g.nx / 2; ++jx)
        for (int jy = -g.ny / 2 + 1; jy < g.ny / 2; ++jy) {
            if (jx == 0 && jy <= 0) continue;  // keep one of each Hermitian pair
            modes.push_back({jx, jy});
        }
    if (cfg.profile == XsbProfile::flat_on_shells && cfg.active_modes > 0 &&
        cfg.active_modes < static_cast<int>(modes.size())) {
        std::vector<std::pair<int, int>> chosen;
        std::vector<std::size_t> idx(modes.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (int i = 0; i < cfg.active_modes; ++i) {
            std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
            const std::size_t j = pick(rng);
            chosen.push_back(modes[idx[j]]);
            idx.erase(idx.begin() + j);
        }
        modes.swap(chosen);
    }

    const double dtau = 2.0 * kPi / g.Tt;
    const double sigma = cfg.gaussian_sigma > 0.0 ? cfg.gaussian_sigma
                                                  : 0.25 * std::sqrt(std::pow(2.0 * kPi * (g.nx / 2) / g.Lx, 2) +
                                                                     std::pow((g.ny / 2) / g.lambda, 2));
    for (const auto& [jx, jy] : modes) {
        const double xi = 2.0 * kPi * jx / g.Lx;
        const double q = jy / g.lambda;
        const double ph = phase(xi, q);
        const int jt_center = static_cast<int>(std::lround(ph / dtau));
        double spatial = 1.0;
        if (cfg.profile == XsbProfile::gaussian_decay)
            spatial = std::exp(-(xi * xi + q * q) / (2.0 * sigma * sigma));
        const int half_win = cfg.profile == XsbProfile::flat_on_shells ? cfg.tau_window : g.nt / 2;
        for (int dt = -half_win; dt <= half_win; ++dt) {
            const int jt = jt_center + dt;
            std::size_t idx, midx;
            if (!g.mode_index(jt, jx, jy, idx)) continue;
            const double tau = 2.0 * kPi * jt / g.Tt;
            const double mod = tau - ph;
            const double mag = spatial * std::pow(1.0 + mod * mod, -0.5 * cfg.b_decay);
            const double th = angle(rng);
            const std::complex<double> c = std::polar(mag, th);
            f.coeffs[idx] += c;
            if (g.mode_index(-jt, -jx, -jy, midx)) f.coeffs[midx] += std::conj(c);
        }
    }
    return f;
}

enum class EstimateTag { MP_31, L4_32, BILIN_33, AIRY_L6_37 };

struct EstimateCase {
    EstimateTag tag = EstimateTag::MP_31;
    double eps = 0.05;   // the "epsilon > 0 arbitrary" stand-in
    double b = 0.55;     // the "b > 1/2" stand-in
    double b1 = 0.51;
    double b2 = 0.51;
    double alpha = 1.0;         // projector exponent of BILIN_33
    double proj_c1 = 1.0;       // implicit constant in |3xi^2-q^2| >= c1 |xi|^alpha
    double proj_c2 = 1.0;       // implicit constant in |xi| >= c2
};

inline void validate(const EstimateCase& c) {
    if (c.tag == EstimateTag::MP_31 && !(c.b1 > 0.5 && c.b2 > 0.5))
        throw std::invalid_argument("EstimateCase: MP_31 requires b1, b2 > 1/2");
    if ((c.tag == EstimateTag::L4_32 || c.tag == EstimateTag::BILIN_33) && !(c.b > 0.5))
        throw std::invalid_argument("EstimateCase: requires b > 1/2");
    if (c.tag == EstimateTag::BILIN_33 && !(c.alpha >= 0.0 && c.alpha <= 1.0))
        throw std::invalid_argument("EstimateCase: alpha must lie in [0,1]");
}

namespace detail {

/// Pointwise product of two space-time fields on a 2x zero-padded lattice;
/// returns the full (padded) product spectrum and its grid.
inline SpaceTimeField spacetime_product_padded(const SpaceTimeField& u, const SpaceTimeField& v) {
    const SpaceTimeGrid& g = u.grid;
    SpaceTimeGrid gp = g;
    gp.nt = 2 * g.nt;
    gp.nx = 2 * g.nx;
    gp.ny = 2 * g.ny;
    auto embed = [&](const SpaceTimeField& f) {
        SpaceTimeField out(gp);
        for (int it = 0; it < g.nt; ++it)
            for (int ix = 0; ix < g.nx; ++ix)
                for (int iy = 0; iy < g.ny; ++iy) {
                    std::size_t idx;
                    gp.mode_index(GridSpec::signed_mode(it, g.nt), GridSpec::signed_mode(ix, g.nx),
                                  GridSpec::signed_mode(iy, g.ny), idx);
                    out.coeffs[idx] = f.coeffs[g.index(it, ix, iy)];
                }
        return out;
    };
    SpaceTimeField ue = embed(u), ve = embed(v);
    auto us = spacetime_samples(ue);
    auto vs = spacetime_samples(ve);
    SpaceTimeField prod(gp);
    for (std::size_t i = 0; i < us.size(); ++i) prod.coeffs[i] = us[i] * vs[i];
    std::vector<std::complex<double>> hat(prod.coeffs.size());
    FftEngine::instance().forward3d(gp.nt, gp.nx, gp.ny, prod.coeffs.data(), hat.data());
    const double scale = (gp.Tt / gp.nt) * (gp.Lx / gp.nx) * (2.0 * kPi * gp.lambda / gp.ny);
    prod.coeffs = std::move(hat);
    for (auto& c : prod.coeffs) c *= scale;
    return prod;
}

}  // namespace detail

/// LHS/RHS of one estimate for one trial pair of sampled fields.
/// Returns a negative value when the RHS is degenerate (trial discarded).
inline double estimate_trial_ratio(const EstimateCase& c, const SpaceTimeGrid& g, std::uint64_t seed,
                                   const XsbSamplerConfig& sampler) {
    validate(c);
    constexpr double kDegenerate = 1e-14;
    switch (c.tag) {
        case EstimateTag::MP_31: {
            SpaceTimeField u = random_xsb_field(g, sampler, seed);
            SpaceTimeField v = random_xsb_field(g, sampler, seed * 2654435761u + 1);
            const double rhs = xsb_norm(u, {0.0, c.b1}, 0.5 + c.eps) * xsb_norm(v, {0.0, c.b2});
            if (rhs < kDegenerate) return -1.0;
            SpaceTimeField w = mp_spacetime(u, v);
            return xsb_norm(w, {0.0, 0.0}) / rhs;
        }
        case EstimateTag::L4_32: {
            SpaceTimeField u = random_xsb_field(g, sampler, seed);
            const double rhs = xsb_norm(u, {c.eps, c.b});
            if (rhs < kDegenerate) return -1.0;
            return spacetime_lebesgue_norm(u, 4) / rhs;
        }
        case EstimateTag::BILIN_33: {
            SpaceTimeField u = random_xsb_field(g, sampler, seed);
            SpaceTimeField v = random_xsb_field(g, sampler, seed * 2654435761u + 1);
            const double rhs = xsb_norm(u, {c.eps, c.b}) * xsb_norm(v, {c.eps, c.b});
            if (rhs < kDegenerate) return -1.0;
            SpaceTimeField prod = detail::spacetime_product_padded(u, v);
            const SpaceTimeGrid& gp = prod.grid;
            double acc = 0.0;
            for (int it = 0; it < gp.nt; ++it)
                for (int ix = 0; ix < gp.nx; ++ix) {
                    const double xi = gp.xi(ix);
                    if (!(std::abs(xi) >= c.proj_c2)) continue;
                    const double ix_w = std::pow(std::abs(xi), 0.5 * c.alpha);  // I_x^{alpha/4} squared
                    for (int iy = 0; iy < gp.ny; ++iy) {
                        const double q = gp.q(iy);
                        if (!(std::abs(3.0 * xi * xi - q * q) >= c.proj_c1 * std::pow(std::abs(xi), c.alpha)))
                            continue;
                        acc += ix_w * std::norm(prod.coeffs[gp.index(it, ix, iy)]);
                    }
                }
            return std::sqrt(parseval_weight(gp) * acc) / rhs;
        }
        case EstimateTag::AIRY_L6_37: {
            // free-solution quotient: ||I_x^{1/6} e^{-t dx Delta} u0||_{L^6} / ||J_y^{1/3} u0||_{L^2}
            GridSpec sg = make_grid(g.Lx, g.lambda, g.nx, g.ny, 1.0);
            SpectralField u0(sg);
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (int jx = 0; jx < sg.nx / 2; ++jx)
                for (int jy = -sg.ny / 2 + 1; jy < sg.ny / 2; ++jy) {
                    if (jx == 0 && jy <= 0) continue;
                    const std::complex<double> cc(gauss(rng), gauss(rng));
                    std::size_t i1, i2;
                    sg.mode_index(jx, jy, i1);
                    sg.mode_index(-jx, -jy, i2);
                    const double decay = std::exp(-0.1 * (sg.xi(jx >= 0 ? jx : jx + sg.nx) * sg.xi(jx >= 0 ? jx : jx + sg.nx) +
                                                          jy / sg.lambda * (jy / sg.lambda)));
                    u0.coeffs[i1] = cc * decay;
                    u0.coeffs[i2] = std::conj(cc) * decay;
                }
            double rhs = 0.0;
            for (int ix = 0; ix < sg.nx; ++ix)
                for (int iy = 0; iy < sg.ny; ++iy) {
                    const double q = sg.q(iy);
                    rhs += std::pow(1.0 + q * q, 1.0 / 3.0) * std::norm(u0.coeffs[sg.index(ix, iy)]);
                }
            rhs = std::sqrt(parseval_weight(sg) * rhs);
            if (rhs < kDegenerate) return -1.0;
            SpectralField w = apply_symbol(u0, symbols::riesz_x(1.0 / 6.0));
            const double dt = g.Tt / g.nt;
            double acc = 0.0;
            for (int it = 0; it < g.nt; ++it) {
                SpectralField evolved = apply_symbol(w, symbols::free_propagator(it * dt));
                RealField phys = from_spectral(evolved);
                for (double vv : phys.samples) acc += vv * vv * vv * vv * vv * vv;
            }
            acc *= dt * sg.dx() * sg.dy();
            return std::pow(acc, 1.0 / 6.0) / rhs;
        }
    }
    return -1.0;
}

struct RatioReport {
    EstimateTag tag;
    std::vector<double> lambdas;
    std::vector<double> max_ratio;   // per lambda
    std::vector<int> discarded;      // per lambda
    int trials = 0;
    std::uint64_t seed = 0;
};

/// Per-lambda maxima of LHS/RHS over `trials` sampled pairs.  Ny scales
/// with lambda so the sampled q-band is lambda-independent.
inline RatioReport estimate_ratio(const EstimateCase& c, int nt, int nx, int ny_base, double Tt, double Lx,
                                  const std::vector<double>& lambda_list, int trials, std::uint64_t seed,
                                  const XsbSamplerConfig& sampler = {}) {
    validate(c);
    if (trials < 50) throw std::invalid_argument("estimate_ratio: need at least 50 trials per lambda");
    RatioReport rep;
    rep.tag = c.tag;
    rep.trials = trials;
    rep.seed = seed;
    for (double lam : lambda_list) {
        const int ny = static_cast<int>(std::lround(ny_base * lam));
        SpaceTimeGrid g = make_spacetime_grid(nt, nx, ny, Tt, Lx, lam);
        double best = 0.0;
        int discarded = 0;
        for (int t = 0; t < trials; ++t) {
            const std::uint64_t trial_seed = seed + 1000003ull * t;
            const double r = estimate_trial_ratio(c, g, trial_seed, sampler);
            if (r < 0.0) {
                ++discarded;
                continue;
            }
            if (!std::isfinite(r)) throw std::runtime_error("estimate_ratio: non-finite ratio sampled");
            best = std::max(best, r);
        }
        rep.lambdas.push_back(lam);
        rep.max_ratio.push_back(best);
        rep.discarded.push_back(discarded);
    }
    return rep;
}

}  // namespace gzk
