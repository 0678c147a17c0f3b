#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "gzk/invariants.hpp"
#include "gzk/spectral_ops.hpp"

namespace gzk {

/// sign * dx(u^{k+1}), dealiased.  The xi = 0 column is exactly zero.
inline SpectralField nonlinear_term(const SpectralField& u, const EquationSpec& eq) {
    validate(eq);
    SpectralField w = dealiased_power_spectral(u, eq.k + 1);
    const GridSpec& g = u.grid;
    for (int ix = 0; ix < g.nx; ++ix) {
        const std::complex<double> s(0.0, eq.sign * g.xi(ix));
        for (int iy = 0; iy < g.ny; ++iy) w.coeffs[g.index(ix, iy)] *= s;
    }
    return w;
}

enum class Scheme { IFRK4 };

struct StepperConfig {
    double dt = 1e-3;
    Scheme scheme = Scheme::IFRK4;
    int sample_every = 1;
    double c_safe = 0.5;        // advective stability guard constant
    bool nonlinearity = true;   // disable for free-flow runs
    bool store_snapshots = true;
    bool check_guard = true;
};

using ForcingFn = std::function<SpectralField(double)>;

/// dt bound of the advective stability guard for data u0.
inline double stability_dt_bound(const SpectralField& u0, const EquationSpec& eq, double c_safe) {
    RealField u = from_spectral(u0);
    double umax = 0.0;
    for (double v : u.samples) umax = std::max(umax, std::abs(v));
    const double raw = (eq.k + 1) * umax * u0.grid.xi_max();
    return raw > 0.0 ? c_safe / raw : std::numeric_limits<double>::infinity();
}

/// Time-stamped spectral snapshots plus the diagnostics series.
struct Trajectory {
    GridSpec grid;
    EquationSpec eq;
    bool nonlinearity = true;
    std::vector<double> times;
    std::vector<SpectralField> snapshots;
    std::vector<std::string> diag_names;          // column names after "t"
    std::vector<std::vector<double>> diagnostics;  // one row per sampled time

    std::size_t find_time(double t) const {
        for (std::size_t i = 0; i < times.size(); ++i)
            if (std::abs(times[i] - t) <= 1e-10 * (1.0 + std::abs(t))) return i;
        throw std::invalid_argument("Trajectory: time " + std::to_string(t) + " was not sampled");
    }
};

/// Extra per-snapshot diagnostics (e.g. modified energies) as callbacks.
struct DiagnosticsSpec {
    std::vector<double> sobolev_s;
    std::vector<std::pair<std::string, std::function<double(const SpectralField&)>>> extra;
};

/// One integrating-factor RK4 stepper bound to a grid and dt.  The linear
/// group is applied exactly (unitary phases), so only the advective
/// nonlinearity limits the step size.
class Stepper {
  public:
    Stepper(const GridSpec& g, const EquationSpec& eq, const StepperConfig& cfg)
        : grid_(g), eq_(eq), cfg_(cfg), ehalf_(g.size()), efull_(g.size()) {
        validate(eq);
        if (!(cfg.dt > 0.0)) throw std::invalid_argument("StepperConfig: dt must be positive");
        if (cfg.sample_every < 1) throw std::invalid_argument("StepperConfig: sample_every must be >= 1");
        for (int ix = 0; ix < g.nx; ++ix) {
            for (int iy = 0; iy < g.ny; ++iy) {
                const double ph = phase(g.xi(ix), g.q(iy));
                ehalf_[g.index(ix, iy)] = std::polar(1.0, 0.5 * cfg.dt * ph);
                efull_[g.index(ix, iy)] = std::polar(1.0, cfg.dt * ph);
            }
        }
    }

    SpectralField step(const SpectralField& u, double t, const ForcingFn& forcing = {}) const {
        const double h = cfg_.dt;
        SpectralField k1 = rhs(u, t, forcing);

        SpectralField tmp(grid_);
        for (std::size_t i = 0; i < tmp.coeffs.size(); ++i)
            tmp.coeffs[i] = ehalf_[i] * (u.coeffs[i] + 0.5 * h * k1.coeffs[i]);
        SpectralField k2 = rhs(tmp, t + 0.5 * h, forcing);

        for (std::size_t i = 0; i < tmp.coeffs.size(); ++i)
            tmp.coeffs[i] = ehalf_[i] * u.coeffs[i] + 0.5 * h * k2.coeffs[i];
        SpectralField k3 = rhs(tmp, t + 0.5 * h, forcing);

        for (std::size_t i = 0; i < tmp.coeffs.size(); ++i)
            tmp.coeffs[i] = efull_[i] * u.coeffs[i] + h * ehalf_[i] * k3.coeffs[i];
        SpectralField k4 = rhs(tmp, t + h, forcing);

        SpectralField out(grid_);
        for (std::size_t i = 0; i < out.coeffs.size(); ++i)
            out.coeffs[i] = efull_[i] * u.coeffs[i] +
                            h / 6.0 * (efull_[i] * k1.coeffs[i] +
                                       2.0 * ehalf_[i] * (k2.coeffs[i] + k3.coeffs[i]) + k4.coeffs[i]);
        return out;
    }

  private:
    SpectralField rhs(const SpectralField& u, double t, const ForcingFn& forcing) const {
        SpectralField n = cfg_.nonlinearity ? nonlinear_term(u, eq_) : SpectralField(grid_);
        if (forcing) {
            SpectralField f = forcing(t);
            for (std::size_t i = 0; i < n.coeffs.size(); ++i) n.coeffs[i] += f.coeffs[i];
        }
        return n;
    }

    GridSpec grid_;
    EquationSpec eq_;
    StepperConfig cfg_;
    std::vector<std::complex<double>> ehalf_, efull_;
};

inline SpectralField step(const SpectralField& u, const EquationSpec& eq, const StepperConfig& cfg,
                          double t = 0.0, const ForcingFn& forcing = {}) {
    return Stepper(u.grid, eq, cfg).step(u, t, forcing);
}

/// Evolve u0 to time T, sampling every cfg.sample_every steps (t = 0 and
/// t = T always included).  The number of steps is rounded so the steps
/// land exactly on T.  NaN/overflow aborts with the offending time.
inline Trajectory simulate(const RealField& u0, const EquationSpec& eq, StepperConfig cfg, double T,
                           const ForcingFn& forcing = {}, const DiagnosticsSpec& diag = {}) {
    if (!(T > 0.0)) throw std::invalid_argument("simulate: T must be positive");
    const GridSpec& g = u0.grid;
    SpectralField u = to_spectral(u0);

    if (cfg.nonlinearity && cfg.check_guard) {
        const double bound = stability_dt_bound(u, eq, cfg.c_safe);
        if (cfg.dt > bound)
            throw std::invalid_argument("simulate: dt " + std::to_string(cfg.dt) +
                                        " exceeds the stability guard " + std::to_string(bound));
    }

    const long nsteps = std::max<long>(1, std::lround(T / cfg.dt));
    cfg.dt = T / static_cast<double>(nsteps);
    Stepper stepper(g, eq, cfg);

    Trajectory traj;
    traj.grid = g;
    traj.eq = eq;
    traj.nonlinearity = cfg.nonlinearity;
    traj.diag_names = {"mass", "energy"};
    for (double s : diag.sobolev_s) traj.diag_names.push_back("H" + std::to_string(s));
    for (const auto& [name, fn] : diag.extra) traj.diag_names.push_back(name);

    auto record = [&](double t, const SpectralField& f) {
        double mx = 0.0;
        for (const auto& c : f.coeffs) mx = std::max(mx, std::max(std::abs(c.real()), std::abs(c.imag())));
        if (!std::isfinite(mx) || mx > 1e60)
            throw std::runtime_error("simulate: blow-up candidate, non-finite or overflowing state at t=" +
                                     std::to_string(t));
        traj.times.push_back(t);
        if (cfg.store_snapshots) traj.snapshots.push_back(f);
        std::vector<double> row;
        row.push_back(mass(f));
        row.push_back(energy(f, eq));
        for (double s : diag.sobolev_s) row.push_back(sobolev_norm(f, s));
        for (const auto& [name, fn] : diag.extra) row.push_back(fn(f));
        traj.diagnostics.push_back(std::move(row));
    };

    record(0.0, u);
    for (long n = 1; n <= nsteps; ++n) {
        const double t_prev = (n - 1) * cfg.dt;
        u = stepper.step(u, t_prev, forcing);
        if (n % cfg.sample_every == 0 || n == nsteps) record(n * cfg.dt, u);
    }
    return traj;
}

/// Analytic target family for integrator validation.
struct ManufacturedSolution {
    std::function<SpectralField(double)> u_hat;
    std::function<SpectralField(double)> du_dt_hat;
};

/// Forcing F = du*/dt + dx Delta u* - sign dx(u*^{k+1}) so that u* solves
/// the forced (Galerkin-truncated) equation exactly.
inline ForcingFn manufactured_forcing(const ManufacturedSolution& ms, const EquationSpec& eq,
                                      bool nonlinearity = true) {
    return [ms, eq, nonlinearity](double t) {
        SpectralField ustar = ms.u_hat(t);
        SpectralField f = ms.du_dt_hat(t);
        const GridSpec& g = ustar.grid;
        for (int ix = 0; ix < g.nx; ++ix) {
            const double xi = g.xi(ix);
            for (int iy = 0; iy < g.ny; ++iy) {
                const double q = g.q(iy);
                const std::complex<double> lin(0.0, -xi * (xi * xi + q * q));
                // dx Delta: (i xi)(-(xi^2+q^2))
                f.coeffs[g.index(ix, iy)] += lin * ustar.coeffs[g.index(ix, iy)];
            }
        }
        if (nonlinearity) {
            SpectralField n = nonlinear_term(ustar, eq);
            for (std::size_t i = 0; i < f.coeffs.size(); ++i) f.coeffs[i] -= n.coeffs[i];
        }
        return f;
    };
}

/// u_{0,lambda}(x,y) = lambda^{-2/k} u0(x/lambda, y/lambda) realized as an
/// exact spectral relabeling onto the grid (lambda*Lx, lambda*lambda0):
/// g_hat(xi,q) = lambda^{2-2/k} u0_hat(lambda*xi, lambda*q).
inline RealField rescale_initial(const RealField& u0, int lambda, int k) {
    if (lambda < 1) throw std::invalid_argument("rescale_initial: lambda must be a positive integer");
    if (k < 1) throw std::invalid_argument("rescale_initial: k must be >= 1");
    if (lambda == 1) return u0;
    const GridSpec& g = u0.grid;
    GridSpec gl = g;
    gl.Lx = g.Lx * lambda;
    gl.lambda = g.lambda * lambda;
    SpectralField hat = to_spectral(u0);
    SpectralField out(gl);
    const double factor = std::pow(static_cast<double>(lambda), 2.0 - 2.0 / k);
    for (std::size_t i = 0; i < hat.coeffs.size(); ++i) out.coeffs[i] = factor * hat.coeffs[i];
    return from_spectral(out);
}

}  // namespace gzk
