#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gzk/dynamics.hpp"
#include "gzk/invariants.hpp"
#include "gzk/spectral_ops.hpp"

namespace gzk {

/// The I-method multiplier m: identity below N, power law (r/N)^{s-1}
/// above 2N, blended in log radius on (N, 2N) by a smoothstep so that both
/// boundary branches are met exactly and m stays C^2 and monotone for s<1.
struct IMultiplierSpec {
    double N = 8.0;
    double s = 0.9;
    int blend_order = 5;  // 3 (cubic) or 5 (quintic) smoothstep
};

inline double smoothstep(double x, int order) {
    x = std::clamp(x, 0.0, 1.0);
    if (order == 3) return x * x * (3.0 - 2.0 * x);
    if (order == 5) return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
    throw std::invalid_argument("smoothstep: blend order must be 3 or 5");
}

inline double i_multiplier_value(double xi, double q, const IMultiplierSpec& spec) {
    if (!(spec.N > 0.0)) throw std::invalid_argument("IMultiplierSpec: N must be positive");
    const double r = std::sqrt(xi * xi + q * q);
    if (r <= spec.N) return 1.0;
    const double rho = std::log(r / spec.N);
    const double ln2 = std::log(2.0);
    if (rho >= ln2) return std::pow(r / spec.N, spec.s - 1.0);
    return std::exp((spec.s - 1.0) * smoothstep(rho / ln2, spec.blend_order) * rho);
}

inline SpectralField apply_IN(const SpectralField& f, const IMultiplierSpec& spec) {
    return apply_symbol(f, [&spec](double xi, double q) {
        return std::complex<double>(i_multiplier_value(xi, q, spec), 0.0);
    });
}

/// E_pm[I_N u]; reduces to the plain energy when N clears the grid band.
inline double modified_energy(const SpectralField& u, const IMultiplierSpec& ispec, const EquationSpec& eq) {
    return energy(apply_IN(u, ispec), eq);
}

/// E_pm[I_N u](t1) - E_pm[I_N u](t0) straight from stored snapshots.
inline double increment_direct(const Trajectory& traj, const IMultiplierSpec& ispec, const EquationSpec& eq,
                               double t0, double t1) {
    const auto i0 = traj.find_time(t0);
    const auto i1 = traj.find_time(t1);
    if (traj.snapshots.empty()) throw std::invalid_argument("increment_direct: trajectory stored no snapshots");
    return modified_energy(traj.snapshots[i1], ispec, eq) - modified_energy(traj.snapshots[i0], ispec, eq);
}

namespace detail {

/// Spatial integrand of the modified-energy increment identity:
///   -sign * <Delta I_N u, dx c> + <I_N(u^{k+1}), dx c>,
/// with c = I_N(u^{k+1}) - (I_N u)^{k+1} formed spectrally.
inline double increment_integrand(const SpectralField& u, const IMultiplierSpec& ispec,
                                  const EquationSpec& eq) {
    const GridSpec& g = u.grid;
    SpectralField inu = apply_IN(u, ispec);
    SpectralField a = apply_IN(dealiased_power_spectral(u, eq.k + 1), ispec);  // I_N(u^{k+1})
    SpectralField b = dealiased_power_spectral(inu, eq.k + 1);                 // (I_N u)^{k+1}
    const double w2 = parseval_weight(g);
    double acc = 0.0;
    for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix);
        for (int iy = 0; iy < g.ny; ++iy) {
            const double q = g.q(iy);
            const std::size_t idx = g.index(ix, iy);
            const std::complex<double> dxc = std::complex<double>(0.0, xi) * (a.coeffs[idx] - b.coeffs[idx]);
            const std::complex<double> lap = -(xi * xi + q * q) * inu.coeffs[idx];
            acc += (std::conj(-static_cast<double>(eq.sign) * lap + a.coeffs[idx]) * dxc).real();
        }
    }
    return w2 * acc;
}

}  // namespace detail

/// The commutator + potential route to the same increment: Simpson time
/// quadrature of the two spatial integrals over the stored snapshots.
inline double increment_commutator(const Trajectory& traj, const IMultiplierSpec& ispec,
                                   const EquationSpec& eq, double t0, double t1) {
    const auto i0 = traj.find_time(t0);
    const auto i1 = traj.find_time(t1);
    if (i1 < i0 + 2) throw std::invalid_argument("increment_commutator: fewer than 3 snapshots in range");
    std::vector<double> vals;
    vals.reserve(i1 - i0 + 1);
    for (std::size_t i = i0; i <= i1; ++i)
        vals.push_back(traj.nonlinearity ? detail::increment_integrand(traj.snapshots[i], ispec, eq) : 0.0);
    const double h = (t1 - t0) / static_cast<double>(i1 - i0);
    return detail::simpson(vals, h);
}

/// lambda_ZK = C N^{(1-s)/(1+s)} or lambda_mZK = C N^{(1-s)/s}.
enum class RescaleRule { ZK, mZK };

inline double lambda_choice(RescaleRule eq, double N, double s, double C) {
    if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("lambda_choice: s must lie in [0,1)");
    if (!(N >= 1.0)) throw std::invalid_argument("lambda_choice: N must be >= 1");
    if (!(C >= 1.0)) throw std::invalid_argument("lambda_choice: C must be >= 1");
    const double expo = eq == RescaleRule::ZK ? (1.0 - s) / (1.0 + s) : (1.0 - s) / s;
    return C * std::pow(N, expo);
}

/// Measured constants of the rescaling estimates for one lambda:
///   l2_ratio            ||u_{0,l}||_{L^2} / (l^{1-2/k} ||u0||)          (exactly 1)
///   l2_constant         ||I_N u_{0,l}||_{L^2} / (l^{1-2/k} ||u0||)
///   gradient_constant   ||grad I_N u_{0,l}|| / (N^{1-s} l^{1-2/k-s} ||u0||_{H^s})
struct ScalingReport {
    double l2_ratio = 0.0;
    double l2_constant = 0.0;
    double gradient_constant = 0.0;
};

inline ScalingReport scaling_checks(const RealField& u0, int lambda, int k, const IMultiplierSpec& ispec) {
    RealField ul = rescale_initial(u0, lambda, k);
    SpectralField u0h = to_spectral(u0);
    SpectralField ulh = to_spectral(ul);
    SpectralField inul = apply_IN(ulh, ispec);
    const double lam = static_cast<double>(lambda);
    const double l2_scale = std::pow(lam, 1.0 - 2.0 / k) * l2_norm(u0h);
    const double hs = sobolev_norm(u0h, ispec.s);
    ScalingReport rep;
    rep.l2_ratio = l2_norm(ulh) / l2_scale;
    rep.l2_constant = l2_norm(inul) / l2_scale;
    rep.gradient_constant = std::sqrt(gradient_l2_sq(inul)) /
                            (std::pow(ispec.N, 1.0 - ispec.s) * std::pow(lam, 1.0 - 2.0 / k - ispec.s) * hs);
    return rep;
}

/// Result of one |increment| vs N decay sweep.
struct DecaySweepResult {
    std::vector<double> N_values;
    std::vector<double> increments;      // |E[I_N u](t1) - E[I_N u](t0)|
    double noise_floor = 0.0;            // solver drift measured with N beyond the grid
    bool inconclusive = false;
    double slope = 0.0;                  // log-log fit over conclusive points
    double slope_stderr = 0.0;
    std::vector<double> fit_log_n, fit_log_inc;
};

struct DecaySweepConfig {
    EquationSpec eq;
    StepperConfig stepper;
    double s = 0.9;
    double horizon = 1.0;
    int blend_order = 5;
};

/// Runs the fixed initial data once, measures the modified-energy
/// increment over one horizon for each N, and fits the log-log slope.
/// Increments indistinguishable from the solver's own drift are flagged
/// inconclusive rather than fitted.
inline DecaySweepResult decay_sweep(const RealField& u0, const std::vector<double>& N_list,
                                    const DecaySweepConfig& cfg) {
    if (N_list.size() < 4) throw std::invalid_argument("decay_sweep: need at least 4 N values");
    DecaySweepResult res;
    res.N_values = N_list;
    StepperConfig sc = cfg.stepper;
    Trajectory traj = simulate(u0, cfg.eq, sc, cfg.horizon);
    const double t1 = traj.times.back();

    const GridSpec& g = u0.grid;
    const double nyq = std::sqrt(g.xi_max() * g.xi_max() + g.q_max() * g.q_max());
    IMultiplierSpec ref{4.0 * nyq, cfg.s, cfg.blend_order};
    res.noise_floor = std::abs(increment_direct(traj, ref, cfg.eq, 0.0, t1));

    for (double N : N_list) {
        IMultiplierSpec ispec{N, cfg.s, cfg.blend_order};
        res.increments.push_back(std::abs(increment_direct(traj, ispec, cfg.eq, 0.0, t1)));
    }

    for (std::size_t i = 0; i < N_list.size(); ++i) {
        if (res.increments[i] > 10.0 * std::max(res.noise_floor, 1e-15)) {
            res.fit_log_n.push_back(std::log(N_list[i]));
            res.fit_log_inc.push_back(std::log(res.increments[i]));
        }
    }
    if (res.fit_log_n.size() < 3) {
        res.inconclusive = true;
        return res;
    }
    // least squares slope with standard error
    const std::size_t n = res.fit_log_n.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += res.fit_log_n[i]; my += res.fit_log_inc[i]; }
    mx /= n; my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (res.fit_log_n[i] - mx) * (res.fit_log_n[i] - mx);
        sxy += (res.fit_log_n[i] - mx) * (res.fit_log_inc[i] - my);
    }
    res.slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = res.fit_log_inc[i] - my - res.slope * (res.fit_log_n[i] - mx);
        ss += e * e;
    }
    res.slope_stderr = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
    return res;
}

}  // namespace gzk
