#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "gzk/spectral_ops.hpp"

namespace gzk {

/// The Cauchy problem du/dt + dx Delta u = sign * dx(u^{k+1}).
struct EquationSpec {
    int k = 1;
    int sign = +1;
};

inline void validate(const EquationSpec& eq) {
    if (eq.k < 1) throw std::invalid_argument("EquationSpec: k must be >= 1");
    if (eq.sign != 1 && eq.sign != -1) throw std::invalid_argument("EquationSpec: sign must be +1 or -1");
}

/// M[u] = int u^2 dx dy, evaluated by Parseval-exact quadrature.
inline double mass(const SpectralField& u) {
    double acc = 0.0;
    for (const auto& c : u.coeffs) acc += std::norm(c);
    return parseval_weight(u.grid) * acc;
}

inline double mass(const RealField& u) { return mass(to_spectral(u)); }

inline double gradient_l2_sq(const SpectralField& u) {
    const GridSpec& g = u.grid;
    double acc = 0.0;
    for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix);
        for (int iy = 0; iy < g.ny; ++iy) {
            const double q = g.q(iy);
            acc += (xi * xi + q * q) * std::norm(u.coeffs[g.index(ix, iy)]);
        }
    }
    return parseval_weight(g) * acc;
}

/// E_pm[u] = 1/2 int |grad u|^2 + sign/(k+2) int u^{k+2}.
/// The potential integral needs pad_factor >= (k+2)/2 for an alias-free
/// zero mode; integral_power enforces that.
inline double energy(const SpectralField& u, const EquationSpec& eq) {
    return 0.5 * gradient_l2_sq(u) + static_cast<double>(eq.sign) / (eq.k + 2) * integral_power(u, eq.k + 2);
}

inline double energy(const RealField& u, const EquationSpec& eq) { return energy(to_spectral(u), eq); }

/// Weinstein's sharp constant C_{k,R} = 2^{(k-2)/2} (k+2) / (k^{k/2} ||Q_k||^k).
inline double weinstein_constant(int k, double q_l2) {
    if (!(q_l2 > 0.0)) throw std::invalid_argument("weinstein_constant: ||Q_k||_{L^2} must be positive");
    if (k < 1) throw std::invalid_argument("weinstein_constant: k must be >= 1");
    return std::pow(2.0, 0.5 * (k - 2)) * (k + 2) / (std::pow(static_cast<double>(k), 0.5 * k) * std::pow(q_l2, k));
}

/// RHS - LHS of the Gagliardo-Nirenberg inequality
///   ||f||_{L^{k+2}}^{k+2} <= C_{k,R} ||f||_{L^2}^2 (||grad f||^2 + C_T lambda^{-2} ||f||^2)^{k/2},
/// in the plane form (C_T absent) or the cylinder form (C_T given).
/// Nonnegative when the inequality holds.
inline double gn_defect(const SpectralField& f, int k, double q_l2, std::optional<double> C_T = std::nullopt) {
    const double C_kR = weinstein_constant(k, q_l2);
    const double lhs = integral_power(f, k + 2, /*take_abs=*/true);
    const double m = mass(f);
    double bracket = gradient_l2_sq(f);
    if (C_T) bracket += *C_T * m / (f.grid.lambda * f.grid.lambda);
    const double rhs = C_kR * m * std::pow(bracket, 0.5 * k);
    return rhs - lhs;
}

/// Radial profile of the ground state Delta Q - Q + Q^{k+1} = 0 on a
/// large doubly periodic box standing in for R^2.
struct GroundState {
    RealField field;
    int k = 1;
    double residual_pde = 0.0;  // ||Delta Q - Q + Q^{k+1}||_{L^2} / ||Q||_{L^2}
    double l2_norm = 0.0;
    double grad_l2_norm = 0.0;
    double lkp2_norm = 0.0;  // ||Q||_{L^{k+2}}
    int iterations = 0;
};

namespace detail {

inline double pde_residual(const SpectralField& qhat, int k) {
    auto lap = apply_symbol(qhat, symbols::laplacian());
    auto pk = dealiased_power_spectral(qhat, k + 1);
    double acc = 0.0;
    const GridSpec& g = qhat.grid;
    for (std::size_t i = 0; i < g.size(); ++i) acc += std::norm(lap.coeffs[i] - qhat.coeffs[i] + pk.coeffs[i]);
    const double qn = l2_norm(qhat);
    return qn > 0.0 ? std::sqrt(parseval_weight(g) * acc) / qn : 0.0;
}

}  // namespace detail

/// Petviashvili iteration with the standard power renormalization,
/// gamma = p/(p-1) for p = k+1.  Converges when the successive-iterate
/// sup gap drops below tol; the returned PDE residual should then sit
/// below ~10*tol provided the box and resolution are adequate.
inline GroundState ground_state(int k, const GridSpec& grid, double tol, int max_iter = 400) {
    if (k < 1) throw std::invalid_argument("ground_state: k must be >= 1");
    if (grid.pad_factor + 1e-12 < 0.5 * (k + 2))
        throw std::invalid_argument("ground_state: grid pad_factor insufficient for degree k+2 quadrature");
    const double xc = 0.5 * grid.Lx, yc = 0.5 * grid.Ly();
    RealField q0 = make_real_field(grid, [&](double x, double y) {
        const double r2 = (x - xc) * (x - xc) + (y - yc) * (y - yc);
        return 3.0 * std::exp(-r2);
    });
    SpectralField qhat = to_spectral(q0);
    const double gamma = static_cast<double>(k + 1) / k;
    auto inv_helmholtz = [](double xi, double qq) {
        return std::complex<double>(1.0 / (1.0 + xi * xi + qq * qq), 0.0);
    };

    RealField qprev = from_spectral(qhat);
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        // M_n = <(1 - Delta) Q, Q> / <Q^{k+1}, Q>
        double num = 0.0;
        const GridSpec& g = qhat.grid;
        for (int ix = 0; ix < g.nx; ++ix) {
            const double xi = g.xi(ix);
            for (int iy = 0; iy < g.ny; ++iy) {
                const double qq = g.q(iy);
                num += (1.0 + xi * xi + qq * qq) * std::norm(qhat.coeffs[g.index(ix, iy)]);
            }
        }
        num *= parseval_weight(g);
        const double den = integral_power(qhat, k + 2);
        if (!(den > 0.0)) throw std::runtime_error("ground_state: degenerate Petviashvili quotient");
        const double M = num / den;

        auto pk = dealiased_power_spectral(qhat, k + 1);
        SpectralField next = apply_symbol(pk, inv_helmholtz);
        const double factor = std::pow(M, gamma);
        for (auto& c : next.coeffs) c *= factor;

        RealField qnext = from_spectral(next);
        double gap = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < qnext.samples.size(); ++i) {
            gap = std::max(gap, std::abs(qnext.samples[i] - qprev.samples[i]));
            scale = std::max(scale, std::abs(qnext.samples[i]));
        }
        qhat = to_spectral(qnext);
        qprev = qnext;
        if (scale > 0.0 && gap <= tol * std::max(1.0, scale)) {
            ++iter;
            break;
        }
    }

    GroundState gs;
    gs.field = qprev;
    gs.k = k;
    gs.iterations = iter;
    gs.residual_pde = detail::pde_residual(qhat, k);
    if (iter >= max_iter)
        throw std::runtime_error("ground_state: no convergence after " + std::to_string(max_iter) +
                                 " iterations; last residual " + std::to_string(gs.residual_pde));
    gs.l2_norm = l2_norm(qhat);
    gs.grad_l2_norm = std::sqrt(gradient_l2_sq(qhat));
    gs.lkp2_norm = std::pow(integral_power(qhat, k + 2, /*take_abs=*/true), 1.0 / (k + 2));
    return gs;
}

/// Residuals of the two integral identities obtained by pairing
/// Delta Q - Q + Q^{k+1} = 0 with Q and with (x,y).grad Q on R^2:
///   r1: int Q^{k+2} - ||grad Q||^2 - ||Q||^2 = 0
///   r2: ||Q||^2 - 2/(k+2) int Q^{k+2} = 0
/// both reported relative to int Q^{k+2}.
inline std::pair<double, double> pohozaev_residuals(const RealField& Q, int k) {
    SpectralField qhat = to_spectral(Q);
    const double pk2 = integral_power(qhat, k + 2);
    const double m = mass(qhat);
    const double grad2 = gradient_l2_sq(qhat);
    if (pk2 == 0.0 && m == 0.0) return {0.0, 0.0};
    const double scale = std::max({std::abs(pk2), m, grad2});
    const double r1 = (pk2 - grad2 - m) / scale;
    const double r2 = (m - 2.0 / (k + 2) * pk2) / scale;
    return {r1, r2};
}

}  // namespace gzk
