#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "gzk/dynamics.hpp"
#include "gzk/rational.hpp"
#include "gzk/spectral_ops.hpp"
#include "gzk/thresholds.hpp"

namespace gzk {

using MultiIndex = std::pair<int, int>;  // (x-order, y-order)

struct LeibnizTerm {
    std::vector<MultiIndex> alphas;  // one per factor, sorted descending
    Rational coeff;
};

/// Exact symbolic expansion of I^s (u^{k+1}) = (-Delta)^{s/2} (u^{k+1})
/// for even s via the iterated product rule; coefficients are exact.
struct LeibnizExpansion {
    int k = 1;
    int s = 2;
    std::vector<LeibnizTerm> terms;
};

namespace detail {

inline std::int64_t binom(int n, int r) {
    if (r < 0 || r > n) return 0;
    std::int64_t acc = 1;
    for (int i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
    return acc;
}

/// All ordered ways to split `total` across `slots` nonnegative parts.
inline void compositions(int total, int slots, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
    if (slots == 1) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= total; ++v) {
        cur.push_back(v);
        compositions(total - v, slots - 1, cur, out);
        cur.pop_back();
    }
}

inline std::int64_t multinomial(int total, const std::vector<int>& parts) {
    std::int64_t acc = 1;
    int rem = total;
    for (int p : parts) {
        acc *= binom(rem, p);
        rem -= p;
    }
    return acc;
}

inline bool alpha_order(const MultiIndex& a, const MultiIndex& b) {
    const int la = a.first + a.second, lb = b.first + b.second;
    if (la != lb) return la > lb;
    return a > b;
}

}  // namespace detail

inline LeibnizExpansion leibniz_expansion(int k, int s) {
    if (k < 1) throw std::invalid_argument("leibniz_expansion: k must be >= 1");
    if (s < 2 || s % 2 != 0)
        throw std::invalid_argument("leibniz_expansion: s must be a positive even integer (identity uses s in 2N)");
    const int half = s / 2;
    const int nf = k + 1;
    std::map<std::vector<MultiIndex>, Rational> acc;
    // (-Delta)^{s/2} = (-1)^{s/2} sum_j binom(s/2, j) dx^{2j} dy^{s-2j}
    const std::int64_t sign = half % 2 == 0 ? 1 : -1;
    for (int j = 0; j <= half; ++j) {
        const std::int64_t cj = sign * detail::binom(half, j);
        const int a = 2 * j, b = s - 2 * j;
        std::vector<std::vector<int>> xa, yb;
        std::vector<int> scratch;
        detail::compositions(a, nf, scratch, xa);
        detail::compositions(b, nf, scratch, yb);
        for (const auto& ax : xa) {
            const std::int64_t ma = detail::multinomial(a, ax);
            for (const auto& by : yb) {
                const std::int64_t mb = detail::multinomial(b, by);
                std::vector<MultiIndex> tuple(nf);
                for (int i = 0; i < nf; ++i) tuple[i] = {ax[i], by[i]};
                std::sort(tuple.begin(), tuple.end(), detail::alpha_order);
                acc[tuple] = acc[tuple] + Rational(cj * ma * mb);
            }
        }
    }
    LeibnizExpansion ex;
    ex.k = k;
    ex.s = s;
    for (auto& [tuple, c] : acc)
        if (c != Rational(0)) ex.terms.push_back({tuple, c});
    return ex;
}

inline SpectralField apply_derivative(const SpectralField& f, const MultiIndex& alpha) {
    return apply_symbol(f, [alpha](double xi, double q) {
        std::complex<double> s{1.0, 0.0};
        for (int i = 0; i < alpha.first; ++i) s *= std::complex<double>(0.0, xi);
        for (int i = 0; i < alpha.second; ++i) s *= std::complex<double>(0.0, q);
        return s;
    });
}

/// Alias-free pointwise product of several grid-band fields, truncated
/// back to the band.  Needs pad_factor >= (n+1)/2 for n factors.
inline SpectralField dealiased_product(const std::vector<SpectralField>& fields) {
    if (fields.empty()) throw std::invalid_argument("dealiased_product: no factors");
    const GridSpec& g = fields[0].grid;
    const double required = 0.5 * (fields.size() + 1);
    if (g.pad_factor + 1e-12 < required)
        throw std::invalid_argument("dealiased_product: pad_factor insufficient for " +
                                    std::to_string(fields.size()) + " factors; need >= " +
                                    std::to_string(required));
    const int npx = detail::padded_size(g.nx, g.pad_factor);
    const int npy = detail::padded_size(g.ny, g.pad_factor);
    std::vector<std::complex<double>> prod = detail::padded_samples(fields[0], npx, npy);
    for (std::size_t f = 1; f < fields.size(); ++f) {
        if (!fields[f].grid.same_as(g)) throw std::invalid_argument("dealiased_product: grid mismatch");
        auto s = detail::padded_samples(fields[f], npx, npy);
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = prod[i].real() * s[i].real();
    }
    std::vector<std::complex<double>> hat(prod.size());
    FftEngine::instance().forward2d(npx, npy, prod.data(), hat.data());
    const double scale = (g.Lx / npx) * (g.Ly() / npy);
    for (auto& c : hat) c *= scale;
    return detail::truncate(g, npx, npy, hat);
}

/// sum_terms C(alpha) * prod_i D^{alpha_i} u, truncated to the band;
/// equals I^s (u^{k+1}) spectrally (the oracle check in the tests).
inline SpectralField apply_leibniz(const LeibnizExpansion& ex, const SpectralField& u) {
    SpectralField out(u.grid);
    for (const auto& term : ex.terms) {
        std::vector<SpectralField> factors;
        factors.reserve(term.alphas.size());
        for (const auto& a : term.alphas) factors.push_back(apply_derivative(u, a));
        SpectralField prod = dealiased_product(factors);
        const double c = term.coeff.value();
        for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += c * prod.coeffs[i];
    }
    return out;
}

inline double inner_l2(const SpectralField& f, const SpectralField& g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) acc += (f.coeffs[i] * std::conj(g.coeffs[i])).real();
    return parseval_weight(f.grid) * acc;
}

// ---------------------------------------------------------------------------
// Frequency-pair-restricted products (the Pr projectors of the k=1 route).
// The indicators compare the dilated norms sqrt(3 xi^2 + q^2) of the first
// factor's frequency, the output frequency, and the second factor's
// frequency, with threshold constant 100 and the >= / < tie split.
// ---------------------------------------------------------------------------

enum class PrSelector { PR_HI_FIRST, PR_HI_OUT, PR2, PR3, PR1, PLAIN };

namespace detail {

inline double pr_indicator(PrSelector sel, double d1, double d0, double d2, double threshold = 100.0) {
    const bool A = d1 >= threshold * d2;
    const bool B = d0 >= threshold * d2;
    switch (sel) {
        case PrSelector::PR_HI_FIRST: return A ? 1.0 : 0.0;
        case PrSelector::PR_HI_OUT: return B ? 1.0 : 0.0;
        case PrSelector::PR2: return (!A && !B) ? 2.0 : 0.0;
        case PrSelector::PR3: return (!A != !B) ? 1.0 : 0.0;  // exactly one of the complements
        case PrSelector::PR1: return 2.0 * ((A || B) ? 1.0 : 0.0) - ((!A != !B) ? 1.0 : 0.0);
        case PrSelector::PLAIN: return 1.0;
    }
    return 0.0;
}

/// Indicator value for z2 outside the low-norm set (where no grid norm can
/// reach 100*dil(z2)): A and B are both false.
inline double pr_indicator_far(PrSelector sel) {
    switch (sel) {
        case PrSelector::PR2: return 2.0;
        case PrSelector::PLAIN: return 1.0;
        default: return 0.0;
    }
}

}  // namespace detail

/// Direct double-sum evaluation of the restricted product, O(M^2); capped
/// at 64x32 modes.  The pairwise indicator is not convolution-diagonal, so
/// no FFT shortcut exists at this generality.
inline SpectralField pr_product(const SpectralField& v1, const SpectralField& v2, PrSelector sel,
                                double threshold = 100.0) {
    const GridSpec& g = v1.grid;
    if (!v2.grid.same_as(g)) throw std::invalid_argument("pr_product: grid mismatch");
    if (g.size() > 64 * 32) throw std::invalid_argument("pr_product: grid exceeds the 64x32 direct-sum cap");
    SpectralField out(g);
    const double wconv = 1.0 / (2.0 * kPi * g.lambda * g.Lx);
    std::vector<double> dil(g.size());
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            dil[g.index(ix, iy)] = std::sqrt(dilated_norm_sq(g.xi(ix), g.q(iy)));
    for (int ix1 = 0; ix1 < g.nx; ++ix1) {
        const int jx1 = GridSpec::signed_mode(ix1, g.nx);
        for (int iy1 = 0; iy1 < g.ny; ++iy1) {
            const int jy1 = GridSpec::signed_mode(iy1, g.ny);
            const std::complex<double> a = v1.coeffs[g.index(ix1, iy1)];
            if (a == std::complex<double>(0.0, 0.0)) continue;
            const double d1 = dil[g.index(ix1, iy1)];
            for (int ix2 = 0; ix2 < g.nx; ++ix2) {
                const int jx2 = GridSpec::signed_mode(ix2, g.nx);
                for (int iy2 = 0; iy2 < g.ny; ++iy2) {
                    const int jy2 = GridSpec::signed_mode(iy2, g.ny);
                    std::size_t out_idx;
                    if (!g.mode_index(jx1 + jx2, jy1 + jy2, out_idx)) continue;
                    const double d2 = dil[g.index(ix2, iy2)];
                    const double ind = detail::pr_indicator(sel, d1, dil[out_idx], d2, threshold);
                    if (ind == 0.0) continue;
                    out.coeffs[out_idx] += wconv * ind * a * v2.coeffs[g.index(ix2, iy2)];
                }
            }
        }
    }
    return out;
}

/// <dx^deriv Pr_sel(v1 v2), w> without materializing the product.  Exact
/// fast path: for dil(z2) above (max grid norm)/threshold the indicator is
/// constant, so only a small low-norm z2 set needs direct summation; the
/// far part reduces to the plain dealiased product.
inline double pr_inner(const SpectralField& v1, const SpectralField& v2, const SpectralField& w,
                       PrSelector sel, int x_derivs_on_product, double threshold = 100.0) {
    const GridSpec& g = v1.grid;
    if (!v2.grid.same_as(g) || !w.grid.same_as(g)) throw std::invalid_argument("pr_inner: grid mismatch");
    const double w2 = parseval_weight(g);
    const double wconv = 1.0 / (2.0 * kPi * g.lambda * g.Lx);
    const double far = detail::pr_indicator_far(sel);

    double full = 0.0;
    if (far != 0.0) {
        SpectralField prod = dealiased_product({v1, v2});
        for (int d = 0; d < x_derivs_on_product; ++d) prod = apply_symbol(prod, symbols::deriv_x());
        full = far * inner_l2(prod, w);
    }

    const double max_dil = std::sqrt(dilated_norm_sq(g.xi_max(), 0.0) + g.q_max() * g.q_max());
    double corr = 0.0;
    for (int ix2 = 0; ix2 < g.nx; ++ix2) {
        const int jx2 = GridSpec::signed_mode(ix2, g.nx);
        for (int iy2 = 0; iy2 < g.ny; ++iy2) {
            const int jy2 = GridSpec::signed_mode(iy2, g.ny);
            const double d2 = std::sqrt(dilated_norm_sq(g.xi(ix2), g.q(iy2)));
            if (threshold * d2 > max_dil) continue;  // indicator constant out here
            const std::complex<double> b = v2.coeffs[g.index(ix2, iy2)];
            for (int ix1 = 0; ix1 < g.nx; ++ix1) {
                const int jx1 = GridSpec::signed_mode(ix1, g.nx);
                for (int iy1 = 0; iy1 < g.ny; ++iy1) {
                    const int jy1 = GridSpec::signed_mode(iy1, g.ny);
                    std::size_t out_idx;
                    if (!g.mode_index(jx1 + jx2, jy1 + jy2, out_idx)) continue;
                    const int jx0 = jx1 + jx2;
                    const double xi0 = 2.0 * kPi * jx0 / g.Lx;
                    const double q0 = (jy1 + jy2) / g.lambda;
                    const double d1 = std::sqrt(dilated_norm_sq(g.xi(ix1), g.q(iy1)));
                    const double d0 = std::sqrt(dilated_norm_sq(xi0, q0));
                    const double ind = detail::pr_indicator(sel, d1, d0, d2, threshold) - far;
                    if (ind == 0.0) continue;
                    std::complex<double> term = v1.coeffs[g.index(ix1, iy1)] * b * std::conj(w.coeffs[out_idx]);
                    for (int d = 0; d < x_derivs_on_product; ++d) term *= std::complex<double>(0.0, xi0);
                    corr += ind * term.real();
                }
            }
        }
    }
    return full + w2 * wconv * corr;
}

/// Exhaustive verification of the pointwise indicator identity
///   chi_A + chi_B = 2 chi_{A or B} - chi_{exactly one of !A, !B}
/// over all frequency pairs of the lattice; the deviation must be 0.
inline double indicator_identity_check(int nx, int ny, double Lx = 2.0 * kPi, double lambda = 1.0,
                                       double threshold = 100.0) {
    GridSpec g = make_grid(Lx, lambda, nx, ny, 1.0);
    double worst = 0.0;
    for (int ix1 = 0; ix1 < nx; ++ix1)
        for (int iy1 = 0; iy1 < ny; ++iy1)
            for (int ix2 = 0; ix2 < nx; ++ix2)
                for (int iy2 = 0; iy2 < ny; ++iy2) {
                    const double d1 = std::sqrt(dilated_norm_sq(g.xi(ix1), g.q(iy1)));
                    const double d2 = std::sqrt(dilated_norm_sq(g.xi(ix2), g.q(iy2)));
                    const double d0 = std::sqrt(dilated_norm_sq(g.xi(ix1) + g.xi(ix2), g.q(iy1) + g.q(iy2)));
                    const bool A = d1 >= threshold * d2;
                    const bool B = d0 >= threshold * d2;
                    const double lhs = (A ? 1.0 : 0.0) + (B ? 1.0 : 0.0);
                    const double rhs = 2.0 * ((A || B) ? 1.0 : 0.0) - ((!A != !B) ? 1.0 : 0.0);
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
    return worst;
}

// ---------------------------------------------------------------------------
// The H^s-dot growth identities.
// ---------------------------------------------------------------------------

namespace detail {

/// RHS term list for k >= 2: tuples with |a_1|+...+|a_{k+1}| = s+1 and the
/// exact coefficients obtained by distributing dx and rebalancing the
/// all-derivatives-on-one-factor group by integration by parts.
inline std::vector<LeibnizTerm> growth_rhs_terms(int k, int s) {
    const LeibnizExpansion ex = leibniz_expansion(k, s);
    std::map<std::vector<MultiIndex>, Rational> acc;
    const int nf = k + 1;
    for (const auto& term : ex.terms) {
        const int top = term.alphas[0].first + term.alphas[0].second;
        if (top == s) {
            // all-on-one group: (k+1) c_beta <dx(D^beta u . u^k), I^s u>
            //                 = (k+1) c_beta (k/2) <D^beta u . dx u . u^{k-1}, I^s u>
            std::vector<MultiIndex> tuple = term.alphas;
            tuple[1] = {1, 0};
            std::sort(tuple.begin(), tuple.end(), alpha_order);
            acc[tuple] = acc[tuple] + term.coeff * Rational(k, 2);
        } else {
            for (int slot = 0; slot < nf; ++slot) {
                std::vector<MultiIndex> tuple = term.alphas;
                tuple[slot].first += 1;
                std::sort(tuple.begin(), tuple.end(), alpha_order);
                acc[tuple] = acc[tuple] + term.coeff;
            }
        }
    }
    std::vector<LeibnizTerm> out;
    for (auto& [tuple, c] : acc)
        if (c != Rational(0)) out.push_back({tuple, c});
    return out;
}

}  // namespace detail

/// | ||u(t)||_{Hdot^s}^2 - ||u(0)||_{Hdot^s}^2  -  RHS | with the RHS
/// integral sum evaluated by Simpson quadrature over the snapshots:
/// Leibniz-expansion form for k >= 2, Pr-decomposed form for k = 1.
inline double growth_identity_residual(const Trajectory& traj, int s, const EquationSpec& eq, double t) {
    if (s < 2 || s % 2 != 0) throw std::invalid_argument("growth_identity_residual: s must be even, >= 2");
    const auto i0 = traj.find_time(0.0);
    const auto i1 = traj.find_time(t);
    if (t == 0.0) return 0.0;
    if (i1 < i0 + 2) throw std::invalid_argument("growth_identity_residual: insufficient snapshots");
    const double lhs = std::pow(sobolev_norm(traj.snapshots[i1], s, true), 2) -
                       std::pow(sobolev_norm(traj.snapshots[i0], s, true), 2);
    double rhs = 0.0;
    if (traj.nonlinearity) {
        const double h = (traj.times[i1] - traj.times[i0]) / static_cast<double>(i1 - i0);
        std::vector<double> vals;
        vals.reserve(i1 - i0 + 1);
        if (eq.k >= 2) {
            const auto terms = detail::growth_rhs_terms(eq.k, s);
            for (std::size_t i = i0; i <= i1; ++i) {
                const SpectralField& u = traj.snapshots[i];
                SpectralField isu = apply_symbol(u, symbols::riesz(s));
                double val = 0.0;
                for (const auto& term : terms) {
                    std::vector<SpectralField> factors;
                    for (const auto& a : term.alphas) factors.push_back(apply_derivative(u, a));
                    val += term.coeff.value() * inner_l2(dealiased_product(factors), isu);
                }
                vals.push_back(2.0 * eq.sign * val);
            }
        } else {
            const LeibnizExpansion ex = leibniz_expansion(1, s);
            for (std::size_t i = i0; i <= i1; ++i) {
                const SpectralField& u = traj.snapshots[i];
                SpectralField isu = apply_symbol(u, symbols::riesz(s));
                SpectralField ux = apply_symbol(u, symbols::deriv_x());
                double val = pr_inner(isu, ux, isu, PrSelector::PR_HI_FIRST, 0);
                val += pr_inner(isu, u, isu, PrSelector::PR2, 1);
                val += pr_inner(isu, u, isu, PrSelector::PR3, 1);
                for (const auto& term : ex.terms) {
                    const int top = term.alphas[0].first + term.alphas[0].second;
                    if (top == s) continue;  // handled by the projector terms
                    SpectralField prod = dealiased_product(
                        {apply_derivative(u, term.alphas[0]), apply_derivative(u, term.alphas[1])});
                    prod = apply_symbol(prod, symbols::deriv_x());
                    val += term.coeff.value() * inner_l2(prod, isu);
                }
                vals.push_back(2.0 * eq.sign * val);
            }
        }
        rhs = detail::simpson(vals, h);
    }
    return std::abs(lhs - rhs);
}

/// Long-horizon ||u(t)||_{H^s} tracking with a power-law fit per s and the
/// alpha(k,s) reference line where it applies.
struct GrowthTrackEntry {
    double s = 0.0;
    std::vector<double> norms;
    double fit_exponent = 0.0;
    bool flat_zero = false;
    std::optional<double> alpha_reference;  // alpha(k,s) + 0.01
};

struct GrowthTrackReport {
    std::vector<double> times;
    std::vector<GrowthTrackEntry> entries;
};

inline GrowthTrackReport track_norm_growth(const Trajectory& traj, const std::vector<double>& s_list) {
    if (traj.snapshots.empty()) throw std::invalid_argument("track_norm_growth: trajectory stored no snapshots");
    GrowthTrackReport rep;
    rep.times = traj.times;
    for (double s : s_list) {
        GrowthTrackEntry e;
        e.s = s;
        for (const auto& snap : traj.snapshots) e.norms.push_back(sobolev_norm(snap, s));
        double mx = 0.0;
        for (double v : e.norms) mx = std::max(mx, v);
        if (mx == 0.0) {
            e.flat_zero = true;
        } else {
            double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < e.norms.size(); ++i) {
                if (e.norms[i] <= 0.0) continue;
                const double lx = std::log(1.0 + traj.times[i]);
                const double ly = std::log(e.norms[i]);
                sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
                ++n;
            }
            const double det = n * sxx - sx * sx;
            e.fit_exponent = det > 0.0 ? (n * sxy - sx * sy) / det : 0.0;
        }
        const double rounded = std::round(s);
        if (s > 1.0 && std::abs(s - rounded) < 1e-12 && static_cast<long>(rounded) % 2 == 0) {
            auto th = thresholds(traj.eq.k, Domain::cylinder, Rational(static_cast<long long>(rounded)));
            if (th.alpha_growth) e.alpha_reference = th.alpha_growth->value() + 0.01;
        }
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

}  // namespace gzk
