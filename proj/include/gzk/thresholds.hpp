#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gzk/rational.hpp"

namespace gzk {

enum class Domain { cylinder, plane };

/// Every closed-form threshold and exponent of the well-posedness and
/// growth results, in exact rational arithmetic.  Fields stay empty where
/// the corresponding formula has no meaning for the given (k, domain, s).
struct ThresholdReport {
    int k = 1;
    std::string equation;  // "ZK", "mZK", or "gZK"
    Domain domain = Domain::cylinder;
    Rational s;
    Rational epsilon_tilde;
    std::optional<Rational> gwp_threshold;       // 11/13, 36/49, 2/3
    std::optional<Rational> epsilon_threshold;   // s-threshold at given eps_tilde
    std::optional<Rational> lambda_exponent;     // (1-s)/(1+s) or (1-s)/s
    std::optional<Rational> N_of_T_exponent;     // N ~ (1+T)^{this +}
    std::optional<Rational> growth_exponent;     // H^s bound (1+T)^{this +}
    std::optional<Rational> alpha_growth;        // alpha(k,s), higher regularity
    std::optional<Rational> theta_interpolation; // 1/(4(s-1)) or 1/(s-1)
};

inline ThresholdReport thresholds(int k, Domain domain, Rational s, Rational eps_tilde = Rational(0)) {
    if (k < 1) throw std::invalid_argument("thresholds: k must be >= 1");
    if (domain == Domain::plane && k != 2)
        throw std::invalid_argument("thresholds: plane results are housed for the modified equation (k=2) only");
    ThresholdReport rep;
    rep.k = k;
    rep.equation = k == 1 ? "ZK" : (k == 2 ? "mZK" : "gZK");
    rep.domain = domain;
    rep.s = s;
    rep.epsilon_tilde = eps_tilde;

    const Rational one(1);
    const bool below_one = s < one;

    if (k == 1 && domain == Domain::cylinder) {
        rep.gwp_threshold = Rational(11, 13);
        // s > (11 + 4e)/(13 - 4e)
        rep.epsilon_threshold = (Rational(11) + Rational(4) * eps_tilde) / (Rational(13) - Rational(4) * eps_tilde);
        if (below_one) rep.lambda_exponent = (one - s) / (one + s);
        if (*rep.gwp_threshold < s && below_one) {
            const Rational den = Rational(13) * s - Rational(11);
            rep.N_of_T_exponent = Rational(4) * (one + s) / den;
            rep.growth_exponent = Rational(4) * (one - s * s) / den;
        } else if (below_one) {
            throw std::invalid_argument("thresholds: growth exponent needs s > 11/13 for ZK on the cylinder");
        }
    } else if (k == 2) {
        rep.gwp_threshold = domain == Domain::cylinder ? Rational(36, 49) : Rational(2, 3);
        if (domain == Domain::cylinder) {
            // s > 3/(49/12 - e) = 36/(49 - 12e)
            rep.epsilon_threshold = Rational(36) / (Rational(49) - Rational(12) * eps_tilde);
        } else {
            // s > 3/(9/2 - e) = 6/(9 - 2e)
            rep.epsilon_threshold = Rational(6) / (Rational(9) - Rational(2) * eps_tilde);
        }
        if (below_one) rep.lambda_exponent = (one - s) / s;
        if (*rep.gwp_threshold < s && below_one) {
            if (domain == Domain::cylinder) {
                const Rational den = Rational(49) * s - Rational(36);
                rep.N_of_T_exponent = Rational(12) * s / den;
                rep.growth_exponent = Rational(12) * s * (one - s) / den;
            } else {
                const Rational den = Rational(3) * (Rational(3) * s - Rational(2));
                rep.N_of_T_exponent = Rational(2) * s / den;
                rep.growth_exponent = Rational(2) * s * (one - s) / den;
            }
        } else if (below_one) {
            throw std::invalid_argument("thresholds: growth exponent needs s > " + rep.gwp_threshold->str() +
                                        " for mZK on this domain");
        }
    }

    if (one < s) {
        rep.alpha_growth = k == 1 ? Rational(4) * (s - one) : s - one;
        rep.theta_interpolation = k == 1 ? one / (Rational(4) * (s - one)) : one / (s - one);
    }
    return rep;
}

/// Worst case of the Gronwall-type recursion a_{m+1} = a_m + K1 (1 + a_m^{1-eps}).
struct GronwallReport {
    bool bound_holds = false;     // finite K2 with a_m <= K2 (1+m)^d (1+a0), stabilized
    bool stabilized = false;      // prefix maximum of the ratio stopped growing
    double K2 = 0.0;              // minimal such constant over m <= M
    long argmax_m = 0;
    double K2_half_history = 0.0; // prefix maximum at M/4, for divergence detection
    double empirical_exponent = 0.0;
    bool overflowed = false;
    long last_m = 0;
};

inline GronwallReport gronwall_check(double K1, double eps, double a0, long M, double d) {
    if (!(K1 > 0.0)) throw std::invalid_argument("gronwall_check: K1 must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("gronwall_check: eps must lie in (0,1)");
    if (!(a0 >= 0.0)) throw std::invalid_argument("gronwall_check: a0 must be nonnegative");
    if (M < 10) throw std::invalid_argument("gronwall_check: M too small");

    GronwallReport rep;
    double a = a0;
    double k2 = 0.0;
    long argmax = 0;
    const long quarter = M / 4;
    std::vector<double> log_m, log_a;
    for (long m = 0; m <= M; ++m) {
        const double ratio = a / (std::pow(1.0 + m, d) * (1.0 + a0));
        if (ratio > k2) { k2 = ratio; argmax = m; }
        if (m == quarter) rep.K2_half_history = k2;
        if (m >= M / 10 && a > 0.0) { log_m.push_back(std::log(1.0 + m)); log_a.push_back(std::log(a)); }
        a = a + K1 * (1.0 + std::pow(a, 1.0 - eps));
        if (!std::isfinite(a) || a > 1e300) { rep.overflowed = true; rep.last_m = m; break; }
        rep.last_m = m;
    }
    rep.K2 = k2;
    rep.argmax_m = argmax;
    // stabilized: the running maximum was already attained by M/4 (the
    // tail ratio decays); a diverging case keeps pushing the max out.
    rep.stabilized = !rep.overflowed && argmax <= quarter && k2 <= rep.K2_half_history * (1.0 + 1e-12);
    rep.bound_holds = rep.stabilized && std::isfinite(k2);

    if (log_m.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < log_m.size(); ++i) { mx += log_m[i]; my += log_a[i]; }
        mx /= log_m.size(); my /= log_m.size();
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < log_m.size(); ++i) {
            sxx += (log_m[i] - mx) * (log_m[i] - mx);
            sxy += (log_m[i] - mx) * (log_a[i] - my);
        }
        rep.empirical_exponent = sxx > 0.0 ? sxy / sxx : 0.0;
    }
    return rep;
}

}  // namespace gzk
