// imethod: the multiplier, modified energy, the increment identity,
// scaling checks and the decay sweep.

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "gzk/imethod.hpp"

using namespace gzk;

namespace {

RealField smooth_data(const GridSpec& g, double amp = 0.35) {
    const double xc = 0.5 * g.Lx;
    const double sigma = g.Lx / 14.0;
    return make_real_field(g, [&](double x, double y) {
        const double env = std::exp(-((x - xc) / sigma) * ((x - xc) / sigma));
        return amp * env * (std::cos(2.0 * kPi * 3.0 * (x - xc) / g.Lx) + 0.4 * std::cos(2.0 * y / g.lambda) +
                            0.3 * std::sin(2.0 * kPi * 5.0 * (x - xc) / g.Lx) * std::cos(y / g.lambda));
    });
}

}  // namespace

TEST_CASE("i_multiplier_value branches") {
    IMultiplierSpec spec{10.0, 0.5, 5};
    SECTION("low branch is exactly 1") {
        CHECK(i_multiplier_value(3.0, 4.0, spec) == 1.0);  // |(3,4)| = 5 = N/2
        CHECK(i_multiplier_value(0.0, 10.0, spec) == 1.0);
    }
    SECTION("power-law branch: r = 4N, s = 1/2 gives exactly 1/2") {
        CHECK(i_multiplier_value(0.0, 40.0, spec) == Catch::Approx(0.5).epsilon(1e-15));
        CHECK(i_multiplier_value(40.0, 0.0, spec) == Catch::Approx(0.5).epsilon(1e-15));
    }
    SECTION("continuity across the blend boundaries") {
        for (double s : {0.3, 0.75, 0.9}) {
            IMultiplierSpec sp{7.0, s, 5};
            CHECK(std::abs(i_multiplier_value(sp.N * (1.0 - 1e-13), 0.0, sp) -
                           i_multiplier_value(sp.N * (1.0 + 1e-13), 0.0, sp)) <= 1e-12);
            CHECK(std::abs(i_multiplier_value(2.0 * sp.N * (1.0 - 1e-13), 0.0, sp) -
                           i_multiplier_value(2.0 * sp.N * (1.0 + 1e-13), 0.0, sp)) <= 1e-12);
        }
    }
    SECTION("radial monotonicity for s = 0.9") {
        IMultiplierSpec sp{5.0, 0.9, 5};
        double prev = 2.0;
        for (double r = 0.1; r < 40.0; r += 0.01) {
            const double m = i_multiplier_value(r, 0.0, sp);
            CHECK(m <= prev + 1e-15);
            prev = m;
        }
    }
    SECTION("cubic blend order also supported, others rejected") {
        IMultiplierSpec sp{5.0, 0.5, 3};
        CHECK(i_multiplier_value(7.0, 0.0, sp) < 1.0);
        IMultiplierSpec bad{5.0, 0.5, 4};
        CHECK_THROWS_AS(i_multiplier_value(7.0, 0.0, bad), std::invalid_argument);
    }
}

TEST_CASE("apply_IN") {
    GridSpec g = make_grid(4.0 * kPi, 1.0, 32, 32, 1.0);
    SECTION("band-limited fields below N pass through unchanged") {
        SpectralField hat(g);
        for (auto [jx, jy] : {std::pair{2, 0}, std::pair{0, 1}, std::pair{3, 4}}) {
            std::size_t a, b;
            g.mode_index(jx, jy, a);
            g.mode_index(-jx, -jy, b);
            hat.coeffs[a] = {0.4, 0.2};
            hat.coeffs[b] = {0.4, -0.2};
        }
        IMultiplierSpec spec{8.0, 0.5, 5};  // every populated mode sits inside radius N
        SpectralField out = apply_IN(hat, spec);
        for (std::size_t i = 0; i < hat.coeffs.size(); ++i) CHECK(out.coeffs[i] == hat.coeffs[i]);
    }
    SECTION("smoothing estimate ||I_N f||_{H^1} <= C N^{1-s} ||f||_{H^s}, C <= 2") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (double s : {0.3, 0.6, 0.9}) {
            for (double N : {2.0, 4.0, 8.0}) {
                IMultiplierSpec spec{N, s, 5};
                RealField u(g);
                for (auto& v : u.samples) v = dist(rng);
                SpectralField hat = to_spectral(u);
                const double lhs = sobolev_norm(apply_IN(hat, spec), 1.0);
                const double rhs = std::pow(N, 1.0 - s) * sobolev_norm(hat, s);
                CHECK(lhs <= 2.0 * rhs);
            }
        }
    }
    SECTION("negative control: I_N is not idempotent on high modes") {
        SpectralField f(g);
        f.at(12, 0) = {1.0, 0.0};
        f.at(g.nx - 12, 0) = {1.0, 0.0};
        IMultiplierSpec spec{1.0, 0.5, 5};
        SpectralField once = apply_IN(f, spec);
        SpectralField twice = apply_IN(once, spec);
        CHECK(std::abs(twice.at(12, 0)) < 0.999 * std::abs(once.at(12, 0)));
    }
}

TEST_CASE("modified_energy") {
    GridSpec g = make_grid(8.0 * kPi, 1.0, 32, 16, 2.0);
    RealField u = smooth_data(g);
    SpectralField hat = to_spectral(u);
    const EquationSpec eq{1, +1};
    SECTION("N beyond the grid reduces to the plain energy exactly") {
        IMultiplierSpec spec{100.0, 0.5, 5};
        CHECK(modified_energy(hat, spec, eq) == energy(hat, eq));
    }
    SECTION("zero field") { CHECK(modified_energy(SpectralField(g), {2.0, 0.5, 5}, eq) == 0.0); }
    SECTION("two-path consistency is bit-for-bit") {
        IMultiplierSpec spec{1.5, 0.7, 5};
        CHECK(modified_energy(hat, spec, eq) == energy(apply_IN(hat, spec), eq));
    }
}

TEST_CASE("increment identity: direct vs commutator route, coarse config") {
    GridSpec g = make_grid(16.0 * kPi, 1.0, 64, 16, 2.0);
    RealField u0 = smooth_data(g);
    StepperConfig cfg;
    cfg.dt = 5e-4;
    cfg.sample_every = 2;
    const double delta = 0.05;
    for (int k : {1, 2}) {
        for (int sign : {+1, -1}) {
            GridSpec gk = make_grid(g.Lx, g.lambda, g.nx, g.ny, 0.5 * (k + 2));
            RealField u0k(gk);
            u0k.samples = u0.samples;
            EquationSpec eq{k, sign};
            Trajectory tr = simulate(u0k, eq, cfg, delta);
            IMultiplierSpec ispec{0.25 * gk.xi_max(), 0.9, 5};
            const double direct = increment_direct(tr, ispec, eq, 0.0, delta);
            const double commut = increment_commutator(tr, ispec, eq, 0.0, delta);
            INFO("k=" << k << " sign=" << sign << " direct=" << direct << " commut=" << commut);
            CHECK(std::abs(direct - commut) <= 1e-6 * (1.0 + std::abs(direct)));
        }
    }
}

TEST_CASE("increment edge cases") {
    GridSpec g = make_grid(16.0 * kPi, 1.0, 64, 16, 2.0);
    RealField u0 = smooth_data(g);
    StepperConfig cfg;
    cfg.dt = 5e-4;
    cfg.sample_every = 2;
    const double delta = 0.05;
    EquationSpec eq{1, +1};
    Trajectory tr = simulate(u0, eq, cfg, delta);
    SECTION("t1 = t0 gives zero") {
        IMultiplierSpec ispec{2.0, 0.9, 5};
        CHECK(increment_direct(tr, ispec, eq, 0.0, 0.0) == 0.0);
        CHECK_THROWS_AS(increment_commutator(tr, ispec, eq, 0.0, 0.0), std::invalid_argument);
    }
    SECTION("N beyond the grid: commutator integrand identically zero") {
        IMultiplierSpec ispec{1000.0, 0.9, 5};
        CHECK(increment_commutator(tr, ispec, eq, 0.0, delta) == 0.0);
        CHECK(std::abs(increment_direct(tr, ispec, eq, 0.0, delta)) <= 1e-9);
    }
    SECTION("unsampled time rejected") {
        CHECK_THROWS_AS(increment_direct(tr, {2.0, 0.9, 5}, eq, 0.0, delta / 3.0 + 1e-5), std::invalid_argument);
    }
}

TEST_CASE("lambda_choice") {
    CHECK(lambda_choice(RescaleRule::ZK, 16.0, 1.0 / 3.0, 1.0) == Catch::Approx(4.0).epsilon(1e-14));
    CHECK(lambda_choice(RescaleRule::mZK, 16.0, 0.5, 1.0) == Catch::Approx(16.0).epsilon(1e-14));
    CHECK(lambda_choice(RescaleRule::ZK, 1000.0, 1.0 - 1e-12, 2.0) == Catch::Approx(2.0).epsilon(1e-9));
    CHECK_THROWS_AS(lambda_choice(RescaleRule::ZK, 16.0, 1.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(lambda_choice(RescaleRule::mZK, 0.5, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("scaling_checks") {
    GridSpec g = make_grid(8.0 * kPi, 1.0, 64, 32, 2.0);
    RealField u0 = smooth_data(g, 1.0);
    SECTION("lambda = 1: all ratios are 1") {
        IMultiplierSpec ispec{1000.0, 0.9, 5};  // I_N acts as the identity here
        ScalingReport rep = scaling_checks(u0, 1, 1, ispec);
        CHECK(rep.l2_ratio == Catch::Approx(1.0).epsilon(1e-13));
        CHECK(rep.l2_constant == Catch::Approx(1.0).epsilon(1e-13));
    }
    SECTION("exact L2 relabeling for k in {1,2} and lambda in {2,4,8}") {
        for (int k : {1, 2})
            for (int lam : {2, 4, 8}) {
                ScalingReport rep = scaling_checks(u0, lam, k, {2.0, 0.9, 5});
                CHECK(std::abs(rep.l2_ratio - 1.0) <= 1e-12);
                CHECK(rep.l2_constant <= 1.0 + 1e-12);  // I_N only damps
            }
    }
    SECTION("gradient constant bounded by 4 over the (lambda, N) sweep") {
        for (double s : {0.5, 0.9})
            for (int lam : {1, 2, 4})
                for (double N : {2.0, 4.0, 8.0}) {
                    ScalingReport rep = scaling_checks(u0, lam, 1, {N, s, 5});
                    CHECK(rep.gradient_constant <= 4.0);
                }
    }
}

TEST_CASE("decay_sweep flags unresolved N ranges") {
    GridSpec g = make_grid(8.0 * kPi, 1.0, 32, 16, 2.0);
    RealField u0 = smooth_data(g, 0.2);
    DecaySweepConfig cfg;
    cfg.eq = {1, +1};
    cfg.stepper.dt = 2e-3;
    cfg.stepper.sample_every = 1000000;
    cfg.horizon = 0.2;
    // all N beyond the grid band: increments sit at the drift floor
    DecaySweepResult res = decay_sweep(u0, {100.0, 200.0, 400.0, 800.0}, cfg);
    CHECK(res.inconclusive);
    CHECK_THROWS_AS(decay_sweep(u0, {1.0, 2.0}, cfg), std::invalid_argument);
}
