// dynamics: nonlinear term, IFRK4 stepping, simulate, rescaling.

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "gzk/dynamics.hpp"

using namespace gzk;

namespace {

RealField smooth_data(const GridSpec& g, double amp = 0.3) {
    const double xc = 0.5 * g.Lx;
    const double sigma = g.Lx / 14.0;
    return make_real_field(g, [&](double x, double y) {
        const double env = std::exp(-((x - xc) / sigma) * ((x - xc) / sigma));
        return amp * env * (std::cos(2.0 * kPi * 3.0 * (x - xc) / g.Lx) + 0.5 * std::cos(y / g.lambda));
    });
}

}  // namespace

TEST_CASE("nonlinear_term") {
    GridSpec g = make_grid(2.0 * kPi, 1.0, 32, 16, 2.0);
    SECTION("zero input") {
        SpectralField n = nonlinear_term(SpectralField(g), {1, +1});
        for (const auto& c : n.coeffs) CHECK(std::abs(c) == 0.0);
    }
    SECTION("x-independent input is annihilated") {
        for (int k : {1, 2, 3}) {
            GridSpec gk = make_grid(g.Lx, g.lambda, g.nx, g.ny, 0.5 * (k + 2));
            RealField uk = make_real_field(gk, [](double, double y) { return std::cos(y); });
            SpectralField n = nonlinear_term(to_spectral(uk), {k, +1});
            double mx = 0.0;
            for (const auto& c : n.coeffs) mx = std::max(mx, std::abs(c));
            CHECK(mx <= 1e-12);
        }
    }
    SECTION("k=1 single x-mode matches the trigonometric expansion") {
        // u = cos(a x): dx(u^2) = -a sin(2 a x)
        const double a = 2.0 * kPi / g.Lx;
        RealField u = make_real_field(g, [&](double x, double) { return std::cos(a * x); });
        SpectralField n = nonlinear_term(to_spectral(u), {1, +1});
        RealField expect = make_real_field(g, [&](double x, double) { return -a * std::sin(2.0 * a * x); });
        RealField got = from_spectral(n);
        double err = 0.0;
        for (std::size_t i = 0; i < got.samples.size(); ++i)
            err = std::max(err, std::abs(got.samples[i] - expect.samples[i]));
        CHECK(err <= 1e-12);
        double off = 0.0;
        for (int ix = 0; ix < g.nx; ++ix)
            for (int iy = 0; iy < g.ny; ++iy) {
                const int jx = GridSpec::signed_mode(ix, g.nx);
                const int jy = GridSpec::signed_mode(iy, g.ny);
                if (jy == 0 && (jx == 2 || jx == -2)) continue;
                off = std::max(off, std::abs(n.at(ix, iy)));
            }
        CHECK(off <= 1e-12);
    }
    SECTION("xi = 0 column is exactly zero") {
        GridSpec gp = make_grid(2.0 * kPi, 1.0, 16, 16, 2.0);
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> dist(-0.5, 0.5);
        RealField u(gp);
        for (auto& v : u.samples) v = dist(rng);
        SpectralField n = nonlinear_term(to_spectral(u), {2, -1});
        for (int iy = 0; iy < gp.ny; ++iy) CHECK(std::abs(n.at(0, iy)) == 0.0);
    }
}

TEST_CASE("step: linear flow is exact") {
    GridSpec g = make_grid(4.0 * kPi, 2.0, 32, 16, 2.0);
    StepperConfig cfg;
    cfg.dt = 0.02;
    cfg.nonlinearity = false;

    SECTION("zero stays zero") {
        SpectralField z = step(SpectralField(g), {1, +1}, cfg);
        for (const auto& c : z.coeffs) CHECK(std::abs(c) == 0.0);
    }
    SECTION("single mode picks up exactly e^{i dt phi}") {
        SpectralField u(g);
        u.at(3, 2) = {0.7, -0.4};
        u.at(g.nx - 3, g.ny - 2) = {0.7, 0.4};
        SpectralField v = step(u, {1, +1}, cfg);
        const std::complex<double> expected = std::polar(1.0, cfg.dt * phase(g.xi(3), g.q(2))) * u.at(3, 2);
        CHECK(std::abs(v.at(3, 2) - expected) <= 1e-14 * std::abs(expected));
    }
    SECTION("exact group reverses the step") {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        RealField u0(g);
        for (auto& v : u0.samples) v = dist(rng);
        SpectralField u = to_spectral(u0);
        SpectralField fwd = step(u, {1, +1}, cfg);
        SpectralField rev = apply_symbol(fwd, symbols::free_propagator(-cfg.dt));
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < u.coeffs.size(); ++i) {
            err = std::max(err, std::abs(rev.coeffs[i] - u.coeffs[i]));
            scale = std::max(scale, std::abs(u.coeffs[i]));
        }
        CHECK(err <= 1e-12 * scale);
    }
}

TEST_CASE("simulate") {
    GridSpec g = make_grid(16.0 * kPi, 1.0, 64, 16, 2.0);
    SECTION("zero data gives identically zero diagnostics") {
        StepperConfig cfg;
        cfg.dt = 0.01;
        Trajectory tr = simulate(RealField(g), {1, +1}, cfg, 0.1);
        for (const auto& row : tr.diagnostics)
            for (double v : row) CHECK(v == 0.0);
    }
    SECTION("free flow reproduces the exact group coefficient-wise") {
        RealField u0 = smooth_data(g);
        StepperConfig cfg;
        cfg.dt = 0.005;
        cfg.nonlinearity = false;
        cfg.sample_every = 100000;  // endpoints only
        Trajectory tr = simulate(u0, {1, +1}, cfg, 1.0);
        SpectralField expect = apply_symbol(to_spectral(u0), symbols::free_propagator(1.0));
        const SpectralField& got = tr.snapshots.back();
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < got.coeffs.size(); ++i) {
            err = std::max(err, std::abs(got.coeffs[i] - expect.coeffs[i]));
            scale = std::max(scale, std::abs(expect.coeffs[i]));
        }
        CHECK(err <= 1e-12 * scale);
    }
    SECTION("mass and energy drift stay tiny on a short nonlinear run") {
        RealField u0 = smooth_data(g);
        StepperConfig cfg;
        cfg.dt = 2e-3;
        cfg.sample_every = 50;
        cfg.store_snapshots = false;
        for (int sign : {+1, -1}) {
            Trajectory tr = simulate(u0, {1, sign}, cfg, 0.5);
            const double m0 = tr.diagnostics.front()[0], e0 = tr.diagnostics.front()[1];
            for (const auto& row : tr.diagnostics) {
                CHECK(std::abs(row[0] - m0) <= 1e-9 * std::abs(m0));
                CHECK(std::abs(row[1] - e0) <= 1e-9 * (1.0 + std::abs(e0)));
            }
        }
    }
    SECTION("stability guard rejects oversized dt") {
        RealField u0 = smooth_data(g, 5.0);
        StepperConfig cfg;
        cfg.dt = 10.0;
        CHECK_THROWS_WITH(simulate(u0, {1, +1}, cfg, 20.0), Catch::Matchers::ContainsSubstring("stability guard"));
    }
    SECTION("overflow aborts with a blow-up diagnostic") {
        RealField u0 = smooth_data(g, 40.0);
        StepperConfig cfg;
        cfg.dt = 0.05;
        cfg.check_guard = false;  // force the unstable regime
        cfg.sample_every = 1;
        CHECK_THROWS_WITH(simulate(u0, {2, -1}, cfg, 50.0), Catch::Matchers::ContainsSubstring("blow-up candidate"));
    }
}

TEST_CASE("manufactured forcing") {
    GridSpec g = make_grid(2.0 * kPi, 1.0, 32, 16, 2.0);
    const EquationSpec eq{1, -1};

    SECTION("zero target gives zero forcing") {
        ManufacturedSolution ms;
        ms.u_hat = [&](double) { return SpectralField(g); };
        ms.du_dt_hat = [&](double) { return SpectralField(g); };
        ForcingFn f = manufactured_forcing(ms, eq);
        SpectralField val = f(0.3);
        for (const auto& c : val.coeffs) CHECK(std::abs(c) == 0.0);
    }
    SECTION("a mode riding the free flow needs no forcing (nonlinearity off)") {
        SpectralField base(g);
        base.at(2, 1) = {0.3, 0.1};
        base.at(g.nx - 2, g.ny - 1) = {0.3, -0.1};
        ManufacturedSolution ms;
        ms.u_hat = [&](double t) { return apply_symbol(base, symbols::free_propagator(t)); };
        ms.du_dt_hat = [&](double t) {
            SpectralField d = apply_symbol(base, symbols::free_propagator(t));
            return apply_symbol(d, [](double xi, double q) { return std::complex<double>(0.0, phase(xi, q)); });
        };
        ForcingFn f = manufactured_forcing(ms, eq, /*nonlinearity=*/false);
        SpectralField val = f(0.41);
        double mx = 0.0;
        for (const auto& c : val.coeffs) mx = std::max(mx, std::abs(c));
        CHECK(mx <= 1e-14);
    }
    SECTION("dt-halving shows fourth-order convergence (two-rung smoke)") {
        RealField shape = make_real_field(g, [](double x, double y) {
            return 0.8 * std::cos(x) * std::cos(y) + 0.3 * std::sin(2.0 * x);
        });
        SpectralField base = to_spectral(shape);
        ManufacturedSolution ms;
        ms.u_hat = [&](double t) {
            SpectralField u = base;
            const double a = std::exp(-t);
            for (auto& c : u.coeffs) c *= a;
            return u;
        };
        ms.du_dt_hat = [&](double t) {
            SpectralField u = base;
            const double a = -std::exp(-t);
            for (auto& c : u.coeffs) c *= a;
            return u;
        };
        ForcingFn f = manufactured_forcing(ms, eq);
        auto run_error = [&](double dt) {
            StepperConfig cfg;
            cfg.dt = dt;
            cfg.sample_every = 100000;
            Trajectory tr = simulate(from_spectral(ms.u_hat(0.0)), eq, cfg, 0.5, f);
            SpectralField expect = ms.u_hat(tr.times.back());
            const SpectralField& got = tr.snapshots.back();
            double err = 0.0;
            for (std::size_t i = 0; i < got.coeffs.size(); ++i)
                err = std::max(err, std::abs(got.coeffs[i] - expect.coeffs[i]));
            return err;
        };
        const double e1 = run_error(0.01);
        const double e2 = run_error(0.005);
        const double order = std::log2(e1 / e2);
        CHECK(order > 3.2);
        CHECK(order < 4.8);
    }
}

TEST_CASE("rescale_initial") {
    GridSpec g = make_grid(8.0 * kPi, 1.0, 64, 16, 2.0);
    RealField u0 = smooth_data(g, 1.0);

    SECTION("lambda = 1 is the identity") {
        RealField same = rescale_initial(u0, 1, 2);
        CHECK(same.samples == u0.samples);
    }
    SECTION("k=2 preserves the L2 norm exactly") {
        for (int lam : {2, 3, 8}) {
            RealField ul = rescale_initial(u0, lam, 2);
            CHECK(ul.grid.Lx == Catch::Approx(lam * g.Lx));
            CHECK(ul.grid.lambda == Catch::Approx(lam * g.lambda));
            CHECK(std::abs(std::sqrt(mass(ul) / mass(u0)) - 1.0) <= 1e-12);
        }
    }
    SECTION("k=1, lambda=4 divides the L2 norm by 4") {
        RealField ul = rescale_initial(u0, 4, 1);
        CHECK(std::abs(std::sqrt(mass(ul) / mass(u0)) - 0.25) <= 1e-12);
    }
    SECTION("general k: exact factor lambda^{1-2/k}") {
        for (int k : {1, 2, 3, 4}) {
            RealField ul = rescale_initial(u0, 2, k);
            const double ratio = std::sqrt(mass(ul) / mass(u0));
            CHECK(std::abs(ratio / std::pow(2.0, 1.0 - 2.0 / k) - 1.0) <= 1e-12);
        }
    }
    SECTION("invalid lambda rejected") {
        CHECK_THROWS_AS(rescale_initial(u0, 0, 1), std::invalid_argument);
    }
}
