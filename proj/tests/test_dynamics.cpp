#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"

#include <cstdio>
#include <fstream>

using namespace leray;
using namespace leray::test;

namespace {

SpectralField taylor_green(const Grid& g) {
    InitialCondition ic;
    ic.kind = InitialCondition::Kind::taylor_green;
    ic.target_norm = 0.0;  // keep the unit-amplitude sampling
    return make_initial_condition(ic, g);
}

}  // namespace

TEST_CASE("make_initial_condition") {
    const Grid g = Grid::make(2, 32);

    SUBCASE("taylor-green occupies exactly the |xi|=sqrt(2) shell") {
        const SpectralField tg = taylor_green(g);
        CHECK(tg.is_divfree);
        CHECK(divergence_residual(tg) < 1e-13);
        for (Eigen::Index i = 0; i < g.modes(); ++i) {
            const double k2 = g.ksq()(i);
            const double amp = std::abs(tg.coeffs(i, 0)) + std::abs(tg.coeffs(i, 1));
            if (k2 != 2.0) CHECK(amp < 1e-13);
        }
        // four modes of modulus 1/4 per component: mode sum 2 * 4 / 16 = 1/2
        CHECK(sobolev_norm(tg, 0.0) ==
              doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    }

    SUBCASE("random field is reproducible and normalised") {
        const SpectralField a = random_field(g, 6, 11, 2.5, 1.0);
        const SpectralField b = random_field(g, 6, 11, 2.5, 1.0);
        CHECK((a.coeffs - b.coeffs).cwiseAbs().maxCoeff() == 0.0);
        CHECK(sobolev_norm(a, 1.0) == doctest::Approx(2.5).epsilon(1e-12));
        const SpectralField c = random_field(g, 6, 12, 2.5, 1.0);
        CHECK(rel_l2_diff(a, c) > 1e-3);
        CHECK(std::abs(a.coeffs(0, 0)) == 0.0);  // zero mean
    }

    SUBCASE("band wider than the dealias bound rejected") {
        InitialCondition ic;
        ic.kind = InitialCondition::Kind::random_band_limited;
        ic.band = 100;
        CHECK_THROWS_AS(make_initial_condition(ic, g), std::invalid_argument);
    }
}

TEST_CASE("rhs against the direct convolution oracle") {
    // band 5 on n=32: products reach |xi|=10 = dealias bound, alias-free
    const Grid g = Grid::make(2, 32);
    const SpectralField v = random_field(g, 5, 4);

    SUBCASE("euler rhs equals -P[(v.grad)v]") {
        const SpectralField oracle =
            -1.0 * leray_project(dealias(advection_bruteforce(v, v)));
        const SpectralField got = rhs_euler(v);
        CHECK(sobolev_norm(got - oracle, 0.0) < 1e-11 * sobolev_norm(oracle, 0.0));
    }

    SUBCASE("leray rhs transports v by the filtered velocity") {
        const KernelSpec k{KernelKind::helmholtz, 0.3};
        const SpectralField u = apply_kernel(k, v);
        const SpectralField oracle =
            -1.0 * leray_project(dealias(advection_bruteforce(u, v)));
        const SpectralField got = rhs_leray_alpha(v, k);
        CHECK(sobolev_norm(got - oracle, 0.0) < 1e-11 * sobolev_norm(oracle, 0.0));
    }

    SUBCASE("identity kernel reduces to the euler rhs") {
        const SpectralField a = rhs_leray_alpha(v, {KernelKind::identity, 0.0});
        const SpectralField b = rhs_euler(v);
        CHECK((a.coeffs - b.coeffs).cwiseAbs().maxCoeff() < 1e-14);
    }

    SUBCASE("3d oracle agreement") {
        const Grid g3 = Grid::make(3, 16);
        const SpectralField v3 = random_field(g3, 2, 8);
        const SpectralField oracle =
            -1.0 * leray_project(dealias(advection_bruteforce(v3, v3)));
        const SpectralField got = rhs_euler(v3);
        CHECK(sobolev_norm(got - oracle, 0.0) <
              1e-11 * std::max(sobolev_norm(oracle, 0.0), 1e-8));
    }
}

TEST_CASE("special solutions have vanishing rhs") {
    const Grid g = Grid::make(2, 32);

    SUBCASE("taylor-green is a steady euler flow") {
        const SpectralField tg = taylor_green(g);
        CHECK(sobolev_norm(rhs_euler(tg), 0.0) < 1e-13);
        // the advection term is a pure gradient, so it also vanishes under
        // any radial filter applied before projection
        CHECK(sobolev_norm(rhs_leray_alpha(tg, {KernelKind::helmholtz, 0.5}), 0.0) <
              1e-13);
    }

    SUBCASE("single shear mode is steady") {
        SpectralField shear = zero_field(g);
        const Eigen::Index idx = g.index_of({1, 0, 0});
        const Eigen::Index cdx = g.index_of({-1, 0, 0});
        shear.coeffs(idx, 1) = Complex(0.5, 0.0);  // v = (0, cos x)
        shear.coeffs(cdx, 1) = Complex(0.5, 0.0);
        CHECK(sobolev_norm(rhs_euler(shear), 0.0) < 1e-14);
    }
}

TEST_CASE("pressure recovery solves the poisson relation") {
    const Grid g = Grid::make(2, 32);
    const SpectralField v = random_field(g, 5, 6);
    const KernelSpec k{KernelKind::helmholtz, 0.4};
    const SpectralField u = apply_kernel(k, v);
    const SpectralField w = dealias(advection_bruteforce(u, v));
    const Eigen::VectorXcd p = pressure_from_velocity(v, k);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < g.modes(); ++i) {
        Complex div_w = 0.0;
        for (int a = 0; a < 2; ++a)
            div_w += Complex(0.0, g.wavenumbers()(i, a)) * w.coeffs(i, a);
        const Complex residual = g.ksq()(i) * p(i) - div_w;
        worst = std::max(worst, std::abs(residual));
    }
    CHECK(worst < 1e-11);
}

TEST_CASE("step") {
    const Grid g = Grid::make(2, 32);
    const SpectralField v = random_field(g, 5, 13);
    const KernelSpec k{KernelKind::helmholtz, 0.5};

    SUBCASE("dt = 0 is the identity") {
        const SpectralField out = step(v, 0.0, k);
        CHECK((out.coeffs - v.coeffs).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("preserves divergence-free and Hermitian structure") {
        SpectralField s = v;
        for (int i = 0; i < 5; ++i) s = step(s, 0.01, k);
        CHECK(divergence_residual(s) < 1e-11);
        CHECK(hermitian_residual(s) < 1e-11);
        CHECK(std::abs(s.coeffs(0, 0)) + std::abs(s.coeffs(0, 1)) < 1e-15);
    }

    SUBCASE("classical fourth-order convergence under dt halving") {
        auto advance = [&](double dt, int steps) {
            SpectralField s = v;
            for (int i = 0; i < steps; ++i) s = step(s, dt, k);
            return s;
        };
        const SpectralField fine = advance(0.0025, 64);  // reference
        const SpectralField e1 = advance(0.04, 4) - fine;
        const SpectralField e2 = advance(0.02, 8) - fine;
        const SpectralField e3 = advance(0.01, 16) - fine;
        const double r12 = sobolev_norm(e1, 0.0) / sobolev_norm(e2, 0.0);
        const double r23 = sobolev_norm(e2, 0.0) / sobolev_norm(e3, 0.0);
        CHECK(r12 > 14.0);
        CHECK(r12 < 18.0);
        CHECK(r23 > 14.0);
        CHECK(r23 < 18.5);
    }
}

TEST_CASE("simulate") {
    SolverConfig cfg;
    cfg.grid = Grid::make(2, 32);
    cfg.kernel = {KernelKind::helmholtz, 0.3};
    cfg.ic.kind = InitialCondition::Kind::random_band_limited;
    cfg.ic.band = 5;
    cfg.ic.seed = 3;
    cfg.t_end = 0.5;
    cfg.diag_s = {1.0, 2.0};

    SUBCASE("t_end = 0 returns the initial state only") {
        SolverConfig c0 = cfg;
        c0.t_end = 0.0;
        const Trajectory traj = simulate(c0);
        CHECK(traj.status == Trajectory::Status::completed);
        CHECK(traj.snapshots.size() == 1);
        CHECK(traj.times.front() == 0.0);
    }

    SUBCASE("energy is conserved to integrator accuracy") {
        SolverConfig ecfg = cfg;
        ecfg.dt_policy = {DtPolicy::Kind::fixed, 0.005};
        const Trajectory traj = simulate(ecfg);
        REQUIRE(traj.status == Trajectory::Status::completed);
        const double e0 = traj.diagnostics.front().l2_energy;
        const double e1 = traj.diagnostics.back().l2_energy;
        CHECK(std::abs(e1 - e0) < 1e-9 * e0);
        CHECK(traj.times.back() == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("filtered dynamics approach euler as alpha shrinks") {
        SolverConfig ecfg = cfg;
        ecfg.kernel = {KernelKind::identity, 0.0};
        ecfg.dt_policy = {DtPolicy::Kind::fixed, 0.01};
        const SpectralField v0 = make_initial_condition(cfg.ic, cfg.grid);
        const SpectralField ref = simulate(ecfg, v0).final_state();
        double prev = 1e300;
        for (double alpha : {0.4, 0.2, 0.1}) {
            SolverConfig acfg = ecfg;
            acfg.kernel = {KernelKind::helmholtz, alpha};
            const double err =
                sobolev_norm(simulate(acfg, v0).final_state() - ref, 0.0);
            CHECK(err < prev);
            prev = err;
        }
    }

    SUBCASE("oversize fixed dt aborts as a cfl failure") {
        SolverConfig bad = cfg;
        bad.dt_policy = {DtPolicy::Kind::fixed, 10.0};
        CHECK(simulate(bad).status == Trajectory::Status::cfl_failure);
    }

    SUBCASE("blow-up guard trips when the threshold is set below the start") {
        SolverConfig bad = cfg;
        bad.blowup_factor = 0.5;
        const Trajectory traj = simulate(bad);
        CHECK(traj.status == Trajectory::Status::blowup);
        CHECK(!traj.message.empty());
    }

    SUBCASE("diagnostics CSV layout") {
        const Trajectory traj = simulate(cfg);
        const std::string path = "diag_test.csv";
        write_diagnostics_csv(traj, path);
        std::ifstream is(path);
        std::string header;
        std::getline(is, header);
        CHECK(header == "t,l2_energy,hs_norm_1,hs_norm_2,max_velocity,div_residual");
        std::size_t lines = 0;
        std::string line;
        while (std::getline(is, line)) ++lines;
        CHECK(lines == traj.diagnostics.size());
        std::remove(path.c_str());
    }
}
