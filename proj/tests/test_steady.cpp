#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cavlab/error.hpp"
#include "cavlab/steady.hpp"

#include "support.hpp"

using namespace cavlab;
using namespace testkit;

namespace {

void check_against_oracle(const SteadyResult& r, const Params& p, double tol) {
    const Eigen::Vector3cd v = steady_amplitudes(p);
    const MomentState want = MomentState::coherent(v[0], v[1], v[2]);
    REQUIRE(max_abs_diff(r.moments(), want) <= tol * (1.0 + want.norm()));
    CHECK(r.eta_ac == doctest::Approx(std::norm(v[2]) / std::norm(v[0])).epsilon(1e-9));
}

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::Io;
}

} // namespace

TEST_CASE("fig3 steady state") {
    const SteadyResult r = steady_analytic(preset("fig3"));
    CHECK(rel(r.eta_ac, 4.0634) < 1e-4);
    CHECK(rel(r.n_a, 0.028835) < 1e-4);
    CHECK(rel(r.n_c, 0.117168) < 1e-4);
    check_against_oracle(r, preset("fig3"), 1e-12);
}

TEST_CASE("closed form matches the oracle solve") {
    Gen g(1);
    for (int i = 0; i < 500; ++i) {
        const Params p = g.analytic();
        check_against_oracle(steady_analytic(p), p, 1e-10);
    }
}

TEST_CASE("numeric methods match the oracle solve away from the closed-form domain") {
    Gen g(2);
    for (int i = 0; i < 300; ++i) {
        const Params p = g.general();
        check_against_oracle(steady_numeric(p, SteadyMethod::first_moment_solve), p, 1e-10);
        check_against_oracle(steady_numeric(p, SteadyMethod::full_linear_solve), p, 1e-10);
    }
}

TEST_CASE("cross-method agreement") {
    Gen g(3);
    for (int i = 0; i < 500; ++i) {
        const Params p = g.analytic();
        const SteadyResult a = steady_analytic(p);
        for (auto m : {SteadyMethod::first_moment_solve, SteadyMethod::full_linear_solve}) {
            const SteadyResult n = steady_numeric(p, m);
            CHECK(n.method == m);
            REQUIRE(rel(n.n_a, a.n_a) <= 1e-10);
            REQUIRE(rel(n.n_c, a.n_c) <= 1e-10);
            REQUIRE(rel(n.eta_ac, a.eta_ac) <= 1e-10);
        }
    }
}

TEST_CASE("steady states are fixed points of the moment flow") {
    Gen g(4);
    for (int i = 0; i < 100; ++i) {
        const Params p = g.general();
        const SteadyResult r = steady_numeric(p, SteadyMethod::full_linear_solve);
        CHECK(moment_rhs(r.moments(), p).norm() < 1e-10);
    }
}

TEST_CASE("transfer gain is independent of the drive and the charger loss") {
    Gen g(5);
    for (int i = 0; i < 300; ++i) {
        Params p = g.analytic();
        const double eta = eta_ss_analytic(p);
        CHECK(rel(steady_analytic(p).eta_ac, eta) < 1e-10);
        p.omega_drive_amp = g.uniform(0.01, 10.0);
        p.kappa_a = g.uniform(0.01, 10.0);
        REQUIRE(rel(eta_ss_analytic(p), eta) < 1e-12);
        REQUIRE(rel(steady_numeric(p).eta_ac, eta) < 1e-10);
    }
}

TEST_CASE("suppression locus and asymptote") {
    Params p = preset("fig5");
    p.theta = pi / 2;
    p.kappa_b = 2.0 * p.j_ab;
    CHECK(eta_ss_analytic(p) <= 1e-12);
    p.kappa_b = 1e4;
    CHECK(std::abs(eta_ss_analytic(p) - 4.0) / 4.0 <= 2e-3);
    p.kappa_b = 0.0;
    CHECK(eta_ss_analytic(p) == doctest::Approx(1.0));
}

TEST_CASE("reciprocal system at kappa_b = 0") {
    Params p = preset("fig3");
    p.kappa_b = 0.0;
    const SteadyResult r = steady_analytic(p);
    CHECK(rel(r.n_a, r.n_c) < 1e-10);
    CHECK(rel(reciprocal_kb0_energy(p), r.n_c) < 1e-12);
    Gen g(6);
    for (int i = 0; i < 200; ++i) {
        Params q = g.analytic();
        q.kappa_b = 0.0;
        const double oracle = std::norm(steady_amplitudes(q)[2]);
        CHECK(rel(reciprocal_kb0_energy(q), oracle) < 1e-10);
    }
}

TEST_CASE("bipartite baseline") {
    Gen g(7);
    for (int i = 0; i < 200; ++i) {
        const Params p = g.analytic();
        Eigen::Matrix2cd m;
        m << -I * p.kappa_a / 2.0, p.j_ac * std::exp(-I * p.theta), p.j_ac * std::exp(I * p.theta), -I * p.kappa_c / 2.0;
        const Eigen::Vector2cd v = m.inverse() * Eigen::Vector2cd(-p.omega_drive_amp, 0.0);
        CHECK(rel(bipartite_energy(p), std::norm(v[1])) < 1e-10);
        CHECK(rel(steady_bipartite_numeric(p).n_c, std::norm(v[1])) < 1e-10);
    }
}

TEST_CASE("baseline ratios") {
    Gen g(8);
    for (int i = 0; i < 200; ++i) {
        const Params p = g.analytic();
        const BaselineResult a = baselines(p);
        const BaselineResult n = baselines_numeric(p);
        REQUIRE(rel(a.eta_bb1, n.eta_bb1) < 1e-10);
        REQUIRE(rel(a.eta_bb2, n.eta_bb2) < 1e-10);
        CHECK(a.eta_bb1 == doctest::Approx(a.e_c_nonreciprocal / a.e_c_reciprocal_kb0));
        CHECK(a.eta_bb2 == doctest::Approx(a.e_c_nonreciprocal / a.e_c_bipartite));
    }
    Params p = preset("fig6");
    p.kappa_b = 0.0;
    CHECK(baselines(p).eta_bb1 == doctest::Approx(1.0).epsilon(1e-12));
    // outside the closed-form domain the ratios still come from linear solves
    Params d = g.general();
    CHECK(rel(baselines(d).eta_bb1, baselines_numeric(d).eta_bb1) < 1e-14);
}

TEST_CASE("steady-state errors") {
    Params p = preset("fig3");
    p.delta_b = 0.3;
    CHECK(code_of([&] { steady_analytic(p); }) == Errc::AnalyticDomain);
    CHECK(code_of([&] { eta_ss_analytic(p); }) == Errc::AnalyticDomain);
    p = preset("fig3");
    p.j_ac = 1.0;
    CHECK(code_of([&] { steady_analytic(p); }) == Errc::AnalyticDomain);

    Params empty;
    CHECK(code_of([&] { eta_ss_analytic(empty); }) == Errc::SingularDenominator);
    CHECK(code_of([&] { steady_numeric(empty); }) == Errc::SingularSystem);
    CHECK(code_of([&] { steady_numeric(empty, SteadyMethod::full_linear_solve); }) == Errc::SingularSystem);

    p = preset("fig3");
    p.omega_drive_amp = 0.0;
    CHECK(code_of([&] { baselines(p); }) == Errc::InvalidSpec);
    CHECK(code_of([&] { baselines_numeric(p); }) == Errc::InvalidSpec);
}
