#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cavlab/error.hpp"
#include "cavlab/scattering.hpp"

#include "support.hpp"

using namespace cavlab;
using namespace testkit;

namespace {

Params random_locked(Gen& g) {
    Params p = g.analytic();
    p.set_detuning(g.uniform(-2.0, 2.0));
    return p;
}

Eigen::Matrix3cd oracle_s(const Params& p, double probe) {
    const Eigen::Matrix3cd shifted = flow_matrix(p) - probe * Eigen::Matrix3cd::Identity();
    const Eigen::Vector3cd root(std::sqrt(p.kappa_a), std::sqrt(p.kappa_b), std::sqrt(p.kappa_c));
    return Eigen::Matrix3cd::Identity() + I * root.asDiagonal() * adjugate_inverse(shifted) * root.asDiagonal();
}

} // namespace

TEST_CASE("dynamical matrix is the first-moment flow") {
    Gen g(1);
    for (int i = 0; i < 100; ++i) {
        const Params p = g.general();
        const cd a = g.complex(1), b = g.complex(1), c = g.complex(1);
        const MomentState d = moment_rhs(MomentState::coherent(a, b, c), p);
        const Eigen::Vector3cd flow = -I * (dynamical_matrix(p) * Eigen::Vector3cd(a, b, c));
        CHECK(std::abs(d.amp_a - (flow[0] - I * p.omega_drive_amp)) < 1e-12);
        CHECK(std::abs(d.amp_b - flow[1]) < 1e-12);
        CHECK(std::abs(d.amp_c - flow[2]) < 1e-12);
    }
    const Params p = preset("fig3");
    const Eigen::Matrix3cd shifted = dynamical_matrix(p, 0.75);
    CHECK(std::abs(shifted(1, 1) - cd(0.75, -5.0)) < 1e-15);
}

TEST_CASE("scattering matrix matches the adjugate inverse") {
    Gen g(2);
    for (int i = 0; i < 300; ++i) {
        const Params p = g.general();
        const double probe = g.uniform(-5.0, 5.0);
        const ScatteringResult r = scattering_matrix(p, probe);
        const Eigen::Matrix3cd want = oracle_s(p, probe);
        REQUIRE((r.s_matrix - want).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(r.t_forward == doctest::Approx(std::norm(want(2, 0))));
        CHECK(r.t_backward == doctest::Approx(std::norm(want(0, 2))));
        CHECK(r.probe_detuning == probe);
    }
}

TEST_CASE("beta is the characteristic determinant") {
    Gen g(3);
    for (int i = 0; i < 300; ++i) {
        const Params p = random_locked(g);
        const double probe = g.uniform(-5.0, 5.0);
        const cd det = (dynamical_matrix(p) - probe * Eigen::Matrix3cd::Identity()).determinant();
        REQUIRE(std::abs(transmission_beta(p, probe) - det) < 1e-10 * (1.0 + std::abs(det)));
    }
}

TEST_CASE("closed-form transmissions match inversion") {
    Gen g(4);
    for (int i = 0; i < 1000; ++i) {
        const Params p = random_locked(g);
        const double probe = g.uniform(-6.0, 6.0);
        const Transmissions t = transmissions_analytic(p, probe);
        const ScatteringResult r = scattering_matrix(p, probe);
        REQUIRE(std::abs(t.forward - r.t_forward) <= 1e-10);
        REQUIRE(std::abs(t.backward - r.t_backward) <= 1e-10);
    }
}

TEST_CASE("reversing the loop phase swaps the directions") {
    Gen g(5);
    for (int i = 0; i < 500; ++i) {
        Params p = g.general();
        const double probe = g.uniform(-4.0, 4.0);
        const ScatteringResult fwd = scattering_matrix(p, probe);
        p.theta = -p.theta;
        const ScatteringResult rev = scattering_matrix(p, probe);
        REQUIRE(std::abs(fwd.t_forward - rev.t_backward) < 1e-12);
        REQUIRE(std::abs(fwd.t_backward - rev.t_forward) < 1e-12);
    }
}

TEST_CASE("backward transmission vanishes at the suppression locus") {
    Gen g(6);
    for (int i = 0; i < 200; ++i) {
        Params p = g.analytic();
        p.theta = -pi / 2;
        p.kappa_b = 2.0 * p.j_ab;
        CHECK(scattering_matrix(p, 0.0).t_backward <= 1e-12);
        CHECK(transmissions_analytic(p, 0.0).backward <= 1e-12);
    }
}

TEST_CASE("reference isolator point") {
    Params p;
    p.set_coupling(1.0);
    p.kappa_a = p.kappa_c = 1.0;
    p.kappa_b = 2.0;
    p.theta = -pi / 2;
    const ScatteringResult r = scattering_matrix(p, 0.0);
    CHECK(r.t_forward == doctest::Approx(64.0 / 81.0).epsilon(1e-12));
    CHECK(r.t_backward <= 1e-12);
    const Transmissions t = transmissions_analytic(p, 0.0);
    CHECK(t.forward == doctest::Approx(64.0 / 81.0).epsilon(1e-12));
}

TEST_CASE("spectrum keeps probe order") {
    const std::vector<double> probes{-1.0, 0.0, 2.5};
    const auto spec = transmission_spectrum(preset("fig3"), probes);
    REQUIRE(spec.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(spec[i].probe_detuning == probes[i]);
}

TEST_CASE("scattering errors") {
    Params p = preset("fig3");
    p.j_ab = 0.5;
    CHECK_THROWS_AS(transmissions_analytic(p, 0.0), Error);
    try {
        transmission_beta(p, 0.0);
        FAIL("expected AnalyticDomain");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::AnalyticDomain);
    }
    Params empty;
    try {
        scattering_matrix(empty, 0.0);
        FAIL("expected SingularAtProbe");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SingularAtProbe);
    }
    try {
        transmissions_analytic(empty, 0.0);
        FAIL("expected SingularDenominator");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SingularDenominator);
    }
}
