// Test-side generators and reference implementations. Nothing here calls the
// library's solvers, so the checks built on it are independent.

#pragma once

#include "cavlab/dynamics.hpp"
#include "cavlab/model.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace testkit {

using cd = std::complex<double>;
using cavlab::Params;
inline constexpr cd I{0.0, 1.0};
inline constexpr double pi = std::numbers::pi;

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    cd complex(double scale) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

    // resonant, locked couplings
    Params analytic() {
        Params p;
        p.set_coupling(uniform(0.1, 5.0));
        p.theta = uniform(-pi, pi);
        p.kappa_a = uniform(0.1, 4.0);
        p.kappa_b = uniform(0.0, 40.0);
        p.kappa_c = uniform(0.1, 4.0);
        p.omega_drive_amp = uniform(0.05, 2.0);
        return p;
    }

    // everything free
    Params general() {
        Params p = analytic();
        p.j_ab = uniform(0.0, 4.0);
        p.j_bc = uniform(0.0, 4.0);
        p.j_ac = uniform(0.0, 4.0);
        p.delta_a = uniform(-3.0, 3.0);
        p.delta_b = uniform(-3.0, 3.0);
        p.delta_c = uniform(-3.0, 3.0);
        p.kappa_b = uniform(0.1, 20.0);
        return p;
    }
};

// Coefficient matrix of the first-moment flow dv/dt = -i M v - i Omega e_a,
// written out from the Heisenberg equations of a, b, c.
inline Eigen::Matrix3cd flow_matrix(const Params& p) {
    Eigen::Matrix3cd m;
    m << p.delta_a - I * p.kappa_a / 2.0, p.j_ab, p.j_ac * std::exp(-I * p.theta),
        p.j_ab, p.delta_b - I * p.kappa_b / 2.0, p.j_bc,
        p.j_ac * std::exp(I * p.theta), p.j_bc, p.delta_c - I * p.kappa_c / 2.0;
    return m;
}

// Inverse by the adjugate formula.
inline Eigen::Matrix3cd adjugate_inverse(const Eigen::Matrix3cd& m) {
    Eigen::Matrix3cd adj;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            adj(i, j) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
        }
    }
    const cd det = m(0, 0) * adj(0, 0) + m(0, 1) * adj(1, 0) + m(0, 2) * adj(2, 0);
    return adj / det;
}

inline Eigen::Vector3cd steady_amplitudes(const Params& p) {
    return adjugate_inverse(flow_matrix(p)) * Eigen::Vector3cd(-p.omega_drive_amp, 0.0, 0.0);
}

// First moments from vacuum: v(t) = (I - exp(-i M t)) v_ss, exp via eigendecomposition.
inline Eigen::Vector3cd amplitudes_at(const Params& p, double t) {
    const Eigen::Matrix3cd m = flow_matrix(p);
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(m);
    const Eigen::Matrix3cd v = es.eigenvectors();
    Eigen::Vector3cd phases;
    for (int k = 0; k < 3; ++k) phases[k] = std::exp(-I * es.eigenvalues()[k] * t);
    const Eigen::Matrix3cd prop = v * phases.asDiagonal() * v.inverse();
    const Eigen::Vector3cd vss = steady_amplitudes(p);
    return vss - prop * vss;
}

// Time derivative of every moment of a product coherent state, by the product
// rule applied to the first-moment flow.
inline cavlab::MomentState product_rule_rhs(const Params& p, cd a, cd b, cd c) {
    const Eigen::Vector3cd v(a, b, c);
    const Eigen::Vector3cd dv = -I * (flow_matrix(p) * v) - I * p.omega_drive_amp * Eigen::Vector3cd(1, 0, 0);
    cavlab::MomentState d;
    d.amp_a = dv[0];
    d.amp_b = dv[1];
    d.amp_c = dv[2];
    d.n_a = 2.0 * std::real(std::conj(a) * dv[0]);
    d.n_b = 2.0 * std::real(std::conj(b) * dv[1]);
    d.n_c = 2.0 * std::real(std::conj(c) * dv[2]);
    d.coh_ab = dv[0] * std::conj(b) + a * std::conj(dv[1]);
    d.coh_ac = dv[0] * std::conj(c) + a * std::conj(dv[2]);
    d.coh_cb = dv[2] * std::conj(b) + c * std::conj(dv[1]);
    return d;
}

inline double max_abs_diff(const cavlab::MomentState& x, const cavlab::MomentState& y) {
    const auto a = x.pack(), b = y.pack();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

inline double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

} // namespace testkit
