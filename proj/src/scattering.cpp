#include "cavlab/scattering.hpp"

#include "cavlab/error.hpp"
#include "cavlab/steady.hpp"

#include <cmath>

namespace cavlab {

namespace {
constexpr std::complex<double> I{0.0, 1.0};
} // namespace

Eigen::Matrix3cd dynamical_matrix(const Params& p, double omega0_shift) {
    const std::complex<double> phase = std::polar(1.0, p.theta);
    Eigen::Matrix3cd o;
    o << p.delta_a + omega0_shift - I * p.kappa_a / 2.0, p.j_ab, p.j_ac * std::conj(phase),
        p.j_ab, p.delta_b + omega0_shift - I * p.kappa_b / 2.0, p.j_bc,
        p.j_ac * phase, p.j_bc, p.delta_c + omega0_shift - I * p.kappa_c / 2.0;
    return o;
}

ScatteringResult scattering_matrix(const Params& p, double probe_detuning) {
    const Eigen::Matrix3cd shifted = dynamical_matrix(p) - probe_detuning * Eigen::Matrix3cd::Identity();
    Eigen::PartialPivLU<Eigen::Matrix3cd> lu(shifted);
    if (!(lu.rcond() * kMaxCondition >= 1.0)) {
        throw Error(Errc::SingularAtProbe, "O - omega I is singular at probe detuning " + std::to_string(probe_detuning));
    }
    const Eigen::Vector3cd sqrt_gamma(std::sqrt(p.kappa_a), std::sqrt(p.kappa_b), std::sqrt(p.kappa_c));
    const Eigen::Matrix3cd inv = lu.inverse();

    ScatteringResult r;
    r.probe_detuning = probe_detuning;
    r.s_matrix = Eigen::Matrix3cd::Identity() + I * sqrt_gamma.asDiagonal() * inv * sqrt_gamma.asDiagonal();
    r.t_forward = std::norm(r.s_matrix(2, 0));
    r.t_backward = std::norm(r.s_matrix(0, 2));
    return r;
}

std::vector<ScatteringResult> transmission_spectrum(const Params& p, std::span<const double> probes) {
    std::vector<ScatteringResult> out;
    out.reserve(probes.size());
    for (double probe : probes) out.push_back(scattering_matrix(p, probe));
    return out;
}

std::complex<double> transmission_beta(const Params& p, double probe_detuning) {
    if (!p.equal_couplings() || !p.equal_detunings()) {
        throw Error(Errc::AnalyticDomain, "closed-form transmissions need locked couplings and equal detunings");
    }
    const double j = p.j_ab;
    const double delta = probe_detuning - p.delta_a;
    const double kappa_abc = p.kappa_a + p.kappa_b + p.kappa_c;
    const std::complex<double> da = delta + I * p.kappa_a / 2.0;
    const std::complex<double> db = delta + I * p.kappa_b / 2.0;
    const std::complex<double> dc = delta + I * p.kappa_c / 2.0;
    return 2.0 * j * j * j * std::cos(p.theta) + j * j * (3.0 * delta + I * kappa_abc / 2.0) - da * db * dc;
}

Transmissions transmissions_analytic(const Params& p, double probe_detuning) {
    const std::complex<double> beta = transmission_beta(p, probe_detuning);
    if (beta == 0.0) throw Error(Errc::SingularDenominator, "beta vanishes at this probe detuning");

    const double j = p.j_ab;
    const std::complex<double> aux = (probe_detuning - p.delta_a) + I * p.kappa_b / 2.0;
    const double alpha = std::abs(aux);
    const double phi = std::arg(aux);
    const std::complex<double> prefactor = I * j * std::sqrt(p.kappa_a * p.kappa_c);

    Transmissions t;
    t.forward = std::norm(prefactor * (j + alpha * std::polar(1.0, phi + p.theta)) / beta);
    t.backward = std::norm(prefactor * (j + alpha * std::polar(1.0, phi - p.theta)) / beta);
    return t;
}

} // namespace cavlab
