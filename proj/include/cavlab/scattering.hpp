// scattering.hpp - Input–output transmission between charger and battery
//
// The non-Hermitian dynamical matrix O is the coefficient matrix of the
// first-moment flow, d<v>/dt = -i O <v> + sqrt(gamma) v_in, with
// gamma = diag(kappa_a, kappa_b, kappa_c). The scattering matrix at probe
// frequency omega is S = I + i sqrt(gamma) (O - omega I)^{-1} sqrt(gamma),
// and T_{a->c} = |S_ca|^2, T_{c->a} = |S_ac|^2. No passivity bound is imposed.

#pragma once

#include "cavlab/model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace cavlab {

struct ScatteringResult {
    Eigen::Matrix3cd s_matrix{Eigen::Matrix3cd::Zero()};
    double t_forward{0.0};  // |S_ca|^2
    double t_backward{0.0}; // |S_ac|^2
    double probe_detuning{0.0};
};

struct Transmissions {
    double forward{0.0};
    double backward{0.0};
};

// Diagonal delta_j + omega0_shift - i kappa_j / 2. Off-diagonals j_ab, j_bc and
// O[a,c] = j_ac e^{-i theta}, O[c,a] = j_ac e^{+i theta}, matching the
// first-moment equations.
Eigen::Matrix3cd dynamical_matrix(const Params& p, double omega0_shift = 0.0);

// Direct 3x3 inversion. probe_detuning is measured in the same frame as the
// cavity detunings. Throws SingularAtProbe.
ScatteringResult scattering_matrix(const Params& p, double probe_detuning);

std::vector<ScatteringResult> transmission_spectrum(const Params& p, std::span<const double> probes);

// det(O - omega I) for locked couplings and a common bare frequency, written as
// 2J^3 cos(theta) + J^2 (3 Delta + i kappa_abc / 2) - prod_j (Delta + i kappa_j / 2)
// with Delta = probe_detuning - delta (delta the common cavity detuning).
std::complex<double> transmission_beta(const Params& p, double probe_detuning);

// Closed-form transmissions
//   T_{a->c} = |i J sqrt(kappa_a kappa_c) (J + alpha e^{i(phi + theta)}) / beta|^2
//   T_{c->a} = |i J sqrt(kappa_a kappa_c) (J + alpha e^{i(phi - theta)}) / beta|^2
// with alpha e^{i phi} = Delta + i kappa_b / 2. Throws AnalyticDomain unless the
// couplings are locked and the detunings equal; SingularDenominator when beta = 0.
Transmissions transmissions_analytic(const Params& p, double probe_detuning);

} // namespace cavlab
