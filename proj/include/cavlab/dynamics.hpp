// dynamics.hpp - Moment equations of the driven three-cavity system and their time integration
//
// The nine tracked expectation values are closed under the dynamics because the
// model is linear: three complex first moments, three real occupations and three
// complex coherences, all in the frame rotating at the drive frequency.

#pragma once

#include "cavlab/integrator.hpp"
#include "cavlab/model.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cavlab {

using cd = std::complex<double>;

struct MomentState {
    cd amp_a{}, amp_b{}, amp_c{};   // <a>, <b>, <c>
    double n_a{0.0}, n_b{0.0}, n_c{0.0};
    cd coh_ab{}, coh_ac{}, coh_cb{}; // <a b^dag>, <a c^dag>, <c b^dag>

    static constexpr std::size_t kPackedSize = 15;

    static MomentState vacuum() { return {}; }
    // Product coherent state |a> |b> |c>: second moments factorize.
    static MomentState coherent(cd a, cd b, cd c);

    // Packed order matches the trajectory CSV columns:
    // re/im a, b, c; n_a, n_b, n_c; re/im coh_ab, coh_ac, coh_cb.
    std::array<double, kPackedSize> pack() const;
    static MomentState unpack(std::span<const double, kPackedSize> v);

    MomentState& operator+=(const MomentState& o);
    MomentState& operator*=(double s);
    friend MomentState operator+(MomentState l, const MomentState& r) { return l += r; }
    friend MomentState operator-(MomentState l, const MomentState& r) { return l += r * -1.0; }
    friend MomentState operator*(MomentState l, double s) { return l *= s; }
    friend MomentState operator*(double s, MomentState r) { return r *= s; }

    // Euclidean norm over the packed representation.
    double norm() const;
};

// Time derivative of every tracked moment (the full linear moment flow).
MomentState moment_rhs(const MomentState& s, const Params& p);

// Below this charger occupation the transfer gain n_c/n_a is reported as NaN.
inline constexpr double kEtaFloor = 1e-14;
double transfer_gain(double n_a, double n_c) noexcept;

struct TrajectorySample {
    double t{0.0};
    double jt{0.0};
    MomentState state;
    double e_a{0.0}, e_b{0.0}, e_c{0.0};
    double eta_ac{0.0};
};

TrajectorySample make_sample(double t, double coupling, const MomentState& s);

struct Trajectory {
    std::vector<TrajectorySample> samples;
    // ||moment_rhs|| at the final sample
    double final_residual{0.0};
    std::size_t steps{0};

    const TrajectorySample& back() const { return samples.back(); }
};

// Integrates the moment flow from `initial` over [0, t_end] and samples it on
// ctrl.samples uniform points. Throws InvalidSpec for t_end <= 0.
Trajectory integrate(const Params& p, const MomentState& initial, double t_end,
                     const IntegratorControl& ctrl = {});

// max over interior samples of |dN/dt + sum_j kappa_j n_j + 2 Omega Im<a>| with
// N = n_a + n_b + n_c and dN/dt from centered differences (fourth order when
// at least 5 samples exist). Assumes uniform sampling.
double energy_balance_residual(const Trajectory& traj, const Params& p);

} // namespace cavlab
