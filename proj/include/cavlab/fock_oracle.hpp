// fock_oracle.hpp - Density-matrix reference for the moment dynamics
//
// Evolves rho under the Lindblad master equation
//   d rho/dt = -i [H, rho] + sum_j kappa_j (j rho j^dag - {j^dag j, rho} / 2)
// in a truncated three-mode Fock space, with the drive-frame Hamiltonian
//   H = sum_j Delta_j j^dag j + (J_ab a b^dag + J_bc c b^dag + J_ac e^{i theta} a c^dag + h.c.)
//       + Omega (a + a^dag).
// Basis ordering is a (x) b (x) c with a the most significant index; rho is
// vectorized column-stacked, so the generator acts on vec(rho) directly.

#pragma once

#include "cavlab/dynamics.hpp"
#include "cavlab/integrator.hpp"
#include "cavlab/model.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstddef>

namespace cavlab {

using SparseMatrixC = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;

struct FockConfig {
    int truncation{5}; // Fock levels 0 .. truncation-1 per mode
    double t_end{1.0};
    std::size_t output_samples{101};
    std::size_t dimension_cap{512}; // cap on truncation^3
    // top-level population above which results are rejected
    double leak_tolerance{1e-6};
    bool check_positivity{true};
    IntegratorControl integrator{1e-8, 1e-10};

    std::size_t dimension() const;
};

struct DensityState {
    int truncation{0};
    Eigen::MatrixXcd rho;

    static DensityState vacuum(int truncation);
    // Normalized product of truncated coherent states.
    static DensityState coherent(int truncation, std::complex<double> a, std::complex<double> b,
                                 std::complex<double> c);
};

struct DensityDiagnostics {
    double trace_error{0.0};       // |tr rho - 1|
    double hermiticity_error{0.0}; // max |rho - rho^dag|
    double min_eigenvalue{0.0};
    double top_level_population{0.0}; // max over modes
};

DensityDiagnostics diagnose(const DensityState& state, bool with_eigenvalues = true);

// Ladder operators on the full space.
struct FockOperators {
    SparseMatrixC a, b, c;
};
FockOperators ladder_operators(int truncation);

struct Liouvillian {
    int truncation{0};
    std::size_t dim{0}; // Hilbert-space dimension d; matrix is d^2 x d^2
    SparseMatrixC matrix;

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
};

// Throws DimensionCapExceeded when truncation^3 exceeds cfg.dimension_cap.
Liouvillian build_generator(const Params& p, const FockConfig& cfg);

// The same nine moments the moment flow tracks, via <O> = tr(rho O).
MomentState expectation_moments(const DensityState& state);

struct OracleRun {
    Trajectory trajectory;
    DensityState final_state;
    // worst values over all output samples
    double max_trace_error{0.0};
    double max_hermiticity_error{0.0};
    double min_eigenvalue{0.0};
    double max_top_level_population{0.0};
};

// Integrates the vectorized master equation over [0, cfg.t_end] on
// cfg.output_samples uniform points. Throws TruncationLeak, StepSizeUnderflow,
// DimensionCapExceeded, or InvalidSpec for an initial state that is not a
// density matrix of the configured dimension.
OracleRun evolve(const Params& p, const FockConfig& cfg, const DensityState& initial);

} // namespace cavlab
