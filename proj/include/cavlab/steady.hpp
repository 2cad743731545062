// steady.hpp - Steady states by closed form, first-moment solve and full moment solve,
// plus the two reciprocal baselines used to quantify the charging advantage.

#pragma once

#include "cavlab/dynamics.hpp"
#include "cavlab/model.hpp"

#include <string_view>

namespace cavlab {

enum class SteadyMethod { analytic, first_moment_solve, full_linear_solve };

std::string_view method_name(SteadyMethod m) noexcept;

struct SteadyResult {
    cd amp_a{}, amp_b{}, amp_c{};
    double n_a{0.0}, n_b{0.0}, n_c{0.0};
    cd coh_ab{}, coh_ac{}, coh_cb{};
    double eta_ac{0.0};
    SteadyMethod method{SteadyMethod::analytic};

    MomentState moments() const;
};

struct BaselineResult {
    double e_c_nonreciprocal{0.0};
    double e_c_reciprocal_kb0{0.0};
    double e_c_bipartite{0.0};
    double eta_bb1{0.0};
    double eta_bb2{0.0};
};

// Linear solves whose condition estimate exceeds this are reported as SingularSystem.
inline constexpr double kMaxCondition = 1e12;

// Closed forms on the resonant, equal-coupling domain. n_a and n_c come from the
// closed-form steady-state energies; the first moments come from Cramer's rule on
// the same 3x3 system, so n_b and the coherences are available too.
// Throws AnalyticDomain outside the domain, SingularDenominator when it vanishes.
SteadyResult steady_analytic(const Params& p);

// 4J^2 (4J^2 - 4J kappa_b sin(theta) + kappa_b^2) / (4J^2 + kappa_b kappa_c)^2.
// Independent of Omega and kappa_a.
double eta_ss_analytic(const Params& p);

// Numeric steady state for arbitrary detunings and couplings. first_moment_solve
// solves the 3x3 complex system and factorizes the second moments;
// full_linear_solve additionally solves the second-moment equations as a 9x9
// real system sourced by the first moments. Throws SingularSystem.
SteadyResult steady_numeric(const Params& p, SteadyMethod method = SteadyMethod::first_moment_solve);

// Battery energy of the kappa_b = 0 three-cavity system and of the bipartite
// system without the auxiliary cavity (closed forms, equal couplings).
double reciprocal_kb0_energy(const Params& p);
double bipartite_energy(const Params& p);

struct BipartiteSteady {
    cd amp_a{}, amp_c{};
    double n_a{0.0}, n_c{0.0};
};

// Two-mode steady state with the auxiliary cavity removed: charger and battery
// coupled directly by j_ac e^{i theta}. Throws SingularSystem.
BipartiteSteady steady_bipartite_numeric(const Params& p);

// Closed forms on the analytic domain, numeric solves elsewhere. Requires Omega > 0.
BaselineResult baselines(const Params& p);
// Every energy from linear solves.
BaselineResult baselines_numeric(const Params& p);

} // namespace cavlab
