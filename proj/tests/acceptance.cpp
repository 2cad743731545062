// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "cavlab/dynamics.hpp"
#include "cavlab/fock_oracle.hpp"
#include "cavlab/scattering.hpp"
#include "cavlab/steady.hpp"
#include "cavlab/sweep.hpp"

#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace cavlab;
using namespace testkit;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

int failures = 0;

void criterion(int id, const char* what, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s < budget_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %d: %s | %s | %.3f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", id, what,
                o.detail.c_str(), s, budget_s, in_time ? "" : " OVER BUDGET");
    std::fflush(stdout);
}

double grid_max(const SweepTable& t, std::size_t& above_one) {
    double best = -1.0;
    above_one = 0;
    for (const auto& r : t.rows) {
        if (!r.value.ok()) continue;
        best = std::max(best, r.value.value);
        above_one += r.value.value > 1.0;
    }
    return best;
}

} // namespace

int main() {
    criterion(1, "steady transfer gain from fig3 dynamics at J t = 30", 1.0, [] {
        const Params p = preset("fig3");
        const Trajectory traj = integrate(p, MomentState::vacuum(), 30.0 / p.reference_coupling());
        const double eta = traj.back().eta_ac;
        const double exact = eta_ss_analytic(p);
        const bool pass = rel(eta, exact) <= 1e-4 && rel(eta, 4.0634) <= 1e-4 && rel(eta, 3.86) <= 0.10;
        return Outcome{pass, fmt("eta(Jt=30)=%.7f closed form=%.7f rel.dev=%.2e vs 3.86: %.1f%%", eta, exact,
                                 rel(eta, exact), 100.0 * rel(eta, 3.86))};
    });

    criterion(2, "reciprocal collapse at kappa_b = 0", 1.0, [] {
        Params p = preset("fig3");
        p.kappa_b = 0.0;
        const SteadyResult ss = steady_analytic(p);
        const SteadyResult num = steady_numeric(p, SteadyMethod::full_linear_solve);
        // slowest relaxation rate here is about 0.33, so run long enough to settle
        IntegratorControl ctrl;
        ctrl.samples = 200;
        const Trajectory traj = integrate(p, MomentState::vacuum(), 100.0 / p.reference_coupling(), ctrl);
        const auto& f = traj.back();
        const double steady_gap = rel(ss.n_a, ss.n_c);
        const double numeric_gap = rel(num.n_a, num.n_c);
        const double time_gap = rel(f.e_a, f.e_c);
        const bool pass = steady_gap <= 1e-10 && numeric_gap <= 1e-10 && time_gap <= 1e-6 && rel(f.e_c, ss.n_c) <= 1e-6;
        return Outcome{pass, fmt("steady |E_a-E_c|/E_c=%.1e (numeric %.1e); E_a(Jt=100)=%.9f E_c=%.9f gap=%.1e",
                                 steady_gap, numeric_gap, f.e_a, f.e_c, time_gap)};
    });

    criterion(3, "suppression locus kappa_b = 2J at theta = pi/2", 1.0, [] {
        Params p = preset("fig5");
        p.theta = pi / 2;
        p.kappa_b = 2.0 * p.j_ab;
        const double eta = eta_ss_analytic(p);
        SweepSpec curve;
        for (const auto& s : figure_preset("fig5")) {
            if (std::abs(s.base.theta - pi / 2) < 1e-12) curve = s;
        }
        const SweepTable t = run(curve);
        std::size_t arg = 0, nearest = 0;
        for (std::size_t k = 0; k < t.rows.size(); ++k) {
            if (t.rows[k].value.value < t.rows[arg].value.value) arg = k;
            if (std::abs(t.rows[k].coords[0] - 2.0) < std::abs(t.rows[nearest].coords[0] - 2.0)) nearest = k;
        }
        const bool pass = eta <= 1e-12 && arg == nearest;
        return Outcome{pass, fmt("eta=%.2e; grid argmin kappa_b=%.4f, nearest cell to 2 is %.4f", eta,
                                 t.rows[arg].coords[0], t.rows[nearest].coords[0])};
    });

    criterion(4, "strong auxiliary loss asymptote 4J^2/kappa_c^2", 1.0, [] {
        Params p = preset("fig5");
        p.kappa_b = 1e4;
        const double eta = eta_ss_analytic(p);
        return Outcome{std::abs(eta - 4.0) / 4.0 <= 2e-3, fmt("eta(kappa_b=1e4)=%.6f", eta)};
    });

    for (const char* id : {"fig6a", "fig6b", "fig6c", "fig6d"}) {
        const std::string what = std::string("fourfold advantage over the kappa_b = 0 baseline, ") + id;
        criterion(5, what.c_str(), 10.0, [id] {
            const SweepTable t = run(figure_preset(id).front());
            std::size_t above = 0;
            const double best = grid_max(t, above);
            const double frac = static_cast<double>(above) / static_cast<double>(t.rows.size());
            return Outcome{best >= 3.0 && best <= 5.0 && frac > 0.5,
                           fmt("max eta_bb1=%.4f, cells above 1: %.1f%% of %zu", best, 100.0 * frac, t.rows.size())};
        });
    }

    criterion(6, "eightfold advantage over the bipartite baseline, fig7", 10.0, [] {
        const SweepTable t = run(figure_preset("fig7").front());
        std::size_t above = 0;
        const double best = grid_max(t, above);
        return Outcome{best >= 6.0 && best <= 10.0, fmt("max eta_bb2=%.4f over %zu cells", best, t.rows.size())};
    });

    criterion(7, "closed-form transmissions vs matrix inversion", 5.0, [] {
        Gen g(20260101);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            Params p = g.analytic();
            p.set_detuning(g.uniform(-2.0, 2.0));
            const double probe = g.uniform(-6.0, 6.0);
            const Transmissions a = transmissions_analytic(p, probe);
            const ScatteringResult n = scattering_matrix(p, probe);
            worst = std::max({worst, std::abs(a.forward - n.t_forward), std::abs(a.backward - n.t_backward)});
        }
        Params iso = preset("fig3");
        iso.theta = -pi / 2;
        iso.kappa_b = 2.0 * iso.j_ab;
        const double back = scattering_matrix(iso, 0.0).t_backward;
        return Outcome{worst <= 1e-10 && back <= 1e-12,
                       fmt("max |analytic-numeric| over 1000 draws=%.2e; t_backward at locus=%.2e", worst, back)};
    });

    criterion(8, "density-matrix oracle vs moment equations", 120.0, [] {
        Params p = preset("fig3");
        p.omega_drive_amp = 0.1;
        FockConfig cfg;
        cfg.truncation = 5;
        cfg.t_end = 10.0 / p.reference_coupling();
        cfg.output_samples = 51;
        cfg.check_positivity = false;
        const OracleRun oracle = evolve(p, cfg, DensityState::vacuum(5));
        IntegratorControl ctrl;
        ctrl.samples = cfg.output_samples;
        const Trajectory moments = integrate(p, MomentState::vacuum(), cfg.t_end, ctrl);
        double worst = 0.0;
        for (std::size_t k = 0; k < moments.samples.size(); ++k) {
            worst = std::max(worst, max_abs_diff(oracle.trajectory.samples[k].state, moments.samples[k].state));
        }
        const DensityDiagnostics end = diagnose(oracle.final_state, true);
        const bool pass = worst <= 1e-3 && oracle.max_trace_error <= 1e-9 && end.min_eigenvalue > -1e-9;
        return Outcome{pass, fmt("max moment deviation=%.2e, max trace error=%.2e, final min eigenvalue=%.1e, top level=%.1e",
                                 worst, oracle.max_trace_error, end.min_eigenvalue, oracle.max_top_level_population)};
    });

    criterion(9, "invariant suites", 60.0, [] {
        Gen g(99);
        double factorization = 0.0, balance = 0.0, invariance = 0.0, swap = 0.0, cross = 0.0;
        for (int i = 0; i < 40; ++i) {
            const Params p = g.general();
            IntegratorControl ctrl;
            ctrl.samples = 4001;
            const Trajectory traj = integrate(p, MomentState::vacuum(), 8.0, ctrl);
            for (const auto& s : traj.samples) {
                const MomentState& m = s.state;
                factorization = std::max(factorization, max_abs_diff(m, MomentState::coherent(m.amp_a, m.amp_b, m.amp_c)));
            }
            balance = std::max(balance, energy_balance_residual(traj, p));
        }
        for (int i = 0; i < 2000; ++i) {
            Params p = g.analytic();
            const double eta = eta_ss_analytic(p);
            const SteadyResult a = steady_analytic(p);
            for (auto m : {SteadyMethod::first_moment_solve, SteadyMethod::full_linear_solve}) {
                const SteadyResult n = steady_numeric(p, m);
                cross = std::max({cross, rel(n.n_a, a.n_a), rel(n.n_c, a.n_c), rel(n.eta_ac, a.eta_ac)});
            }
            Params q = p;
            q.omega_drive_amp = g.uniform(0.01, 10.0);
            q.kappa_a = g.uniform(0.01, 10.0);
            invariance = std::max({invariance, rel(eta_ss_analytic(q), eta), rel(steady_numeric(q).eta_ac, eta)});

            Params r = g.general();
            const double probe = g.uniform(-4.0, 4.0);
            const ScatteringResult fwd = scattering_matrix(r, probe);
            r.theta = -r.theta;
            const ScatteringResult rev = scattering_matrix(r, probe);
            swap = std::max({swap, std::abs(fwd.t_forward - rev.t_backward), std::abs(fwd.t_backward - rev.t_forward)});
        }
        const bool pass = factorization <= 1e-8 && balance <= 1e-5 && invariance <= 1e-10 && swap <= 1e-12 && cross <= 1e-10;
        return Outcome{pass, fmt("factorization=%.1e energy balance=%.1e Omega/kappa_a invariance=%.1e theta swap=%.1e "
                                 "cross-method=%.1e",
                                 factorization, balance, invariance, swap, cross)};
    });

    std::printf("%s: %d criterion line(s) failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
