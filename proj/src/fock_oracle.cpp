#include "cavlab/fock_oracle.hpp"

#include "cavlab/error.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <vector>

namespace cavlab {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

SparseMatrixC identity(std::size_t n) {
    SparseMatrixC m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setIdentity();
    return m;
}

SparseMatrixC single_mode_annihilation(int truncation) {
    std::vector<Eigen::Triplet<cd>> entries;
    for (int n = 1; n < truncation; ++n) entries.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
    SparseMatrixC m(truncation, truncation);
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

SparseMatrixC kron(const SparseMatrixC& x, const SparseMatrixC& y) {
    SparseMatrixC out = Eigen::kroneckerProduct(x, y);
    out.makeCompressed();
    return out;
}

SparseMatrixC adjoint(const SparseMatrixC& m) { return SparseMatrixC(m.adjoint()); }

// tr(rho * op) = sum_ij rho(j, i) op(i, j)
cd trace_product(const Eigen::MatrixXcd& rho, const SparseMatrixC& op) {
    cd acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < op.outerSize(); ++i) {
        for (SparseMatrixC::InnerIterator it(op, i); it; ++it) acc += rho(it.col(), it.row()) * it.value();
    }
    return acc;
}

void validate_config(const FockConfig& cfg) {
    if (cfg.truncation < 2) throw Error(Errc::InvalidSpec, "truncation must be >= 2");
    if (cfg.dimension() > cfg.dimension_cap) {
        throw Error(Errc::DimensionCapExceeded, "truncation^3 = " + std::to_string(cfg.dimension())
                                                    + " exceeds cap " + std::to_string(cfg.dimension_cap));
    }
}

double top_level_population(const Eigen::MatrixXcd& rho, int truncation) {
    const int t = truncation;
    double top_a = 0.0, top_b = 0.0, top_c = 0.0;
    for (int na = 0; na < t; ++na) {
        for (int nb = 0; nb < t; ++nb) {
            for (int nc = 0; nc < t; ++nc) {
                const Eigen::Index k = (na * t + nb) * t + nc;
                const double pop = rho(k, k).real();
                if (na == t - 1) top_a += pop;
                if (nb == t - 1) top_b += pop;
                if (nc == t - 1) top_c += pop;
            }
        }
    }
    return std::max({top_a, top_b, top_c});
}

} // namespace

std::size_t FockConfig::dimension() const {
    const auto t = static_cast<std::size_t>(std::max(truncation, 0));
    return t * t * t;
}

DensityState DensityState::vacuum(int truncation) {
    const Eigen::Index d = static_cast<Eigen::Index>(truncation) * truncation * truncation;
    DensityState s;
    s.truncation = truncation;
    s.rho = Eigen::MatrixXcd::Zero(d, d);
    s.rho(0, 0) = 1.0;
    return s;
}

DensityState DensityState::coherent(int truncation, cd a, cd b, cd c) {
    auto mode = [truncation](cd alpha) {
        Eigen::VectorXcd v(truncation);
        cd term = 1.0;
        for (int n = 0; n < truncation; ++n) {
            if (n > 0) term *= alpha / std::sqrt(static_cast<double>(n));
            v[n] = term;
        }
        return Eigen::VectorXcd(v.normalized());
    };
    const Eigen::VectorXcd va = mode(a), vb = mode(b), vc = mode(c);
    const Eigen::Index d = static_cast<Eigen::Index>(truncation) * truncation * truncation;
    Eigen::VectorXcd psi(d);
    for (int na = 0; na < truncation; ++na)
        for (int nb = 0; nb < truncation; ++nb)
            for (int nc = 0; nc < truncation; ++nc) psi[(na * truncation + nb) * truncation + nc] = va[na] * vb[nb] * vc[nc];
    DensityState s;
    s.truncation = truncation;
    s.rho = psi * psi.adjoint();
    return s;
}

DensityDiagnostics diagnose(const DensityState& state, bool with_eigenvalues) {
    DensityDiagnostics d;
    d.trace_error = std::abs(state.rho.trace() - 1.0);
    d.hermiticity_error = (state.rho - state.rho.adjoint()).cwiseAbs().maxCoeff();
    if (with_eigenvalues) {
        const Eigen::MatrixXcd herm = (state.rho + state.rho.adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
        d.min_eigenvalue = es.eigenvalues().minCoeff();
    }
    d.top_level_population = top_level_population(state.rho, state.truncation);
    return d;
}

FockOperators ladder_operators(int truncation) {
    const SparseMatrixC single = single_mode_annihilation(truncation);
    const SparseMatrixC id = identity(static_cast<std::size_t>(truncation));
    const SparseMatrixC id2 = kron(id, id);
    return {kron(single, id2), kron(id, kron(single, id)), kron(id2, single)};
}

Eigen::MatrixXcd Liouvillian::apply(const Eigen::MatrixXcd& rho) const {
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::VectorXcd out = matrix * Eigen::Map<const Eigen::VectorXcd>(rho.data(), d * d);
    return Eigen::Map<const Eigen::MatrixXcd>(out.data(), d, d);
}

Liouvillian build_generator(const Params& p, const FockConfig& cfg) {
    validate_config(cfg);
    const auto [a, b, c] = ladder_operators(cfg.truncation);
    const SparseMatrixC ad = adjoint(a), bd = adjoint(b), cd_ = adjoint(c);
    const cd phase = std::polar(1.0, p.theta);

    SparseMatrixC h = p.delta_a * (ad * a) + p.delta_b * (bd * b) + p.delta_c * (cd_ * c);
    h += p.j_ab * (SparseMatrixC(a * bd) + SparseMatrixC(ad * b));
    h += p.j_bc * (SparseMatrixC(c * bd) + SparseMatrixC(cd_ * b));
    h += p.j_ac * (phase * SparseMatrixC(a * cd_) + std::conj(phase) * SparseMatrixC(ad * c));
    h += p.omega_drive_amp * (a + ad);

    const std::size_t d = cfg.dimension();
    const SparseMatrixC id = identity(d);

    // column stacking: vec(X rho Y) = (Y^T (x) X) vec(rho)
    SparseMatrixC gen = -I * (kron(id, h) - kron(SparseMatrixC(h.transpose()), id));
    auto add_dissipator = [&](double rate, const SparseMatrixC& jump) {
        if (rate == 0.0) return;
        const SparseMatrixC jd = adjoint(jump);
        const SparseMatrixC number = jd * jump;
        gen += rate * (kron(SparseMatrixC(jump.conjugate()), jump) - 0.5 * kron(id, number)
                       - 0.5 * kron(SparseMatrixC(number.transpose()), id));
    };
    add_dissipator(p.kappa_a, a);
    add_dissipator(p.kappa_b, b);
    add_dissipator(p.kappa_c, c);
    gen.prune(cd{0.0, 0.0});
    gen.makeCompressed();
    return {cfg.truncation, d, std::move(gen)};
}

namespace {

struct MomentOperators {
    SparseMatrixC a, b, c, n_a, n_b, n_c, ab, ac, cb;

    explicit MomentOperators(int truncation) {
        auto ops = ladder_operators(truncation);
        a = std::move(ops.a);
        b = std::move(ops.b);
        c = std::move(ops.c);
        const SparseMatrixC ad = adjoint(a), bd = adjoint(b), cd_ = adjoint(c);
        n_a = ad * a;
        n_b = bd * b;
        n_c = cd_ * c;
        ab = a * bd;
        ac = a * cd_;
        cb = c * bd;
    }

    MomentState measure(const Eigen::MatrixXcd& rho) const {
        MomentState m;
        m.amp_a = trace_product(rho, a);
        m.amp_b = trace_product(rho, b);
        m.amp_c = trace_product(rho, c);
        m.n_a = trace_product(rho, n_a).real();
        m.n_b = trace_product(rho, n_b).real();
        m.n_c = trace_product(rho, n_c).real();
        m.coh_ab = trace_product(rho, ab);
        m.coh_ac = trace_product(rho, ac);
        m.coh_cb = trace_product(rho, cb);
        return m;
    }
};

} // namespace

MomentState expectation_moments(const DensityState& state) {
    return MomentOperators(state.truncation).measure(state.rho);
}

OracleRun evolve(const Params& p, const FockConfig& cfg, const DensityState& initial) {
    validate_config(cfg);
    const auto d = static_cast<Eigen::Index>(cfg.dimension());
    if (initial.truncation != cfg.truncation || initial.rho.rows() != d || initial.rho.cols() != d) {
        throw Error(Errc::InvalidSpec, "initial state does not match the configured truncation");
    }
    const DensityDiagnostics start = diagnose(initial, true);
    if (start.trace_error > 1e-9 || start.hermiticity_error > 1e-10 || start.min_eigenvalue < -1e-8) {
        throw Error(Errc::InvalidSpec, "initial state is not a density matrix");
    }

    const Liouvillian gen = build_generator(p, cfg);
    const auto times = uniform_grid(cfg.t_end, cfg.output_samples);
    const double coupling = p.reference_coupling();
    const Eigen::Index n = d * d;

    std::vector<double> x(static_cast<std::size_t>(2 * n));
    std::copy_n(reinterpret_cast<const double*>(initial.rho.data()), x.size(), x.begin());

    OracleRun run;
    run.min_eigenvalue = start.min_eigenvalue;
    run.trajectory.samples.reserve(times.size());
    DensityState current{cfg.truncation, Eigen::MatrixXcd(d, d)};
    const MomentOperators ops(cfg.truncation);

    auto rhs = [&gen, n](const std::vector<double>& v, std::vector<double>& dv, double) {
        dv.resize(v.size());
        Eigen::Map<const Eigen::VectorXcd> in(reinterpret_cast<const cd*>(v.data()), n);
        Eigen::Map<Eigen::VectorXcd> out(reinterpret_cast<cd*>(dv.data()), n);
        out.noalias() = gen.matrix * in;
    };
    auto observe = [&](const std::vector<double>& v, double t) {
        current.rho = Eigen::Map<const Eigen::MatrixXcd>(reinterpret_cast<const cd*>(v.data()), d, d);
        const DensityDiagnostics diag = diagnose(current, cfg.check_positivity);
        if (diag.top_level_population > cfg.leak_tolerance) {
            throw Error(Errc::TruncationLeak, "top Fock level holds " + std::to_string(diag.top_level_population)
                                                  + " of the population at t = " + std::to_string(t));
        }
        run.max_trace_error = std::max(run.max_trace_error, diag.trace_error);
        run.max_hermiticity_error = std::max(run.max_hermiticity_error, diag.hermiticity_error);
        if (cfg.check_positivity) run.min_eigenvalue = std::min(run.min_eigenvalue, diag.min_eigenvalue);
        run.max_top_level_population = std::max(run.max_top_level_population, diag.top_level_population);
        run.trajectory.samples.push_back(make_sample(t, coupling, ops.measure(current.rho)));
    };

    run.trajectory.steps = integrate_on_grid(rhs, x, times, cfg.integrator, observe);
    run.final_state = current;
    run.trajectory.final_residual = moment_rhs(run.trajectory.back().state, p).norm();
    return run;
}

} // namespace cavlab
