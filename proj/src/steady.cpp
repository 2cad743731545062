#include "cavlab/steady.hpp"

#include "cavlab/error.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace cavlab {

namespace {

constexpr cd I{0.0, 1.0};

void require_analytic_domain(const Params& p) {
    if (!p.resonant()) throw Error(Errc::AnalyticDomain, "closed forms need zero detunings");
    if (!p.equal_couplings()) throw Error(Errc::AnalyticDomain, "closed forms need j_ab = j_bc = j_ac");
}

template <class Matrix, class Vector>
Vector solve_checked(const Matrix& m, const Vector& rhs, const char* what) {
    Eigen::PartialPivLU<Matrix> lu(m);
    const double rcond = lu.rcond();
    if (!(rcond * kMaxCondition >= 1.0)) {
        throw Error(Errc::SingularSystem, std::string(what) + " is singular (rcond = " + std::to_string(rcond) + ")");
    }
    return lu.solve(rhs);
}

// Rows a, b, c of the first-moment flow d<v>/dt = -i M <v> - i Omega e_a.
Eigen::Matrix3cd first_moment_matrix(const Params& p) {
    const cd phase = std::polar(1.0, p.theta);
    Eigen::Matrix3cd m;
    m << p.delta_a - I * p.kappa_a / 2.0, p.j_ab, p.j_ac * std::conj(phase),
        p.j_ab, p.delta_b - I * p.kappa_b / 2.0, p.j_bc,
        p.j_ac * phase, p.j_bc, p.delta_c - I * p.kappa_c / 2.0;
    return m;
}

void fill_factorized(SteadyResult& r) {
    r.n_a = std::norm(r.amp_a);
    r.n_b = std::norm(r.amp_b);
    r.n_c = std::norm(r.amp_c);
    r.coh_ab = r.amp_a * std::conj(r.amp_b);
    r.coh_ac = r.amp_a * std::conj(r.amp_c);
    r.coh_cb = r.amp_c * std::conj(r.amp_b);
}

// Second moments packed as n_a, n_b, n_c, re/im coh_ab, coh_ac, coh_cb.
using Second = Eigen::Matrix<double, 9, 1>;

MomentState with_second(MomentState s, const Second& x) {
    s.n_a = x[0];
    s.n_b = x[1];
    s.n_c = x[2];
    s.coh_ab = {x[3], x[4]};
    s.coh_ac = {x[5], x[6]};
    s.coh_cb = {x[7], x[8]};
    return s;
}

Second second_part(const MomentState& d) {
    Second out;
    out << d.n_a, d.n_b, d.n_c, d.coh_ab.real(), d.coh_ab.imag(), d.coh_ac.real(),
        d.coh_ac.imag(), d.coh_cb.real(), d.coh_cb.imag();
    return out;
}

void solve_second_moments(SteadyResult& r, const Params& p) {
    MomentState first;
    first.amp_a = r.amp_a;
    first.amp_b = r.amp_b;
    first.amp_c = r.amp_c;

    // The second-moment equations are affine in the second moments at fixed first
    // moments: f(x) = A x + f(0). Columns of A are read off the flow itself.
    const Second source = second_part(moment_rhs(with_second(first, Second::Zero()), p));
    Eigen::Matrix<double, 9, 9> a;
    for (int k = 0; k < 9; ++k) {
        a.col(k) = second_part(moment_rhs(with_second(first, Second::Unit(k)), p)) - source;
    }
    const Second x = solve_checked(a, Second(-source), "second-moment system");
    r.n_a = x[0];
    r.n_b = x[1];
    r.n_c = x[2];
    r.coh_ab = {x[3], x[4]};
    r.coh_ac = {x[5], x[6]};
    r.coh_cb = {x[7], x[8]};
}

} // namespace

std::string_view method_name(SteadyMethod m) noexcept {
    switch (m) {
    case SteadyMethod::analytic: return "analytic";
    case SteadyMethod::first_moment_solve: return "first_moment_solve";
    case SteadyMethod::full_linear_solve: return "full_linear_solve";
    }
    return "unknown";
}

MomentState SteadyResult::moments() const {
    MomentState s;
    s.amp_a = amp_a;
    s.amp_b = amp_b;
    s.amp_c = amp_c;
    s.n_a = n_a;
    s.n_b = n_b;
    s.n_c = n_c;
    s.coh_ab = coh_ab;
    s.coh_ac = coh_ac;
    s.coh_cb = coh_cb;
    return s;
}

double eta_ss_analytic(const Params& p) {
    require_analytic_domain(p);
    const double j = p.j_ab;
    const double kb = p.kappa_b;
    const double base = 4.0 * j * j + kb * p.kappa_c;
    const double den = base * base;
    if (!(den > 0.0)) throw Error(Errc::SingularDenominator, "4J^2 + kappa_b kappa_c vanishes");
    return 4.0 * j * j * (4.0 * j * j - 4.0 * j * kb * std::sin(p.theta) + kb * kb) / den;
}

SteadyResult steady_analytic(const Params& p) {
    require_analytic_domain(p);
    const double j = p.j_ab;
    const double ka = p.kappa_a, kb = p.kappa_b, kc = p.kappa_c;
    const double w = p.omega_drive_amp;
    const double c = std::cos(p.theta);

    const double loss = 4.0 * j * j * (ka + kb + kc) + ka * kb * kc;
    const double den = 256.0 * std::pow(j, 6) * c * c + loss * loss;
    if (!(den > 0.0)) throw Error(Errc::SingularDenominator, "steady-state denominator vanishes");

    SteadyResult r;
    r.method = SteadyMethod::analytic;

    // Cramer's rule: <v> = -Omega * (cofactors of row a) / det
    const cd phase = std::polar(1.0, p.theta);
    const cd det = 2.0 * j * j * j * c + I * loss / 8.0;
    const cd cof_aa = -(4.0 * j * j + kb * kc) / 4.0;
    const cd cof_ab = j * j * phase + I * j * kc / 2.0;
    const cd cof_ac = j * j + I * kb * j * phase / 2.0;
    r.amp_a = -w * cof_aa / det;
    r.amp_b = -w * cof_ab / det;
    r.amp_c = -w * cof_ac / det;
    fill_factorized(r);

    const double kb_term = 4.0 * j * j + kb * kc;
    r.n_a = 4.0 * w * w * kb_term * kb_term / den;
    r.n_c = 16.0 * j * j * w * w * (4.0 * j * j - 4.0 * j * kb * std::sin(p.theta) + kb * kb) / den;
    r.eta_ac = eta_ss_analytic(p);
    return r;
}

SteadyResult steady_numeric(const Params& p, SteadyMethod method) {
    if (method == SteadyMethod::analytic) return steady_analytic(p);

    const Eigen::Vector3cd drive(-p.omega_drive_amp, 0.0, 0.0);
    const Eigen::Vector3cd v = solve_checked(first_moment_matrix(p), drive, "first-moment system");

    SteadyResult r;
    r.method = method;
    r.amp_a = v[0];
    r.amp_b = v[1];
    r.amp_c = v[2];
    if (method == SteadyMethod::first_moment_solve) {
        fill_factorized(r);
    } else {
        solve_second_moments(r, p);
    }
    r.eta_ac = transfer_gain(r.n_a, r.n_c);
    return r;
}

double reciprocal_kb0_energy(const Params& p) {
    if (!p.equal_couplings()) throw Error(Errc::AnalyticDomain, "closed form needs equal couplings");
    const double j = p.j_ab;
    const double c = std::cos(p.theta);
    const double sum = p.kappa_a + p.kappa_c;
    const double den = sum * sum + 16.0 * j * j * c * c;
    if (!(den > 0.0)) throw Error(Errc::SingularDenominator, "reciprocal baseline denominator vanishes");
    return 4.0 * p.omega_drive_amp * p.omega_drive_amp / den;
}

double bipartite_energy(const Params& p) {
    if (!p.equal_couplings()) throw Error(Errc::AnalyticDomain, "closed form needs equal couplings");
    const double j = p.j_ab;
    const double base = 4.0 * j * j + p.kappa_a * p.kappa_c;
    if (!(base > 0.0)) throw Error(Errc::SingularDenominator, "bipartite baseline denominator vanishes");
    return 16.0 * j * j * p.omega_drive_amp * p.omega_drive_amp / (base * base);
}

BipartiteSteady steady_bipartite_numeric(const Params& p) {
    const cd phase = std::polar(1.0, p.theta);
    Eigen::Matrix2cd m;
    m << p.delta_a - I * p.kappa_a / 2.0, p.j_ac * std::conj(phase),
        p.j_ac * phase, p.delta_c - I * p.kappa_c / 2.0;
    const Eigen::Vector2cd v = solve_checked(m, Eigen::Vector2cd(-p.omega_drive_amp, 0.0), "bipartite system");
    return {v[0], v[1], std::norm(v[0]), std::norm(v[1])};
}

namespace {

BaselineResult finish_baselines(double nr, double kb0, double bip) {
    if (!(kb0 > 0.0) || !(bip > 0.0)) {
        throw Error(Errc::SingularDenominator, "reciprocal baseline energy vanishes");
    }
    return {nr, kb0, bip, nr / kb0, nr / bip};
}

void require_drive(const Params& p) {
    if (!(p.omega_drive_amp > 0.0)) throw Error(Errc::InvalidSpec, "baselines need Omega > 0");
}

} // namespace

BaselineResult baselines(const Params& p) {
    require_drive(p);
    if (!p.analytic_domain()) return baselines_numeric(p);
    return finish_baselines(steady_analytic(p).n_c, reciprocal_kb0_energy(p), bipartite_energy(p));
}

BaselineResult baselines_numeric(const Params& p) {
    require_drive(p);
    Params reciprocal = p;
    reciprocal.kappa_b = 0.0;
    return finish_baselines(steady_numeric(p).n_c, steady_numeric(reciprocal).n_c,
                            steady_bipartite_numeric(p).n_c);
}

} // namespace cavlab
