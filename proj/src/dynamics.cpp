#include "cavlab/dynamics.hpp"

#include "cavlab/error.hpp"

#include <cmath>
#include <limits>

namespace cavlab {

namespace {

constexpr cd I{0.0, 1.0};

MomentState from_vector(const std::vector<double>& v) {
    return MomentState::unpack(std::span<const double, MomentState::kPackedSize>(v.data(), MomentState::kPackedSize));
}

} // namespace

MomentState MomentState::coherent(cd a, cd b, cd c) {
    MomentState s;
    s.amp_a = a;
    s.amp_b = b;
    s.amp_c = c;
    s.n_a = std::norm(a);
    s.n_b = std::norm(b);
    s.n_c = std::norm(c);
    s.coh_ab = a * std::conj(b);
    s.coh_ac = a * std::conj(c);
    s.coh_cb = c * std::conj(b);
    return s;
}

std::array<double, MomentState::kPackedSize> MomentState::pack() const {
    return {amp_a.real(),  amp_a.imag(),  amp_b.real(),  amp_b.imag(),  amp_c.real(),
            amp_c.imag(),  n_a,           n_b,           n_c,           coh_ab.real(),
            coh_ab.imag(), coh_ac.real(), coh_ac.imag(), coh_cb.real(), coh_cb.imag()};
}

MomentState MomentState::unpack(std::span<const double, kPackedSize> v) {
    MomentState s;
    s.amp_a = {v[0], v[1]};
    s.amp_b = {v[2], v[3]};
    s.amp_c = {v[4], v[5]};
    s.n_a = v[6];
    s.n_b = v[7];
    s.n_c = v[8];
    s.coh_ab = {v[9], v[10]};
    s.coh_ac = {v[11], v[12]};
    s.coh_cb = {v[13], v[14]};
    return s;
}

MomentState& MomentState::operator+=(const MomentState& o) {
    amp_a += o.amp_a;
    amp_b += o.amp_b;
    amp_c += o.amp_c;
    n_a += o.n_a;
    n_b += o.n_b;
    n_c += o.n_c;
    coh_ab += o.coh_ab;
    coh_ac += o.coh_ac;
    coh_cb += o.coh_cb;
    return *this;
}

MomentState& MomentState::operator*=(double s) {
    amp_a *= s;
    amp_b *= s;
    amp_c *= s;
    n_a *= s;
    n_b *= s;
    n_c *= s;
    coh_ab *= s;
    coh_ac *= s;
    coh_cb *= s;
    return *this;
}

double MomentState::norm() const {
    double acc = 0.0;
    for (double v : pack()) acc += v * v;
    return std::sqrt(acc);
}

MomentState moment_rhs(const MomentState& s, const Params& p) {
    const cd phase = std::polar(1.0, p.theta);
    const double omega = p.omega_drive_amp;

    MomentState d;
    // occupations
    d.n_a = -p.kappa_a * s.n_a - 2.0 * p.j_ab * s.coh_ab.imag()
            - 2.0 * p.j_ac * (phase * s.coh_ac).imag() - 2.0 * omega * s.amp_a.imag();
    d.n_b = -p.kappa_b * s.n_b + 2.0 * p.j_ab * s.coh_ab.imag() + 2.0 * p.j_bc * s.coh_cb.imag();
    d.n_c = -p.kappa_c * s.n_c - 2.0 * p.j_bc * s.coh_cb.imag()
            + 2.0 * p.j_ac * (phase * s.coh_ac).imag();

    // first moments
    d.amp_a = -(I * p.delta_a + p.kappa_a / 2.0) * s.amp_a - I * p.j_ab * s.amp_b
              - I * p.j_ac * std::conj(phase) * s.amp_c - I * omega;
    d.amp_b = -(I * p.delta_b + p.kappa_b / 2.0) * s.amp_b - I * p.j_ab * s.amp_a
              - I * p.j_bc * s.amp_c;
    d.amp_c = -(I * p.delta_c + p.kappa_c / 2.0) * s.amp_c - I * p.j_ac * phase * s.amp_a
              - I * p.j_bc * s.amp_b;

    // coherences
    d.coh_ab = -(I * (p.delta_a - p.delta_b) + (p.kappa_a + p.kappa_b) / 2.0) * s.coh_ab
               + I * p.j_ab * (s.n_a - s.n_b) + I * p.j_bc * s.coh_ac
               - I * p.j_ac * std::conj(phase) * s.coh_cb - I * omega * std::conj(s.amp_b);
    d.coh_ac = -(I * (p.delta_a - p.delta_c) + (p.kappa_a + p.kappa_c) / 2.0) * s.coh_ac
               + I * p.j_bc * s.coh_ab - I * p.j_ab * std::conj(s.coh_cb)
               - I * p.j_ac * std::conj(phase) * (s.n_c - s.n_a) - I * omega * std::conj(s.amp_c);
    d.coh_cb = -(I * (p.delta_c - p.delta_b) + (p.kappa_c + p.kappa_b) / 2.0) * s.coh_cb
               + I * p.j_ab * std::conj(s.coh_ac) + I * p.j_bc * (s.n_c - s.n_b)
               - I * p.j_ac * phase * s.coh_ab;
    return d;
}

double transfer_gain(double n_a, double n_c) noexcept {
    if (!(std::abs(n_a) >= kEtaFloor)) return std::numeric_limits<double>::quiet_NaN();
    return n_c / n_a;
}

TrajectorySample make_sample(double t, double coupling, const MomentState& s) {
    TrajectorySample out;
    out.t = t;
    out.jt = coupling * t;
    out.state = s;
    out.e_a = s.n_a;
    out.e_b = s.n_b;
    out.e_c = s.n_c;
    out.eta_ac = transfer_gain(s.n_a, s.n_c);
    return out;
}

Trajectory integrate(const Params& p, const MomentState& initial, double t_end,
                     const IntegratorControl& ctrl) {
    const auto times = uniform_grid(t_end, ctrl.samples);
    const double coupling = p.reference_coupling();

    Trajectory traj;
    traj.samples.reserve(times.size());

    const auto packed = initial.pack();
    std::vector<double> x(packed.begin(), packed.end());

    auto rhs = [&p](const std::vector<double>& v, std::vector<double>& dv, double) {
        const auto d = moment_rhs(from_vector(v), p).pack();
        dv.assign(d.begin(), d.end());
    };
    auto observe = [&](const std::vector<double>& v, double t) {
        traj.samples.push_back(make_sample(t, coupling, from_vector(v)));
    };

    traj.steps = integrate_on_grid(rhs, x, times, ctrl, observe);
    // first sample is the initial condition itself, bit for bit
    traj.samples.front() = make_sample(0.0, coupling, initial);
    traj.final_residual = moment_rhs(traj.back().state, p).norm();
    return traj;
}

double energy_balance_residual(const Trajectory& traj, const Params& p) {
    const auto& s = traj.samples;
    if (s.size() < 3) throw Error(Errc::TooFewSamples, "energy balance needs at least 3 samples");
    auto total = [&s](std::size_t i) { return s[i].state.n_a + s[i].state.n_b + s[i].state.n_c; };
    // fourth-order stencil when there is room for it
    const std::size_t reach = s.size() >= 5 ? 2 : 1;
    double worst = 0.0;
    for (std::size_t i = reach; i + reach < s.size(); ++i) {
        double dn = 0.0;
        if (reach == 2) {
            const double h = (s[i + 2].t - s[i - 2].t) / 4.0;
            dn = (total(i - 2) - 8.0 * total(i - 1) + 8.0 * total(i + 1) - total(i + 2)) / (12.0 * h);
        } else {
            dn = (total(i + 1) - total(i - 1)) / (s[i + 1].t - s[i - 1].t);
        }
        const auto& m = s[i].state;
        const double balance = dn + p.kappa_a * m.n_a + p.kappa_b * m.n_b + p.kappa_c * m.n_c
                               + 2.0 * p.omega_drive_amp * m.amp_a.imag();
        worst = std::max(worst, std::abs(balance));
    }
    return worst;
}

} // namespace cavlab
