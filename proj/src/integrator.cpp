#include "cavlab/integrator.hpp"

#include "cavlab/error.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>

namespace cavlab {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

void check_control(const IntegratorControl& ctrl) {
    if (!(ctrl.rel_tol > 0.0) || !(ctrl.abs_tol > 0.0)) {
        throw Error(Errc::InvalidSpec, "integrator tolerances must be > 0");
    }
    if (!(ctrl.initial_step > 0.0) || ctrl.fixed_step < 0.0 || ctrl.max_steps == 0) {
        throw Error(Errc::InvalidSpec, "invalid integrator step settings");
    }
}

} // namespace

std::vector<double> uniform_grid(double t_end, std::size_t n) {
    if (n < 2) throw Error(Errc::InvalidSpec, "output grid needs at least 2 samples");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw Error(Errc::InvalidSpec, "t_end must be finite and > 0");
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = t_end * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    t.back() = t_end;
    return t;
}

std::size_t integrate_on_grid(const OdeRhs& rhs, std::vector<double>& x,
                              std::span<const double> times, const IntegratorControl& ctrl,
                              const OdeObserver& observer) {
    check_control(ctrl);
    if (times.empty()) return 0;

    auto system = [&rhs](const State& s, State& ds, double t) { rhs(s, ds, t); };
    auto observe = [&observer](const State& s, double t) {
        if (!std::all_of(s.begin(), s.end(), [](double v) { return std::isfinite(v); })) {
            throw Error(Errc::NonFiniteState, "state became non-finite at t = " + std::to_string(t));
        }
        observer(s, t);
    };

    try {
        if (ctrl.fixed_step > 0.0) {
            odeint::runge_kutta_dopri5<State> stepper;
            return odeint::integrate_times(stepper, system, x, times.begin(), times.end(),
                                           ctrl.fixed_step, observe);
        }
        auto stepper = odeint::make_dense_output(ctrl.abs_tol, ctrl.rel_tol,
                                                 odeint::runge_kutta_dopri5<State>());
        const double dt0 = std::min(ctrl.initial_step,
                                    times.size() > 1 ? times[1] - times[0] : ctrl.initial_step);
        return odeint::integrate_times(stepper, system, x, times.begin(), times.end(), dt0,
                                       observe, odeint::max_step_checker(static_cast<int>(ctrl.max_steps)));
    } catch (const odeint::odeint_error& e) {
        throw Error(Errc::StepSizeUnderflow, e.what());
    }
}

} // namespace cavlab
