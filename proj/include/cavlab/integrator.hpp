// integrator.hpp - Embedded Runge–Kutta 4(5) integration sampled on an output grid

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cavlab {

struct IntegratorControl {
    double rel_tol{1e-9};
    double abs_tol{1e-12};
    // number of uniform output samples over [0, t_end], both ends included
    std::size_t samples{600};
    // > 0 switches to fixed-step Dormand–Prince with this step
    double fixed_step{0.0};
    double initial_step{1e-4};
    // per output interval
    std::size_t max_steps{1'000'000};
};

using OdeRhs = std::function<void(const std::vector<double>& x, std::vector<double>& dxdt, double t)>;
using OdeObserver = std::function<void(const std::vector<double>& x, double t)>;

// Integrates x' = rhs(x, t) from times.front() and calls observer at every entry
// of times (strictly increasing). Returns the number of internal steps.
// Throws Error{StepSizeUnderflow} when the step controller gives up and
// Error{NonFiniteState} when the state stops being finite.
std::size_t integrate_on_grid(const OdeRhs& rhs, std::vector<double>& x,
                              std::span<const double> times, const IntegratorControl& ctrl,
                              const OdeObserver& observer);

// n >= 2 uniform points over [0, t_end].
std::vector<double> uniform_grid(double t_end, std::size_t n);

} // namespace cavlab
