// sweep.hpp - Parameter grids over steady-state and transmission observables

#pragma once

#include "cavlab/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cavlab {

enum class Observable { eta_ss, e_a_ss, e_c_ss, eta_bb1, eta_bb2, t_forward, t_backward };
enum class SweepMethod { analytic, numeric };
enum class Spacing { linear, log };

std::string_view observable_name(Observable o) noexcept;
Observable parse_observable(std::string_view name);
std::string_view sweep_method_name(SweepMethod m) noexcept;
SweepMethod parse_sweep_method(std::string_view name);

struct Axis {
    // a Params field name, "J", "kappa_ac" or "Delta"
    std::string parameter;
    double min{0.0};
    double max{1.0};
    std::size_t points{2};
    Spacing spacing{Spacing::linear};

    std::vector<double> values() const;
};

// "name:min:max:points" with an optional ":log" suffix.
Axis parse_axis(std::string_view text);

struct SweepSpec {
    std::string name;
    Params base;
    Axis axis1;
    std::optional<Axis> axis2;
    Observable observable{Observable::eta_ss};
    SweepMethod method{SweepMethod::analytic};
    // probe frequency for the transmission observables
    double probe_detuning{0.0};

    // Analytic unless a detuning axis forces the numeric path.
    SweepMethod effective_method() const;
};

// Throws InvalidSpec for unknown axis names, fewer than 2 points, bad ranges,
// or an analytic sweep whose grid leaves the closed-form domain.
void validate_spec(const SweepSpec& spec);

// A failed evaluation keeps its grid cell and carries the error name instead of a value.
struct Cell {
    double value{0.0};
    std::string error;

    bool ok() const noexcept { return error.empty(); }
    bool operator==(const Cell& o) const;
};

struct SweepRow {
    std::vector<double> coords;
    Cell value;

    bool operator==(const SweepRow&) const = default;
};

struct SweepTable {
    // "# key: value" lines of the CSV, in order
    std::vector<std::pair<std::string, std::string>> metadata;
    // axis columns first, observable last
    std::vector<std::string> columns;
    std::vector<SweepRow> rows;
    // points per axis, axis1 first
    std::vector<std::size_t> shape;

    bool operator==(const SweepTable&) const = default;

    std::optional<std::string> meta(std::string_view key) const;
};

// Evaluates one grid point.
double evaluate_observable(const Params& p, Observable o, SweepMethod method, double probe_detuning);

// Fills every cell, axis1-major. threads = 0 picks the hardware concurrency.
// Per-cell numerical failures become error markers; invalid definitions throw.
SweepTable run(const SweepSpec& spec, unsigned threads = 0);

// Fixed preset parameters with chosen axis ranges. fig5 yields three
// curves (theta = -pi/2, 0, pi/2); every other id yields one spec.
std::vector<SweepSpec> figure_preset(std::string_view figure_id);
const std::vector<std::string>& figure_ids();

// CAVLAB_THREADS, 0 (auto) when unset or unparsable.
unsigned threads_from_env();

} // namespace cavlab
