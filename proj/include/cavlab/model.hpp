// model.hpp - Physical parameter set of the three-cavity charger/auxiliary/battery system
//
// Units: hbar = omega = kappa = 1. Every rate, coupling, detuning and drive
// amplitude is a dimensionless multiple of the reference decay constant kappa,
// and every "energy" is an occupation number <j^dagger j>.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cavlab {

struct Params {
    // rotating-frame detunings Delta_j = omega_j - omega_drive
    double delta_a{0.0};
    double delta_b{0.0};
    double delta_c{0.0};
    // coherent couplings; the direct charger-battery term is j_ac * e^{i theta}
    double j_ab{0.0};
    double j_bc{0.0};
    double j_ac{0.0};
    double theta{0.0};
    // local decay rates
    double kappa_a{0.0};
    double kappa_b{0.0};
    double kappa_c{0.0};
    // drive amplitude on the charger
    double omega_drive_amp{0.0};

    bool operator==(const Params&) const = default;

    // Sets j_ab = j_bc = j_ac = value.
    Params& set_coupling(double value);
    // Sets delta_a = delta_b = delta_c = value.
    Params& set_detuning(double value);

    bool equal_couplings() const noexcept { return j_ab == j_bc && j_bc == j_ac; }
    bool resonant() const noexcept { return delta_a == 0.0 && delta_b == 0.0 && delta_c == 0.0; }
    bool equal_detunings() const noexcept { return delta_a == delta_b && delta_b == delta_c; }
    // Closed-form steady states exist only here.
    bool analytic_domain() const noexcept { return resonant() && equal_couplings(); }

    // Mean of the three couplings; equals J whenever the couplings are locked.
    // Used for the scaled time axis J*t.
    double reference_coupling() const noexcept { return (j_ab + j_bc + j_ac) / 3.0; }
};

// Maps any finite phase into (-pi, pi].
double normalize_phase(double theta) noexcept;

// Throws Error{NonFinite} or Error{NegativeRate}; returns params with theta normalized.
Params validate(Params p);

// Fixed parameters of a named preset. Parameters a preset leaves free keep the
// fig3 values (Delta = 0, J = sqrt 2, kappa_b = 10, theta = -pi/2, Omega = 0.5).
Params preset(std::string_view name);
const std::vector<std::string>& preset_names();

// JSON object with keys exactly equal to the Params field names plus an optional
// "J" shorthand for locked couplings. Unknown keys, non-numeric values and
// combining "J" with an explicit j_* key are InvalidConfig errors. Missing keys
// default to zero. The result is validated.
Params params_from_json_text(std::string_view text);
std::string params_to_json_text(const Params& p);
Params load_params_file(const std::filesystem::path& path);

// Applies a named override: a Params field name, "J" (all couplings),
// "kappa_ac" (kappa_a = kappa_c) or "Delta" (all detunings). Throws InvalidSpec
// for unknown names.
void set_parameter(Params& p, std::string_view name, double value);
bool is_parameter_name(std::string_view name) noexcept;

} // namespace cavlab
