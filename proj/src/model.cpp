#include "cavlab/model.hpp"

#include "cavlab/error.hpp"

#include "json.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cavlab {

namespace {

using std::numbers::pi;

struct Field {
    std::string_view name;
    double Params::*member;
};

constexpr std::array<Field, 11> kFields{{
    {"delta_a", &Params::delta_a},
    {"delta_b", &Params::delta_b},
    {"delta_c", &Params::delta_c},
    {"j_ab", &Params::j_ab},
    {"j_bc", &Params::j_bc},
    {"j_ac", &Params::j_ac},
    {"theta", &Params::theta},
    {"kappa_a", &Params::kappa_a},
    {"kappa_b", &Params::kappa_b},
    {"kappa_c", &Params::kappa_c},
    {"omega_drive_amp", &Params::omega_drive_amp},
}};

const Field* find_field(std::string_view name) noexcept {
    for (const auto& f : kFields) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

Params fig3_background() {
    Params p;
    p.set_coupling(std::sqrt(2.0));
    p.kappa_a = 1.0;
    p.kappa_b = 10.0;
    p.kappa_c = 1.0;
    p.theta = -pi / 2;
    p.omega_drive_amp = 0.5;
    return p;
}

} // namespace

Params& Params::set_coupling(double value) {
    j_ab = j_bc = j_ac = value;
    return *this;
}

Params& Params::set_detuning(double value) {
    delta_a = delta_b = delta_c = value;
    return *this;
}

double normalize_phase(double theta) noexcept {
    double r = std::remainder(theta, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

Params validate(Params p) {
    for (const auto& f : kFields) {
        if (!std::isfinite(p.*(f.member))) {
            throw Error(Errc::NonFinite, std::string(f.name) + " is not finite");
        }
    }
    const std::array<std::string_view, 7> nonneg{"j_ab", "j_bc", "j_ac", "kappa_a",
                                                 "kappa_b", "kappa_c", "omega_drive_amp"};
    for (auto name : nonneg) {
        if (p.*(find_field(name)->member) < 0.0) {
            throw Error(Errc::NegativeRate, std::string(name) + " must be >= 0");
        }
    }
    p.theta = normalize_phase(p.theta);
    return p;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig3", "fig4a", "fig4b", "fig4c",
                                                "fig4d", "fig5",  "fig6",  "fig7"};
    return names;
}

Params preset(std::string_view name) {
    Params p = fig3_background();
    if (name == "fig3") {
        // as is
    } else if (name == "fig4a" || name == "fig4b" || name == "fig4c" || name == "fig4d") {
        p.omega_drive_amp = 0.1;
        p.kappa_a = p.kappa_c = 1.0;
        if (name == "fig4a") {
            p.theta = -pi / 4;
        } else if (name == "fig4b") {
            p.kappa_b = 40.0;
        } else if (name == "fig4c") {
            p.set_coupling(4.0);
        } else {
            p.set_coupling(4.0);
            p.theta = -pi / 2;
        }
    } else if (name == "fig5") {
        p.set_coupling(1.0);
        p.kappa_a = p.kappa_c = 1.0;
    } else if (name == "fig6") {
        // panel (a); the other panels are sweep presets
        p.omega_drive_amp = 1.0;
        p.theta = pi;
        p.kappa_b = 10.0;
    } else if (name == "fig7") {
        p.kappa_b = 10.0;
        p.theta = -pi / 2;
        p.omega_drive_amp = 1.0;
    } else {
        throw Error(Errc::UnknownPreset, "no preset named '" + std::string(name) + "'");
    }
    return validate(p);
}

bool is_parameter_name(std::string_view name) noexcept {
    return find_field(name) != nullptr || name == "J" || name == "kappa_ac" || name == "Delta";
}

void set_parameter(Params& p, std::string_view name, double value) {
    if (name == "J") {
        p.set_coupling(value);
    } else if (name == "kappa_ac") {
        p.kappa_a = p.kappa_c = value;
    } else if (name == "Delta") {
        p.set_detuning(value);
    } else if (const Field* f = find_field(name)) {
        p.*(f->member) = value;
    } else {
        throw Error(Errc::InvalidSpec, "unknown parameter '" + std::string(name) + "'");
    }
}

Params params_from_json_text(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::InvalidConfig, e.what());
    }
    if (!doc.is_object()) throw Error(Errc::InvalidConfig, "config must be a JSON object");

    Params p;
    bool has_j_shorthand = false;
    bool has_explicit_coupling = false;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_number()) {
            throw Error(Errc::InvalidConfig, "value of '" + key + "' is not a number");
        }
        const double v = value.get<double>();
        if (key == "J") {
            has_j_shorthand = true;
            p.set_coupling(v);
            continue;
        }
        const Field* f = find_field(key);
        if (f == nullptr) throw Error(Errc::InvalidConfig, "unknown key '" + key + "'");
        if (key.rfind("j_", 0) == 0) has_explicit_coupling = true;
        p.*(f->member) = v;
    }
    if (has_j_shorthand && has_explicit_coupling) {
        throw Error(Errc::InvalidConfig, "\"J\" cannot be combined with j_ab/j_bc/j_ac");
    }
    return validate(p);
}

std::string params_to_json_text(const Params& p) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& f : kFields) doc[std::string(f.name)] = p.*(f.member);
    return doc.dump();
}

Params load_params_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return params_from_json_text(buf.str());
}

} // namespace cavlab
