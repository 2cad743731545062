#include "cavlab/sweep.hpp"

#include "cavlab/csv.hpp"
#include "cavlab/error.hpp"
#include "cavlab/scattering.hpp"
#include "cavlab/steady.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

namespace cavlab {

namespace {

using std::numbers::pi;

constexpr std::size_t kDefaultPoints = 121;

bool is_detuning_axis(std::string_view name) {
    return name == "Delta" || name == "delta_a" || name == "delta_b" || name == "delta_c";
}

bool is_single_coupling_axis(std::string_view name) {
    return name == "j_ab" || name == "j_bc" || name == "j_ac";
}

bool is_nonnegative_parameter(std::string_view name) {
    return name != "theta" && !is_detuning_axis(name);
}

bool is_transmission(Observable o) { return o == Observable::t_forward || o == Observable::t_backward; }

std::string describe_axis(const Axis& a) {
    return a.parameter + ":" + format_double(a.min) + ":" + format_double(a.max) + ":"
           + std::to_string(a.points) + (a.spacing == Spacing::log ? ":log" : ":linear");
}

double parse_number(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw Error(Errc::InvalidSpec, "cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

Axis make_axis(std::string parameter, double min, double max, std::size_t points = kDefaultPoints) {
    return Axis{std::move(parameter), min, max, points, Spacing::linear};
}

Params apply_coords(const Params& base, const SweepSpec& spec, double x1, std::optional<double> x2) {
    Params p = base;
    set_parameter(p, spec.axis1.parameter, x1);
    if (spec.axis2 && x2) set_parameter(p, spec.axis2->parameter, *x2);
    return validate(p);
}

} // namespace

std::string_view observable_name(Observable o) noexcept {
    switch (o) {
    case Observable::eta_ss: return "eta_ss";
    case Observable::e_a_ss: return "e_a_ss";
    case Observable::e_c_ss: return "e_c_ss";
    case Observable::eta_bb1: return "eta_bb1";
    case Observable::eta_bb2: return "eta_bb2";
    case Observable::t_forward: return "t_forward";
    case Observable::t_backward: return "t_backward";
    }
    return "unknown";
}

Observable parse_observable(std::string_view name) {
    for (auto o : {Observable::eta_ss, Observable::e_a_ss, Observable::e_c_ss, Observable::eta_bb1,
                   Observable::eta_bb2, Observable::t_forward, Observable::t_backward}) {
        if (observable_name(o) == name) return o;
    }
    throw Error(Errc::InvalidSpec, "unknown observable '" + std::string(name) + "'");
}

std::string_view sweep_method_name(SweepMethod m) noexcept {
    return m == SweepMethod::analytic ? "analytic" : "numeric";
}

SweepMethod parse_sweep_method(std::string_view name) {
    if (name == "analytic") return SweepMethod::analytic;
    if (name == "numeric") return SweepMethod::numeric;
    throw Error(Errc::InvalidSpec, "unknown method '" + std::string(name) + "'");
}

std::vector<double> Axis::values() const {
    std::vector<double> v(points);
    const double span = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / span;
        v[i] = spacing == Spacing::linear ? min + (max - min) * f
                                          : std::exp(std::log(min) + (std::log(max) - std::log(min)) * f);
    }
    if (points >= 2) {
        v.front() = min;
        v.back() = max;
    }
    return v;
}

Axis parse_axis(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(':', start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    if (parts.size() != 4 && parts.size() != 5) {
        throw Error(Errc::InvalidSpec, "axis must be name:min:max:points[:log|linear], got '" + std::string(text) + "'");
    }
    Axis a;
    a.parameter = std::string(parts[0]);
    a.min = parse_number(parts[1], "axis min");
    a.max = parse_number(parts[2], "axis max");
    const double pts = parse_number(parts[3], "axis points");
    if (!(pts >= 0.0) || pts != std::floor(pts)) throw Error(Errc::InvalidSpec, "axis points must be a whole number");
    a.points = static_cast<std::size_t>(pts);
    if (parts.size() == 5) {
        if (parts[4] == "log") a.spacing = Spacing::log;
        else if (parts[4] == "linear") a.spacing = Spacing::linear;
        else throw Error(Errc::InvalidSpec, "axis spacing must be 'log' or 'linear'");
    }
    return a;
}

SweepMethod SweepSpec::effective_method() const {
    if (is_detuning_axis(axis1.parameter) || (axis2 && is_detuning_axis(axis2->parameter))) {
        return SweepMethod::numeric;
    }
    return method;
}

void validate_spec(const SweepSpec& spec) {
    validate(spec.base);
    std::vector<const Axis*> axes{&spec.axis1};
    if (spec.axis2) axes.push_back(&*spec.axis2);
    for (const Axis* a : axes) {
        if (!is_parameter_name(a->parameter)) throw Error(Errc::InvalidSpec, "unknown axis parameter '" + a->parameter + "'");
        if (a->points < 2) throw Error(Errc::InvalidSpec, "axis '" + a->parameter + "' needs at least 2 points");
        if (!std::isfinite(a->min) || !std::isfinite(a->max) || !(a->max > a->min)) {
            throw Error(Errc::InvalidSpec, "axis '" + a->parameter + "' needs finite min < max");
        }
        if (a->spacing == Spacing::log && !(a->min > 0.0)) {
            throw Error(Errc::InvalidSpec, "log axis '" + a->parameter + "' needs min > 0");
        }
        if (is_nonnegative_parameter(a->parameter) && a->min < 0.0) {
            throw Error(Errc::InvalidSpec, "axis '" + a->parameter + "' must be non-negative");
        }
    }
    if (spec.axis2 && spec.axis2->parameter == spec.axis1.parameter) {
        throw Error(Errc::InvalidSpec, "both axes sweep '" + spec.axis1.parameter + "'");
    }
    if (spec.effective_method() == SweepMethod::analytic) {
        for (const Axis* a : axes) {
            if (is_single_coupling_axis(a->parameter)) {
                throw Error(Errc::InvalidSpec, "analytic sweeps need locked couplings; sweep 'J' or use method numeric");
            }
        }
        const bool in_domain = is_transmission(spec.observable)
                                   ? spec.base.equal_couplings() && spec.base.equal_detunings()
                                   : spec.base.analytic_domain();
        if (!in_domain) throw Error(Errc::InvalidSpec, "base parameters are outside the closed-form domain");
    }
}

bool Cell::operator==(const Cell& o) const {
    if (error != o.error) return false;
    if (!ok()) return true;
    return value == o.value || (std::isnan(value) && std::isnan(o.value));
}

std::optional<std::string> SweepTable::meta(std::string_view key) const {
    for (const auto& [k, v] : metadata) {
        if (k == key) return v;
    }
    return std::nullopt;
}

double evaluate_observable(const Params& p, Observable o, SweepMethod method, double probe_detuning) {
    const bool analytic = method == SweepMethod::analytic;
    switch (o) {
    case Observable::eta_ss:
        return analytic ? eta_ss_analytic(p) : steady_numeric(p).eta_ac;
    case Observable::e_a_ss:
        return analytic ? steady_analytic(p).n_a : steady_numeric(p).n_a;
    case Observable::e_c_ss:
        return analytic ? steady_analytic(p).n_c : steady_numeric(p).n_c;
    case Observable::eta_bb1:
        return analytic ? baselines(p).eta_bb1 : baselines_numeric(p).eta_bb1;
    case Observable::eta_bb2:
        return analytic ? baselines(p).eta_bb2 : baselines_numeric(p).eta_bb2;
    case Observable::t_forward:
        return analytic ? transmissions_analytic(p, probe_detuning).forward
                        : scattering_matrix(p, probe_detuning).t_forward;
    case Observable::t_backward:
        return analytic ? transmissions_analytic(p, probe_detuning).backward
                        : scattering_matrix(p, probe_detuning).t_backward;
    }
    throw Error(Errc::InvalidSpec, "unknown observable");
}

SweepTable run(const SweepSpec& spec, unsigned threads) {
    validate_spec(spec);
    const SweepMethod method = spec.effective_method();
    const auto xs = spec.axis1.values();
    const std::vector<double> ys = spec.axis2 ? spec.axis2->values() : std::vector<double>{};
    const std::size_t ny = spec.axis2 ? ys.size() : 1;

    SweepTable table;
    if (!spec.name.empty()) table.metadata.emplace_back("name", spec.name);
    table.metadata.emplace_back("base", params_to_json_text(spec.base));
    table.metadata.emplace_back("method", std::string(sweep_method_name(method)));
    table.metadata.emplace_back("observable", std::string(observable_name(spec.observable)));
    table.metadata.emplace_back("axis1", describe_axis(spec.axis1));
    if (spec.axis2) table.metadata.emplace_back("axis2", describe_axis(*spec.axis2));
    if (is_transmission(spec.observable)) table.metadata.emplace_back("probe_detuning", format_double(spec.probe_detuning));
    table.metadata.emplace_back("code_version", std::string("cavlab ") + CAVLAB_VERSION);

    table.columns.push_back(spec.axis1.parameter);
    if (spec.axis2) table.columns.push_back(spec.axis2->parameter);
    table.columns.emplace_back(observable_name(spec.observable));
    table.shape.push_back(xs.size());
    if (spec.axis2) table.shape.push_back(ys.size());

    const std::size_t total = xs.size() * ny;
    table.rows.resize(total);

    auto evaluate_cell = [&](std::size_t idx) {
        const std::size_t i = idx / ny;
        const std::size_t j = idx % ny;
        SweepRow& row = table.rows[idx];
        row.coords.push_back(xs[i]);
        std::optional<double> y;
        if (spec.axis2) {
            y = ys[j];
            row.coords.push_back(ys[j]);
        }
        try {
            const Params p = apply_coords(spec.base, spec, xs[i], y);
            const double v = evaluate_observable(p, spec.observable, method, spec.probe_detuning);
            if (std::isfinite(v)) {
                row.value.value = v;
            } else {
                row.value.error = "NonFiniteValue";
            }
        } catch (const Error& e) {
            row.value.error = std::string(errc_name(e.code()));
        }
    };

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
    if (workers <= 1) {
        for (std::size_t idx = 0; idx < total; ++idx) evaluate_cell(idx);
        return table;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t idx = next++; idx < total; idx = next++) evaluate_cell(idx);
        });
    }
    for (auto& t : pool) t.join();
    return table;
}

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig4a", "fig4b", "fig4c", "fig4d", "fig5", "fig6a",
                                              "fig6b", "fig6c", "fig6d", "fig7"};
    return ids;
}

std::vector<SweepSpec> figure_preset(std::string_view figure_id) {
    const Axis coupling = make_axis("J", 0.1, 8.0);
    const Axis aux_loss = make_axis("kappa_b", 0.0, 60.0);
    const Axis phase = make_axis("theta", -pi, pi);
    const Axis detuning = make_axis("Delta", -10.0, 10.0);
    const Axis local_loss = make_axis("kappa_ac", 0.1, 4.0);

    auto spec = [&](Params base, Axis a1, Axis a2, Observable o) {
        SweepSpec s;
        s.name = std::string(figure_id);
        s.base = base;
        s.axis1 = std::move(a1);
        s.axis2 = std::move(a2);
        s.observable = o;
        return s;
    };

    // the fig6 panels share Omega = 1
    Params fig6 = preset("fig6");
    if (figure_id == "fig4a") return {spec(preset("fig4a"), coupling, aux_loss, Observable::eta_ss)};
    if (figure_id == "fig4b") return {spec(preset("fig4b"), coupling, phase, Observable::eta_ss)};
    if (figure_id == "fig4c") return {spec(preset("fig4c"), aux_loss, phase, Observable::eta_ss)};
    if (figure_id == "fig4d") return {spec(preset("fig4d"), aux_loss, detuning, Observable::eta_ss)};
    if (figure_id == "fig5") {
        std::vector<SweepSpec> out;
        const std::pair<double, const char*> phases[] = {{-pi / 2, "-pi/2"}, {0.0, "0"}, {pi / 2, "pi/2"}};
        for (const auto& [theta, label] : phases) {
            SweepSpec s;
            s.name = std::string("fig5[theta=") + label + "]";
            s.base = preset("fig5");
            s.base.theta = theta;
            s.base = validate(s.base);
            s.axis1 = make_axis("kappa_b", 0.0, 20.0, 200);
            s.observable = Observable::eta_ss;
            out.push_back(std::move(s));
        }
        return out;
    }
    if (figure_id == "fig6a") return {spec(fig6, coupling, local_loss, Observable::eta_bb1)};
    if (figure_id == "fig6b") {
        Params p = fig6;
        p.set_coupling(2.0);
        p.theta = pi;
        return {spec(validate(p), aux_loss, local_loss, Observable::eta_bb1)};
    }
    if (figure_id == "fig6c") {
        Params p = fig6;
        p.set_coupling(2.0);
        p.kappa_a = p.kappa_c = 0.5;
        return {spec(validate(p), phase, aux_loss, Observable::eta_bb1)};
    }
    if (figure_id == "fig6d") {
        Params p = fig6;
        p.kappa_b = 10.0;
        p.kappa_a = p.kappa_c = 0.5;
        return {spec(validate(p), coupling, phase, Observable::eta_bb1)};
    }
    if (figure_id == "fig7") return {spec(preset("fig7"), coupling, local_loss, Observable::eta_bb2)};
    throw Error(Errc::UnknownPreset, "no figure preset named '" + std::string(figure_id) + "'");
}

unsigned threads_from_env() {
    const char* raw = std::getenv("CAVLAB_THREADS");
    if (raw == nullptr) return 0;
    unsigned v = 0;
    const std::string_view text(raw);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return 0;
    return v;
}

} // namespace cavlab
