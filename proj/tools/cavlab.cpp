// cavlab - command-line front end
//
// Parameter precedence: --preset or --config first, then the group shorthands
// (--J, --detuning, --kappa-ac), then the single-field flags. Later wins.

#include "cavlab/csv.hpp"
#include "cavlab/dynamics.hpp"
#include "cavlab/error.hpp"
#include "cavlab/fock_oracle.hpp"
#include "cavlab/model.hpp"
#include "cavlab/scattering.hpp"
#include "cavlab/steady.hpp"
#include "cavlab/svg.hpp"
#include "cavlab/sweep.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace cavlab;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

struct ParamOptions {
    std::string preset_name;
    std::string config_path;
    std::optional<double> coupling, j_ab, j_bc, j_ac;
    std::optional<double> detuning, delta_a, delta_b, delta_c;
    std::optional<double> theta, kappa_ac, kappa_a, kappa_b, kappa_c, omega;
    CLI::Option* preset_opt{nullptr};
    CLI::Option* config_opt{nullptr};

    void attach(CLI::App* app) {
        preset_opt = app->add_option("--preset", preset_name, "named parameter preset (fig3, fig4a..fig4d, fig5, fig6, fig7)");
        config_opt = app->add_option("--config", config_path, "JSON parameter file");
        preset_opt->excludes(config_opt);
        app->add_option("--J", coupling, "set all three couplings");
        app->add_option("--j-ab", j_ab, "charger-auxiliary coupling");
        app->add_option("--j-bc", j_bc, "auxiliary-battery coupling");
        app->add_option("--j-ac", j_ac, "charger-battery coupling");
        app->add_option("--detuning", detuning, "set all three detunings");
        app->add_option("--delta-a", delta_a, "charger detuning");
        app->add_option("--delta-b", delta_b, "auxiliary detuning");
        app->add_option("--delta-c", delta_c, "battery detuning");
        app->add_option("--theta", theta, "loop phase");
        app->add_option("--kappa-ac", kappa_ac, "set kappa_a = kappa_c");
        app->add_option("--kappa-a", kappa_a, "charger decay rate");
        app->add_option("--kappa-b", kappa_b, "auxiliary decay rate");
        app->add_option("--kappa-c", kappa_c, "battery decay rate");
        app->add_option("--omega", omega, "drive amplitude");
    }

    bool has_source() const { return preset_opt->count() > 0 || config_opt->count() > 0; }

    Params apply_overrides(Params p) const {
        auto set = [&p](const std::optional<double>& v, std::string_view name) {
            if (v) set_parameter(p, name, *v);
        };
        set(coupling, "J");
        set(detuning, "Delta");
        set(kappa_ac, "kappa_ac");
        set(j_ab, "j_ab");
        set(j_bc, "j_bc");
        set(j_ac, "j_ac");
        set(delta_a, "delta_a");
        set(delta_b, "delta_b");
        set(delta_c, "delta_c");
        set(theta, "theta");
        set(kappa_a, "kappa_a");
        set(kappa_b, "kappa_b");
        set(kappa_c, "kappa_c");
        set(omega, "omega_drive_amp");
        return validate(p);
    }

    Params resolve() const {
        if (!has_source()) throw Error(Errc::InvalidConfig, "one of --preset or --config is required");
        const Params base = preset_opt->count() ? preset(preset_name) : load_params_file(config_path);
        return apply_overrides(base);
    }
};

std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fixed(double v, int digits = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

void write_or_print(const std::string& path, const std::string& contents) {
    if (path.empty() || path == "-") std::cout << contents;
    else write_file(path, contents);
}

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream ss;
    write_trajectory_csv(ss, traj);
    return ss.str();
}

std::string sweep_csv(const SweepTable& t) {
    std::ostringstream ss;
    write_sweep_csv(ss, t);
    return ss.str();
}

// fig5[theta=-pi/2] -> fig5_theta_neg_pi_2
std::string file_stem(const std::string& name) {
    std::string out;
    for (char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c))) out += c;
        else if (c == '-') out += "neg_";
        else if (!out.empty() && out.back() != '_') out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out;
}

double resolve_t_end(const Params& p, std::optional<double> t_end, std::optional<double> t_end_j, double default_jt) {
    if (t_end) return *t_end;
    const double jt = t_end_j.value_or(default_jt);
    const double j = p.reference_coupling();
    if (!(j > 0.0)) throw Error(Errc::InvalidSpec, "J t end time needs a nonzero coupling; use --t-end");
    return jt / j;
}

SweepTable run_stamped(const SweepSpec& spec, unsigned threads, bool stamp) {
    SweepTable t = run(spec, threads);
    if (stamp) t.metadata.emplace_back("timestamp", timestamp_utc());
    return t;
}

// ---- subcommands ----

struct SimulateOptions {
    ParamOptions params;
    std::optional<double> t_end, t_end_j;
    IntegratorControl ctrl;
    std::string csv, svg;
};

int cmd_simulate(const SimulateOptions& o) {
    const Params p = o.params.resolve();
    const double t_end = resolve_t_end(p, o.t_end, o.t_end_j, 30.0);
    const Trajectory traj = integrate(p, MomentState::vacuum(), t_end, o.ctrl);
    if (!o.csv.empty()) write_or_print(o.csv, trajectory_csv(traj));
    if (!o.svg.empty()) write_file(o.svg, render_line_plot(trajectory_plot(traj, "charging dynamics")));
    const auto& f = traj.back();
    std::cout << "t_end=" << format_double(f.t) << " Jt=" << format_double(f.jt) << '\n'
              << "n_a=" << fixed(f.e_a) << " n_b=" << fixed(f.e_b) << " n_c=" << fixed(f.e_c)
              << " eta=" << fixed(f.eta_ac, 4) << '\n'
              << "steps=" << traj.steps << " final_residual=" << sci(traj.final_residual) << '\n';
    return 0;
}

int cmd_steady(const ParamOptions& po) {
    const Params p = po.resolve();
    std::vector<SteadyResult> results;
    if (p.analytic_domain()) results.push_back(steady_analytic(p));
    results.push_back(steady_numeric(p, SteadyMethod::first_moment_solve));
    results.push_back(steady_numeric(p, SteadyMethod::full_linear_solve));

    std::cout << "method               n_a          n_b          n_c          eta\n";
    for (const auto& r : results) {
        char line[160];
        std::snprintf(line, sizeof line, "%-20s %-12s %-12s %-12s %s\n", std::string(method_name(r.method)).c_str(),
                      fixed(r.n_a).c_str(), fixed(r.n_b).c_str(), fixed(r.n_c).c_str(), fixed(r.eta_ac, 4).c_str());
        std::cout << line;
    }
    if (!p.analytic_domain()) std::cout << "analytic             n/a (needs zero detunings and equal couplings)\n";

    double worst = 0.0;
    for (const auto& r : results) {
        for (const auto& q : results) {
            worst = std::max({worst, std::abs(r.n_a - q.n_a) / std::max(std::abs(q.n_a), 1e-300),
                              std::abs(r.n_c - q.n_c) / std::max(std::abs(q.n_c), 1e-300)});
        }
    }
    const auto& first = results.front();
    std::cout << "n_a=" << fixed(first.n_a) << ", n_c=" << fixed(first.n_c) << ", eta=" << fixed(first.eta_ac, 4)
              << ", methods " << (worst <= 1e-10 ? "agreeing" : "DISAGREEING") << " (max rel. deviation "
              << sci(worst) << ")\n";

    if (p.omega_drive_amp > 0.0) {
        const BaselineResult b = baselines(p);
        std::cout << "E_c nonreciprocal=" << fixed(b.e_c_nonreciprocal) << " reciprocal(kappa_b=0)="
                  << fixed(b.e_c_reciprocal_kb0) << " bipartite=" << fixed(b.e_c_bipartite) << '\n'
                  << "eta_bb1=" << fixed(b.eta_bb1, 4) << " eta_bb2=" << fixed(b.eta_bb2, 4) << '\n';
    }
    return 0;
}

struct ScatterOptions {
    ParamOptions params;
    std::optional<double> delta;
    double delta_min{-10.0}, delta_max{10.0};
    std::size_t points{401};
    std::string csv, svg;
};

int cmd_scatter(const ScatterOptions& o) {
    const Params p = o.params.resolve();
    std::vector<double> probes;
    if (o.delta) {
        probes.push_back(*o.delta);
    } else {
        if (o.points < 2 || !(o.delta_max > o.delta_min)) throw Error(Errc::InvalidSpec, "need --points >= 2 and --delta-max > --delta-min");
        Axis axis{"Delta", o.delta_min, o.delta_max, o.points, Spacing::linear};
        probes = axis.values();
    }
    const auto spectrum = transmission_spectrum(p, probes);
    std::ostringstream ss;
    write_spectrum_csv(ss, spectrum);
    if (!o.csv.empty()) write_file(o.csv, ss.str());
    if (!o.svg.empty()) {
        LinePlot plot{"transmission", "probe detuning", "transmission", {{"T a->c", {}, {}}, {"T c->a", {}, {}}}};
        for (const auto& r : spectrum) {
            plot.series[0].x.push_back(r.probe_detuning);
            plot.series[0].y.push_back(r.t_forward);
            plot.series[1].x.push_back(r.probe_detuning);
            plot.series[1].y.push_back(r.t_backward);
        }
        write_file(o.svg, render_line_plot(plot));
    }
    if (o.delta) {
        const auto& r = spectrum.front();
        std::cout << "delta=" << format_double(r.probe_detuning) << " t_forward=" << format_double(r.t_forward)
                  << " t_backward=" << format_double(r.t_backward) << '\n';
        if (p.equal_couplings() && p.equal_detunings()) {
            const Transmissions t = transmissions_analytic(p, *o.delta);
            std::cout << "closed form: t_forward=" << format_double(t.forward) << " t_backward=" << format_double(t.backward)
                      << '\n';
        }
    } else if (o.csv.empty()) {
        std::cout << ss.str();
    }
    return 0;
}

struct OracleOptions {
    ParamOptions params;
    FockConfig cfg;
    std::optional<double> t_end, t_end_j;
    double tolerance{1e-3};
    std::string csv;
};

int cmd_oracle(OracleOptions o) {
    const Params p = o.params.resolve();
    o.cfg.t_end = resolve_t_end(p, o.t_end, o.t_end_j, 10.0);
    const auto start = std::chrono::steady_clock::now();
    const OracleRun oracle = evolve(p, o.cfg, DensityState::vacuum(o.cfg.truncation));
    IntegratorControl ctrl;
    ctrl.samples = o.cfg.output_samples;
    const Trajectory moments = integrate(p, MomentState::vacuum(), o.cfg.t_end, ctrl);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    static const char* names[] = {"re_a", "im_a", "re_b", "im_b", "re_c", "im_c", "n_a", "n_b",
                                  "n_c", "re_coh_ab", "im_coh_ab", "re_coh_ac", "im_coh_ac", "re_coh_cb", "im_coh_cb"};
    std::array<double, MomentState::kPackedSize> dev{};
    for (std::size_t k = 0; k < moments.samples.size(); ++k) {
        const auto x = oracle.trajectory.samples[k].state.pack();
        const auto y = moments.samples[k].state.pack();
        for (std::size_t i = 0; i < dev.size(); ++i) dev[i] = std::max(dev[i], std::abs(x[i] - y[i]));
    }
    if (!o.csv.empty()) write_file(o.csv, trajectory_csv(oracle.trajectory));

    std::cout << "truncation=" << o.cfg.truncation << " dimension=" << o.cfg.dimension() << " t_end="
              << format_double(o.cfg.t_end) << " runtime_s=" << fixed(seconds, 2) << '\n';
    const double worst = *std::max_element(dev.begin(), dev.end());
    for (std::size_t i = 0; i < dev.size(); ++i) std::cout << "max |delta " << names[i] << "| = " << sci(dev[i]) << '\n';
    std::cout << "max trace error = " << sci(oracle.max_trace_error) << '\n'
              << "max hermiticity error = " << sci(oracle.max_hermiticity_error) << '\n'
              << "min eigenvalue = " << sci(oracle.min_eigenvalue) << '\n'
              << "max top-level population = " << sci(oracle.max_top_level_population) << '\n'
              << "agreement within " << sci(o.tolerance) << ": " << (worst <= o.tolerance ? "yes" : "no") << '\n';
    return 0;
}

struct SweepOptions {
    ParamOptions params;
    std::string figure, axis1, axis2, observable{"eta_ss"}, method{"analytic"};
    double probe{0.0};
    std::string csv, svg;
    bool no_timestamp{false};
    std::optional<unsigned> threads;
};

int cmd_sweep(const SweepOptions& o) {
    const unsigned threads = o.threads.value_or(threads_from_env());
    std::vector<SweepSpec> specs;
    if (!o.figure.empty()) {
        if (o.params.has_source()) throw Error(Errc::InvalidSpec, "--figure carries its own parameters; drop --preset/--config");
        if (!o.axis1.empty() || !o.axis2.empty()) throw Error(Errc::InvalidSpec, "--figure fixes the axes");
        specs = figure_preset(o.figure);
        for (auto& s : specs) s.base = o.params.apply_overrides(s.base);
    } else {
        if (o.axis1.empty()) throw Error(Errc::InvalidSpec, "--axis1 or --figure is required");
        SweepSpec s;
        s.base = o.params.resolve();
        s.axis1 = parse_axis(o.axis1);
        if (!o.axis2.empty()) s.axis2 = parse_axis(o.axis2);
        s.observable = parse_observable(o.observable);
        s.method = parse_sweep_method(o.method);
        s.probe_detuning = o.probe;
        specs.push_back(std::move(s));
    }

    std::vector<SweepTable> tables;
    for (const auto& s : specs) tables.push_back(run_stamped(s, threads, !o.no_timestamp));

    for (std::size_t k = 0; k < tables.size(); ++k) {
        std::string path = o.csv;
        if (!path.empty() && path != "-" && tables.size() > 1) {
            const fs::path base(path);
            path = (base.parent_path() / (base.stem().string() + "_" + file_stem(specs[k].name) + base.extension().string())).string();
        }
        write_or_print(path, sweep_csv(tables[k]));
    }
    if (!o.svg.empty()) {
        if (tables.size() == 1) {
            write_file(o.svg, render_table(tables.front()));
        } else {
            std::vector<std::string> labels;
            for (const auto& s : specs) labels.push_back(s.name);
            write_file(o.svg, render_line_plot(tables_plot(tables, labels, o.figure)));
        }
    }
    if (!o.csv.empty() && o.csv != "-") {
        for (const auto& t : tables) {
            std::size_t failed = 0;
            for (const auto& r : t.rows) failed += r.value.ok() ? 0 : 1;
            std::cerr << t.meta("name").value_or("sweep") << ": " << t.rows.size() << " cells, " << failed << " failed\n";
        }
    }
    return 0;
}

struct FiguresOptions {
    std::string out;
    bool no_timestamp{false};
    std::optional<unsigned> threads;
};

int cmd_figures(const FiguresOptions& o) {
    const fs::path dir(o.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(Errc::Io, "cannot create output directory '" + o.out + "'");
    const unsigned threads = o.threads.value_or(threads_from_env());

    const Params fig3 = preset("fig3");
    const Trajectory traj = integrate(fig3, MomentState::vacuum(), 30.0 / fig3.reference_coupling());
    write_file(dir / "fig3.csv", trajectory_csv(traj));
    write_file(dir / "fig3.svg", render_line_plot(trajectory_plot(traj, "fig3")));
    std::cout << "fig3: eta(Jt=30)=" << fixed(traj.back().eta_ac, 4) << '\n';

    for (const auto& id : figure_ids()) {
        const auto specs = figure_preset(id);
        std::vector<SweepTable> tables;
        std::vector<std::string> labels;
        for (const auto& s : specs) {
            tables.push_back(run_stamped(s, threads, !o.no_timestamp));
            labels.push_back(s.name);
            const std::string stem = specs.size() > 1 ? file_stem(s.name) : id;
            write_file(dir / (stem + ".csv"), sweep_csv(tables.back()));
        }
        const std::string svg = tables.size() > 1 ? render_line_plot(tables_plot(tables, labels, id))
                                                  : render_table(tables.front(), id);
        write_file(dir / (id + ".svg"), svg);

        double best = -std::numeric_limits<double>::infinity();
        std::size_t failed = 0;
        for (const auto& t : tables) {
            for (const auto& r : t.rows) {
                if (r.value.ok()) best = std::max(best, r.value.value);
                else ++failed;
            }
        }
        std::cout << id << ": max " << tables.front().columns.back() << "=" << fixed(best, 4) << " failed_cells=" << failed
                  << '\n';
    }
    return 0;
}

int exit_code_for(const Error& e) {
    switch (e.error_class()) {
    case ErrorClass::Validation: return kExitValidation;
    case ErrorClass::Numerical: return kExitNumerical;
    case ErrorClass::Io: return kExitIo;
    }
    return kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cavlab: driven three-cavity charger/battery simulator", "cavlab"};
    app.set_version_flag("--version", std::string("cavlab ") + CAVLAB_VERSION);
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "integrate the moment equations from vacuum");
    sim.params.attach(simulate);
    auto* t_end = simulate->add_option("--t-end", sim.t_end, "end time in units of 1/kappa");
    simulate->add_option("--t-end-J", sim.t_end_j, "end time as J t (default 30)")->excludes(t_end);
    simulate->add_option("--rtol", sim.ctrl.rel_tol, "relative tolerance")->capture_default_str();
    simulate->add_option("--atol", sim.ctrl.abs_tol, "absolute tolerance")->capture_default_str();
    simulate->add_option("--samples", sim.ctrl.samples, "output samples")->capture_default_str();
    simulate->add_option("--fixed-step", sim.ctrl.fixed_step, "fixed step size; 0 selects adaptive stepping")->capture_default_str();
    simulate->add_option("--csv", sim.csv, "trajectory CSV output path ('-' for stdout)");
    simulate->add_option("--svg", sim.svg, "E_a / E_c plot output path");

    ParamOptions steady_params;
    auto* steady = app.add_subcommand("steady", "steady state by every method plus the reciprocal baselines");
    steady_params.attach(steady);

    ScatterOptions sc;
    auto* scatter = app.add_subcommand("scatter", "transmission spectrum from the scattering matrix");
    sc.params.attach(scatter);
    auto* single = scatter->add_option("--delta", sc.delta, "single probe detuning");
    scatter->add_option("--delta-min", sc.delta_min, "spectrum start")->capture_default_str()->excludes(single);
    scatter->add_option("--delta-max", sc.delta_max, "spectrum end")->capture_default_str()->excludes(single);
    scatter->add_option("--points", sc.points, "spectrum points")->capture_default_str()->excludes(single);
    scatter->add_option("--csv", sc.csv, "spectrum CSV output path");
    scatter->add_option("--svg", sc.svg, "spectrum plot output path");

    OracleOptions orc;
    auto* oracle = app.add_subcommand("oracle", "cross-check the moment equations against the density matrix");
    orc.params.attach(oracle);
    orc.cfg.output_samples = 101;
    auto* o_t_end = oracle->add_option("--t-end", orc.t_end, "end time in units of 1/kappa");
    oracle->add_option("--t-end-J", orc.t_end_j, "end time as J t (default 10)")->excludes(o_t_end);
    oracle->add_option("--truncation", orc.cfg.truncation, "Fock levels per mode")->capture_default_str();
    oracle->add_option("--dimension-cap", orc.cfg.dimension_cap, "largest allowed truncation^3")->capture_default_str();
    oracle->add_option("--leak-tol", orc.cfg.leak_tolerance, "largest allowed top-level population")->capture_default_str();
    oracle->add_option("--samples", orc.cfg.output_samples, "output samples")->capture_default_str();
    oracle->add_option("--tolerance", orc.tolerance, "moment agreement threshold for the report")->capture_default_str();
    oracle->add_option("--csv", orc.csv, "oracle moment trajectory CSV output path");

    SweepOptions sw;
    auto* sweep = app.add_subcommand("sweep", "evaluate an observable over a parameter grid");
    sw.params.attach(sweep);
    sweep->add_option("--figure", sw.figure, "figure preset (fig4a..fig4d, fig5, fig6a..fig6d, fig7)");
    sweep->add_option("--axis1", sw.axis1, "name:min:max:points[:log]");
    sweep->add_option("--axis2", sw.axis2, "name:min:max:points[:log]");
    sweep->add_option("--observable", sw.observable, "eta_ss, e_a_ss, e_c_ss, eta_bb1, eta_bb2, t_forward, t_backward")
        ->capture_default_str();
    sweep->add_option("--method", sw.method, "analytic or numeric")->capture_default_str();
    sweep->add_option("--probe-delta", sw.probe, "probe detuning for the transmission observables")->capture_default_str();
    sweep->add_option("--csv", sw.csv, "CSV output path (stdout when omitted)");
    sweep->add_option("--svg", sw.svg, "plot output path");
    sweep->add_flag("--no-timestamp", sw.no_timestamp, "omit the timestamp metadata line");
    sweep->add_option("--threads", sw.threads, "worker threads (default CAVLAB_THREADS, 0 = auto)");

    FiguresOptions fig;
    auto* figures = app.add_subcommand("figures", "write every figure's data and plot into a directory");
    figures->add_option("--out", fig.out, "output directory")->required();
    figures->add_flag("--no-timestamp", fig.no_timestamp, "omit the timestamp metadata line");
    figures->add_option("--threads", fig.threads, "worker threads (default CAVLAB_THREADS, 0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        const auto subs = app.get_subcommands();
        std::cerr << (subs.empty() ? app.help() : subs.front()->help());
        return kExitValidation;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (steady->parsed()) return cmd_steady(steady_params);
        if (scatter->parsed()) return cmd_scatter(sc);
        if (oracle->parsed()) return cmd_oracle(orc);
        if (sweep->parsed()) return cmd_sweep(sw);
        if (figures->parsed()) return cmd_figures(fig);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return kExitValidation;
}
