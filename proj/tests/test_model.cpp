#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cavlab/error.hpp"
#include "cavlab/model.hpp"

#include "support.hpp"

#include <filesystem>
#include <fstream>

using namespace cavlab;
using testkit::pi;

namespace {

template <class F>
Errc code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::Io;
}

} // namespace

TEST_CASE("fig3 preset values") {
    const Params p = preset("fig3");
    CHECK(p.resonant());
    CHECK(p.equal_couplings());
    CHECK(p.j_ab == doctest::Approx(std::sqrt(2.0)));
    CHECK(p.kappa_a == 1.0);
    CHECK(p.kappa_b == 10.0);
    CHECK(p.kappa_c == 1.0);
    CHECK(p.theta == doctest::Approx(-pi / 2));
    CHECK(p.omega_drive_amp == 0.5);
}

TEST_CASE("figure presets") {
    const Params a = preset("fig4a");
    CHECK(a.theta == doctest::Approx(-pi / 4));
    CHECK(a.omega_drive_amp == 0.1);
    CHECK(a.kappa_a == 1.0);
    CHECK(a.kappa_c == 1.0);
    CHECK(preset("fig4b").kappa_b == 40.0);
    CHECK(preset("fig4c").j_ab == 4.0);
    const Params d = preset("fig4d");
    CHECK(d.j_bc == 4.0);
    CHECK(d.theta == doctest::Approx(-pi / 2));
    const Params f5 = preset("fig5");
    CHECK(f5.j_ac == 1.0);
    CHECK(f5.kappa_c == 1.0);
    const Params f6 = preset("fig6");
    CHECK(f6.theta == doctest::Approx(pi));
    CHECK(f6.kappa_b == 10.0);
    CHECK(f6.omega_drive_amp == 1.0);
    const Params f7 = preset("fig7");
    CHECK(f7.kappa_b == 10.0);
    CHECK(f7.theta == doctest::Approx(-pi / 2));
    CHECK(f7.omega_drive_amp == 1.0);
    for (const auto& name : preset_names()) CHECK_NOTHROW(validate(preset(name)));
    CHECK(code_of([] { preset("fig9"); }) == Errc::UnknownPreset);
}

TEST_CASE("validation") {
    Params p = preset("fig3");
    p.kappa_b = -1.0;
    CHECK(code_of([&] { validate(p); }) == Errc::NegativeRate);
    p = preset("fig3");
    p.j_ac = -0.5;
    CHECK(code_of([&] { validate(p); }) == Errc::NegativeRate);
    p = preset("fig3");
    p.omega_drive_amp = -0.1;
    CHECK(code_of([&] { validate(p); }) == Errc::NegativeRate);
    p = preset("fig3");
    p.delta_b = std::nan("");
    CHECK(code_of([&] { validate(p); }) == Errc::NonFinite);
    p = preset("fig3");
    p.delta_a = -2.0; // detunings may be negative
    CHECK_NOTHROW(validate(p));
}

TEST_CASE("phase normalization lands in (-pi, pi]") {
    CHECK(normalize_phase(-pi) == doctest::Approx(pi));
    CHECK(normalize_phase(pi) == doctest::Approx(pi));
    CHECK(normalize_phase(3 * pi / 2) == doctest::Approx(-pi / 2));
    testkit::Gen g(11);
    for (int i = 0; i < 500; ++i) {
        const double t = g.uniform(-50.0, 50.0);
        const double r = normalize_phase(t);
        CHECK(r > -pi);
        CHECK(r <= pi);
        CHECK(std::abs(std::remainder(t - r, 2 * pi)) < 1e-9);
    }
    Params p = preset("fig3");
    p.theta = 7.0;
    CHECK(validate(p).theta == doctest::Approx(7.0 - 2 * pi));
}

TEST_CASE("JSON config") {
    const Params p = params_from_json_text(R"({"J": 2, "kappa_a": 1, "kappa_b": 4, "kappa_c": 1, "theta": 0.5, "omega_drive_amp": 0.3})");
    CHECK(p.equal_couplings());
    CHECK(p.j_bc == 2.0);
    CHECK(p.delta_a == 0.0);
    CHECK(p.kappa_b == 4.0);

    testkit::Gen g(5);
    for (int i = 0; i < 50; ++i) {
        const Params q = validate(g.general());
        CHECK(params_from_json_text(params_to_json_text(q)) == q);
    }

    CHECK(code_of([] { params_from_json_text(R"({"kappa_x": 1})"); }) == Errc::InvalidConfig);
    CHECK(code_of([] { params_from_json_text(R"({"J": 1, "j_ab": 2})"); }) == Errc::InvalidConfig);
    CHECK(code_of([] { params_from_json_text(R"({"theta": "pi"})"); }) == Errc::InvalidConfig);
    CHECK(code_of([] { params_from_json_text("[1, 2]"); }) == Errc::InvalidConfig);
    CHECK(code_of([] { params_from_json_text("{not json"); }) == Errc::InvalidConfig);
    CHECK(code_of([] { params_from_json_text(R"({"kappa_a": -1})"); }) == Errc::NegativeRate);
}

TEST_CASE("config files") {
    const auto path = std::filesystem::temp_directory_path() / "cavlab_test_model_config.json";
    {
        std::ofstream f(path);
        f << params_to_json_text(preset("fig7"));
    }
    CHECK(load_params_file(path) == preset("fig7"));
    std::filesystem::remove(path);
    CHECK(code_of([&] { load_params_file(path); }) == Errc::Io);
}

TEST_CASE("named overrides") {
    Params p;
    set_parameter(p, "J", 3.0);
    CHECK(p.j_ab == 3.0);
    CHECK(p.j_bc == 3.0);
    CHECK(p.j_ac == 3.0);
    set_parameter(p, "kappa_ac", 0.5);
    CHECK(p.kappa_a == 0.5);
    CHECK(p.kappa_c == 0.5);
    CHECK(p.kappa_b == 0.0);
    set_parameter(p, "Delta", -1.0);
    CHECK(p.equal_detunings());
    CHECK(p.delta_b == -1.0);
    set_parameter(p, "omega_drive_amp", 0.2);
    CHECK(p.omega_drive_amp == 0.2);
    CHECK(is_parameter_name("theta"));
    CHECK_FALSE(is_parameter_name("omega"));
    CHECK(code_of([&] { set_parameter(p, "omega", 1.0); }) == Errc::InvalidSpec);
}

TEST_CASE("error classes") {
    CHECK(classify(Errc::NegativeRate) == ErrorClass::Validation);
    CHECK(classify(Errc::AnalyticDomain) == ErrorClass::Validation);
    CHECK(classify(Errc::SingularSystem) == ErrorClass::Numerical);
    CHECK(classify(Errc::StepSizeUnderflow) == ErrorClass::Numerical);
    CHECK(classify(Errc::TruncationLeak) == ErrorClass::Numerical);
    CHECK(classify(Errc::Io) == ErrorClass::Io);
    const Error e(Errc::SingularAtProbe, "boom");
    CHECK(std::string(e.what()).find("SingularAtProbe") != std::string::npos);
    CHECK(errc_name(Errc::EmptyData) == "EmptyData");
}
