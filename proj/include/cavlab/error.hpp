// error.hpp - Error codes shared by every cavlab module

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cavlab {

enum class Errc {
    // input / contract violations
    NegativeRate,
    NonFinite,
    UnknownPreset,
    InvalidConfig,
    AnalyticDomain,
    DimensionCapExceeded,
    TooFewSamples,
    InvalidSpec,
    EmptyData,
    // numerical failures
    SingularDenominator,
    SingularSystem,
    SingularAtProbe,
    StepSizeUnderflow,
    NonFiniteState,
    TruncationLeak,
    NonFiniteAxis,
    // filesystem
    Io,
};

// Coarse classification used for process exit codes.
enum class ErrorClass { Validation, Numerical, Io };

std::string_view errc_name(Errc code) noexcept;
ErrorClass classify(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);

    Errc code() const noexcept { return code_; }
    ErrorClass error_class() const noexcept { return classify(code_); }

private:
    Errc code_;
};

} // namespace cavlab
