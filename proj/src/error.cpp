#include "cavlab/error.hpp"

namespace cavlab {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::NegativeRate: return "NegativeRate";
    case Errc::NonFinite: return "NonFinite";
    case Errc::UnknownPreset: return "UnknownPreset";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::AnalyticDomain: return "AnalyticDomainError";
    case Errc::DimensionCapExceeded: return "DimensionCapExceeded";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::EmptyData: return "EmptyData";
    case Errc::SingularDenominator: return "SingularDenominator";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::SingularAtProbe: return "SingularAtProbe";
    case Errc::StepSizeUnderflow: return "StepSizeUnderflow";
    case Errc::NonFiniteState: return "NonFiniteState";
    case Errc::TruncationLeak: return "TruncationLeak";
    case Errc::NonFiniteAxis: return "NonFiniteAxis";
    case Errc::Io: return "Io";
    }
    return "Unknown";
}

ErrorClass classify(Errc code) noexcept {
    switch (code) {
    case Errc::SingularDenominator:
    case Errc::SingularSystem:
    case Errc::SingularAtProbe:
    case Errc::StepSizeUnderflow:
    case Errc::NonFiniteState:
    case Errc::TruncationLeak:
    case Errc::NonFiniteAxis:
        return ErrorClass::Numerical;
    case Errc::Io:
        return ErrorClass::Io;
    default:
        return ErrorClass::Validation;
    }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

} // namespace cavlab
