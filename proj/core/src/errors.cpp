#include "octrack/errors.hpp"

namespace octrack {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::NotConverged: return "NotConverged";
        case Errc::SingularInnovation: return "SingularInnovation";
        case Errc::AlgebraicLoop: return "AlgebraicLoop";
        case Errc::Unstable: return "Unstable";
        case Errc::InvalidBounds: return "InvalidBounds";
        case Errc::InvalidSpectrum: return "InvalidSpectrum";
        case Errc::InvalidDensity: return "InvalidDensity";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::NoStabilizingController: return "NoStabilizingController";
        case Errc::UnknownPreset: return "UnknownPreset";
        case Errc::ConfigParse: return "ConfigParse";
        case Errc::Io: return "IoError";
    }
    return "Unknown";
}

}  // namespace octrack
