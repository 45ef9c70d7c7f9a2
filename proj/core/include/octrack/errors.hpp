#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace octrack {

enum class Errc {
    NotConverged,
    SingularInnovation,
    AlgebraicLoop,
    Unstable,
    InvalidBounds,
    InvalidSpectrum,
    InvalidDensity,
    InvalidArgument,
    DimensionMismatch,
    NoStabilizingController,
    UnknownPreset,
    ConfigParse,
    Io,
};

std::string_view to_string(Errc code) noexcept;

// Library exception; code() identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace octrack
