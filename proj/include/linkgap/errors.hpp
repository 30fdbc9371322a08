#pragma once

#include <stdexcept>
#include <string>

namespace linkgap {

/// Failure categories surfaced by the library. Each carries a short stable
/// name used in CLI diagnostics and asserted on in tests.
enum class Errc {
    NonPure,
    DisconnectedLink,
    NonPositiveWeight,
    UnknownVertex,
    NotAutomorphism,
    WeightNotInvariant,
    GroupTooLarge,
    InvariantViolation,
    DimensionMismatch,
    ForeignPoint,
    ParameterOutOfRange,
    SpaceMismatch,
    RepresentationMismatch,
    NoConvergence,
    UnsupportedSpace,
    AllSamplesDegenerate,
    Disconnected,
    TooSmall,
    ParseError,
    InvalidArgument,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NonPure: return "NonPure";
        case Errc::DisconnectedLink: return "DisconnectedLink";
        case Errc::NonPositiveWeight: return "NonPositiveWeight";
        case Errc::UnknownVertex: return "UnknownVertex";
        case Errc::NotAutomorphism: return "NotAutomorphism";
        case Errc::WeightNotInvariant: return "WeightNotInvariant";
        case Errc::GroupTooLarge: return "GroupTooLarge";
        case Errc::InvariantViolation: return "InvariantViolation";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::ForeignPoint: return "ForeignPoint";
        case Errc::ParameterOutOfRange: return "ParameterOutOfRange";
        case Errc::SpaceMismatch: return "SpaceMismatch";
        case Errc::RepresentationMismatch: return "RepresentationMismatch";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::UnsupportedSpace: return "UnsupportedSpace";
        case Errc::AllSamplesDegenerate: return "AllSamplesDegenerate";
        case Errc::Disconnected: return "Disconnected";
        case Errc::TooSmall: return "TooSmall";
        case Errc::ParseError: return "ParseError";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool ok, Errc code, const std::string& msg) {
    if (!ok) fail(code, msg);
}

}  // namespace linkgap
