#include "slicing4meta/error.hpp"

namespace slicing4meta {

std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::UnknownChild: return "UnknownChild";
    case Errc::KindMismatch: return "KindMismatch";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::UnknownModel: return "UnknownModel";
    case Errc::InvalidModel: return "InvalidModel";
    case Errc::InsufficientResources: return "InsufficientResources";
    case Errc::UnknownReservation: return "UnknownReservation";
    case Errc::DoubleRelease: return "DoubleRelease";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::DomainError: return "DomainError";
    case Errc::EmptyUserSet: return "EmptyUserSet";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::UnknownServiceKind: return "UnknownServiceKind";
    case Errc::MissingBundle: return "MissingBundle";
    case Errc::UnknownMsi: return "UnknownMsi";
    case Errc::InvalidTransition: return "InvalidTransition";
    case Errc::ModelNotAttached: return "ModelNotAttached";
    case Errc::EmptyHistory: return "EmptyHistory";
    case Errc::ScenarioInvalid: return "ScenarioInvalid";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

}  // namespace slicing4meta
