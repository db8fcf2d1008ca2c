#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slicing4meta {

enum class Errc {
    DuplicateId,
    UnknownChild,
    KindMismatch,
    CycleDetected,
    UnknownModel,
    InvalidModel,
    InsufficientResources,
    UnknownReservation,
    DoubleRelease,
    InvalidParams,
    DomainError,
    EmptyUserSet,
    NonConvergence,
    UnknownServiceKind,
    MissingBundle,
    UnknownMsi,
    InvalidTransition,
    ModelNotAttached,
    EmptyHistory,
    ScenarioInvalid,
    ConfigInvalid,
    IoError,
};

std::string_view to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace slicing4meta
