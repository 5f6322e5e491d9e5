#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace abeldim {

enum class ErrorKind {
    SyntaxError,
    ParseError,
    NotATree,
    NotNegativeDefinite,
    DuplicateVertex,
    UnknownVertex,
    GraphMismatch,
    NotInLprime,
    NotNegLipman,
    CycleBelowE,
    DisconnectedInput,
    InvalidArgument,
    BoxTooLarge,
    TowerTooLarge,
    OracleFailure,
    MissingEntry,
    HypothesisViolation,
    UnsupportedDescriptor,
    ChernMismatch,
    EmptyECa,
    ConsistencyError,
};

std::string_view error_name(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return error_name(kind_); }

private:
    ErrorKind kind_;
};

}  // namespace abeldim
