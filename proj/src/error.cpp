#include "abeldim/error.hpp"

namespace abeldim {

std::string_view error_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::NotATree: return "NotATree";
        case ErrorKind::NotNegativeDefinite: return "NotNegativeDefinite";
        case ErrorKind::DuplicateVertex: return "DuplicateVertex";
        case ErrorKind::UnknownVertex: return "UnknownVertex";
        case ErrorKind::GraphMismatch: return "GraphMismatch";
        case ErrorKind::NotInLprime: return "NotInLprime";
        case ErrorKind::NotNegLipman: return "NotNegLipman";
        case ErrorKind::CycleBelowE: return "CycleBelowE";
        case ErrorKind::DisconnectedInput: return "DisconnectedInput";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::BoxTooLarge: return "BoxTooLarge";
        case ErrorKind::TowerTooLarge: return "TowerTooLarge";
        case ErrorKind::OracleFailure: return "OracleFailure";
        case ErrorKind::MissingEntry: return "MissingEntry";
        case ErrorKind::HypothesisViolation: return "HypothesisViolation";
        case ErrorKind::UnsupportedDescriptor: return "UnsupportedDescriptor";
        case ErrorKind::ChernMismatch: return "ChernMismatch";
        case ErrorKind::EmptyECa: return "EmptyECa";
        case ErrorKind::ConsistencyError: return "ConsistencyError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

}  // namespace abeldim
