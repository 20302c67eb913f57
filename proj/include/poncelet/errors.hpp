#pragma once

#include <stdexcept>
#include <string>

namespace poncelet {

// One code per failure class; the CLI maps these to distinct exit codes.
enum class ErrorCode {
    DegenerateChart = 10,
    NonStrictFamily,
    InterlacingViolated,
    DegenerateLine,
    OrderingViolated,
    OutsideModel,
    ZeroAtOrigin,
    InsufficientOrder,
    ZeroParameter,
    NoRootInBracket,
    TangentialImpact,
    GrazingSegment,
    LeftModel,
    EnergyBelowPotential,
    SingularL,
    NotSeparable,
    CoincidentLambdas,
    UnderdeterminedNormalization,
    UnsupportedSingularity,
    NotOnBoundary,
    UnknownCommand,
    BadParameter,
    IoError,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }
    int exit_code() const { return static_cast<int>(code_); }

private:
    ErrorCode code_;
};

inline const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DegenerateChart: return "DegenerateChart";
        case ErrorCode::NonStrictFamily: return "NonStrictFamily";
        case ErrorCode::InterlacingViolated: return "InterlacingViolated";
        case ErrorCode::DegenerateLine: return "DegenerateLine";
        case ErrorCode::OrderingViolated: return "OrderingViolated";
        case ErrorCode::OutsideModel: return "OutsideModel";
        case ErrorCode::ZeroAtOrigin: return "ZeroAtOrigin";
        case ErrorCode::InsufficientOrder: return "InsufficientOrder";
        case ErrorCode::ZeroParameter: return "ZeroParameter";
        case ErrorCode::NoRootInBracket: return "NoRootInBracket";
        case ErrorCode::TangentialImpact: return "TangentialImpact";
        case ErrorCode::GrazingSegment: return "GrazingSegment";
        case ErrorCode::LeftModel: return "LeftModel";
        case ErrorCode::EnergyBelowPotential: return "EnergyBelowPotential";
        case ErrorCode::SingularL: return "SingularL";
        case ErrorCode::NotSeparable: return "NotSeparable";
        case ErrorCode::CoincidentLambdas: return "CoincidentLambdas";
        case ErrorCode::UnderdeterminedNormalization: return "UnderdeterminedNormalization";
        case ErrorCode::UnsupportedSingularity: return "UnsupportedSingularity";
        case ErrorCode::NotOnBoundary: return "NotOnBoundary";
        case ErrorCode::UnknownCommand: return "UnknownCommand";
        case ErrorCode::BadParameter: return "BadParameter";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace poncelet
