#include "tumordelay/error.hpp"

namespace tumordelay {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
        case ErrorCode::ArgumentOverflow: return "ArgumentOverflow";
        case ErrorCode::RadiusOutOfRange: return "RadiusOutOfRange";
        case ErrorCode::NonPositiveState: return "NonPositiveState";
        case ErrorCode::BracketNotFound: return "BracketNotFound";
        case ErrorCode::InconsistentState: return "InconsistentState";
        case ErrorCode::CoefficientOrderViolated: return "CoefficientOrderViolated";
        case ErrorCode::InvalidStepCount: return "InvalidStepCount";
        case ErrorCode::HistoryDomainViolation: return "HistoryDomainViolation";
        case ErrorCode::NonPositiveHistory: return "NonPositiveHistory";
        case ErrorCode::TimeOutOfRange: return "TimeOutOfRange";
        case ErrorCode::NoCrossing: return "NoCrossing";
        case ErrorCode::HypothesisViolated: return "HypothesisViolated";
        case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
        case ErrorCode::HorizonTooShort: return "HorizonTooShort";
        case ErrorCode::BracketInvalid: return "BracketInvalid";
        case ErrorCode::ConfigParseError: return "ConfigParseError";
        case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
        case ErrorCode::Tau1OutOfRange: return "Tau1OutOfRange";
        case ErrorCode::NoPositiveEquilibrium: return "NoPositiveEquilibrium";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ContractViolation: return "ContractViolation";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace tumordelay
