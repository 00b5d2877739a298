#ifndef TUMORDELAY_ERROR_HPP
#define TUMORDELAY_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace tumordelay {

// Numeric values are part of the C ABI (see tumordelay.h); append only.
enum class ErrorCode : int {
    Ok = 0,
    InvalidParams = 1,
    NonPositiveArgument = 2,
    ArgumentOverflow = 3,
    RadiusOutOfRange = 4,
    NonPositiveState = 5,
    BracketNotFound = 6,
    InconsistentState = 7,
    CoefficientOrderViolated = 8,
    InvalidStepCount = 9,
    HistoryDomainViolation = 10,
    NonPositiveHistory = 11,
    TimeOutOfRange = 12,
    NoCrossing = 13,
    HypothesisViolated = 14,
    ResidualTooLarge = 15,
    HorizonTooShort = 16,
    BracketInvalid = 17,
    ConfigParseError = 18,
    EmptyTrajectory = 19,
    Tau1OutOfRange = 20,
    NoPositiveEquilibrium = 21,
    IoError = 22,
    ContractViolation = 23,
    InvalidArgument = 24,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tumordelay

#endif  // TUMORDELAY_ERROR_HPP
