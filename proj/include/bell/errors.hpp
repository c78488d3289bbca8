#pragma once

#include <stdexcept>
#include <string>

namespace bell {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Violated precondition or size guard. The CLI maps these to exit code 3.
struct GuardError : Error {
    using Error::Error;
};

/// Runtime numerical failure. The CLI maps these to exit code 4.
struct NumericError : Error {
    using Error::Error;
};

struct InvalidProbability : GuardError { using GuardError::GuardError; };
struct ScenarioMismatch : GuardError { using GuardError::GuardError; };
struct SignalingDetected : GuardError { using GuardError::GuardError; };
struct InfeasibleCorrelators : GuardError { using GuardError::GuardError; };
struct OutOfRangeTau : GuardError { using GuardError::GuardError; };
struct InvalidN : GuardError { using GuardError::GuardError; };
struct TooManySettings : GuardError { using GuardError::GuardError; };
struct InvalidObservable : GuardError { using GuardError::GuardError; };
struct SignalingInput : GuardError { using GuardError::GuardError; };
struct MissingSettings : GuardError { using GuardError::GuardError; };
struct EmptySettingPair : GuardError { using GuardError::GuardError; };

struct LpFailure : NumericError { using NumericError::NumericError; };
struct IoError : NumericError { using NumericError::NumericError; };

}  // namespace bell
