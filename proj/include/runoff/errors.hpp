#pragma once

#include <stdexcept>
#include <string>

namespace runoff {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- triangle ---------------------------------------------------------------
struct MissingCell : Error { using Error::Error; };
struct NonPositiveAmount : Error { using Error::Error; };
struct RaggedLayout : Error { using Error::Error; };
struct DuplicateCell : Error { using Error::Error; };

// --- fuzzy ------------------------------------------------------------------
struct InvalidTfn : Error { using Error::Error; };
struct HOutOfRange : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct NonFiniteFunctionValue : Error { using Error::Error; };

// --- glm --------------------------------------------------------------------
struct SingularDesign : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct ZeroDegreesOfFreedom : Error { using Error::Error; };

// --- lp ---------------------------------------------------------------------
struct NumericalBreakdown : Error { using Error::Error; };

// --- hybrid -----------------------------------------------------------------
struct LpInfeasible : Error { using Error::Error; };
struct ZeroSpread : Error { using Error::Error; };
struct DegenerateP : Error { using Error::Error; };

// --- bootstrap --------------------------------------------------------------
struct NonPositiveFitted : Error { using Error::Error; };
struct RefitFailed : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };

} // namespace runoff
