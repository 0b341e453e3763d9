// errors.hpp: exception types raised across the library

#pragma once

#include <stdexcept>
#include <string>

namespace qrdiode {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define QRDIODE_DEFINE_ERROR(Name)                                   \
    struct Name : Error {                                            \
        using Error::Error;                                          \
        const char* kind() const noexcept override { return #Name; } \
    }

// Parameter validation failures (exit code 2 from the CLI)
struct ValidationError : Error {
    using Error::Error;
    const char* kind() const noexcept override { return "ValidationError"; }
};

#define QRDIODE_DEFINE_VALIDATION_ERROR(Name)                        \
    struct Name : ValidationError {                                  \
        using ValidationError::ValidationError;                      \
        const char* kind() const noexcept override { return #Name; } \
    }

QRDIODE_DEFINE_VALIDATION_ERROR(InvalidParameter);
QRDIODE_DEFINE_VALIDATION_ERROR(SpectralCollapse);
QRDIODE_DEFINE_VALIDATION_ERROR(TruncationTooSmall);
QRDIODE_DEFINE_VALIDATION_ERROR(UnknownUnitKind);
QRDIODE_DEFINE_VALIDATION_ERROR(ConfigError);

QRDIODE_DEFINE_ERROR(NonHermitianInput);
QRDIODE_DEFINE_ERROR(DegenerateSteadyState);
QRDIODE_DEFINE_ERROR(DomainError);
QRDIODE_DEFINE_ERROR(NotConverged);
QRDIODE_DEFINE_ERROR(NonPhysical);
QRDIODE_DEFINE_ERROR(BasisMismatch);

#undef QRDIODE_DEFINE_ERROR
#undef QRDIODE_DEFINE_VALIDATION_ERROR

} // namespace qrdiode
