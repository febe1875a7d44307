#pragma once

#include <stdexcept>
#include <string>

namespace rotostar {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Numerical failures map to exit code 3, I/O to 4, config to 2.
class NumericalError : public Error {
    using Error::Error;
};
class IoError : public Error {
    using Error::Error;
};
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("ConfigInvalid", what) {}
};

#define ROTOSTAR_ERROR(Name, Base)                                      \
    class Name : public Base {                                          \
    public:                                                             \
        explicit Name(const std::string& what) : Base(#Name, what) {}   \
    };

ROTOSTAR_ERROR(NoZeroFound, NumericalError)
ROTOSTAR_ERROR(NonConvergence, NumericalError)
ROTOSTAR_ERROR(AmplitudeTooLarge, NumericalError)
ROTOSTAR_ERROR(MaxIterExceeded, NumericalError)
ROTOSTAR_ERROR(NegativeCenter, NumericalError)
ROTOSTAR_ERROR(RootBracketFailure, NumericalError)
ROTOSTAR_ERROR(SingularPoint, NumericalError)
ROTOSTAR_ERROR(GridMismatch, NumericalError)
ROTOSTAR_ERROR(PDPViolation, NumericalError)
ROTOSTAR_ERROR(InconsistentInputs, NumericalError)
ROTOSTAR_ERROR(DegenerateGradient, NumericalError)
ROTOSTAR_ERROR(MeshTooCoarse, NumericalError)
ROTOSTAR_ERROR(TruncationTooTight, NumericalError)
ROTOSTAR_ERROR(UnresolvedBoundaryWeight, NumericalError)
ROTOSTAR_ERROR(SingularMass, NumericalError)
ROTOSTAR_ERROR(EigensolverFailure, NumericalError)
ROTOSTAR_ERROR(NotAnEigenpair, NumericalError)
ROTOSTAR_ERROR(FactorizationFailure, NumericalError)
ROTOSTAR_ERROR(NotHomogeneous, NumericalError)
ROTOSTAR_ERROR(NonPositive, NumericalError)
ROTOSTAR_ERROR(MissingChannels, NumericalError)
ROTOSTAR_ERROR(TailNotDecaying, NumericalError)
ROTOSTAR_ERROR(VersionMismatch, IoError)
ROTOSTAR_ERROR(CorruptTable, IoError)

#undef ROTOSTAR_ERROR

}  // namespace rotostar
