#pragma once

#include <stdexcept>
#include <string>

namespace qlev {

enum class ErrorCode {
    InvalidArgument,
    Overflow,
    DomainTooLarge,
    BranchTrackingFailure,
    NonPositiveAltitude,
    TableTooSparse,
    TableParseError,
    NearBoundary,
    MultipleTurningPoints,
    SingularityExpansionFailure,
    AtTurningPoint,
    OutsideMappedDomain,
    NoWkbWindow,
    StiffIntegration,
    ModelNonPhysical,
    DegenerateR,
    IllConditionedFit,
    WindowTooNarrow,
    BracketFailure,
    PhaseUnwrapError,
    NewtonDivergence,
    WrongBasin,
    PeakOverlap,
    FitDiverged,
    ConfigError,
};

const char* error_name(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    const char* name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace qlev
