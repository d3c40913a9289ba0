#include "qlev/error.hpp"

namespace qlev {

const char* error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::DomainTooLarge: return "DomainTooLarge";
        case ErrorCode::BranchTrackingFailure: return "BranchTrackingFailure";
        case ErrorCode::NonPositiveAltitude: return "NonPositiveAltitude";
        case ErrorCode::TableTooSparse: return "TableTooSparse";
        case ErrorCode::TableParseError: return "TableParseError";
        case ErrorCode::NearBoundary: return "NearBoundary";
        case ErrorCode::MultipleTurningPoints: return "MultipleTurningPoints";
        case ErrorCode::SingularityExpansionFailure: return "SingularityExpansionFailure";
        case ErrorCode::AtTurningPoint: return "AtTurningPoint";
        case ErrorCode::OutsideMappedDomain: return "OutsideMappedDomain";
        case ErrorCode::NoWkbWindow: return "NoWkbWindow";
        case ErrorCode::StiffIntegration: return "StiffIntegration";
        case ErrorCode::ModelNonPhysical: return "ModelNonPhysical";
        case ErrorCode::DegenerateR: return "DegenerateR";
        case ErrorCode::IllConditionedFit: return "IllConditionedFit";
        case ErrorCode::WindowTooNarrow: return "WindowTooNarrow";
        case ErrorCode::BracketFailure: return "BracketFailure";
        case ErrorCode::PhaseUnwrapError: return "PhaseUnwrapError";
        case ErrorCode::NewtonDivergence: return "NewtonDivergence";
        case ErrorCode::WrongBasin: return "WrongBasin";
        case ErrorCode::PeakOverlap: return "PeakOverlap";
        case ErrorCode::FitDiverged: return "FitDiverged";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace qlev
