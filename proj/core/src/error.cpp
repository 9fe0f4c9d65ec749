#include "ratstep/error.hpp"

namespace ratstep {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidRationalFunction: return "InvalidRationalFunction";
        case ErrorCode::PoleInRightHalfClosure: return "PoleInRightHalfClosure";
        case ErrorCode::RootFindingFailure: return "RootFindingFailure";
        case ErrorCode::OrderExceedsCap: return "OrderExceedsCap";
        case ErrorCode::EvaluationAtPole: return "EvaluationAtPole";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SingularShift: return "SingularShift";
        case ErrorCode::IllConditionedNodes: return "IllConditionedNodes";
        case ErrorCode::StepSizeAboveThreshold: return "StepSizeAboveThreshold";
        case ErrorCode::ImaginaryResidueTooLarge: return "ImaginaryResidueTooLarge";
        case ErrorCode::NonPositiveError: return "NonPositiveError";
        case ErrorCode::UnknownId: return "UnknownId";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace ratstep
