#include "bellrmt/error.hpp"

namespace bellrmt {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidDimension: return "InvalidDimension";
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidK: return "InvalidK";
        case ErrorCode::NonErgodicConfig: return "NonErgodicConfig";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::SamplingFailed: return "SamplingFailed";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace bellrmt
