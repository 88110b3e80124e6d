#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bellrmt {

enum class ErrorCode {
    InvalidDimension,
    NonSquare,
    NotHermitian,
    NoConvergence,
    RankDeficient,
    NegativeEigenvalue,
    DimensionMismatch,
    InvalidK,
    NonErgodicConfig,
    InsufficientData,
    QuadratureFailure,
    InvalidConfig,
    SamplingFailed,
    IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace bellrmt
