#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ruledlab {

enum class ErrorCode {
    NullInput,
    OppositeOrientation,
    DegenerateSpan,
    DomainError,
    CylindricalRuling,
    NullDerivative,
    DegenerateNormal,
    NonTimelikeStriction,
    SingularStriction,
    FrameDegenerate,
    TrivialRuling,
    DegenerateDenominator,
    BaseNotDevelopable,
    NonUniformGrid,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Numerical or geometric failure raised by library operations.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ruledlab
