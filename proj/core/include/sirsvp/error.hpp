#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sirsvp
{

enum class ErrorCode
{
    NonPositiveRate,
    POutOfRange,
    BirthBelowBaselineMortality,
    BirthAboveMortalitySupremum,
    NonFinite,
    ZeroPopulation,
    SimplexViolation,
    DomainError,
    InverseOutOfRange,
    NoEndemicState,
    InvalidSpec,
    StepFailure,
    MaxStepsExceeded,
    RegionEmpty,
    AllPointsInvalid,
    DimensionMismatch,
    Internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message)
        , m_code(code)
    {
    }

    ErrorCode code() const noexcept { return m_code; }

private:
    ErrorCode m_code;
};

/// One violated parameter constraint. `field` names the offending input key.
struct Violation
{
    ErrorCode code;
    std::string field;
    std::string message;
};

/// Thrown by validate_params; carries every violated constraint, not just the first.
class ValidationError : public Error
{
public:
    explicit ValidationError(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const noexcept { return m_violations; }

    bool has(ErrorCode code) const;

private:
    std::vector<Violation> m_violations;
};

} // namespace sirsvp
