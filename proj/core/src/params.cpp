#include "sirsvp/params.hpp"
#include "sirsvp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sirsvp
{

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NonPositiveRate:
        return "NonPositiveRate";
    case ErrorCode::POutOfRange:
        return "POutOfRange";
    case ErrorCode::BirthBelowBaselineMortality:
        return "BirthBelowBaselineMortality";
    case ErrorCode::BirthAboveMortalitySupremum:
        return "BirthAboveMortalitySupremum";
    case ErrorCode::NonFinite:
        return "NonFinite";
    case ErrorCode::ZeroPopulation:
        return "ZeroPopulation";
    case ErrorCode::SimplexViolation:
        return "SimplexViolation";
    case ErrorCode::DomainError:
        return "DomainError";
    case ErrorCode::InverseOutOfRange:
        return "InverseOutOfRange";
    case ErrorCode::NoEndemicState:
        return "NoEndemicState";
    case ErrorCode::InvalidSpec:
        return "InvalidSpec";
    case ErrorCode::StepFailure:
        return "StepFailure";
    case ErrorCode::MaxStepsExceeded:
        return "MaxStepsExceeded";
    case ErrorCode::RegionEmpty:
        return "RegionEmpty";
    case ErrorCode::AllPointsInvalid:
        return "AllPointsInvalid";
    case ErrorCode::DimensionMismatch:
        return "DimensionMismatch";
    case ErrorCode::Internal:
        return "Internal";
    }
    return "Unknown";
}

namespace
{
std::string join_messages(const std::vector<Violation>& violations)
{
    std::ostringstream os;
    os << "invalid parameters:";
    for (const auto& v : violations) {
        os << " [" << to_string(v.code) << " " << v.field << ": " << v.message << "]";
    }
    return os.str();
}
} // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? ErrorCode::Internal : violations.front().code, join_messages(violations))
    , m_violations(std::move(violations))
{
}

bool ValidationError::has(ErrorCode code) const
{
    return std::any_of(m_violations.begin(), m_violations.end(), [code](const Violation& v) {
        return v.code == code;
    });
}

double MortalityFn::rate(double population) const
{
    switch (form) {
    case MortalityForm::Affine:
        return mu0 + k * population;
    }
    throw Error(ErrorCode::Internal, "unknown mortality form");
}

double MortalityFn::inverse(double rate_value) const
{
    if (!(rate_value > baseline())) {
        std::ostringstream os;
        os << "mortality inverse requires y > mu(0) = " << baseline() << ", got " << rate_value;
        throw Error(ErrorCode::InverseOutOfRange, os.str());
    }
    switch (form) {
    case MortalityForm::Affine:
        return (rate_value - mu0) / k;
    }
    throw Error(ErrorCode::Internal, "unknown mortality form");
}

double MortalityFn::supremum() const
{
    switch (form) {
    case MortalityForm::Affine:
        return k > 0 ? std::numeric_limits<double>::infinity() : mu0;
    }
    throw Error(ErrorCode::Internal, "unknown mortality form");
}

std::optional<double RawParams::*> raw_param_field(std::string_view name)
{
    if (name == "b")
        return &RawParams::b;
    if (name == "beta")
        return &RawParams::beta;
    if (name == "nu")
        return &RawParams::nu;
    if (name == "delta")
        return &RawParams::delta;
    if (name == "p")
        return &RawParams::p;
    if (name == "alpha")
        return &RawParams::alpha;
    if (name == "mu0")
        return &RawParams::mu0;
    if (name == "k")
        return &RawParams::k;
    return std::nullopt;
}

RawParams ModelParams::raw() const
{
    return {b, beta, nu, delta, p, alpha, mortality.mu0, mortality.k};
}

ModelParams validate_params(const RawParams& raw)
{
    std::vector<Violation> violations;

    bool all_finite = true;
    for (auto name : raw_param_names) {
        double value = raw.*(*raw_param_field(name));
        if (!std::isfinite(value)) {
            violations.push_back({ErrorCode::NonFinite, std::string(name), "value is not finite"});
            all_finite = false;
        }
    }

    auto positive = [&](std::string_view name, double value) {
        if (std::isfinite(value) && !(value > 0.0)) {
            std::ostringstream os;
            os << "must be > 0, got " << value;
            violations.push_back({ErrorCode::NonPositiveRate, std::string(name), os.str()});
        }
    };
    positive("b", raw.b);
    positive("beta", raw.beta);
    positive("nu", raw.nu);
    positive("delta", raw.delta);
    positive("alpha", raw.alpha);
    positive("mu0", raw.mu0);
    positive("k", raw.k);

    if (std::isfinite(raw.p) && !(raw.p > 0.0 && raw.p < 1.0)) {
        std::ostringstream os;
        os << "must lie in (0,1), got " << raw.p;
        violations.push_back({ErrorCode::POutOfRange, "p", os.str()});
    }

    MortalityFn mortality{MortalityForm::Affine, raw.mu0, raw.k};
    if (all_finite) {
        if (!(raw.b > mortality.baseline())) {
            std::ostringstream os;
            os << "birth rate b = " << raw.b << " must exceed baseline mortality mu(0) = " << mortality.baseline();
            violations.push_back({ErrorCode::BirthBelowBaselineMortality, "b", os.str()});
        }
        if (!(raw.b < mortality.supremum())) {
            std::ostringstream os;
            os << "birth rate b = " << raw.b << " must be below sup mu = " << mortality.supremum();
            violations.push_back({ErrorCode::BirthAboveMortalitySupremum, "b", os.str()});
        }
    }

    if (!violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    return {raw.b, raw.beta, raw.nu, raw.delta, raw.p, raw.alpha, mortality};
}

} // namespace sirsvp
