#pragma once

#include <optional>
#include <string_view>
#include <array>

namespace sirsvp
{

enum class MortalityForm
{
    Affine,
};

/// Density-dependent per-capita mortality mu(N). Only the affine law
/// mu(N) = mu0 + k*N ships; `form` is the hook for other strictly increasing laws.
struct MortalityFn
{
    MortalityForm form = MortalityForm::Affine;
    double mu0         = 0.0;
    double k           = 0.0;

    double rate(double population) const;

    /// mu^{-1}(y). Throws Error(InverseOutOfRange) when y <= mu(0).
    double inverse(double rate_value) const;

    double baseline() const { return rate(0.0); }

    /// sup_N mu(N).
    double supremum() const;

    /// N* with mu(N*) = birth_rate: the disease-free carrying capacity.
    double carrying_capacity(double birth_rate) const { return inverse(birth_rate); }
};

/// Unvalidated numeric bundle, as read from a parameter file or flags.
struct RawParams
{
    double b     = 0.0;
    double beta  = 0.0;
    double nu    = 0.0;
    double delta = 0.0;
    double p     = 0.0;
    double alpha = 0.0;
    double mu0   = 0.0;
    double k     = 0.0;
};

inline constexpr std::array<std::string_view, 8> raw_param_names{"b", "beta", "nu", "delta", "p", "alpha", "mu0", "k"};

/// Member pointer for a parameter key ("b", "beta", ..., "k"); empty for unknown keys.
std::optional<double RawParams::*> raw_param_field(std::string_view name);

struct ModelParams
{
    double b     = 0.0; // birth rate
    double beta  = 0.0; // transmission rate
    double nu    = 0.0; // recovery rate
    double delta = 0.0; // disease-induced mortality
    double p     = 0.0; // vertically infected fraction of newborns
    double alpha = 0.0; // immunity loss
    MortalityFn mortality;

    RawParams raw() const;
};

/// Checks every model hypothesis and returns the validated parameters.
/// Throws ValidationError listing all violations (NonFinite, NonPositiveRate,
/// POutOfRange, BirthBelowBaselineMortality).
ModelParams validate_params(const RawParams& raw);

} // namespace sirsvp
