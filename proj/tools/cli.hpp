#pragma once

#include "sirsvp/integrator.hpp"
#include "sirsvp/lyapunov.hpp"
#include "sirsvp/params.hpp"
#include "sirsvp/sweep.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <string>
#include <vector>

namespace sirsvp::cli
{

enum class ExitCode : int
{
    Ok               = 0,
    IoError          = 1,
    ValidationError  = 2,
    CertificateFailed = 3,
};

enum class Command
{
    Analyze,
    Simulate,
    Verify,
    Sweep,
};

enum class Format
{
    Json,
    Csv,
};

enum class RegionChoice
{
    Auto,
    Full,
    Omega,
};

struct SimulateOptions
{
    System system = System::Reduced;
    std::optional<double> x0, y0, z0;
    std::optional<double> s0, i0, r0, n0;
    double t_end           = 100.0;
    double rtol            = 1e-8;
    double atol            = 1e-10;
    std::size_t max_steps  = 1'000'000;
    double sample_interval = 0.0;
    bool lyapunov_column   = false;
};

struct VerifyOptions
{
    RegionChoice region = RegionChoice::Auto;
    CertifyOptions certify;
};

struct RunConfig
{
    Command command = Command::Analyze;
    std::optional<std::string> params_file;
    /// Parameter values given inline; they override the file.
    std::vector<std::pair<std::string, double>> inline_params;
    Format format = Format::Json;
    std::optional<std::string> out_path;
    bool no_meta     = false;
    unsigned threads = 0;
    /// analyze: also evaluate the constant-population identity at this mortality.
    std::optional<double> constant_mu;

    SimulateOptions simulate;
    VerifyOptions verify;
    SweepSpec sweep;
};

/// Thrown for usage problems (bad flags, missing parameters); maps to exit 2.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when reading or writing a file fails; maps to exit 1.
class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Parses argv (without the program name). Throws UsageError. Returns nullopt
/// when help was requested and printed to `out`.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out);

/// Merges the parameter file (flat JSON object with keys b, beta, nu, delta,
/// p, alpha, mu0, k) with inline flags. Every key except `optional_key` must
/// be provided. Throws UsageError or IoError.
RawParams load_params(const RunConfig& config, std::optional<std::string_view> optional_key = std::nullopt);

/// Full command-line entry point; returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sirsvp::cli
