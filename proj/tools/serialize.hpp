#pragma once

#include "sirsvp/equilibria.hpp"
#include "sirsvp/integrator.hpp"
#include "sirsvp/lyapunov.hpp"
#include "sirsvp/params.hpp"
#include "sirsvp/sweep.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sirsvp::cli
{

using nlohmann::json;

/// Fixed 17-significant-digit rendering used for every CSV float.
std::string format_double(double value);

json to_json(const RawParams& params);
json to_json(const DerivedQuantities& q);
json to_json(const Equilibrium& eq);
json to_json(const RegimeReport& report);
json to_json(const PopulationFate& fate);
json to_json(const CertificateReport& report);
json to_json(const OmegaInvarianceReport& report);
json to_json(const SweepRow& row);

/// Keys present in `j` are copied into `params`; other keys are rejected.
/// Returns the names that were set. Throws UsageError.
std::vector<std::string> merge_params(const json& j, RawParams& params);

/// Header line "t,<components>[,<extra_name>]" followed by one row per sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& meta_lines,
                          const std::optional<std::string>& extra_name, const std::vector<double>& extra);

json trajectory_json(const Trajectory& traj, const std::optional<std::string>& extra_name,
                     const std::vector<double>& extra);

inline const std::vector<std::string> sweep_csv_columns{"value", "gamma",  "r0",    "rho",        "i_u",
                                                        "i_e",   "r_e",    "regime", "fate",      "n_e",
                                                        "probe", "probe_time", "note"};

void write_sweep_csv(std::ostream& os, const SweepResult& result, const std::vector<std::string>& meta_lines);

} // namespace sirsvp::cli
