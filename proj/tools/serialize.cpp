#include "serialize.hpp"
#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace sirsvp::cli
{

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace
{

json number_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

template <class T>
json optional_number(const std::optional<T>& v)
{
    return v ? number_or_null(*v) : json(nullptr);
}

std::string optional_cell(const std::optional<double>& v)
{
    return v ? format_double(*v) : std::string();
}

void write_meta(std::ostream& os, const std::vector<std::string>& meta_lines)
{
    for (const auto& line : meta_lines)
        os << "# " << line << '\n';
}

} // namespace

json to_json(const RawParams& p)
{
    json j = json::object();
    for (auto name : raw_param_names)
        j[std::string(name)] = p.*(*raw_param_field(name));
    return j;
}

json to_json(const DerivedQuantities& q)
{
    return {{"gamma", q.gamma}, {"r0", q.r0}, {"rho", q.rho}, {"i_u", optional_number(q.i_u)}};
}

json to_json(const Equilibrium& eq)
{
    return {{"kind", eq.kind == EquilibriumKind::Endemic ? "endemic" : "disease-free"},
            {"s", eq.S},
            {"i", eq.I},
            {"r", eq.R},
            {"residuals", {eq.residuals[0], eq.residuals[1]}}};
}

json to_json(const RegimeReport& report)
{
    return {{"r0", report.r0},
            {"regime", to_string(report.regime)},
            {"certificate_basis", to_string(report.basis)},
            {"endemic", report.endemic ? to_json(*report.endemic) : json(nullptr)}};
}

json to_json(const PopulationFate& fate)
{
    return {{"fate", to_string(fate.fate)},
            {"n_e", optional_number(fate.n_e)},
            {"threshold_gap", fate.threshold_gap}};
}

json to_json(const CertificateReport& r)
{
    json violations = json::array();
    for (const auto& v : r.violations)
        violations.push_back({{"i", v.I}, {"r", v.R}, {"l", v.L}, {"dl", v.dL}});
    return {{"kind", to_string(r.kind)},
            {"region", to_string(r.region)},
            {"i_max", r.i_max},
            {"resolution", r.resolution},
            {"exclusion_radius", r.exclusion_radius},
            {"evaluated", r.evaluated},
            {"min_l", number_or_null(r.min_l)},
            {"max_orbital", number_or_null(r.max_orbital)},
            {"result", r.pass ? "pass" : "fail"},
            {"violation_count", r.violation_count},
            {"violations", violations}};
}

json to_json(const OmegaInvarianceReport& r)
{
    json samples = json::array();
    for (const auto& s : r.samples)
        samples.push_back({{"r", s.R}, {"di", s.dI}});
    return {{"trivially_invariant", r.trivially_invariant},
            {"predicate_iu_le_rho", r.predicate},
            {"margin", r.margin},
            {"max_boundary_flux", r.samples.empty() ? json(nullptr) : number_or_null(r.max_flux)},
            {"boundary_nonpositive", r.boundary_nonpositive},
            {"attractivity_bound", r.attractivity_bound},
            {"boundary_samples", samples}};
}

json to_json(const SweepRow& row)
{
    json j = {{"value", row.value}, {"valid", row.valid}};
    if (!row.valid) {
        j["note"] = row.skip_reason;
        return j;
    }
    if (row.derived)
        j["derived"] = to_json(*row.derived);
    j["endemic"] = row.endemic ? to_json(*row.endemic) : json(nullptr);
    if (row.regime) {
        j["regime"]            = to_string(row.regime->regime);
        j["certificate_basis"] = to_string(row.regime->basis);
    }
    j["fate"] = row.fate ? to_json(*row.fate) : json(nullptr);
    j["probe"] = {{"status", to_string(row.probe.status)},
                  {"attractor", row.probe.attractor},
                  {"time", optional_number(row.probe.time)}};
    return j;
}

std::vector<std::string> merge_params(const json& j, RawParams& params)
{
    if (!j.is_object()) {
        throw UsageError("parameter file must contain a flat JSON object");
    }
    std::vector<std::string> set;
    for (const auto& [key, value] : j.items()) {
        const auto field = raw_param_field(key);
        if (!field) {
            throw UsageError("unknown parameter key '" + key + "'");
        }
        if (!value.is_number()) {
            throw UsageError("parameter '" + key + "' must be a number");
        }
        params.*(*field) = value.get<double>();
        set.push_back(key);
    }
    return set;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& meta_lines,
                          const std::optional<std::string>& extra_name, const std::vector<double>& extra)
{
    write_meta(os, meta_lines);
    os << 't';
    for (const auto& c : traj.components)
        os << ',' << c;
    if (extra_name)
        os << ',' << *extra_name;
    os << '\n';
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const auto& s = traj.samples[k];
        os << format_double(s.t);
        for (double v : s.state)
            os << ',' << format_double(v);
        if (extra_name)
            os << ',' << (k < extra.size() && !std::isnan(extra[k]) ? format_double(extra[k]) : std::string());
        os << '\n';
    }
}

json trajectory_json(const Trajectory& traj, const std::optional<std::string>& extra_name,
                     const std::vector<double>& extra)
{
    json columns = json::array({"t"});
    for (const auto& c : traj.components)
        columns.push_back(c);
    if (extra_name)
        columns.push_back(*extra_name);

    json rows = json::array();
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        json row = json::array({traj.samples[k].t});
        for (double v : traj.samples[k].state)
            row.push_back(v);
        if (extra_name)
            row.push_back(k < extra.size() ? number_or_null(extra[k]) : json(nullptr));
        rows.push_back(std::move(row));
    }
    return {{"system", to_string(traj.system)},
            {"terminal", {{"event", to_string(traj.terminal)}, {"time", optional_number(traj.terminal_time)}}},
            {"stats",
             {{"accepted", traj.stats.accepted},
              {"rejected", traj.stats.rejected},
              {"evaluations", traj.stats.evaluations},
              {"projections", traj.stats.projections},
              {"max_simplex_drift", traj.stats.max_simplex_drift}}},
            {"columns", columns},
            {"samples", rows}};
}

void write_sweep_csv(std::ostream& os, const SweepResult& result, const std::vector<std::string>& meta_lines)
{
    write_meta(os, meta_lines);
    for (std::size_t c = 0; c < sweep_csv_columns.size(); ++c)
        os << (c ? "," : "") << sweep_csv_columns[c];
    os << '\n';
    for (const auto& row : result.rows) {
        std::vector<std::string> cells(sweep_csv_columns.size());
        cells[0] = format_double(row.value);
        if (row.valid && row.derived) {
            cells[1] = format_double(row.derived->gamma);
            cells[2] = format_double(row.derived->r0);
            cells[3] = format_double(row.derived->rho);
            cells[4] = optional_cell(row.derived->i_u);
        }
        if (row.endemic) {
            cells[5] = format_double(row.endemic->I);
            cells[6] = format_double(row.endemic->R);
        }
        if (row.regime)
            cells[7] = std::string(to_string(row.regime->regime));
        if (row.fate) {
            cells[8] = std::string(to_string(row.fate->fate));
            cells[9] = optional_cell(row.fate->n_e);
        }
        if (row.valid) {
            cells[10] = std::string(to_string(row.probe.status));
            cells[11] = optional_cell(row.probe.time);
        }
        else {
            cells[12] = "skipped: " + row.skip_reason;
        }
        for (std::size_t c = 0; c < cells.size(); ++c)
            os << (c ? "," : "") << cells[c];
        os << '\n';
    }
}

} // namespace sirsvp::cli
