#include "cli.hpp"
#include "serialize.hpp"

#include "sirsvp/equilibria.hpp"
#include "sirsvp/error.hpp"
#include "sirsvp/version.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <algorithm>
#include <map>
#include <sstream>

namespace sirsvp::cli
{

namespace
{

std::string utc_timestamp()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string_view command_name(Command c)
{
    switch (c) {
    case Command::Analyze:
        return "analyze";
    case Command::Simulate:
        return "simulate";
    case Command::Verify:
        return "verify";
    case Command::Sweep:
        return "sweep";
    }
    return "unknown";
}

/// Options shared by every subcommand, bound to temporaries and copied into
/// the RunConfig after parsing.
struct CommonFlags
{
    std::string params_file;
    std::string format;
    std::string out;
    bool no_meta = false;
    std::map<std::string, double> values;
    std::map<std::string, CLI::Option*> options;
    CLI::Option* params_opt = nullptr;
    CLI::Option* format_opt = nullptr;
    CLI::Option* out_opt    = nullptr;

    void attach(CLI::App* sub)
    {
        params_opt = sub->add_option("--params", params_file, "Flat JSON parameter file");
        for (auto name : raw_param_names) {
            const std::string key(name);
            values[key]  = 0.0;
            options[key] = sub->add_option("--" + key, values[key], "Parameter " + key + " (overrides the file)");
        }
        format_opt = sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
        out_opt    = sub->add_option("--out", out, "Write output to this file instead of stdout");
        sub->add_flag("--no-meta", no_meta, "Omit the metadata block (tool version, timestamp)");
    }

    void apply(RunConfig& cfg, Format default_format) const
    {
        if (params_opt->count() > 0)
            cfg.params_file = params_file;
        for (auto name : raw_param_names) {
            const std::string key(name);
            if (options.at(key)->count() > 0)
                cfg.inline_params.emplace_back(key, values.at(key));
        }
        cfg.format = default_format;
        if (format_opt->count() > 0)
            cfg.format = format == "csv" ? Format::Csv : Format::Json;
        if (out_opt->count() > 0)
            cfg.out_path = out;
        cfg.no_meta = no_meta;
    }
};

unsigned parse_tasks(const std::string& text)
{
    unsigned tasks = 0;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "equilibria")
            tasks |= sweep_task::equilibria;
        else if (item == "regime")
            tasks |= sweep_task::regime;
        else if (item == "fate")
            tasks |= sweep_task::fate;
        else if (item == "probe")
            tasks |= sweep_task::probe;
        else if (item == "all")
            tasks |= sweep_task::all;
        else
            throw UsageError("--tasks: unknown task '" + item + "'");
    }
    if (tasks == 0)
        throw UsageError("--tasks: at least one task is required");
    return tasks;
}

unsigned threads_from_env()
{
    const char* env = std::getenv("SIRSVP_THREADS");
    if (!env || !*env)
        return 0;
    char* end          = nullptr;
    const long value   = std::strtol(env, &end, 10);
    if (*end != '\0' || value < 0)
        throw UsageError(std::string("SIRSVP_THREADS must be a non-negative integer, got '") + env + "'");
    return static_cast<unsigned>(value);
}

} // namespace

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out)
{
    CLI::App app{"Analysis toolkit for an SIRS epidemic model with varying population", "sirsvp"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));

    RunConfig cfg;

    auto* analyze  = app.add_subcommand("analyze", "Derived quantities, equilibria, stability regime, population fate");
    auto* simulate = app.add_subcommand("simulate", "Integrate the full, fraction or reduced system");
    auto* verify   = app.add_subcommand("verify", "Grid-check the Lyapunov certificate and Omega invariance");
    auto* sweep    = app.add_subcommand("sweep", "One-parameter sweep of equilibria, regime and fate");

    CommonFlags analyze_flags, simulate_flags, verify_flags, sweep_flags;
    analyze_flags.attach(analyze);
    simulate_flags.attach(simulate);
    verify_flags.attach(verify);
    sweep_flags.attach(sweep);

    double constant_mu = 0.0;
    auto* constant_mu_opt =
        analyze->add_option("--constant-mu", constant_mu, "Also report the constant-N identity residual at this mortality");

    // simulate
    std::string system = "reduced";
    simulate->add_option("--system", system, "full | fraction | reduced")
        ->check(CLI::IsMember({"full", "fraction", "reduced"}));
    double x0 = 0, y0 = 0, z0 = 0, s0 = 0, i0 = 0, r0fr = 0, n0 = 0;
    auto* x0_opt = simulate->add_option("--x0", x0, "Initial susceptible count (full)");
    auto* y0_opt = simulate->add_option("--y0", y0, "Initial infectious count (full)");
    auto* z0_opt = simulate->add_option("--z0", z0, "Initial removed count (full)");
    auto* s0_opt = simulate->add_option("--s0", s0, "Initial S fraction (fraction)");
    auto* i0_opt = simulate->add_option("--i0", i0, "Initial I fraction (fraction, reduced)");
    auto* r0_opt = simulate->add_option("--r0fr", r0fr, "Initial R fraction (fraction, reduced)");
    auto* n0_opt = simulate->add_option("--n0", n0, "Initial population carried with the fraction system");
    simulate->add_option("--t-end", cfg.simulate.t_end, "Integration horizon");
    simulate->add_option("--rtol", cfg.simulate.rtol, "Relative tolerance");
    simulate->add_option("--atol", cfg.simulate.atol, "Absolute tolerance");
    simulate->add_option("--max-steps", cfg.simulate.max_steps, "Step budget");
    simulate->add_option("--sample-dt", cfg.simulate.sample_interval, "Uniform output spacing (0: every step)");
    simulate->add_flag("--lyapunov", cfg.simulate.lyapunov_column, "Append the Lyapunov function value column");

    // verify
    std::string region = "auto";
    verify->add_option("--region", region, "auto | full | omega")->check(CLI::IsMember({"auto", "full", "omega"}));
    verify->add_option("--resolution", cfg.verify.certify.resolution, "Grid points per axis")
        ->check(CLI::Range(2, 100000));
    verify->add_option("--exclusion-radius", cfg.verify.certify.exclusion_radius,
                       "Ball around the equilibrium where only dL <= 0 is required");
    verify->add_option("--max-violations", cfg.verify.certify.max_violations, "Violations listed in the report");

    // sweep
    std::string tasks = "equilibria,regime,fate";
    sweep->add_option("--param", cfg.sweep.parameter, "Swept parameter")
        ->required()
        ->check(CLI::IsMember({"b", "beta", "nu", "delta", "p", "alpha", "mu0", "k"}));
    sweep->add_option("--lo", cfg.sweep.lo, "Range start")->required();
    sweep->add_option("--hi", cfg.sweep.hi, "Range end")->required();
    sweep->add_option("--points", cfg.sweep.points, "Number of grid points")->required()->check(CLI::PositiveNumber);
    sweep->add_option("--tasks", tasks, "Comma list of equilibria, regime, fate, probe (or all)");
    sweep->add_option("--probe-t-end", cfg.sweep.probe.t_end, "Horizon of the convergence probe");
    sweep->add_option("--probe-eps", cfg.sweep.probe.eps, "Convergence radius of the probe");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    }
    catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    }
    catch (const CLI::CallForVersion&) {
        out << version << '\n';
        return std::nullopt;
    }
    catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (analyze->parsed()) {
        cfg.command = Command::Analyze;
        analyze_flags.apply(cfg, Format::Json);
        if (constant_mu_opt->count() > 0)
            cfg.constant_mu = constant_mu;
    }
    else if (simulate->parsed()) {
        cfg.command = Command::Simulate;
        simulate_flags.apply(cfg, Format::Csv);
        auto& so = cfg.simulate;
        so.system = system == "full" ? System::Full : system == "fraction" ? System::Fraction : System::Reduced;
        auto take = [](CLI::Option* opt, double v) { return opt->count() > 0 ? std::optional<double>(v) : std::nullopt; };
        so.x0 = take(x0_opt, x0);
        so.y0 = take(y0_opt, y0);
        so.z0 = take(z0_opt, z0);
        so.s0 = take(s0_opt, s0);
        so.i0 = take(i0_opt, i0);
        so.r0 = take(r0_opt, r0fr);
        so.n0 = take(n0_opt, n0);
    }
    else if (verify->parsed()) {
        cfg.command = Command::Verify;
        verify_flags.apply(cfg, Format::Json);
        cfg.verify.region = region == "full" ? RegionChoice::Full
                            : region == "omega" ? RegionChoice::Omega
                                                : RegionChoice::Auto;
    }
    else {
        cfg.command = Command::Sweep;
        sweep_flags.apply(cfg, Format::Csv);
        cfg.sweep.tasks = parse_tasks(tasks);
    }
    cfg.threads       = threads_from_env();
    cfg.sweep.threads = cfg.verify.certify.threads = cfg.threads;
    return cfg;
}

RawParams load_params(const RunConfig& cfg, std::optional<std::string_view> optional_key)
{
    RawParams raw;
    std::vector<std::string> provided;
    if (cfg.params_file) {
        std::ifstream in(*cfg.params_file);
        if (!in) {
            throw IoError("cannot open parameter file '" + *cfg.params_file + "'");
        }
        json j;
        try {
            j = json::parse(in);
        }
        catch (const json::parse_error& e) {
            throw UsageError("parameter file '" + *cfg.params_file + "' is not valid JSON: " + e.what());
        }
        provided = merge_params(j, raw);
    }
    for (const auto& [key, value] : cfg.inline_params) {
        raw.*(*raw_param_field(key)) = value;
        provided.push_back(key);
    }
    for (auto name : raw_param_names) {
        if (optional_key && name == *optional_key)
            continue;
        if (std::find(provided.begin(), provided.end(), name) == provided.end()) {
            throw UsageError("missing parameter '" + std::string(name) + "' (use --params FILE or --" +
                             std::string(name) + ")");
        }
    }
    return raw;
}

namespace
{

json meta_json(const RunConfig& cfg)
{
    return {{"tool", "sirsvp"}, {"version", version}, {"command", command_name(cfg.command)},
            {"timestamp", utc_timestamp()}};
}

std::vector<std::string> meta_lines(const RunConfig& cfg, const RawParams& raw)
{
    if (cfg.no_meta)
        return {};
    return {"tool=sirsvp " + std::string(version), "command=" + std::string(command_name(cfg.command)),
            "timestamp=" + utc_timestamp(), "params=" + to_json(raw).dump()};
}

std::string render_json(const RunConfig& cfg, json body)
{
    if (!cfg.no_meta)
        body["meta"] = meta_json(cfg);
    return body.dump(2) + "\n";
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out)
{
    if (!cfg.out_path) {
        out << text;
        return;
    }
    std::ofstream file(*cfg.out_path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open output file '" + *cfg.out_path + "'");
    }
    file << text;
    if (!file) {
        throw IoError("failed writing output file '" + *cfg.out_path + "'");
    }
}

void write_key_values(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& rows)
{
    os << "key,value\n";
    for (const auto& [k, v] : rows)
        os << k << ',' << v << '\n';
}

std::string opt_cell(const std::optional<double>& v)
{
    return v ? format_double(*v) : std::string();
}

int do_analyze(const RunConfig& cfg, std::ostream& out)
{
    const RawParams raw     = load_params(cfg);
    const ModelParams par   = validate_params(raw);
    const auto q            = derived_quantities(par);
    const auto regime       = classify_regime(par);
    const double n_star     = par.mortality.carrying_capacity(par.b);
    std::optional<PopulationFate> fate;
    if (regime.endemic)
        fate = population_fate(par);
    std::optional<double> constant_residual;
    if (cfg.constant_mu)
        constant_residual = check_constant_population_condition(par, *cfg.constant_mu);

    if (cfg.format == Format::Json) {
        json body = {{"params", to_json(raw)},
                     {"derived", to_json(q)},
                     {"disease_free", to_json(disease_free_equilibrium())},
                     {"endemic", regime.endemic ? to_json(*regime.endemic) : json(nullptr)},
                     {"regime", to_json(regime)},
                     {"population_fate", fate ? to_json(*fate) : json(nullptr)},
                     {"carrying_capacity", n_star}};
        // flattened copies of the headline numbers
        body["r0"]     = q.r0;
        body["i_e"]    = regime.endemic ? json(regime.endemic->I) : json(nullptr);
        body["regime"]["regime"] = to_string(regime.regime);
        if (constant_residual)
            body["constant_population_residual"] = {{"mu", *cfg.constant_mu}, {"residual", *constant_residual}};
        emit(cfg, render_json(cfg, std::move(body)), out);
        return static_cast<int>(ExitCode::Ok);
    }

    std::ostringstream os;
    for (const auto& line : meta_lines(cfg, raw))
        os << "# " << line << '\n';
    std::vector<std::pair<std::string, std::string>> rows{
        {"gamma", format_double(q.gamma)},
        {"r0", format_double(q.r0)},
        {"rho", format_double(q.rho)},
        {"i_u", opt_cell(q.i_u)},
        {"s_e", regime.endemic ? format_double(regime.endemic->S) : ""},
        {"i_e", regime.endemic ? format_double(regime.endemic->I) : ""},
        {"r_e", regime.endemic ? format_double(regime.endemic->R) : ""},
        {"regime", std::string(to_string(regime.regime))},
        {"certificate_basis", std::string(to_string(regime.basis))},
        {"fate", fate ? std::string(to_string(fate->fate)) : ""},
        {"n_e", fate ? opt_cell(fate->n_e) : ""},
        {"threshold_gap", fate ? format_double(fate->threshold_gap) : ""},
        {"carrying_capacity", format_double(n_star)},
    };
    if (constant_residual)
        rows.emplace_back("constant_population_residual", format_double(*constant_residual));
    write_key_values(os, rows);
    emit(cfg, os.str(), out);
    return static_cast<int>(ExitCode::Ok);
}

InitialState initial_state(const SimulateOptions& so)
{
    auto need = [](const std::optional<double>& v, const char* flag, const char* system) {
        if (!v)
            throw UsageError(std::string("--system ") + system + " requires " + flag);
        return *v;
    };
    switch (so.system) {
    case System::Full: {
        FullState s{need(so.x0, "--x0", "full"), need(so.y0, "--y0", "full"), need(so.z0, "--z0", "full"), 0.0};
        s.N = s.X + s.Y + s.Z;
        return s;
    }
    case System::Fraction: {
        FractionState s{need(so.s0, "--s0", "fraction"), need(so.i0, "--i0", "fraction"),
                        need(so.r0, "--r0fr", "fraction"), so.n0};
        return s;
    }
    case System::Reduced:
        return ReducedState{need(so.i0, "--i0", "reduced"), need(so.r0, "--r0fr", "reduced")};
    }
    throw UsageError("unknown system");
}

/// L_EE when an endemic state exists (blank where I <= 0), L_DFE = I otherwise.
std::pair<std::string, std::vector<double>> lyapunov_column(const Trajectory& traj, const ModelParams& par)
{
    const auto endemic = endemic_equilibrium(par);
    std::vector<double> values;
    values.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        double I = 0.0, R = 0.0;
        switch (traj.system) {
        case System::Full:
            I = s.state[1] / s.state[3];
            R = s.state[2] / s.state[3];
            break;
        case System::Fraction:
            I = s.state[1];
            R = s.state[2];
            break;
        case System::Reduced:
            I = s.state[0];
            R = s.state[1];
            break;
        }
        if (endemic) {
            values.push_back(I > 0.0 ? l_ee({I, R}, *endemic, par) : std::nan(""));
        }
        else {
            values.push_back(l_dfe({1.0 - I - R, I, R, std::nullopt}));
        }
    }
    return {endemic ? "L_EE" : "L_DFE", std::move(values)};
}

int do_simulate(const RunConfig& cfg, std::ostream& out)
{
    const RawParams raw   = load_params(cfg);
    const ModelParams par = validate_params(raw);

    IntegrationSpec spec;
    spec.initial         = initial_state(cfg.simulate);
    spec.t_end           = cfg.simulate.t_end;
    spec.rtol            = cfg.simulate.rtol;
    spec.atol            = cfg.simulate.atol;
    spec.max_steps       = cfg.simulate.max_steps;
    spec.sample_interval = cfg.simulate.sample_interval;

    const Trajectory traj = integrate(spec, par);

    std::optional<std::string> extra_name;
    std::vector<double> extra;
    if (cfg.simulate.lyapunov_column) {
        auto [name, values] = lyapunov_column(traj, par);
        extra_name          = name;
        extra               = std::move(values);
    }

    if (cfg.format == Format::Json) {
        json body      = trajectory_json(traj, extra_name, extra);
        body["params"] = to_json(raw);
        emit(cfg, render_json(cfg, std::move(body)), out);
        return static_cast<int>(ExitCode::Ok);
    }
    std::ostringstream os;
    auto meta = meta_lines(cfg, raw);
    if (!cfg.no_meta) {
        meta.push_back("system=" + std::string(to_string(traj.system)));
        meta.push_back("terminal=" + std::string(to_string(traj.terminal)));
    }
    write_trajectory_csv(os, traj, meta, extra_name, extra);
    emit(cfg, os.str(), out);
    return static_cast<int>(ExitCode::Ok);
}

int do_verify(const RunConfig& cfg, std::ostream& out)
{
    const RawParams raw   = load_params(cfg);
    const ModelParams par = validate_params(raw);
    const auto regime     = classify_regime(par);

    CertificateReport certificate;
    std::optional<OmegaInvarianceReport> omega;
    if (!regime.endemic) {
        certificate = certify_dfe(par, cfg.verify.certify);
    }
    else {
        Region region = Region::FullSimplex;
        switch (cfg.verify.region) {
        case RegionChoice::Full:
            region = Region::FullSimplex;
            break;
        case RegionChoice::Omega:
            region = Region::Omega;
            break;
        case RegionChoice::Auto:
            region = regime.basis == CertificateBasis::IuAtMostRho ? Region::Omega : Region::FullSimplex;
            break;
        }
        certificate = certify(par, *regime.endemic, region, cfg.verify.certify);
        omega       = omega_invariance_check(par, *regime.endemic);
    }

    if (cfg.format == Format::Json) {
        json body = {{"params", to_json(raw)},
                     {"regime", to_json(regime)},
                     {"certificate", to_json(certificate)},
                     {"omega_invariance", omega ? to_json(*omega) : json(nullptr)},
                     {"result", certificate.pass ? "pass" : "fail"}};
        emit(cfg, render_json(cfg, std::move(body)), out);
    }
    else {
        std::ostringstream os;
        for (const auto& line : meta_lines(cfg, raw))
            os << "# " << line << '\n';
        std::vector<std::pair<std::string, std::string>> rows{
            {"regime", std::string(to_string(regime.regime))},
            {"certificate", std::string(to_string(certificate.kind))},
            {"region", std::string(to_string(certificate.region))},
            {"resolution", std::to_string(certificate.resolution)},
            {"evaluated", std::to_string(certificate.evaluated)},
            {"min_l", format_double(certificate.min_l)},
            {"max_orbital", format_double(certificate.max_orbital)},
            {"violation_count", std::to_string(certificate.violation_count)},
            {"omega_predicate", omega ? (omega->predicate ? "true" : "false") : ""},
            {"omega_margin", omega ? format_double(omega->margin) : ""},
            {"result", certificate.pass ? "pass" : "fail"},
        };
        write_key_values(os, rows);
        emit(cfg, os.str(), out);
    }
    return static_cast<int>(certificate.pass ? ExitCode::Ok : ExitCode::CertificateFailed);
}

int do_sweep(const RunConfig& cfg, std::ostream& out)
{
    SweepSpec spec = cfg.sweep;
    spec.base      = load_params(cfg, spec.parameter);
    const SweepResult result = run_sweep(spec);

    if (cfg.format == Format::Json) {
        json rows = json::array();
        for (const auto& row : result.rows)
            rows.push_back(to_json(row));
        json body = {{"params", to_json(result.meta.base)},
                     {"parameter", result.meta.parameter},
                     {"lo", result.meta.lo},
                     {"hi", result.meta.hi},
                     {"points", result.meta.points},
                     {"skipped", result.skipped},
                     {"rows", rows}};
        emit(cfg, render_json(cfg, std::move(body)), out);
        return static_cast<int>(ExitCode::Ok);
    }
    std::ostringstream os;
    auto meta = meta_lines(cfg, result.meta.base);
    if (!cfg.no_meta)
        meta.push_back("parameter=" + result.meta.parameter);
    write_sweep_csv(os, result, meta);
    emit(cfg, os.str(), out);
    return static_cast<int>(ExitCode::Ok);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    try {
        const auto cfg = parse_args(args, out);
        if (!cfg)
            return static_cast<int>(ExitCode::Ok);
        switch (cfg->command) {
        case Command::Analyze:
            return do_analyze(*cfg, out);
        case Command::Simulate:
            return do_simulate(*cfg, out);
        case Command::Verify:
            return do_verify(*cfg, out);
        case Command::Sweep:
            return do_sweep(*cfg, out);
        }
    }
    catch (const UsageError& e) {
        err << "sirsvp: " << e.what() << '\n';
        return static_cast<int>(ExitCode::ValidationError);
    }
    catch (const IoError& e) {
        err << "sirsvp: " << e.what() << '\n';
        return static_cast<int>(ExitCode::IoError);
    }
    catch (const IntegrationError& e) {
        err << "sirsvp: integration failed: " << e.what() << '\n';
        return static_cast<int>(ExitCode::IoError);
    }
    catch (const Error& e) {
        err << "sirsvp: " << to_string(e.code()) << ": " << e.what() << '\n';
        return static_cast<int>(e.code() == ErrorCode::Internal ? ExitCode::IoError : ExitCode::ValidationError);
    }
    return static_cast<int>(ExitCode::IoError);
}

} // namespace sirsvp::cli
