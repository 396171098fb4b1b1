#include "swarmcrit/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "swarmcrit/benchfns.hpp"
#include "swarmcrit/errors.hpp"
#include "swarmcrit/harness.hpp"
#include "swarmcrit/io.hpp"
#include "swarmcrit/pso.hpp"
#include "swarmcrit/stability.hpp"

namespace swarmcrit {

namespace {

// Named result files of one invocation. An empty path stands for the
// caller's output stream.
using Outputs = std::vector<std::pair<std::string, std::string>>;

// Options that only choose destinations or scheduling; left out of the
// config echo so that results do not depend on them.
bool echoed(const CLI::Option* opt) {
    const std::string& name = opt->get_name();
    return name != "--help" && name != "--output" && name != "--jobs" && name.find("-output") == std::string::npos &&
           name != "--trace";
}

std::vector<std::pair<std::string, std::string>> config_echo(const CLI::App& sub) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const CLI::Option* opt : sub.get_options()) {
        if (!echoed(opt)) continue;
        std::string value;
        if (opt->count() > 0) {
            for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
        } else {
            value = opt->get_default_str();
        }
        std::string key = opt->get_name();
        while (!key.empty() && key.front() == '-') key.erase(key.begin());
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

Metadata metadata_of(const CLI::App& sub) {
    Metadata meta;
    meta.add("command", sub.get_name());
    for (auto& [k, v] : config_echo(sub)) meta.add(k, v);
    return meta;
}

nlohmann::json json_header(const CLI::App& sub) {
    nlohmann::json j;
    j["tool"] = tool_version();
    j["command"] = sub.get_name();
    nlohmann::json cfg = nlohmann::json::object();
    for (auto& [k, v] : config_echo(sub)) cfg[k] = v;
    j["config"] = cfg;
    return j;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string render_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct GridFlags {
    double lo;
    double hi;
    double step;
};

void add_omega_grid(CLI::App* sub, GridFlags& g) {
    sub->add_option("--omega-min", g.lo, "Smallest inertia weight of the grid");
    sub->add_option("--omega-max", g.hi, "Largest inertia weight of the grid");
    sub->add_option("--step", g.step, "Grid spacing in omega")->check(CLI::PositiveNumber);
}

void add_ratio(CLI::App* sub, std::string& ratio, const std::string& flag) {
    sub->add_option(flag, ratio, "Split of alpha: equal (alpha1 = alpha2) or social-only (alpha1 = 0)")
        ->check(CLI::IsMember({"equal", "social", "social-only"}));
}

struct LyapunovArgs {
    double omega = 0.0;
    double alpha = 0.0;
    std::string split = "equal";
    LyapunovBudget budget{};
    std::optional<double> pinned_r;
    bool pair = false;
    std::uint64_t seed = 1;
};

struct CurveArgs {
    std::string ratio = "equal";
    GridFlags grid{-1.1, 1.1, 0.1};
    double tolerance = 0.01;
    std::string method = "lyapunov";
    BisectionOptions bisect{};
    std::uint64_t seed = 1;
    CurveArgs() { bisect.lyapunov = LyapunovBudget{}; }
};

struct StationaryArgs {
    double omega = 0.0;
    double alpha = 0.0;
    std::string split = "equal";
    StationaryOptions options{};
    std::uint64_t seed = 1;
};

struct EscapeArgs {
    double omega = 0.0;
    double alpha = 0.0;
    std::string split = "equal";
    EscapeOptions options{};
    std::uint64_t seed = 1;
};

struct OptimizeArgs {
    std::string function = "sphere";
    std::size_t dim = 10;
    std::uint64_t suite_seed = 1;
    SwarmParams params{};
    std::size_t iterations = 2000;
    double lo = -100.0;
    double hi = 100.0;
    std::uint64_t seed = 1;
    std::string trace;
};

struct SweepArgs {
    std::string config;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    std::string aggregate_output;
    std::string manifest_output;
    // Overrides applied on top of the config file, keyed like the file.
    std::map<std::string, std::string> overrides;
};

struct RegionArgs {
    std::string sweep;
    std::string curve;
    double quantile = 0.1;
};

struct ScalingArgs {
    ScalingConfig config{};
    GridFlags grid{-1.1, 1.1, 0.1};
    double tolerance = 0.01;
    std::string ratio = "equal";
    BisectionOptions bisect{};
    std::uint64_t seed = 1;
};

void add_law_flags(CLI::App* sub, double& omega, double& alpha, std::string& split) {
    sub->add_option("--omega", omega, "Inertia weight")->required();
    sub->add_option("--alpha", alpha, "Total attraction alpha = alpha1 + alpha2")->required()->check(
        CLI::PositiveNumber);
    add_ratio(sub, split, "--split");
}

Outputs run_lyapunov(const CLI::App& sub, const LyapunovArgs& a) {
    const MixtureWeight w = weight_for(parse_ratio(a.split), a.alpha);
    const CoefficientLaw law = a.pinned_r ? CoefficientLaw::pinned(a.alpha, *a.pinned_r) : CoefficientLaw(w);
    nlohmann::json j = json_header(sub);
    j["seed"] = a.seed;
    if (a.pair) {
        const LyapunovPair p = lyapunov_pair(a.omega, law, a.budget, a.seed);
        j.update(to_json(p.top));
        nlohmann::json second = to_json(p.second);
        if (std::isinf(p.second.value)) second["value"] = "-inf";
        j["second"] = second;
    } else {
        j.update(to_json(lyapunov_exponent(a.omega, law, a.budget, a.seed)));
    }
    return {{"", render_json(j)}};
}

Outputs run_curve(const CLI::App& sub, const CurveArgs& a) {
    const auto grid = make_grid(a.grid.lo, a.grid.hi, a.grid.step);
    const CurveMethod method =
        a.method == "escape" ? CurveMethod::EscapeEquality : CurveMethod::LyapunovBisection;
    const CriticalCurve curve = critical_curve(grid, parse_ratio(a.ratio), a.tolerance, a.seed, a.bisect, method);
    std::ostringstream os;
    write_curve_csv(os, curve, metadata_of(sub));
    return {{"", os.str()}};
}

Outputs run_stationary(const CLI::App& sub, const StationaryArgs& a) {
    const MixtureWeight w = weight_for(parse_ratio(a.split), a.alpha);
    const AngularHistogram h = stationary_distribution(a.omega, w, a.options, a.seed);
    Metadata meta = metadata_of(sub);
    if (h.bins() % 4 == 0) meta.add("folded_mode_rad", folded_mode(h));
    meta.add("antipodal_asymmetry", antipodal_asymmetry(h));
    std::ostringstream os;
    write_histogram_csv(os, h, meta);
    return {{"", os.str()}};
}

Outputs run_escape(const CLI::App& sub, const EscapeArgs& a) {
    const MixtureWeight w = weight_for(parse_ratio(a.split), a.alpha);
    nlohmann::json j = json_header(sub);
    j["seed"] = a.seed;
    j.update(to_json(escape_probability(a.omega, w, a.options, a.seed)));
    return {{"", render_json(j)}};
}

Outputs run_optimize(const CLI::App& sub, const OptimizeArgs& a) {
    SwarmParams params = a.params;
    params.dim = a.dim;
    params.validate();
    const BenchmarkFunction f = suite_member(a.function, a.dim, a.suite_seed);
    const RunResult r = optimize(as_cost(f), params, a.iterations, Bounds::cube(a.dim, a.lo, a.hi), a.seed);
    nlohmann::json j = json_header(sub);
    j.update(run_record(params, a.seed, r));
    j["function"] = f.id;
    Outputs out{{"", render_json(j)}};
    if (!a.trace.empty()) {
        std::ostringstream os;
        write_trace_csv(os, r, metadata_of(sub));
        out.emplace_back(a.trace, os.str());
    }
    return out;
}

Outputs run_sweep_cmd(const CLI::App& sub, const SweepArgs& a) {
    std::map<std::string, std::string> kv;
    if (!a.config.empty()) {
        std::istringstream is(read_file(a.config));
        kv = read_key_values(is);
    }
    for (const auto& [k, v] : a.overrides) kv[k] = v;
    if (sub.count("--seed") > 0 || kv.count("master_seed") == 0) kv["master_seed"] = std::to_string(a.seed);
    SweepConfig cfg = sweep_config_from(kv);
    cfg.jobs = a.jobs;
    cfg.validate();

    Metadata meta;
    meta.add("command", sub.get_name());
    for (const auto& [k, v] : kv) meta.add(k, v);
    meta.add("seed", cfg.master_seed);

    const SweepGrid grid = run_sweep(cfg);
    std::ostringstream os;
    write_sweep_csv(os, grid, meta);
    Outputs out{{"", os.str()}};
    if (!a.aggregate_output.empty()) {
        std::ostringstream agg;
        write_aggregate_csv(agg, aggregate(grid), meta);
        out.emplace_back(a.aggregate_output, agg.str());
    }
    if (!a.manifest_output.empty()) {
        std::vector<BenchmarkFunction> fns;
        for (const auto& id : cfg.function_ids()) fns.push_back(suite_member(id, cfg.dim, cfg.suite_seed));
        out.emplace_back(a.manifest_output, render_json(suite_manifest(fns, cfg.suite_seed)));
    }
    return out;
}

Outputs run_region(const CLI::App& sub, const RegionArgs& a) {
    std::istringstream sweep_in(read_file(a.sweep));
    const SweepGrid grid = read_sweep_csv(sweep_in);
    const auto region = best_region(grid, a.quantile);
    Metadata meta = metadata_of(sub);
    meta.add("region_cells", static_cast<std::uint64_t>(region.size()));
    if (!a.curve.empty()) {
        std::istringstream curve_in(read_file(a.curve));
        const CriticalCurve curve = read_curve_csv(curve_in);
        const DistanceSummary d = distance_to_curve(region, curve);
        meta.add("distance_mean", d.mean);
        meta.add("distance_median", d.median);
        meta.add("distance_max", d.max);
        meta.add("distance_measured", static_cast<std::uint64_t>(d.measured));
        meta.add("distance_skipped", static_cast<std::uint64_t>(d.skipped));
    }
    std::ostringstream os;
    write_aggregate_csv(os, region, meta);
    return {{"", os.str()}};
}

Outputs run_scaling(const CLI::App& sub, const ScalingArgs& a) {
    a.config.validate();
    const auto grid = make_grid(a.grid.lo, a.grid.hi, a.grid.step);
    const CriticalCurve curve =
        neutral_stability_curve(a.config, grid, a.tolerance, a.seed, parse_ratio(a.ratio), a.bisect);
    std::ostringstream os;
    write_curve_csv(os, curve, metadata_of(sub));
    return {{"", os.str()}};
}

void add_bisection_flags(CLI::App* sub, BisectionOptions& b) {
    sub->add_option("--alpha-min", b.alpha_min, "Lower end of the alpha bracket")->check(CLI::PositiveNumber);
    sub->add_option("--alpha-max", b.alpha_max, "Upper end of the alpha bracket")->check(CLI::PositiveNumber);
    sub->add_option("--significance", b.significance, "Endpoint signs need |stat| above this many standard errors")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-escalations", b.max_escalations, "Budget doublings before a point is unresolved");
    sub->add_option("--jobs", b.jobs, "Worker threads")->check(CLI::Range(1, 1024));
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stability analysis and benchmarking of particle swarm optimisation", "swarmcrit"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());
    std::string output;

    std::vector<std::pair<CLI::App*, std::function<Outputs()>>> commands;

    LyapunovArgs lyap;
    {
        auto* s = app.add_subcommand("lyapunov", "Top Lyapunov exponent of the one-particle random dynamics (JSON)");
        add_law_flags(s, lyap.omega, lyap.alpha, lyap.split);
        s->add_option("--steps", lyap.budget.steps, "Steps per trial after burn-in");
        s->add_option("--trials", lyap.budget.trials, "Independent trials");
        s->add_option("--burn-in", lyap.budget.burn_in, "Discarded initial steps");
        s->add_option("--pinned-r", lyap.pinned_r, "Replace the random coefficient by this constant in [0, 1]");
        s->add_flag("--pair", lyap.pair, "Also estimate the second exponent")->default_str("false");
        s->add_option("--seed", lyap.seed, "Random seed");
        s->add_option("-o,--output", output, "Output file (default: standard output)");
        commands.emplace_back(s, [&, s] { return run_lyapunov(*s, lyap); });
    }

    CurveArgs curve;
    {
        auto* s = app.add_subcommand("curve", "Critical alpha over an omega grid (CSV)");
        add_ratio(s, curve.ratio, "--ratio");
        add_omega_grid(s, curve.grid);
        s->add_option("--tolerance", curve.tolerance, "Bracket width in alpha at which bisection stops")
            ->check(CLI::Range(0.01, 10.0));
        s->add_option("--method", curve.method, "Root criterion: lyapunov (lambda = 0) or escape (equal odds)")
            ->check(CLI::IsMember({"lyapunov", "escape"}));
        add_bisection_flags(s, curve.bisect);
        s->add_option("--steps", curve.bisect.lyapunov.steps, "Lyapunov steps per trial");
        s->add_option("--trials", curve.bisect.lyapunov.trials, "Lyapunov trials");
        s->add_option("--burn-in", curve.bisect.lyapunov.burn_in, "Lyapunov burn-in steps");
        s->add_option("--escape-trials", curve.bisect.escape.trials, "Escape trials");
        s->add_option("--max-steps", curve.bisect.escape.max_steps, "Escape step cap");
        s->add_option("--r-in", curve.bisect.escape.r_in, "Escape inner radius");
        s->add_option("--r-out", curve.bisect.escape.r_out, "Escape outer radius");
        s->add_option("--seed", curve.seed, "Random seed");
        s->add_option("-o,--output", output, "Output file (default: standard output)");
        commands.emplace_back(s, [&, s] { return run_curve(*s, curve); });
    }

    StationaryArgs stat;
    {
        auto* s = app.add_subcommand("stationary", "Stationary angular distribution of the phase-plane direction (CSV)");
        add_law_flags(s, stat.omega, stat.alpha, stat.split);
        s->add_option("--bins", stat.options.bins, "Histogram bins over [0, 2 pi)");
        s->add_option("--samples", stat.options.samples, "Samples pooled over chains");
        s->add_option("--burn-in", stat.options.burn_in, "Discarded steps per chain");
        s->add_option("--chains", stat.options.chains, "Independent chains");
        s->add_option("--seed", stat.seed, "Random seed");
        s->add_option("-o,--output", output, "Output file (default: standard output)");
        commands.emplace_back(s, [&, s] { return run_stationary(*s, stat); });
    }

    EscapeArgs esc;
    {
        auto* s = app.add_subcommand("escape", "Convergence and escape probabilities from the unit circle (JSON)");
        add_law_flags(s, esc.omega, esc.alpha, esc.split);
        s->add_option("--r-in", esc.options.r_in, "Inner radius counted as converged");
        s->add_option("--r-out", esc.options.r_out, "Outer radius counted as escaped");
        s->add_option("--max-steps", esc.options.max_steps, "Step cap per trial");
        s->add_option("--trials", esc.options.trials, "Independent trials");
        s->add_option("--seed", esc.seed, "Random seed");
        s->add_option("-o,--output", output, "Output file (default: standard output)");
        commands.emplace_back(s, [&, s] { return run_escape(*s, esc); });
    }

    OptimizeArgs opt;
    {
        auto* s = app.add_subcommand("optimize", "Run the optimiser on a benchmark function (JSON)");
        s->add_option("--function", opt.function, "Benchmark id, e.g. rastrigin or ackley/rotated");
        s->add_option("--dim", opt.dim, "Problem dimension")->check(CLI::PositiveNumber);
        s->add_option("--suite-seed", opt.suite_seed, "Seed of the benchmark shift and rotation");
        s->add_option("--omega", opt.params.omega, "Inertia weight");
        s->add_option("--alpha1", opt.params.alpha1, "Personal-best attraction");
        s->add_option("--alpha2", opt.params.alpha2, "Global-best attraction");
        s->add_option("--particles", opt.params.n_particles, "Swarm size")->check(CLI::PositiveNumber);
        s->add_option("--iterations", opt.iterations, "Iterations after initialisation");
        s->add_option("--lo", opt.lo, "Lower initialisation bound per dimension");
        s->add_option("--hi", opt.hi, "Upper initialisation bound per dimension");
        s->add_option("--seed", opt.seed, "Random seed");
        s->add_option("--trace", opt.trace, "Also write the g_best cost trace to this CSV file");
        s->add_option("-o,--output", output, "Output file (default: standard output)");
        commands.emplace_back(s, [&, s] { return run_optimize(*s, opt); });
    }

    SweepArgs sweep;
    {
        auto* s = app.add_subcommand("sweep", "Benchmark grid over (omega, alpha) (CSV)");
        s->add_option("--config", sweep.config, "key = value file; flags given here override it")
            ->check(CLI::ExistingFile);
        const std::vector<std::tuple<std::string, std::string, std::string, std::string>> keyed = {
            {"--omega-min", "omega_min", "-1.1", "Smallest omega"},
            {"--omega-max", "omega_max", "1.1", "Largest omega"},
            {"--omega-step", "omega_step", "0.1", "Omega spacing"},
            {"--alpha-min", "alpha_min", "0.25", "Smallest alpha"},
            {"--alpha-max", "alpha_max", "5", "Largest alpha"},
            {"--alpha-step", "alpha_step", "0.25", "Alpha spacing"},
            {"--split", "split", "equal", "equal or social-only"},
            {"--iterations", "iterations", "2000", "Iterations per run"},
            {"--repetitions", "repetitions", "100", "Runs per cell"},
            {"--particles", "n_particles", "25", "Swarm size"},
            {"--dim", "dim", "10", "Problem dimension"},
            {"--suite-seed", "suite_seed", "1", "Seed of the benchmark shifts and rotations"},
            {"--functions", "functions", "all", "Comma-separated benchmark ids or 'all'"},
        };
        for (const auto& [flag, key, def, desc] : keyed) {
            s->add_option_function<std::string>(
                 flag, [&sweep, key = key](const std::string& v) { sweep.overrides[key] = v; }, desc)
                ->default_str(def);
        }
        s->add_option("--seed", sweep.seed, "Master seed of all repetitions");
        s->add_option("--jobs", sweep.jobs, "Worker threads; results do not depend on it")->check(CLI::Range(1, 1024));
        s->add_option("-o,--output", output, "Sweep CSV (default: standard output)");
        s->add_option("--aggregate-output", sweep.aggregate_output, "Also write the normalised heatmap CSV");
        s->add_option("--manifest-output", sweep.manifest_output, "Also write the benchmark manifest JSON");
        commands.emplace_back(s, [&, s] { return run_sweep_cmd(*s, sweep); });
    }

    RegionArgs region;
    {
        auto* s = app.add_subcommand("region", "Best-performing (omega, alpha) cells of a sweep (CSV)");
        s->add_option("--sweep", region.sweep, "Sweep CSV")->required()->check(CLI::ExistingFile);
        s->add_option("--curve", region.curve, "Curve CSV for the distance summary")->check(CLI::ExistingFile);
        s->add_option("--quantile", region.quantile, "Fraction of cells kept")->check(CLI::Range(0.0, 1.0));
        s->add_option("-o,--output", output, "Output file (default: standard output)");
        commands.emplace_back(s, [&, s] { return run_region(*s, region); });
    }

    ScalingArgs scal;
    {
        auto* s = app.add_subcommand("scaling", "Neutral-stability curve with distinct attractors (CSV)");
        s->add_option("--kappa", scal.config.kappa, "Initial distance from g")->check(CLI::PositiveNumber);
        s->add_option("--p", scal.config.p, "Personal best");
        s->add_option("--g", scal.config.g, "Global best");
        s->add_option("--iterations", scal.config.iterations, "Steps per repetition");
        s->add_option("--repetitions", scal.config.repetitions, "Repetitions per probe");
        add_ratio(s, scal.ratio, "--ratio");
        add_omega_grid(s, scal.grid);
        s->add_option("--tolerance", scal.tolerance, "Bracket width in alpha at which bisection stops")
            ->check(CLI::Range(0.01, 10.0));
        add_bisection_flags(s, scal.bisect);
        s->add_option("--seed", scal.seed, "Random seed");
        s->add_option("-o,--output", output, "Output file (default: standard output)");
        commands.emplace_back(s, [&, s] { return run_scaling(*s, scal); });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            app.exit(e, out, err);
            return kExitOk;
        }
        const auto selected = app.get_subcommands();
        err << "error: " << e.what() << "\n\n" << (selected.empty() ? app.help() : selected.front()->help(app.get_name()));
        return kExitUsage;
    }

    for (auto& [sub, run] : commands) {
        if (!sub->parsed()) continue;
        try {
            Outputs results = run();
            for (auto& [path, content] : results) {
                if (path.empty()) {
                    if (output.empty()) {
                        out << content;
                    } else {
                        write_file(output, content);
                    }
                } else {
                    write_file(path, content);
                }
            }
            return kExitOk;
        } catch (const NumericError& e) {
            err << "numeric failure: " << e.what() << '\n';
            return kExitNumeric;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n\n" << sub->help();
            return kExitUsage;
        }
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace swarmcrit
