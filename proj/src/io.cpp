#include "swarmcrit/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace swarmcrit {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(trim(field));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_real(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

std::uint64_t parse_count(const std::string& s) {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size() || (!s.empty() && s.front() == '-')) throw std::invalid_argument("not a count: '" + s + "'");
    return v;
}

// Data rows of a CSV stream: comments dropped, header checked.
std::vector<std::vector<std::string>> data_rows(std::istream& is, const std::string& header) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool seen_header = false;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        if (!seen_header) {
            if (line != header) throw std::invalid_argument("unexpected CSV header: " + line);
            seen_header = true;
            continue;
        }
        rows.push_back(split(line, ','));
    }
    if (!seen_header) throw std::invalid_argument("CSV is missing its header row");
    return rows;
}

CriticalStatus parse_status(const std::string& s) {
    if (s == "RESOLVED") return CriticalStatus::Resolved;
    if (s == "NO_CROSSING") return CriticalStatus::NoCrossing;
    if (s == "UNRESOLVED") return CriticalStatus::Unresolved;
    throw std::invalid_argument("unknown curve status '" + s + "'");
}

const char* kCurveHeader = "omega,alpha_critical,std_error,status";
const char* kSweepHeader =
    "function,omega,alpha,iterations,mean_best_cost,median_best_cost,divergence_fraction,repetitions";

}  // namespace

std::string tool_version() { return std::string("swarmcrit ") + SWARMCRIT_VERSION; }

std::string format_real(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

Metadata& Metadata::add(std::string key, std::string value) {
    entries.emplace_back(std::move(key), std::move(value));
    return *this;
}

Metadata& Metadata::add(std::string key, double value) { return add(std::move(key), format_real(value)); }

Metadata& Metadata::add(std::string key, std::uint64_t value) {
    return add(std::move(key), std::to_string(value));
}

void write_metadata(std::ostream& os, const Metadata& meta) {
    os << "# tool: " << tool_version() << '\n';
    for (const auto& [k, v] : meta.entries) os << "# " << k << ": " << v << '\n';
}

void write_curve_csv(std::ostream& os, const CriticalCurve& curve, const Metadata& meta) {
    write_metadata(os, meta);
    bool has_ratio = false;
    for (const auto& entry : meta.entries) has_ratio = has_ratio || entry.first == "ratio";
    if (!has_ratio) os << "# ratio: " << to_string(curve.ratio) << '\n';
    os << "# method: " << to_string(curve.method) << '\n';
    os << kCurveHeader << '\n';
    for (const auto& p : curve.points) {
        os << format_real(p.omega) << ',' << (p.alpha ? format_real(*p.alpha) : "") << ','
           << (p.alpha ? format_real(p.std_error) : "") << ',' << to_string(p.status) << '\n';
    }
}

CriticalCurve read_curve_csv(std::istream& is) {
    CriticalCurve curve;
    for (const auto& row : data_rows(is, kCurveHeader)) {
        if (row.size() != 4) throw std::invalid_argument("curve row needs 4 fields");
        CriticalPoint p;
        p.omega = parse_real(row[0]);
        p.status = parse_status(row[3]);
        if (!row[1].empty()) p.alpha = parse_real(row[1]);
        if (!row[2].empty()) p.std_error = parse_real(row[2]);
        curve.points.push_back(p);
    }
    return curve;
}

void write_histogram_csv(std::ostream& os, const AngularHistogram& hist, const Metadata& meta) {
    write_metadata(os, meta);
    os << "bin_center_rad,mass\n";
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        os << format_real(hist.bin_center(i)) << ',' << format_real(hist.mass[i]) << '\n';
    }
}

void write_trace_csv(std::ostream& os, const RunResult& result, const Metadata& meta) {
    write_metadata(os, meta);
    os << "iteration,g_best_cost\n";
    for (std::size_t t = 0; t < result.cost_trace.size(); ++t) {
        os << t + 1 << ',' << format_real(result.cost_trace[t]) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const SweepGrid& grid, const Metadata& meta) {
    write_metadata(os, meta);
    os << kSweepHeader << '\n';
    for (const auto& c : grid.cells) {
        os << c.function << ',' << format_real(c.omega) << ',' << format_real(c.alpha) << ',' << c.iterations << ','
           << format_real(c.mean_best_cost) << ',' << format_real(c.median_best_cost) << ','
           << format_real(c.divergence_fraction) << ',' << c.repetitions << '\n';
    }
}

SweepGrid read_sweep_csv(std::istream& is) {
    SweepGrid grid;
    for (const auto& row : data_rows(is, kSweepHeader)) {
        if (row.size() != 8) throw std::invalid_argument("sweep row needs 8 fields");
        SweepCell c;
        c.function = row[0];
        c.omega = parse_real(row[1]);
        c.alpha = parse_real(row[2]);
        c.iterations = parse_count(row[3]);
        c.mean_best_cost = parse_real(row[4]);
        c.median_best_cost = parse_real(row[5]);
        c.divergence_fraction = parse_real(row[6]);
        c.repetitions = parse_count(row[7]);
        grid.cells.push_back(std::move(c));
    }
    return grid;
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateCell>& cells, const Metadata& meta) {
    write_metadata(os, meta);
    os << "omega,alpha,normalized_cost\n";
    for (const auto& c : cells) {
        os << format_real(c.omega) << ',' << format_real(c.alpha) << ',' << format_real(c.normalized_cost) << '\n';
    }
}

nlohmann::json to_json(const LyapunovEstimate& e) {
    return {{"value", e.value}, {"std_error", e.std_error}, {"steps", e.steps},
            {"trials", e.trials}, {"burn_in", e.burn_in}};
}

nlohmann::json to_json(const EscapeStats& s) {
    return {{"p_converged", s.p_converged}, {"p_escaped", s.p_escaped}, {"p_undecided", s.p_undecided},
            {"trials", s.trials},           {"r_in", s.r_in},           {"r_out", s.r_out},
            {"max_steps", s.max_steps}};
}

nlohmann::json run_record(const SwarmParams& params, std::uint64_t seed, const RunResult& result) {
    nlohmann::json j;
    j["params"] = {{"omega", params.omega},
                   {"alpha1", params.alpha1},
                   {"alpha2", params.alpha2},
                   {"n_particles", params.n_particles},
                   {"dim", params.dim}};
    j["seed"] = seed;
    // JSON has no infinity; a run can only end without a finite best if every
    // evaluation failed.
    j["best_cost"] = std::isfinite(result.best_cost) ? nlohmann::json(result.best_cost) : nlohmann::json(nullptr);
    j["best_position"] = result.best_position;
    j["diverged"] = result.diverged;
    j["iterations"] = result.cost_trace.size();
    j["evaluations"] = result.evaluations;
    return j;
}

nlohmann::json suite_manifest(const std::vector<BenchmarkFunction>& functions, std::uint64_t seed) {
    nlohmann::json j;
    j["tool"] = tool_version();
    j["seed"] = seed;
    j["count"] = functions.size();
    j["functions"] = nlohmann::json::array();
    for (const auto& f : functions) {
        j["functions"].push_back({{"id", f.id},
                                  {"dim", f.dim},
                                  {"seed", f.seed},
                                  {"rotated", f.rotated()},
                                  {"noncontinuous", f.noncontinuous},
                                  {"shift", f.shift}});
    }
    return j;
}

std::map<std::string, std::string> read_key_values(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + " is not key = value");
        }
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

SweepConfig sweep_config_from(const std::map<std::string, std::string>& kv) {
    SweepConfig c;
    double omega_min = -1.1, omega_max = 1.1, omega_step = 0.1;
    double alpha_min = 0.25, alpha_max = 5.0, alpha_step = 0.25;
    for (const auto& [key, value] : kv) {
        if (key == "omega_min") omega_min = parse_real(value);
        else if (key == "omega_max") omega_max = parse_real(value);
        else if (key == "omega_step") omega_step = parse_real(value);
        else if (key == "alpha_min") alpha_min = parse_real(value);
        else if (key == "alpha_max") alpha_max = parse_real(value);
        else if (key == "alpha_step") alpha_step = parse_real(value);
        else if (key == "split") c.split = parse_ratio(value);
        else if (key == "iterations") c.iterations = parse_count(value);
        else if (key == "repetitions") c.repetitions = parse_count(value);
        else if (key == "n_particles") c.n_particles = parse_count(value);
        else if (key == "dim") c.dim = parse_count(value);
        else if (key == "master_seed") c.master_seed = parse_count(value);
        else if (key == "suite_seed") c.suite_seed = parse_count(value);
        else if (key == "functions") {
            c.functions.clear();
            if (value != "all") {
                for (auto& id : split(value, ',')) {
                    if (!id.empty()) c.functions.push_back(id);
                }
            }
        } else {
            throw std::invalid_argument("unknown sweep config key '" + key + "'");
        }
    }
    c.omega_values = make_grid(omega_min, omega_max, omega_step);
    c.alpha_values = make_grid(alpha_min, alpha_max, alpha_step);
    return c;
}

}  // namespace swarmcrit
