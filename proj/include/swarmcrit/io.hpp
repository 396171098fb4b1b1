#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "swarmcrit/benchfns.hpp"
#include "swarmcrit/dynamics.hpp"
#include "swarmcrit/harness.hpp"
#include "swarmcrit/pso.hpp"
#include "swarmcrit/stability.hpp"

namespace swarmcrit {

std::string tool_version();

/// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_real(double value);

/// Ordered key/value lines written as "# key: value" ahead of CSV headers.
/// The tool version always comes first.
struct Metadata {
    std::vector<std::pair<std::string, std::string>> entries;

    Metadata& add(std::string key, std::string value);
    Metadata& add(std::string key, double value);
    Metadata& add(std::string key, std::uint64_t value);
};

void write_metadata(std::ostream& os, const Metadata& meta);

void write_curve_csv(std::ostream& os, const CriticalCurve& curve, const Metadata& meta);
/// Reads back a curve CSV; '#' lines are ignored.
CriticalCurve read_curve_csv(std::istream& is);

void write_histogram_csv(std::ostream& os, const AngularHistogram& hist, const Metadata& meta);
void write_trace_csv(std::ostream& os, const RunResult& result, const Metadata& meta);
void write_sweep_csv(std::ostream& os, const SweepGrid& grid, const Metadata& meta);
SweepGrid read_sweep_csv(std::istream& is);
void write_aggregate_csv(std::ostream& os, const std::vector<AggregateCell>& cells, const Metadata& meta);

nlohmann::json to_json(const LyapunovEstimate& e);
nlohmann::json to_json(const EscapeStats& s);
/// Final-result record of an optimizer run.
nlohmann::json run_record(const SwarmParams& params, std::uint64_t seed, const RunResult& result);
nlohmann::json suite_manifest(const std::vector<BenchmarkFunction>& functions, std::uint64_t seed);

/// Plain "key = value" lines; blank lines and '#' comments are skipped.
std::map<std::string, std::string> read_key_values(std::istream& is);
/// Builds a sweep configuration from key/value pairs. Unknown keys throw.
SweepConfig sweep_config_from(const std::map<std::string, std::string>& kv);

}  // namespace swarmcrit
